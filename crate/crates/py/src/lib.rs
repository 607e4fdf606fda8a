//! Python bindings: the gate constructors, diffusion operators, subspace
//! analysis, complexity reports, and the seeded protocol, with matrices
//! passed as nested lists of complex numbers.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qudit_grover as core;
use qudit_grover::{Arity, ComplexMatrix, ComplexVector, DiffusionForm, ScalingCriterion};

type Matrix = Vec<Vec<Complex64>>;

fn py_err(err: core::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn arity(d: usize) -> PyResult<Arity> {
    Arity::new(d).map_err(py_err)
}

fn to_matrix(rows: &Matrix) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(rows).map_err(py_err)
}

fn from_matrix(m: &ComplexMatrix) -> Matrix {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

fn to_vector(entries: Vec<Complex64>) -> PyResult<ComplexVector> {
    ComplexVector::from_entries(entries).map_err(py_err)
}

/// Problem instance: arity `d`, register width `n`, marked index `tau`
/// (defaults to `N - 1`).
#[pyclass(name = "GroverConfig", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGroverConfig {
    inner: core::GroverConfig,
}

#[pymethods]
impl PyGroverConfig {
    #[new]
    #[pyo3(signature = (d, n, tau=None))]
    fn new(d: usize, n: usize, tau: Option<usize>) -> PyResult<Self> {
        let a = arity(d)?;
        if n == 0 {
            return Err(PyValueError::new_err("n must be at least 1"));
        }
        let size = (d as u128).pow(n as u32);
        let tau = tau.unwrap_or((size - 1) as usize);
        Ok(Self {
            inner: core::GroverConfig::new(a, n, tau).map_err(py_err)?,
        })
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.arity().get()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.width()
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn tau(&self) -> usize {
        self.inner.target()
    }

    #[getter]
    fn phase_index(&self) -> usize {
        self.inner.phase_index()
    }

    fn __repr__(&self) -> String {
        format!(
            "GroverConfig(d={}, n={}, tau={})",
            self.d(),
            self.n(),
            self.tau()
        )
    }
}

/// Optimal iteration count found by one of the analyses.
#[pyclass(name = "ComplexityReport", frozen)]
struct PyComplexityReport {
    #[pyo3(get)]
    size: usize,
    #[pyo3(get)]
    r_opt: usize,
    #[pyo3(get)]
    r_analytic: f64,
    #[pyo3(get)]
    p_at_r_opt: f64,
    #[pyo3(get)]
    model: String,
}

#[pymethods]
impl PyComplexityReport {
    fn __repr__(&self) -> String {
        format!(
            "ComplexityReport(size={}, r_opt={}, r_analytic={:.4}, p={:.6}, model={})",
            self.size, self.r_opt, self.r_analytic, self.p_at_r_opt, self.model
        )
    }
}

impl From<core::ComplexityReport> for PyComplexityReport {
    fn from(report: core::ComplexityReport) -> Self {
        Self {
            size: report.size,
            r_opt: report.r_opt,
            r_analytic: report.r_analytic,
            p_at_r_opt: report.p_at_r_opt,
            model: report.model.to_string(),
        }
    }
}

/// One repeated-run protocol outcome.
#[pyclass(name = "RunStats", frozen)]
struct PyRunStats {
    #[pyo3(get)]
    answer: usize,
    #[pyo3(get)]
    runs: usize,
    #[pyo3(get)]
    oracle_calls: usize,
    #[pyo3(get)]
    success: bool,
    #[pyo3(get)]
    seed: u64,
    #[pyo3(get)]
    rng_algorithm: String,
}

#[pymethods]
impl PyRunStats {
    fn __repr__(&self) -> String {
        format!(
            "RunStats(answer={}, runs={}, oracle_calls={}, success={}, seed={})",
            self.answer, self.runs, self.oracle_calls, self.success, self.seed
        )
    }
}

impl From<core::RunStats> for PyRunStats {
    fn from(stats: core::RunStats) -> Self {
        Self {
            answer: stats.answer,
            runs: stats.runs,
            oracle_calls: stats.oracle_calls,
            success: stats.success,
            seed: stats.seed,
            rng_algorithm: stats.rng_algorithm.to_string(),
        }
    }
}

#[pyfunction]
fn root_of_unity(d: usize, p: i64) -> PyResult<Complex64> {
    Ok(core::root_of_unity(arity(d)?, p))
}

/// Elementary gate by name: "X", "Z", "F", "X_inverse", "F_inverse", "H".
#[pyfunction]
fn elementary_gate(kind: &str, d: usize) -> PyResult<Matrix> {
    let kind = match kind {
        "X" => core::GateKind::X,
        "Z" => core::GateKind::Z,
        "F" => core::GateKind::F,
        "X_inverse" => core::GateKind::XInverse,
        "F_inverse" => core::GateKind::FInverse,
        "H" => core::GateKind::H,
        other => {
            return Err(PyValueError::new_err(format!("unknown gate kind {other:?}")));
        }
    };
    Ok(from_matrix(&core::elementary_gate(kind, arity(d)?).map_err(py_err)?))
}

#[pyfunction]
fn controlled_inc(d: usize, n: usize) -> PyResult<Matrix> {
    Ok(from_matrix(&core::controlled_inc(arity(d)?, n).map_err(py_err)?))
}

#[pyfunction]
fn diffusion_core(d: usize, n: usize) -> PyResult<Matrix> {
    Ok(from_matrix(&core::diffusion_core(arity(d)?, n).map_err(py_err)?))
}

/// Diffusion operator; `form` is "product" or "closed".
#[pyfunction]
#[pyo3(signature = (d, n, form="closed"))]
fn diffusion_operator(d: usize, n: usize, form: &str) -> PyResult<Matrix> {
    let form = match form {
        "product" => DiffusionForm::GateProduct,
        "closed" => DiffusionForm::ClosedForm,
        other => {
            return Err(PyValueError::new_err(format!(
                "form must be \"product\" or \"closed\", got {other:?}"
            )));
        }
    };
    Ok(from_matrix(&core::diffusion_operator(arity(d)?, n, form).map_err(py_err)?))
}

#[pyfunction]
fn binary_diffusion(n: usize, conjugated: bool) -> PyResult<Matrix> {
    Ok(from_matrix(&core::binary_diffusion(n, conjugated).map_err(py_err)?))
}

#[pyfunction]
fn diffusion_update(d: usize) -> PyResult<Matrix> {
    Ok(from_matrix(&core::diffusion_update(arity(d)?)))
}

#[pyfunction]
fn fourier_coefficient_matrix(d: usize) -> PyResult<Matrix> {
    Ok(from_matrix(&core::fourier_coefficient_matrix(arity(d)?)))
}

/// Kronecker product of two matrices.
#[pyfunction]
fn kron(a: Matrix, b: Matrix) -> PyResult<Matrix> {
    Ok(from_matrix(&to_matrix(&a)?.kron(&to_matrix(&b)?).map_err(py_err)?))
}

/// Matrix exponential.
#[pyfunction]
fn mat_exp(a: Matrix) -> PyResult<Matrix> {
    Ok(from_matrix(&to_matrix(&a)?.expm().map_err(py_err)?))
}

/// Determinant.
#[pyfunction]
fn det(a: Matrix) -> PyResult<Complex64> {
    to_matrix(&a)?.det().map_err(py_err)
}

/// Least-squares coordinates of `v` in `basis`; returns
/// `(coefficients, residual, in_span)`.
#[pyfunction]
fn gram_solve(
    basis: Vec<Vec<Complex64>>,
    v: Vec<Complex64>,
) -> PyResult<(Vec<Complex64>, f64, bool)> {
    let basis: Vec<ComplexVector> = basis
        .into_iter()
        .map(to_vector)
        .collect::<PyResult<_>>()?;
    let solution = core::gram_solve(&basis, &to_vector(v)?).map_err(py_err)?;
    Ok((solution.coefficients, solution.residual, solution.in_span))
}

/// Basis of the invariant subspace, as full-length vectors in slot order.
#[pyfunction]
fn basis_vectors(config: &PyGroverConfig) -> PyResult<Vec<Vec<Complex64>>> {
    let basis = core::SubspaceBasis::new(&config.inner).map_err(py_err)?;
    Ok(basis
        .vectors()
        .iter()
        .map(|v| v.entries().to_vec())
        .collect())
}

/// Subspace coordinates `(diffusion, oracle, iteration)` of the operators.
#[pyfunction]
fn subspace_operators(config: &PyGroverConfig) -> (Matrix, Matrix, Matrix) {
    let ops = core::subspace_operators(&config.inner);
    (
        from_matrix(&ops.diffusion),
        from_matrix(&ops.oracle),
        from_matrix(&ops.iteration),
    )
}

/// Express a full-space operator in subspace coordinates.
#[pyfunction]
fn restrict(op: Matrix, config: &PyGroverConfig) -> PyResult<Matrix> {
    let basis = core::SubspaceBasis::new(&config.inner).map_err(py_err)?;
    Ok(from_matrix(&core::restrict(&to_matrix(&op)?, &basis).map_err(py_err)?))
}

/// Extend subspace coordinates to a full-space operator (identity off-span).
#[pyfunction]
fn embed(op: Matrix, config: &PyGroverConfig) -> PyResult<Matrix> {
    let basis = core::SubspaceBasis::new(&config.inner).map_err(py_err)?;
    Ok(from_matrix(&core::embed(&to_matrix(&op)?, &basis).map_err(py_err)?))
}

/// `(leading, correction)` of the large-N split
/// `iteration = I + leading/sqrt(N) + correction/N`.
#[pyfunction]
fn iteration_expansion(config: &PyGroverConfig) -> (Matrix, Matrix) {
    let split = core::iteration_expansion(&config.inner);
    (from_matrix(&split.leading), from_matrix(&split.correction))
}

#[pyfunction]
fn iteration_exponential(config: &PyGroverConfig, rho: f64) -> PyResult<Matrix> {
    Ok(from_matrix(&core::iteration_exponential(&config.inner, rho).map_err(py_err)?))
}

#[pyfunction]
fn char_poly_residual(config: &PyGroverConfig, samples: usize) -> f64 {
    core::char_poly_residual(&config.inner, samples)
}

/// Ternary eigensystem `(eigenvectors, eigenvalues, inverse)`.
#[pyfunction]
fn ternary_eigensystem(size: usize, phase_index: usize) -> PyResult<(Matrix, Vec<Complex64>, Matrix)> {
    let eig = core::ternary_eigensystem(size, phase_index).map_err(py_err)?;
    Ok((
        from_matrix(&eig.eigenvectors),
        eig.eigenvalues,
        from_matrix(&eig.inverse),
    ))
}

#[pyfunction]
fn binary_complexity(size: usize) -> PyResult<PyComplexityReport> {
    Ok(core::binary_complexity(size).map_err(py_err)?.into())
}

#[pyfunction]
fn ternary_optimal_iterations(size: usize) -> f64 {
    core::ternary_optimal_iterations(size)
}

#[pyfunction]
fn general_optimal_iterations(d: usize, size: usize) -> PyResult<f64> {
    Ok(core::general_optimal_iterations(arity(d)?, size))
}

#[pyfunction]
fn success_probability(d: usize, rho: f64) -> PyResult<f64> {
    Ok(core::success_probability(arity(d)?, rho))
}

/// Optimal iteration scaling: `criterion` is "peak" or "expected_calls";
/// returns `(rho, value)`.
#[pyfunction]
fn optimal_scaling(d: usize, criterion: &str) -> PyResult<(f64, f64)> {
    let criterion = match criterion {
        "peak" => ScalingCriterion::PeakProbability,
        "expected_calls" => ScalingCriterion::ExpectedCalls,
        other => {
            return Err(PyValueError::new_err(format!(
                "criterion must be \"peak\" or \"expected_calls\", got {other:?}"
            )));
        }
    };
    Ok(core::optimal_scaling(arity(d)?, criterion))
}

#[pyfunction]
fn expected_calls(d: usize, rho: f64) -> PyResult<f64> {
    core::expected_calls(arity(d)?, rho).map_err(py_err)
}

#[pyfunction]
fn half_tangent_root() -> f64 {
    core::half_tangent_root()
}

#[pyfunction]
fn exact_complexity(config: &PyGroverConfig, r_max: usize) -> PyComplexityReport {
    core::exact_complexity(&config.inner, r_max).into()
}

#[pyfunction]
fn tau_probability_curve(config: &PyGroverConfig, r_max: usize) -> Vec<f64> {
    core::tau_probability_curve(&config.inner, r_max)
}

/// Probability of the marked index after `r` iterations of the full
/// state-vector evolution (small codomains only).
#[pyfunction]
fn full_tau_probability(config: &PyGroverConfig, r: usize) -> PyResult<f64> {
    let state = core::evolve(&config.inner, r, core::Representation::Full).map_err(py_err)?;
    Ok(state.tau_probability())
}

#[pyfunction]
fn repeated_run_protocol(config: &PyGroverConfig, rho: f64, seed: u64) -> PyResult<PyRunStats> {
    Ok(core::repeated_run_protocol(&config.inner, rho, seed)
        .map_err(py_err)?
        .into())
}

#[pyfunction]
fn run_trials(
    config: &PyGroverConfig,
    rho: f64,
    trials: usize,
    seed: u64,
) -> PyResult<Vec<PyRunStats>> {
    core::run_trials(&config.inner, rho, trials, seed)
        .into_iter()
        .map(|r| r.map(PyRunStats::from).map_err(py_err))
        .collect()
}

/// Named residual checks at `(d, n)`; returns `(name, pass, residual)`
/// triples.
#[pyfunction]
fn verify(d: usize, n: usize) -> PyResult<Vec<(String, bool, f64)>> {
    let checks = core::verify(arity(d)?, n).map_err(py_err)?;
    Ok(checks
        .into_iter()
        .map(|c| (c.name.to_string(), c.pass, c.residual))
        .collect())
}

#[pymodule]
fn qudit_grover_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroverConfig>()?;
    m.add_class::<PyComplexityReport>()?;
    m.add_class::<PyRunStats>()?;
    m.add_function(wrap_pyfunction!(root_of_unity, m)?)?;
    m.add_function(wrap_pyfunction!(elementary_gate, m)?)?;
    m.add_function(wrap_pyfunction!(controlled_inc, m)?)?;
    m.add_function(wrap_pyfunction!(diffusion_core, m)?)?;
    m.add_function(wrap_pyfunction!(diffusion_operator, m)?)?;
    m.add_function(wrap_pyfunction!(binary_diffusion, m)?)?;
    m.add_function(wrap_pyfunction!(diffusion_update, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_coefficient_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(kron, m)?)?;
    m.add_function(wrap_pyfunction!(mat_exp, m)?)?;
    m.add_function(wrap_pyfunction!(det, m)?)?;
    m.add_function(wrap_pyfunction!(gram_solve, m)?)?;
    m.add_function(wrap_pyfunction!(basis_vectors, m)?)?;
    m.add_function(wrap_pyfunction!(subspace_operators, m)?)?;
    m.add_function(wrap_pyfunction!(restrict, m)?)?;
    m.add_function(wrap_pyfunction!(embed, m)?)?;
    m.add_function(wrap_pyfunction!(iteration_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(iteration_exponential, m)?)?;
    m.add_function(wrap_pyfunction!(char_poly_residual, m)?)?;
    m.add_function(wrap_pyfunction!(ternary_eigensystem, m)?)?;
    m.add_function(wrap_pyfunction!(binary_complexity, m)?)?;
    m.add_function(wrap_pyfunction!(ternary_optimal_iterations, m)?)?;
    m.add_function(wrap_pyfunction!(general_optimal_iterations, m)?)?;
    m.add_function(wrap_pyfunction!(success_probability, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_scaling, m)?)?;
    m.add_function(wrap_pyfunction!(expected_calls, m)?)?;
    m.add_function(wrap_pyfunction!(half_tangent_root, m)?)?;
    m.add_function(wrap_pyfunction!(exact_complexity, m)?)?;
    m.add_function(wrap_pyfunction!(tau_probability_curve, m)?)?;
    m.add_function(wrap_pyfunction!(full_tau_probability, m)?)?;
    m.add_function(wrap_pyfunction!(repeated_run_protocol, m)?)?;
    m.add_function(wrap_pyfunction!(run_trials, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("RNG_ALGORITHM", core::RNG_ALGORITHM)?;
    m.add("MAX_ARITY", core::MAX_ARITY)?;
    Ok(())
}
