//! Named residual checks behind the `verify` command.
//!
//! Each check evaluates one structural or behavioural identity at a given
//! arity and register width and reports the worst residual against its
//! tolerance. Output names are stable so CI can grep individual lines.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::analysis::{
    char_poly_residual, iteration_expansion, iteration_exponential, subspace_operators,
    ternary_eigensystem,
};
use crate::diffusion::{
    binary_diffusion, diffusion_core, diffusion_operator, diffusion_update, DiffusionForm,
};
use crate::error::Result;
use crate::gates::{controlled_inc, elementary_gate, root_of_unity, Arity, GateKind};
use crate::linalg::{gram_solve, ComplexMatrix};
use crate::sim::{evolve, Representation};
use crate::subspace::{
    embed, fourier_coefficient_matrix, fourier_state_action, restrict, target_action,
    DiffusionUpdate, GroverConfig, SubspaceBasis,
};
use crate::tol;

/// One named residual check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &'static str, residual: f64, tolerance: f64) -> Self {
        Self {
            name,
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

/// Run the full check suite at arity `d` and width `n`.
///
/// Needs `d^n` within the operator budget; expect a few seconds at the
/// largest admissible sizes since the gate products multiply full matrices.
pub fn verify(d: Arity, n: usize) -> Result<Vec<Check>> {
    let base = d.get();
    let size = base.pow(n as u32);
    let default_config = GroverConfig::new(d, n, size - 1)?;
    let closed = diffusion_operator(d, n, DiffusionForm::ClosedForm)?;
    let mut checks = Vec::new();

    checks.push(gate_unitarity(d, n)?);
    checks.push(controlled_increment_action(d, n)?);
    checks.push(lemma_1_1(d)?);
    if n >= 2 {
        checks.push(lemma_1_2(d, n)?);
    }
    checks.push(lemma_1_3(d)?);
    checks.push(theorem_1(d, n, &closed)?);
    if base == 2 {
        checks.push(binary_circuit_theorem(n)?);
    }
    checks.push(Check::new(
        "diffusion_unitarity",
        closed.unitarity_residual(),
        tol::OPERATOR,
    ));
    checks.push(theorem_2_invariance(d, n, &closed)?);
    checks.push(lemma_2_1(&default_config, &closed)?);
    checks.push(lemma_2_2(d, n, &closed)?);
    checks.push(coefficient_matrix_identity(d)?);
    checks.push(coefficient_matrix_null_row(d));
    checks.push(update_rank(d));
    checks.push(lemma_3_1(d, n)?);
    if base == 3 {
        checks.push(lemma_3_2(size)?);
        checks.push(lemma_3_2_scalar_identity(size));
    }
    if base == 2 {
        checks.push(binary_consistency(&default_config));
    }
    checks.push(expansion_split(&default_config));
    checks.push(expansion_parity(&default_config));
    checks.push(exponential_corner(&default_config)?);
    checks.push(restrict_embed_roundtrip(&default_config)?);
    checks.push(full_subspace_agreement(&default_config)?);

    Ok(checks)
}

fn gate_unitarity(d: Arity, n: usize) -> Result<Check> {
    let mut worst = 0.0f64;
    for kind in [
        GateKind::X,
        GateKind::Z,
        GateKind::F,
        GateKind::XInverse,
        GateKind::FInverse,
    ] {
        worst = worst.max(elementary_gate(kind, d)?.unitarity_residual());
    }
    worst = worst.max(controlled_inc(d, n)?.unitarity_residual());
    Ok(Check::new("gate_unitarity", worst, tol::ALGEBRAIC))
}

fn controlled_increment_action(d: Arity, n: usize) -> Result<Check> {
    let base = d.get();
    let gate = controlled_inc(d, n)?;
    let dim = base.pow(n as u32);
    let mut worst = 0.0f64;
    for col in 0..dim {
        // decode most-significant-first digits and predict the image index
        let mut digits = vec![0usize; n];
        let mut rest = col;
        for slot in (0..n).rev() {
            digits[slot] = rest % base;
            rest /= base;
        }
        if digits[..n - 1].iter().all(|&dig| dig == 1) {
            digits[n - 1] = (digits[n - 1] + 1) % base;
        }
        let image = digits.iter().fold(0, |acc, &dig| acc * base + dig);
        for row in 0..dim {
            let expected = if row == image { 1.0 } else { 0.0 };
            worst = worst.max((gate.get(row, col) - Complex64::new(expected, 0.0)).norm());
        }
    }
    Ok(Check::new(
        "controlled_increment_action",
        worst,
        tol::ALGEBRAIC,
    ))
}

fn lemma_1_1(d: Arity) -> Result<Check> {
    let core = diffusion_core(d, 1)?;
    let closed = elementary_gate(GateKind::Z, d)?
        .dagger()
        .scaled(root_of_unity(d, d.get() as i64 - 1));
    Ok(Check::new(
        "lemma_1_1",
        core.max_abs_diff(&closed),
        tol::OPERATOR,
    ))
}

fn lemma_1_2(d: Arity, n: usize) -> Result<Check> {
    let base = d.get();
    let outer = diffusion_core(d, n)?;
    let inner = diffusion_core(d, n - 1)?;
    let sub = base.pow(n as u32 - 1);
    let mut worst = 0.0f64;
    for i in 0..sub * base {
        for j in 0..sub * base {
            let expected = if i < sub && j < sub {
                inner.get(i, j)
            } else if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            worst = worst.max((outer.get(i, j) - expected).norm());
        }
    }
    Ok(Check::new("lemma_1_2", worst, tol::OPERATOR))
}

fn lemma_1_3(d: Arity) -> Result<Check> {
    let product = diffusion_operator(d, 1, DiffusionForm::GateProduct)?;
    let closed = elementary_gate(GateKind::XInverse, d)?
        .scaled(root_of_unity(d, d.get() as i64 - 1));
    Ok(Check::new(
        "lemma_1_3",
        product.max_abs_diff(&closed),
        tol::OPERATOR,
    ))
}

fn theorem_1(d: Arity, n: usize, closed: &ComplexMatrix) -> Result<Check> {
    let product = diffusion_operator(d, n, DiffusionForm::GateProduct)?;
    Ok(Check::new(
        "theorem_1",
        product.max_abs_diff(closed),
        tol::OPERATOR,
    ))
}

fn binary_circuit_theorem(n: usize) -> Result<Check> {
    let dim = 2usize.pow(n as u32);
    let uncon = binary_diffusion(n, false)?;
    let mut flip = ComplexMatrix::identity(dim)?;
    flip[(0, 0)] = Complex64::new(-1.0, 0.0);
    let mut worst = uncon.max_abs_diff(&flip);

    // -(2|s><s| - I) = I - (2/N) J
    let conj = binary_diffusion(n, true)?;
    let mean = ComplexMatrix::identity(dim)?
        .sub(&ComplexMatrix::ones(dim, dim)?.scaled(Complex64::new(2.0 / dim as f64, 0.0)))?;
    worst = worst.max(conj.max_abs_diff(&mean));
    Ok(Check::new("binary_circuit_theorem", worst, tol::CIRCUIT))
}

fn theorem_2_invariance(d: Arity, n: usize, closed: &ComplexMatrix) -> Result<Check> {
    let size = d.get().pow(n as u32);
    // images of the stacked states do not depend on the target
    let reference = GroverConfig::new(d, n, 0)?;
    let reference_basis = SubspaceBasis::new(&reference)?;
    let fourier_images: Vec<_> = (1..d.get())
        .map(|slot| closed.matvec(reference_basis.vector(slot)))
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for tau in 0..size {
        let config = GroverConfig::new(d, n, tau)?;
        let basis = SubspaceBasis::new(&config)?;
        let target_image = closed.column(tau);
        let solution = gram_solve(basis.vectors(), &target_image)?;
        worst = worst.max(solution.residual);
        for image in &fourier_images {
            let solution = gram_solve(basis.vectors(), image)?;
            worst = worst.max(solution.residual);
        }
    }
    Ok(Check::new("theorem_2_invariance", worst, tol::SUBSPACE))
}

fn lemma_2_1(config: &GroverConfig, closed: &ComplexMatrix) -> Result<Check> {
    let report = fourier_state_action(config, closed)?;
    Ok(Check::new("lemma_2_1", report.max_residual, tol::SUBSPACE))
}

fn lemma_2_2(d: Arity, n: usize, closed: &ComplexMatrix) -> Result<Check> {
    let size = d.get().pow(n as u32);
    let mut worst = 0.0f64;
    for tau in 0..size {
        let config = GroverConfig::new(d, n, tau)?;
        let report = target_action(&config, closed)?;
        worst = worst.max(report.max_residual);
    }
    Ok(Check::new("lemma_2_2", worst, tol::SUBSPACE))
}

fn coefficient_matrix_identity(d: Arity) -> Result<Check> {
    let m = fourier_coefficient_matrix(d);
    let f = elementary_gate(GateKind::F, d)?;
    let residual = f.mul(&m)?.max_abs_diff(&diffusion_update(d));
    Ok(Check::new("coefficient_matrix", residual, tol::CIRCUIT))
}

fn coefficient_matrix_null_row(d: Arity) -> Check {
    let m = fourier_coefficient_matrix(d);
    let worst = (0..d.get()).map(|j| m.get(1, j).norm()).fold(0.0, f64::max);
    Check::new("coefficient_matrix_null_row", worst, tol::ALGEBRAIC)
}

fn update_rank(d: Arity) -> Check {
    let singular = DiffusionUpdate::new(d).singular_values();
    let smallest = singular[0];
    let second = singular[1];
    let mut check = Check::new("update_rank", smallest, tol::OPERATOR);
    // exactly one vanishing singular value
    check.pass = check.pass && second > tol::OPERATOR;
    check
}

fn lemma_3_1(d: Arity, n: usize) -> Result<Check> {
    let size = d.get().pow(n as u32);
    let mut worst = 0.0f64;
    for k in 0..d.get().min(size) {
        let config = GroverConfig::new(d, n, k)?;
        worst = worst.max(char_poly_residual(&config, 20));
    }
    Ok(Check::new("lemma_3_1", worst, tol::SPECTRAL))
}

fn lemma_3_2(size: usize) -> Result<Check> {
    let d = Arity::new(3).expect("ternary arity");
    let mut worst = 0.0f64;
    for k in 0..3 {
        let config = GroverConfig::new(d, (size as f64).log(3.0).round() as usize, k)?;
        let ops = subspace_operators(&config);
        let eig = ternary_eigensystem(size, k)?;
        let mut diag = ComplexMatrix::zeros(3, 3)?;
        for (i, lambda) in eig.eigenvalues.iter().enumerate() {
            diag[(i, i)] = *lambda;
        }
        let left = ops.iteration.mul(&eig.eigenvectors)?;
        let right = eig.eigenvectors.mul(&diag)?;
        worst = worst.max(left.max_abs_diff(&right));
        let id = eig.eigenvectors.mul(&eig.inverse)?;
        worst = worst.max(id.max_abs_diff(&ComplexMatrix::identity(3)?));
    }
    Ok(Check::new("lemma_3_2", worst, tol::SUBSPACE))
}

fn lemma_3_2_scalar_identity(size: usize) -> Check {
    let n = size as f64;
    let cos_big = 1.0 - 3.0 / n;
    let e = Complex64::new(cos_big, (1.0 - cos_big * cos_big).max(0.0).sqrt());
    let one = Complex64::new(1.0, 0.0);
    let lhs = e.scale(6.0 / n) + (one - e);
    let rhs = e * (one - e);
    Check::new("lemma_3_2_scalar_identity", (lhs - rhs).norm(), tol::ALGEBRAIC)
}

fn binary_consistency(config: &GroverConfig) -> Check {
    let ops = subspace_operators(config);
    let n = config.size() as f64;
    let root_n = n.sqrt();
    let expected = ComplexMatrix::from_rows(&[
        vec![Complex64::new(1.0, 0.0), Complex64::new(2.0 / root_n, 0.0)],
        vec![
            Complex64::new(-2.0 / root_n, 0.0),
            Complex64::new(1.0 - 4.0 / n, 0.0),
        ],
    ])
    .expect("2x2 within budget");
    let mut worst = ops.iteration.max_abs_diff(&expected);
    // eigenphases: arccos(1 - 2/N) equals twice arcsin(1/sqrt(N))
    let t = (1.0 / root_n).asin();
    let big = (1.0 - 2.0 / n).acos();
    let lhs = Complex64::new(big.cos(), big.sin());
    let rhs = Complex64::new((2.0 * t).cos(), (2.0 * t).sin());
    worst = worst.max((lhs - rhs).norm());
    Check::new("binary_consistency", worst, tol::OPERATOR)
}

fn expansion_split(config: &GroverConfig) -> Check {
    let d = config.arity().get();
    let split = iteration_expansion(config);
    let n = config.size() as f64;
    let rebuilt = ComplexMatrix::identity(d)
        .expect("within budget")
        .add(&split.leading.scaled(Complex64::new(1.0 / n.sqrt(), 0.0)))
        .expect("same shape")
        .add(&split.correction.scaled(Complex64::new(1.0 / n, 0.0)))
        .expect("same shape");
    let gamma = subspace_operators(config).iteration;
    let mut worst = rebuilt.max_abs_diff(&gamma);
    for j in 0..d {
        worst = worst.max(split.correction.get(0, j).norm());
        worst = worst.max(split.correction.get(j, 0).norm());
    }
    Check::new("expansion_split", worst, tol::CIRCUIT)
}

fn expansion_parity(config: &GroverConfig) -> Check {
    let d = config.arity().get() as f64;
    let leading = iteration_expansion(config).leading;
    let squared = leading.mul(&leading).expect("square");
    let cubed = squared.mul(&leading).expect("square");
    let mut worst = (squared.get(0, 0) - Complex64::new(-2.0 * d, 0.0)).norm();
    worst = worst.max(cubed.max_abs_diff(&leading.scaled(Complex64::new(-2.0 * d, 0.0))));
    Check::new("expansion_parity", worst, tol::ALGEBRAIC)
}

fn exponential_corner(config: &GroverConfig) -> Result<Check> {
    let d = config.arity();
    let dim = d.get();
    let sqrt2d = (2.0 * dim as f64).sqrt();
    let omega = root_of_unity(d, 1);
    let one = Complex64::new(1.0, 0.0);
    let mut worst = 0.0f64;
    for i in 0..10 {
        let rho = (i as f64 + 0.5) / 10.0 * 2.0 * PI / sqrt2d;
        let xi = iteration_exponential(config, rho)?;
        let expected = (one - omega).scale((rho * sqrt2d).sin() / sqrt2d);
        worst = worst.max((xi.get(0, dim - 1) - expected).norm());
    }
    Ok(Check::new("exponential_corner", worst, tol::OPERATOR))
}

fn restrict_embed_roundtrip(config: &GroverConfig) -> Result<Check> {
    let d = config.arity().get();
    let basis = SubspaceBasis::new(config)?;
    let sub = ComplexMatrix::from_fn(d, d, |i, j| {
        Complex64::new(0.2 + 0.3 * i as f64 - 0.1 * j as f64, 0.4 * j as f64 - 0.2)
    })?;
    let back = restrict(&embed(&sub, &basis)?, &basis)?;
    Ok(Check::new(
        "restrict_embed_roundtrip",
        back.max_abs_diff(&sub),
        tol::OPERATOR,
    ))
}

fn full_subspace_agreement(config: &GroverConfig) -> Result<Check> {
    let mut worst = 0.0f64;
    for r in 0..=20 {
        let full = evolve(config, r, Representation::Full)?;
        let sub = evolve(config, r, Representation::Subspace)?;
        worst = worst.max((full.tau_probability() - sub.tau_probability()).abs());
    }
    Ok(Check::new("full_subspace_agreement", worst, tol::SPECTRAL))
}
