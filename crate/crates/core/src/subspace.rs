//! The invariant Grover subspace.
//!
//! The diffusion operator preserves the d-dimensional span of the target
//! state `|tau>` and the stacked Fourier-column states `|s_i>` for
//! `i = 0, 2, 3, ..., d-1` (`|s_1>` spans the null direction of the update
//! and never appears). Basis vectors are kept in the fixed slot order
//!
//! ```text
//! ( |tau>, |s_2>, |s_3>, ..., |s_{d-1}>, |s_0> )
//! ```
//!
//! under which the restricted diffusion operator carries the diagonal
//! `(1, w, w^2, ..., w^{d-1})`. Every subspace matrix in this crate uses that
//! order.

use num_complex::Complex64;

use crate::diffusion::diffusion_update;
use crate::error::{Error, Result};
use crate::gates::{elementary_gate, root_of_unity, Arity, GateKind};
use crate::linalg::{gram_solve, ComplexMatrix, ComplexVector};
use crate::tol;

/// Problem instance: arity, register width, codomain size `N = d^n`, the
/// marked index `tau`, and the phase index `k = tau mod d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroverConfig {
    d: Arity,
    width: usize,
    size: usize,
    target: usize,
    phase: usize,
}

impl GroverConfig {
    pub fn new(d: Arity, width: usize, target: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::Domain("register width must be at least 1".into()));
        }
        let base = d.get();
        let mut size: usize = 1;
        for _ in 0..width {
            size = size
                .checked_mul(base)
                .ok_or_else(|| Error::Domain("codomain size overflows".into()))?;
        }
        if target >= size {
            return Err(Error::Domain(format!(
                "target {target} outside the codomain of size {size}"
            )));
        }
        Ok(Self {
            d,
            width,
            size,
            target,
            phase: target % base,
        })
    }

    pub fn arity(&self) -> Arity {
        self.d
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Codomain size `N = d^n`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// `k = tau mod d`.
    pub fn phase_index(&self) -> usize {
        self.phase
    }

    /// Fourier column index occupying basis slot `j`.
    ///
    /// Slot 0 holds the target; slots `1..d-1` hold `s_2 .. s_{d-1}`; the last
    /// slot holds `s_0`.
    pub fn fourier_index(&self, slot: usize) -> usize {
        let d = self.d.get();
        assert!((1..d).contains(&slot), "slot {slot} has no Fourier column");
        if slot == d - 1 {
            0
        } else {
            slot + 1
        }
    }

    /// Basis slot of the stacked Fourier state `s_i` (`i != 1`).
    pub fn slot(&self, fourier_index: usize) -> usize {
        let d = self.d.get();
        assert!(fourier_index != 1 && fourier_index < d, "s_1 is excluded");
        if fourier_index == 0 {
            d - 1
        } else {
            fourier_index - 1
        }
    }

    /// `<tau|s_i> = w^{k i} / sqrt(N)`.
    pub fn target_overlap(&self, fourier_index: usize) -> Complex64 {
        root_of_unity(self.d, (self.phase * fourier_index) as i64)
            .scale(1.0 / (self.size as f64).sqrt())
    }

    /// Row of overlaps `<tau|b_j>` against the basis slots.
    pub fn overlap_row(&self) -> Vec<Complex64> {
        let d = self.d.get();
        let mut row = vec![Complex64::new(1.0, 0.0); d];
        for slot in 1..d {
            row[slot] = self.target_overlap(self.fourier_index(slot));
        }
        row
    }
}

/// The rank-(d-1) update `w^{d-1} X^dagger - I` with its known spectrum: the
/// Fourier columns `f_i` are eigenvectors with eigenvalues `w^{i-1} - 1`, and
/// `f_1` spans the null space.
#[derive(Debug, Clone)]
pub struct DiffusionUpdate {
    d: Arity,
    matrix: ComplexMatrix,
}

impl DiffusionUpdate {
    pub fn new(d: Arity) -> Self {
        Self {
            d,
            matrix: diffusion_update(d),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigenvalue(&self, fourier_index: usize) -> Complex64 {
        root_of_unity(self.d, fourier_index as i64 - 1) - Complex64::new(1.0, 0.0)
    }

    /// Singular values, read off as the norms of the images of the
    /// orthonormal Fourier columns (the update is circulant, hence normal).
    pub fn singular_values(&self) -> Vec<f64> {
        let d = self.d.get();
        let f = elementary_gate(GateKind::F, self.d).expect("gate within budget");
        let mut values: Vec<f64> = (0..d)
            .map(|i| self.matrix.matvec(&f.column(i)).expect("square").norm())
            .collect();
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        values
    }
}

/// Coefficients expressing the update's columns in the Fourier basis:
/// `M = F^{-1} (w^{d-1} X^dagger - I)`, built from the closed form
/// `M[i, j] = w^{-ij} (w^{i-1} - 1) / sqrt(d)`. Row 1 vanishes identically.
pub fn fourier_coefficient_matrix(d: Arity) -> ComplexMatrix {
    let n = d.get();
    let scale = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, n, |i, j| {
        let phase = root_of_unity(d, -((i * j) as i64));
        let eig = root_of_unity(d, i as i64 - 1) - Complex64::new(1.0, 0.0);
        phase * eig.scale(scale)
    })
    .expect("d x d within budget")
}

/// Ordered basis of the invariant subspace for one problem instance.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    config: GroverConfig,
    vectors: Vec<ComplexVector>,
}

impl SubspaceBasis {
    /// Build `( |tau>, |s_2>, ..., |s_{d-1}>, |s_0> )` as full `N`-dimensional
    /// vectors. Each `|s_i>` stacks `d^{n-1}` copies of the Fourier column
    /// `f_i`, renormalised.
    pub fn new(config: &GroverConfig) -> Result<Self> {
        let d = config.arity().get();
        let n = config.size();
        let copies = n / d;
        let f = elementary_gate(GateKind::F, config.arity())?;
        let mut vectors = Vec::with_capacity(d);
        vectors.push(ComplexVector::basis(n, config.target())?);
        let scale = Complex64::new(1.0 / (copies as f64).sqrt(), 0.0);
        for slot in 1..d {
            let i = config.fourier_index(slot);
            let column = f.column(i);
            let mut entries = Vec::with_capacity(n);
            for _ in 0..copies {
                entries.extend_from_slice(column.entries());
            }
            vectors.push(ComplexVector::from_entries(entries)?.scaled(scale));
        }
        Ok(Self {
            config: *config,
            vectors,
        })
    }

    pub fn config(&self) -> &GroverConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, slot: usize) -> &ComplexVector {
        &self.vectors[slot]
    }

    pub fn target(&self) -> &ComplexVector {
        &self.vectors[0]
    }

    pub fn fourier_state(&self, fourier_index: usize) -> &ComplexVector {
        &self.vectors[self.config.slot(fourier_index)]
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    /// Reconstruct the full state with the given slot coordinates.
    pub fn reconstruct(&self, coords: &[Complex64]) -> Result<ComplexVector> {
        if coords.len() != self.vectors.len() {
            return Err(Error::DimensionMismatch {
                context: "reconstruct",
                left: coords.len(),
                right: self.vectors.len(),
            });
        }
        let mut out = ComplexVector::zeros(self.config.size())?;
        for (c, b) in coords.iter().zip(&self.vectors) {
            out = out.add(&b.scaled(*c))?;
        }
        Ok(out)
    }
}

/// Residuals of an operator action against its predicted closed form.
#[derive(Debug, Clone)]
pub struct ActionReport {
    /// `(index, residual)` pairs; the index is the Fourier column for the
    /// stacked states and the target index for the target check.
    pub residuals: Vec<(usize, f64)>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ActionReport {
    fn from_residuals(residuals: Vec<(usize, f64)>, tolerance: f64) -> Self {
        let max_residual = residuals.iter().map(|&(_, r)| r).fold(0.0, f64::max);
        Self {
            residuals,
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
        }
    }
}

/// Check `D |s_i> = w^{i-1} |s_i>` for every kept Fourier state.
pub fn fourier_state_action(
    config: &GroverConfig,
    diffusion: &ComplexMatrix,
) -> Result<ActionReport> {
    let basis = SubspaceBasis::new(config)?;
    check_operator_dim(config, diffusion)?;
    let d = config.arity();
    let mut residuals = Vec::new();
    for slot in 1..d.get() {
        let i = config.fourier_index(slot);
        let state = basis.vector(slot);
        let image = diffusion.matvec(state)?;
        let predicted = state.scaled(root_of_unity(d, i as i64 - 1));
        residuals.push((i, image.sub(&predicted)?.norm()));
    }
    Ok(ActionReport::from_residuals(residuals, tol::SUBSPACE))
}

/// Check the target action
/// `D |tau> = |tau> + sum_i w^{-ik} (w^{i-1} - 1) / sqrt(N) |s_i>`.
pub fn target_action(config: &GroverConfig, diffusion: &ComplexMatrix) -> Result<ActionReport> {
    let basis = SubspaceBasis::new(config)?;
    check_operator_dim(config, diffusion)?;
    let image = diffusion.column(config.target());
    let predicted = predicted_target_image(config, &basis)?;
    let residual = image.sub(&predicted)?.norm();
    Ok(ActionReport::from_residuals(
        vec![(config.target(), residual)],
        tol::SUBSPACE,
    ))
}

pub(crate) fn predicted_target_image(
    config: &GroverConfig,
    basis: &SubspaceBasis,
) -> Result<ComplexVector> {
    let d = config.arity();
    let k = config.phase_index() as i64;
    let root_n = (config.size() as f64).sqrt();
    let mut coords = vec![Complex64::new(0.0, 0.0); d.get()];
    coords[0] = Complex64::new(1.0, 0.0);
    for slot in 1..d.get() {
        let i = config.fourier_index(slot) as i64;
        let eig = root_of_unity(d, i - 1) - Complex64::new(1.0, 0.0);
        coords[slot] = root_of_unity(d, -i * k) * eig.scale(1.0 / root_n);
    }
    basis.reconstruct(&coords)
}

/// Express a full-space operator in basis coordinates. Fails if any basis
/// image leaves the span beyond [`tol::IN_SPAN`].
pub fn restrict(op: &ComplexMatrix, basis: &SubspaceBasis) -> Result<ComplexMatrix> {
    let d = basis.len();
    let mut restricted = ComplexMatrix::zeros(d, d)?;
    let mut worst = 0.0f64;
    for (j, b) in basis.vectors().iter().enumerate() {
        let image = op.matvec(b)?;
        let solution = gram_solve(basis.vectors(), &image)?;
        worst = worst.max(solution.residual);
        for (i, c) in solution.coefficients.iter().enumerate() {
            restricted[(i, j)] = *c;
        }
    }
    if worst > tol::IN_SPAN {
        return Err(Error::InvarianceViolated { residual: worst });
    }
    Ok(restricted)
}

/// Extend a subspace operator to the full space: act by the given coordinates
/// on the span and as the identity on the orthogonal complement.
pub fn embed(sub_op: &ComplexMatrix, basis: &SubspaceBasis) -> Result<ComplexMatrix> {
    let d = basis.len();
    if sub_op.rows() != d || sub_op.cols() != d {
        return Err(Error::DimensionMismatch {
            context: "embed",
            left: sub_op.rows(),
            right: d,
        });
    }
    let n = basis.config().size();

    // Dual (pseudo-inverse) rows: G^{-1} B^dagger, solved columnwise.
    let mut gram = ComplexMatrix::zeros(d, d)?;
    for (a, ba) in basis.vectors().iter().enumerate() {
        for (b, bb) in basis.vectors().iter().enumerate() {
            gram[(a, b)] = ba.inner(bb);
        }
    }
    let mut full = ComplexMatrix::identity(n)?;
    // columns of (S - I) in slot coordinates
    let mut shifted = sub_op.clone();
    for i in 0..d {
        shifted[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    // full += B (S - I) G^{-1} B^dagger, assembled column by column of B^dagger
    for col in 0..n {
        let rhs: Vec<Complex64> = basis
            .vectors()
            .iter()
            .map(|b| b.entries()[col].conj())
            .collect();
        let dual = solve_gram_system(&gram, &rhs)?;
        // shifted * dual gives the slot coordinates of this column's update
        let mut update = vec![Complex64::new(0.0, 0.0); d];
        for (i, u) in update.iter_mut().enumerate() {
            for (j, w) in dual.iter().enumerate() {
                *u += shifted[(i, j)] * w;
            }
        }
        for (slot, u) in update.iter().enumerate() {
            if u.norm() == 0.0 {
                continue;
            }
            for (row, b) in basis.vector(slot).entries().iter().enumerate() {
                full[(row, col)] += b * u;
            }
        }
    }
    Ok(full)
}

fn solve_gram_system(gram: &ComplexMatrix, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    // small dense solve piggybacking on the least-squares machinery
    let d = gram.rows();
    let cols: Vec<ComplexVector> = (0..d).map(|j| gram.column(j)).collect();
    let target = ComplexVector::from_entries(rhs.to_vec())?;
    // gram is Hermitian positive definite here, so its columns are a basis
    let sol = gram_solve(&cols, &target)?;
    // gram_solve solved (G^dagger G) c = G^dagger rhs, i.e. c = G^{-1} rhs
    Ok(sol.coefficients)
}

fn check_operator_dim(config: &GroverConfig, op: &ComplexMatrix) -> Result<()> {
    if op.rows() != config.size() || op.cols() != config.size() {
        return Err(Error::DimensionMismatch {
            context: "subspace action",
            left: op.rows(),
            right: config.size(),
        });
    }
    Ok(())
}
