//! Dense complex linear algebra: matrices, vectors, Kronecker products,
//! determinants, matrix exponentials, and least-squares coordinates.
//!
//! Everything is row-major `Complex64` and immutable once built. Sizes are
//! bounded by a configurable entry budget so an accidental `kron` chain fails
//! loudly instead of allocating gigabytes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Default entry budget: 3^12 entries, i.e. vectors up to 3^12 components or
/// square operators up to 3^6 x 3^6.
pub const DEFAULT_MAX_ENTRIES: usize = 531_441;

/// Current entry budget; `QUDIT_GROVER_MAX_DIM` overrides the default.
pub fn max_entries() -> usize {
    std::env::var("QUDIT_GROVER_MAX_DIM")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_ENTRIES)
}

/// Largest dimension a square operator may have under the current budget.
pub fn max_operator_dim() -> usize {
    (max_entries() as f64).sqrt().floor() as usize
}

fn check_entries(rows: usize, cols: usize) -> Result<()> {
    let max = max_entries();
    match rows.checked_mul(cols) {
        Some(total) if total <= max => Ok(()),
        _ => Err(Error::SizeExceeded { rows, cols, max }),
    }
}

fn check_finite(entries: &[Complex64]) -> Result<()> {
    if entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            write!(f, "  ")?;
            for j in 0..self.cols.min(8) {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_entries(rows, cols)?;
        Ok(Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// All-ones matrix.
    pub fn ones(rows: usize, cols: usize) -> Result<Self> {
        check_entries(rows, cols)?;
        Ok(Self {
            rows,
            cols,
            entries: vec![Complex64::new(1.0, 0.0); rows * cols],
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        check_entries(rows, cols)?;
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        check_finite(&entries)?;
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                context: "from_rows",
                left: c,
                right: rows.iter().map(Vec::len).find(|&l| l != c).unwrap_or(c),
            });
        }
        check_entries(r, c)?;
        let entries: Vec<Complex64> = rows.iter().flatten().copied().collect();
        check_finite(&entries)?;
        Ok(Self { rows: r, cols: c, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self[(i, j)]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self {
            rows: self.cols,
            cols: self.rows,
            entries: vec![Complex64::new(0.0, 0.0); self.entries.len()],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sub")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "mul",
                left: self.cols,
                right: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &other.entries[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.entries[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                context: "matvec",
                left: self.cols,
                right: v.dim(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.entries[i * self.cols..(i + 1) * self.cols];
            *o = row
                .iter()
                .zip(v.entries())
                .map(|(a, x)| a * x)
                .sum();
        }
        ComplexVector::from_entries(out)
    }

    /// Kronecker product: block (i, j) of the result is `self[i, j] * other`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let rows = self
            .rows
            .checked_mul(other.rows)
            .ok_or(Error::SizeExceeded {
                rows: usize::MAX,
                cols: other.cols,
                max: max_entries(),
            })?;
        let cols = self
            .cols
            .checked_mul(other.cols)
            .ok_or(Error::SizeExceeded {
                rows,
                cols: usize::MAX,
                max: max_entries(),
            })?;
        let mut out = Self::zeros(rows, cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        out[(i * other.rows + p, j * other.cols + q)] = a * other[(p, q)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "max_abs_diff shape mismatch"
        );
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Operator 1-norm (maximum absolute column sum).
    pub fn one_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum())
            .fold(0.0, f64::max)
    }

    /// Max-norm of `A^dagger A - I`.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self.dagger().mul(self).expect("square product");
        let id = Self::identity(self.rows).expect("identity within budget");
        gram.max_abs_diff(&id)
    }

    pub fn is_unitary(&self) -> bool {
        self.is_square() && self.unitarity_residual() <= tol::OPERATOR
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::from_entries((0..self.rows).map(|i| self[(i, j)]).collect())
            .expect("column within budget")
    }

    /// Determinant via LU with partial pivoting; row-swap parity is tracked
    /// exactly.
    pub fn det(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let lu = LuFactors::new(self);
        let mut det = Complex64::new(lu.sign, 0.0);
        for i in 0..lu.n {
            det *= lu.pivot(i);
        }
        Ok(det)
    }

    /// Matrix exponential by scaling-and-squaring over a truncated series.
    ///
    /// The series is cut once the next term falls below the machine-precision
    /// ratio of the running sum; inputs with 1-norm beyond 100 are rejected.
    pub fn expm(&self) -> Result<Self> {
        const NORM_LIMIT: f64 = 100.0;
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let norm = self.one_norm();
        if norm > NORM_LIMIT {
            return Err(Error::NormTooLarge {
                norm,
                limit: NORM_LIMIT,
            });
        }
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let scaled = self.scaled(Complex64::new(0.5f64.powi(squarings as i32), 0.0));
        let mut sum = Self::identity(self.rows)?;
        let mut term = Self::identity(self.rows)?;
        for k in 1..=60u32 {
            term = term
                .mul(&scaled)?
                .scaled(Complex64::new(1.0 / f64::from(k), 0.0));
            sum = sum.add(&term)?;
            if term.max_abs() <= f64::EPSILON * sum.max_abs() {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum.mul(&sum)?;
        }
        Ok(sum)
    }

    fn check_same_shape(&self, other: &Self, context: &'static str) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                context,
                left: self.rows,
                right: other.rows,
            });
        }
        Ok(())
    }
}

/// Dense complex vector.
#[derive(Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl std::fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ComplexVector dim={} [", self.entries.len())?;
        for z in self.entries.iter().take(8) {
            write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<usize> for ComplexVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.entries[i]
    }
}

impl ComplexVector {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_entries(dim, 1)?;
        Ok(Self {
            entries: vec![Complex64::new(0.0, 0.0); dim],
        })
    }

    pub fn from_entries(entries: Vec<Complex64>) -> Result<Self> {
        check_entries(entries.len(), 1)?;
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    /// Standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        let mut v = Self::zeros(dim)?;
        v.entries[index] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Inner product conjugating `self`: `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context: "vector add",
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context: "vector sub",
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff dim mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_state(&self) -> bool {
        (self.norm() - 1.0).abs() <= tol::OPERATOR
    }
}

/// Least-squares coordinates of `v` against a list of basis vectors.
#[derive(Debug, Clone)]
pub struct GramSolution {
    /// Coefficients minimising `||B c - v||_2`.
    pub coefficients: Vec<Complex64>,
    /// Euclidean norm of the unexplained remainder.
    pub residual: f64,
    /// Whether the residual is below [`tol::IN_SPAN`].
    pub in_span: bool,
}

/// Solve the normal equations `B^dagger B c = B^dagger v` for the
/// least-squares coordinates of `v` in the given (not necessarily
/// orthogonal) basis.
pub fn gram_solve(basis: &[ComplexVector], v: &ComplexVector) -> Result<GramSolution> {
    if basis.is_empty() {
        return Err(Error::RankDeficient);
    }
    let dim = v.dim();
    for b in basis {
        if b.dim() != dim {
            return Err(Error::DimensionMismatch {
                context: "gram_solve",
                left: b.dim(),
                right: dim,
            });
        }
    }
    let m = basis.len();
    let mut gram = ComplexMatrix::zeros(m, m)?;
    for (a, ba) in basis.iter().enumerate() {
        for (b, bb) in basis.iter().enumerate() {
            gram[(a, b)] = ba.inner(bb);
        }
    }
    let rhs: Vec<Complex64> = basis.iter().map(|b| b.inner(v)).collect();
    let lu = LuFactors::new(&gram);
    let coefficients = lu.solve(&rhs)?;

    let mut remainder = v.clone();
    for (c, b) in coefficients.iter().zip(basis) {
        remainder = remainder.sub(&b.scaled(*c))?;
    }
    let residual = remainder.norm();
    Ok(GramSolution {
        coefficients,
        residual,
        in_span: residual <= tol::IN_SPAN,
    })
}

/// LU factorisation with partial pivoting, shared by `det` and the Gram
/// solver.
struct LuFactors {
    n: usize,
    data: Vec<Complex64>,
    perm: Vec<usize>,
    sign: f64,
    scale: f64,
}

impl LuFactors {
    fn new(a: &ComplexMatrix) -> Self {
        let n = a.rows();
        let mut data = a.entries().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = data[col * n + col].norm();
            for row in col + 1..n {
                let mag = data[row * n + col].norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = row;
                }
            }
            if pivot_row != col {
                for j in 0..n {
                    data.swap(col * n + j, pivot_row * n + j);
                }
                perm.swap(col, pivot_row);
                sign = -sign;
            }
            let pivot = data[col * n + col];
            if pivot.norm() == 0.0 {
                continue; // singular column; det picks up the zero pivot
            }
            for row in col + 1..n {
                let factor = data[row * n + col] / pivot;
                data[row * n + col] = factor;
                for j in col + 1..n {
                    let sub = factor * data[col * n + j];
                    data[row * n + j] -= sub;
                }
            }
        }
        Self {
            n,
            data,
            perm,
            sign,
            scale,
        }
    }

    fn pivot(&self, i: usize) -> Complex64 {
        self.data[i * self.n + i]
    }

    fn solve(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n;
        for i in 0..n {
            if self.pivot(i).norm() <= 1e-12 * self.scale {
                return Err(Error::RankDeficient);
            }
        }
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let sub = self.data[i * n + j] * x[j];
                x[i] -= sub;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let sub = self.data[i * n + j] * x[j];
                x[i] -= sub;
            }
            x[i] /= self.pivot(i);
        }
        Ok(x)
    }
}
