//! Elementary d-ary gates and the multi-qudit controlled increment.
//!
//! The single-qudit family:
//!
//! ```text
//! X_d |j> = |j+1 mod d>          (increment, generalising NOT)
//! Z_d = diag(1, w, w^2, ..., w^{d-1})
//! F_d[i, j] = w^{ij} / sqrt(d)   (quantum Fourier transform)
//! ```
//!
//! with `w = exp(2 pi i / d)`. `F_d` carries the `1/sqrt(d)` normalisation so
//! every produced gate is unitary; at `d = 2` it coincides with the Hadamard
//! gate exactly.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Largest supported arity. Identity checks at higher arities add nothing;
/// raise this constant if a wider alphabet is ever needed.
pub const MAX_ARITY: usize = 16;

/// Number of distinguishable levels of each qudit, validated to
/// `2..=MAX_ARITY`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arity(usize);

impl Arity {
    pub fn new(d: usize) -> Result<Self> {
        if (2..=MAX_ARITY).contains(&d) {
            Ok(Self(d))
        } else {
            Err(Error::ArityOutOfRange { d, max: MAX_ARITY })
        }
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for Arity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The elementary gate family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    /// Increment gate.
    X,
    /// Phase gate.
    Z,
    /// Quantum Fourier transform.
    F,
    /// Decrement gate, the adjoint of `X`.
    XInverse,
    /// Inverse Fourier transform.
    FInverse,
    /// Hadamard; only defined at arity 2, where it equals `F`.
    H,
}

/// `exp(2 pi i p / d)`, computed from the exponent reduced mod `d` so the
/// result for `p` and `p + d` is identical bit-for-bit. Values on the real
/// and imaginary axes come out exact.
pub fn root_of_unity(d: Arity, p: i64) -> Complex64 {
    let d = d.get();
    let r = p.rem_euclid(d as i64) as usize;
    if r == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * r == d {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * r == d {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * r == 3 * d {
        return Complex64::new(0.0, -1.0);
    }
    let theta = 2.0 * PI * r as f64 / d as f64;
    Complex64::new(theta.cos(), theta.sin())
}

/// Build one of the elementary `d x d` gates.
pub fn elementary_gate(kind: GateKind, d: Arity) -> Result<ComplexMatrix> {
    let n = d.get();
    match kind {
        GateKind::X => ComplexMatrix::from_fn(n, n, |i, j| {
            if i == (j + 1) % n {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }),
        GateKind::XInverse => Ok(elementary_gate(GateKind::X, d)?.dagger()),
        GateKind::Z => ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                root_of_unity(d, i as i64)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }),
        GateKind::F => {
            let scale = 1.0 / (n as f64).sqrt();
            ComplexMatrix::from_fn(n, n, |i, j| root_of_unity(d, (i * j) as i64) * scale)
        }
        GateKind::FInverse => Ok(elementary_gate(GateKind::F, d)?.dagger()),
        GateKind::H => {
            if n != 2 {
                return Err(Error::UnsupportedGate {
                    gate: "H",
                    d: n,
                });
            }
            elementary_gate(GateKind::F, d)
        }
    }
}

/// Controlled increment over `n` qudits: the first `n - 1` qudits control,
/// the last is the target, and the target is incremented mod `d` exactly when
/// every control reads 1. Recursively, the block at position (1, 1) holds the
/// (n-1)-qudit gate and every other diagonal block is the identity; the base
/// case is `X_d` itself.
pub fn controlled_inc(d: Arity, n: usize) -> Result<ComplexMatrix> {
    assert!(n >= 1, "controlled_inc requires at least one qudit");
    let base = d.get();
    let mut gate = elementary_gate(GateKind::X, d)?;
    for level in 2..=n {
        let sub = base.pow(level as u32 - 1);
        let mut next = ComplexMatrix::identity(sub * base)?;
        for i in 0..sub {
            for j in 0..sub {
                next[(sub + i, sub + j)] = gate[(i, j)];
            }
        }
        gate = next;
    }
    Ok(gate)
}
