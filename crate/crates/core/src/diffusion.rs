//! The d-ary diffusion operator, both as an explicit gate product and in
//! closed form.
//!
//! The gate product mirrors the circuit layout: increments across the
//! register, a Fourier-conjugated controlled increment on the last qudit,
//! and the mirror-image inverses, all optionally wrapped in a register-wide
//! Fourier conjugation. The closed form is
//!
//! ```text
//! D = (1/d^{n-1}) J_{d^{n-1}} (x) U  +  I_{d^n}
//! ```
//!
//! where `J` is all-ones and `U` is the single-qudit update returned by
//! [`diffusion_update`].

use num_complex::Complex64;

use crate::error::Result;
use crate::gates::{controlled_inc, elementary_gate, root_of_unity, Arity, GateKind};
use crate::linalg::ComplexMatrix;

/// An ordered stack of circuit layers together with its evaluated product.
///
/// Layers are stored in application order (first applied first); the product
/// therefore multiplies right-to-left.
#[derive(Debug, Clone)]
pub struct CircuitProduct {
    layers: Vec<ComplexMatrix>,
    product: ComplexMatrix,
}

impl CircuitProduct {
    pub fn new(layers: Vec<ComplexMatrix>) -> Result<Self> {
        assert!(!layers.is_empty(), "a circuit needs at least one layer");
        let dim = layers[0].rows();
        let mut product = ComplexMatrix::identity(dim)?;
        for layer in &layers {
            product = layer.mul(&product)?;
        }
        Ok(Self { layers, product })
    }

    pub fn layers(&self) -> &[ComplexMatrix] {
        &self.layers
    }

    pub fn product(&self) -> &ComplexMatrix {
        &self.product
    }

    pub fn into_product(self) -> ComplexMatrix {
        self.product
    }
}

/// How to realise the diffusion operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffusionForm {
    /// Multiply the circuit layers explicitly.
    GateProduct,
    /// Evaluate the closed-form expression.
    ClosedForm,
}

/// `n`-fold Kronecker power.
pub fn kron_power(m: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    assert!(n >= 1, "kron_power needs at least one factor");
    let mut out = m.clone();
    for _ in 1..n {
        out = out.kron(m)?;
    }
    Ok(out)
}

/// Single-qudit update underlying the diffusion closed form:
/// `w^{d-1} X^dagger - I`.
///
/// The decrement direction is forced here: conjugating the increment gate by
/// the Fourier transform transposes it, so the closed form that matches the
/// gate product carries `X^dagger`, not `X`.
pub fn diffusion_update(d: Arity) -> ComplexMatrix {
    let n = d.get();
    let phase = root_of_unity(d, n as i64 - 1);
    let x_inv = elementary_gate(GateKind::XInverse, d).expect("gate within budget");
    let id = ComplexMatrix::identity(n).expect("identity within budget");
    x_inv
        .scaled(phase)
        .sub(&id)
        .expect("same shape")
}

/// Layer stack of the unconjugated diffusion core, in application order.
pub fn diffusion_core_circuit(d: Arity, n: usize) -> Result<CircuitProduct> {
    assert!(n >= 1, "register width must be at least 1");
    let base = d.get();
    let x = elementary_gate(GateKind::X, d)?;
    let x_inv = elementary_gate(GateKind::XInverse, d)?;
    let f = elementary_gate(GateKind::F, d)?;
    let f_inv = elementary_gate(GateKind::FInverse, d)?;

    let wrap_last = |gate: &ComplexMatrix| -> Result<ComplexMatrix> {
        if n == 1 {
            Ok(gate.clone())
        } else {
            ComplexMatrix::identity(base.pow(n as u32 - 1))?.kron(gate)
        }
    };

    CircuitProduct::new(vec![
        kron_power(&x, n)?,
        wrap_last(&f)?,
        controlled_inc(d, n)?,
        wrap_last(&f_inv)?,
        kron_power(&x_inv, n)?,
    ])
}

/// The diffusion core: block diagonal with the (0, 0) block recursing to the
/// single-qudit core and identity elsewhere.
pub fn diffusion_core(d: Arity, n: usize) -> Result<ComplexMatrix> {
    Ok(diffusion_core_circuit(d, n)?.into_product())
}

/// The full diffusion operator on `n` qudits of arity `d`.
pub fn diffusion_operator(d: Arity, n: usize, form: DiffusionForm) -> Result<ComplexMatrix> {
    assert!(n >= 1, "register width must be at least 1");
    match form {
        DiffusionForm::GateProduct => {
            let f = elementary_gate(GateKind::F, d)?;
            let f_inv = elementary_gate(GateKind::FInverse, d)?;
            let core = diffusion_core_circuit(d, n)?;
            let mut layers = Vec::with_capacity(core.layers().len() + 2);
            layers.push(kron_power(&f, n)?);
            layers.extend(core.layers().iter().cloned());
            layers.push(kron_power(&f_inv, n)?);
            Ok(CircuitProduct::new(layers)?.into_product())
        }
        DiffusionForm::ClosedForm => {
            let base = d.get();
            let blocks = base.pow(n as u32 - 1);
            let update = diffusion_update(d);
            let j = ComplexMatrix::ones(blocks, blocks)?;
            let scaled = j
                .kron(&update)?
                .scaled(Complex64::new(1.0 / blocks as f64, 0.0));
            scaled.add(&ComplexMatrix::identity(base.pow(n as u32))?)
        }
    }
}

/// The binary diffusion circuit. Unconjugated it evaluates to
/// `-(2|0..0><0..0| - I)`; wrapped in Hadamards on every wire it becomes
/// `-(2|s><s| - I)` for the uniform state `|s>`.
pub fn binary_diffusion(n: usize, conjugated: bool) -> Result<ComplexMatrix> {
    assert!(n >= 1, "register width must be at least 1");
    let d = Arity::new(2).expect("binary arity");
    let h = elementary_gate(GateKind::H, d)?;
    let x = elementary_gate(GateKind::X, d)?;
    let wrap_last = |gate: &ComplexMatrix| -> Result<ComplexMatrix> {
        if n == 1 {
            Ok(gate.clone())
        } else {
            ComplexMatrix::identity(2usize.pow(n as u32 - 1))?.kron(gate)
        }
    };
    let mut layers = vec![
        kron_power(&x, n)?,
        wrap_last(&h)?,
        controlled_inc(d, n)?,
        wrap_last(&h)?,
        kron_power(&x, n)?,
    ];
    if conjugated {
        let hn = kron_power(&h, n)?;
        layers.insert(0, hn.clone());
        layers.push(hn);
    }
    Ok(CircuitProduct::new(layers)?.into_product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;

    fn arity(d: usize) -> Arity {
        Arity::new(d).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// w^{d-1} Z^{-1}: the closed form of the single-qudit core.
    fn core_closed_form(d: Arity) -> ComplexMatrix {
        let z_inv = elementary_gate(GateKind::Z, d).unwrap().dagger();
        z_inv.scaled(root_of_unity(d, d.get() as i64 - 1))
    }

    #[test]
    fn single_qudit_core_is_shifted_phase_gate() {
        for d in [2usize, 3, 5, 6] {
            let d = arity(d);
            let got = diffusion_core(d, 1).unwrap();
            assert!(
                got.max_abs_diff(&core_closed_form(d)) <= tol::CIRCUIT,
                "d={d}"
            );
        }
    }

    #[test]
    fn binary_core_is_sign_flip_on_zero() {
        for n in 1..=4 {
            let got = diffusion_core(arity(2), n).unwrap();
            let dim = 2usize.pow(n as u32);
            let mut expected = ComplexMatrix::identity(dim).unwrap();
            expected[(0, 0)] = c(-1.0, 0.0);
            assert!(got.max_abs_diff(&expected) <= tol::CIRCUIT, "n={n}");
        }
    }

    #[test]
    fn ternary_two_qudit_core_blocks() {
        // block-diag(core(1), I_3, I_3), multiplied out layer by layer
        let d = arity(3);
        let got = diffusion_core(d, 2).unwrap();
        let mut expected = ComplexMatrix::identity(9).unwrap();
        let top = core_closed_form(d);
        for i in 0..3 {
            for j in 0..3 {
                expected[(i, j)] = top.get(i, j);
            }
        }
        assert!(got.max_abs_diff(&expected) <= tol::CIRCUIT);
    }

    #[test]
    fn core_block_recursion() {
        for (d, n_max) in [(2usize, 3usize), (3, 3), (5, 2)] {
            let d = arity(d);
            let base = d.get();
            for n in 2..=n_max {
                let outer = diffusion_core(d, n).unwrap();
                let inner = diffusion_core(d, n - 1).unwrap();
                let sub = base.pow(n as u32 - 1);
                for i in 0..sub * base {
                    for j in 0..sub * base {
                        let expected = if i < sub && j < sub {
                            inner.get(i, j)
                        } else if i == j {
                            c(1.0, 0.0)
                        } else {
                            c(0.0, 0.0)
                        };
                        assert!(
                            (outer.get(i, j) - expected).norm() <= tol::OPERATOR,
                            "d={d} n={n} ({i},{j})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn single_qudit_diffusion_closed_form() {
        // D(1) = w^{d-1} X^dagger
        for d in [2usize, 3, 5] {
            let d = arity(d);
            let got = diffusion_operator(d, 1, DiffusionForm::ClosedForm).unwrap();
            let expected = elementary_gate(GateKind::XInverse, d)
                .unwrap()
                .scaled(root_of_unity(d, d.get() as i64 - 1));
            assert!(got.max_abs_diff(&expected) <= tol::OPERATOR, "d={d}");
            let product = diffusion_operator(d, 1, DiffusionForm::GateProduct).unwrap();
            assert!(product.max_abs_diff(&expected) <= tol::OPERATOR, "d={d}");
        }
    }

    #[test]
    fn binary_diffusion_closed_form_is_mean_reflection() {
        // I - (2/N) J, from expanding J (x) (-X - I) = -J over two levels
        for n in 1..=4 {
            let dim = 2usize.pow(n as u32);
            let got = diffusion_operator(arity(2), n, DiffusionForm::ClosedForm).unwrap();
            let expected = ComplexMatrix::identity(dim)
                .unwrap()
                .sub(
                    &ComplexMatrix::ones(dim, dim)
                        .unwrap()
                        .scaled(c(2.0 / dim as f64, 0.0)),
                )
                .unwrap();
            assert!(got.max_abs_diff(&expected) <= tol::OPERATOR, "n={n}");
        }
    }

    #[test]
    fn product_matches_closed_form() {
        for (d, n) in [(2usize, 3usize), (3, 2), (3, 3), (4, 2), (5, 2), (6, 2)] {
            let d = arity(d);
            let product = diffusion_operator(d, n, DiffusionForm::GateProduct).unwrap();
            let closed = diffusion_operator(d, n, DiffusionForm::ClosedForm).unwrap();
            assert!(
                product.max_abs_diff(&closed) <= tol::OPERATOR,
                "d={d} n={n}: {}",
                product.max_abs_diff(&closed)
            );
        }
    }

    #[test]
    fn diffusion_is_unitary() {
        for (d, n) in [(2usize, 3usize), (3, 2), (5, 2)] {
            let op = diffusion_operator(arity(d), n, DiffusionForm::ClosedForm).unwrap();
            assert!(op.unitarity_residual() <= tol::OPERATOR, "d={d} n={n}");
        }
    }

    #[test]
    fn binary_circuit_matches_projections() {
        for n in 1..=3 {
            let dim = 2usize.pow(n as u32);
            let uncon = binary_diffusion(n, false).unwrap();
            let mut expected = ComplexMatrix::identity(dim).unwrap();
            expected[(0, 0)] = c(-1.0, 0.0);
            assert!(uncon.max_abs_diff(&expected) <= tol::CIRCUIT, "n={n}");

            // -(2|s><s| - I) = I - (2/N) J
            let conj = binary_diffusion(n, true).unwrap();
            let mean = ComplexMatrix::identity(dim)
                .unwrap()
                .sub(
                    &ComplexMatrix::ones(dim, dim)
                        .unwrap()
                        .scaled(c(2.0 / dim as f64, 0.0)),
                )
                .unwrap();
            assert!(conj.max_abs_diff(&mean) <= tol::CIRCUIT, "n={n}");
        }
    }

    #[test]
    fn binary_diffusion_equals_general_operator() {
        for n in 1..=3 {
            let general =
                diffusion_operator(arity(2), n, DiffusionForm::GateProduct).unwrap();
            let binary = binary_diffusion(n, true).unwrap();
            assert!(general.max_abs_diff(&binary) <= tol::CIRCUIT, "n={n}");
        }
    }

    #[test]
    fn circuit_product_multiplies_right_to_left() {
        let d = arity(2);
        let x = elementary_gate(GateKind::X, d).unwrap();
        let z = elementary_gate(GateKind::Z, d).unwrap();
        let circuit = CircuitProduct::new(vec![x.clone(), z.clone()]).unwrap();
        // applied X first, then Z: product must be Z * X
        let expected = z.mul(&x).unwrap();
        assert_eq!(circuit.product().max_abs_diff(&expected), 0.0);
        let reversed = x.mul(&z).unwrap();
        assert!(circuit.product().max_abs_diff(&reversed) > 0.5);
    }
}
