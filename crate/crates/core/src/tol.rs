//! Shared numerical tolerances.
//!
//! The ladder reflects how much rounding each class of quantity accumulates:
//! plain algebraic identities on small matrices sit at machine noise, while
//! residuals built from n-fold Kronecker products and long operator chains
//! pick up a few extra digits.

/// Algebraic identities on small matrices (gate unitarity, power laws).
pub const ALGEBRAIC: f64 = 1e-12;

/// Products of a handful of circuit layers.
pub const CIRCUIT: f64 = 1e-11;

/// Operator-level comparisons and unitarity of full diffusion operators.
pub const OPERATOR: f64 = 1e-10;

/// Subspace action residuals over stacked states.
pub const SUBSPACE: f64 = 1e-9;

/// Determinant sampling and eigen residuals over large codomains.
pub const SPECTRAL: f64 = 1e-8;

/// Least-squares residual below which a vector counts as in-span.
pub const IN_SPAN: f64 = 1e-8;
