//! Construction and exact analysis of Grover search over d-ary quantum
//! registers.
//!
//! The crate builds the elementary d-level gates and the diffusion circuit,
//! proves out its closed form numerically, carries the dynamics in the
//! d-dimensional invariant subspace spanned by the marked state and the
//! stacked Fourier columns, and reproduces the expected iteration counts and
//! oracle-call budgets at desk scale, including a seeded Monte Carlo of the
//! repeated-run measurement protocol.
//!
//! Modules follow the pipeline: [`linalg`] (dense complex kernels),
//! [`gates`], [`diffusion`], [`subspace`], [`analysis`], [`sim`], and
//! [`checks`] for the named verification suite.

pub mod analysis;
pub mod checks;
pub mod diffusion;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod sim;
pub mod subspace;
pub mod tol;

pub use analysis::{
    binary_complexity, char_poly_residual, exact_complexity, expected_calls,
    general_optimal_iterations, half_tangent_root, iteration_expansion, iteration_exponential,
    optimal_scaling, subspace_operators, success_probability, synthetic_complexity,
    tau_probability_curve, ternary_eigensystem, ternary_optimal_iterations, ComplexityModel,
    ComplexityReport, IterationExpansion, ScalingCriterion, SubspaceOperators, TernaryEigensystem,
};
pub use checks::{verify, Check};
pub use diffusion::{
    binary_diffusion, diffusion_core, diffusion_core_circuit, diffusion_operator,
    diffusion_update, kron_power, CircuitProduct, DiffusionForm,
};
pub use error::{Error, Result};
pub use gates::{controlled_inc, elementary_gate, root_of_unity, Arity, GateKind, MAX_ARITY};
pub use linalg::{
    gram_solve, max_entries, max_operator_dim, ComplexMatrix, ComplexVector, GramSolution,
    DEFAULT_MAX_ENTRIES,
};
pub use sim::{
    evolve, initial_state, measure, repeated_run_protocol, run_trials, QuantumState,
    Representation, RunStats, PROTOCOL_RUN_LIMIT, RNG_ALGORITHM,
};
pub use subspace::{
    embed, fourier_coefficient_matrix, fourier_state_action, restrict, target_action,
    ActionReport, DiffusionUpdate, GroverConfig, SubspaceBasis,
};
