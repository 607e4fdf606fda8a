//! Grover execution: exact subspace evolution for large codomains, full
//! state-vector evolution for small ones, measurement sampling, and the
//! seeded repeated-run protocol.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashMap;

use crate::analysis::subspace_operators;
use crate::diffusion::{diffusion_operator, DiffusionForm};
use crate::error::{Error, Result};
use crate::linalg::{max_operator_dim, ComplexVector};
use crate::subspace::{embed, GroverConfig, SubspaceBasis};

/// Identifier of the pseudo-random generator backing every sampled decision.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Upper bound on protocol runs before bailing out with
/// [`Error::ProtocolRunaway`].
pub const PROTOCOL_RUN_LIMIT: usize = 10_000;

/// How to carry the evolving state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    /// Full `N`-dimensional amplitudes; needs `N` within the operator budget.
    Full,
    /// `d` coordinates against the invariant subspace basis.
    Subspace,
}

/// State of a Grover run in either representation.
#[derive(Debug, Clone)]
pub enum QuantumState {
    Full {
        config: GroverConfig,
        amplitudes: ComplexVector,
    },
    Subspace {
        config: GroverConfig,
        coords: Vec<Complex64>,
    },
}

impl QuantumState {
    pub fn config(&self) -> &GroverConfig {
        match self {
            QuantumState::Full { config, .. } | QuantumState::Subspace { config, .. } => config,
        }
    }

    /// Probability of measuring the marked index.
    pub fn tau_probability(&self) -> f64 {
        match self {
            QuantumState::Full { config, amplitudes } => {
                amplitudes[config.target()].norm_sqr().clamp(0.0, 1.0)
            }
            QuantumState::Subspace { config, coords } => {
                let amp: Complex64 = config
                    .overlap_row()
                    .iter()
                    .zip(coords)
                    .map(|(o, c)| o * c)
                    .sum();
                amp.norm_sqr().clamp(0.0, 1.0)
            }
        }
    }

    /// Euclidean norm of the represented full state. In subspace mode this
    /// uses the analytic Gram matrix of the basis, so it works at any `N`.
    pub fn norm(&self) -> f64 {
        match self {
            QuantumState::Full { amplitudes, .. } => amplitudes.norm(),
            QuantumState::Subspace { config, coords } => {
                let overlaps = config.overlap_row();
                let d = coords.len();
                let mut total = Complex64::new(0.0, 0.0);
                for a in 0..d {
                    for b in 0..d {
                        // Gram: slots are orthonormal except the target row/column
                        let g = if a == b {
                            Complex64::new(1.0, 0.0)
                        } else if a == 0 {
                            overlaps[b]
                        } else if b == 0 {
                            overlaps[a].conj()
                        } else {
                            Complex64::new(0.0, 0.0)
                        };
                        total += coords[a].conj() * g * coords[b];
                    }
                }
                total.re.max(0.0).sqrt()
            }
        }
    }
}

/// The uniform starting state `|s_0>` in the requested representation.
pub fn initial_state(config: &GroverConfig, representation: Representation) -> Result<QuantumState> {
    match representation {
        Representation::Full => {
            let n = config.size();
            if n > max_operator_dim() {
                return Err(Error::SizeExceeded {
                    rows: n,
                    cols: n,
                    max: crate::linalg::max_entries(),
                });
            }
            let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
            let amplitudes = ComplexVector::from_entries(vec![amp; n])?;
            Ok(QuantumState::Full {
                config: *config,
                amplitudes,
            })
        }
        Representation::Subspace => {
            let d = config.arity().get();
            let mut coords = vec![Complex64::new(0.0, 0.0); d];
            coords[d - 1] = Complex64::new(1.0, 0.0); // |s_0> sits in the last slot
            Ok(QuantumState::Subspace {
                config: *config,
                coords,
            })
        }
    }
}

/// Run `r` Grover iterations from `|s_0>`. Full mode applies the embedded
/// oracle followed by the diffusion operator each round; subspace mode
/// applies the d-dimensional iteration matrix.
pub fn evolve(config: &GroverConfig, r: usize, representation: Representation) -> Result<QuantumState> {
    match representation {
        Representation::Full => {
            let mut state = initial_state(config, Representation::Full)?;
            let diffusion =
                diffusion_operator(config.arity(), config.width(), DiffusionForm::ClosedForm)?;
            let basis = SubspaceBasis::new(config)?;
            let oracle_full = embed(&subspace_operators(config).oracle, &basis)?;
            let QuantumState::Full { amplitudes, .. } = &mut state else {
                unreachable!()
            };
            for _ in 0..r {
                *amplitudes = diffusion.matvec(&oracle_full.matvec(amplitudes)?)?;
            }
            Ok(state)
        }
        Representation::Subspace => {
            let mut state = initial_state(config, Representation::Subspace)?;
            let iteration = subspace_operators(config).iteration;
            let QuantumState::Subspace { coords, .. } = &mut state else {
                unreachable!()
            };
            let d = coords.len();
            for _ in 0..r {
                let mut next = vec![Complex64::new(0.0, 0.0); d];
                for (i, nx) in next.iter_mut().enumerate() {
                    for (j, c) in coords.iter().enumerate() {
                        *nx += iteration[(i, j)] * c;
                    }
                }
                *coords = next;
            }
            Ok(state)
        }
    }
}

/// Sample a computational-basis outcome from the state.
pub fn measure(state: &QuantumState, rng_seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    measure_with_rng(state, &mut rng)
}

fn measure_with_rng(state: &QuantumState, rng: &mut ChaCha8Rng) -> usize {
    match state {
        QuantumState::Full { amplitudes, .. } => sample_index(
            amplitudes.entries().iter().map(|z| z.norm_sqr()),
            amplitudes.dim(),
            rng,
        ),
        QuantumState::Subspace { config, coords } => {
            let n = config.size();
            if n <= max_operator_dim() {
                // small codomain: reconstruct the per-basis weights exactly
                let basis = SubspaceBasis::new(config).expect("within budget");
                let full = basis.reconstruct(coords).expect("matching slots");
                sample_index(full.entries().iter().map(|z| z.norm_sqr()), n, rng)
            } else {
                // large codomain: resolve {tau, not tau}, impostors uniform
                let p_tau = state.tau_probability();
                if rng.random::<f64>() < p_tau {
                    config.target()
                } else {
                    let raw = rng.random_range(0..n - 1);
                    if raw >= config.target() {
                        raw + 1
                    } else {
                        raw
                    }
                }
            }
        }
    }
}

fn sample_index(weights: impl Iterator<Item = f64>, len: usize, rng: &mut ChaCha8Rng) -> usize {
    let weights: Vec<f64> = weights.collect();
    let total: f64 = weights.iter().sum();
    let mut draw = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        draw -= w;
        if draw <= 0.0 {
            return i;
        }
    }
    len - 1
}

/// Outcome of one repeated-run protocol execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunStats {
    /// The repeated measurement outcome.
    pub answer: usize,
    /// Number of runs until some outcome repeated.
    pub runs: usize,
    /// Total Grover iterations spent: `runs * r`.
    pub oracle_calls: usize,
    /// Whether the answer is the marked index.
    pub success: bool,
    /// Seed that produced this record.
    pub seed: u64,
    /// Generator identifier, for reproducibility audits.
    pub rng_algorithm: &'static str,
}

/// Run Grover searches of `r = round(rho sqrt(N))` iterations (at least one)
/// until some measurement outcome repeats; the repeat is the answer.
pub fn repeated_run_protocol(config: &GroverConfig, rho: f64, rng_seed: u64) -> Result<RunStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    protocol_with_rng(config, rho, rng_seed, &mut rng)
}

fn protocol_with_rng(
    config: &GroverConfig,
    rho: f64,
    seed: u64,
    rng: &mut ChaCha8Rng,
) -> Result<RunStats> {
    if !(rho > 0.0) {
        return Err(Error::Domain("rho must be positive".into()));
    }
    let r = ((rho * (config.size() as f64).sqrt()).round() as usize).max(1);
    let evolved = evolve(config, r, Representation::Subspace)?;
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for runs in 1..=PROTOCOL_RUN_LIMIT {
        // every run starts from a fresh |s_0>, so the evolved state is reused
        let outcome = measure_with_rng(&evolved, rng);
        let seen = counts.entry(outcome).or_insert(0);
        *seen += 1;
        if *seen == 2 {
            return Ok(RunStats {
                answer: outcome,
                runs,
                oracle_calls: runs * r,
                success: outcome == config.target(),
                seed,
                rng_algorithm: RNG_ALGORITHM,
            });
        }
    }
    Err(Error::ProtocolRunaway {
        limit: PROTOCOL_RUN_LIMIT,
    })
}

/// Execute independent protocol trials concurrently. Trial `t` owns the
/// stream `t` of the seeded generator, so results are reproducible and
/// independent of scheduling; trial 0 coincides with
/// [`repeated_run_protocol`] at the same seed.
pub fn run_trials(
    config: &GroverConfig,
    rho: f64,
    trials: usize,
    seed: u64,
) -> Vec<Result<RunStats>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            protocol_with_rng(config, rho, seed, &mut rng)
        })
        .collect()
}
