//! The time interval, Cameron–Martin directions, Brownian paths, shifts,
//! Wiener integrals and Girsanov weights.
//!
//! Densities are piecewise constant on explicit grids, which makes `W(h)`,
//! `⟨·,·⟩_H` and the shift `τ_h` exact on sampled paths.

mod direction;
mod grid;
mod path;
mod sampler;

pub use direction::{cm_inner, cm_norm, CameronMartinDirection};
pub use grid::TimeGrid;
pub use path::{girsanov_weight, log_girsanov_weight, shift_path, wiener_integral, BrownianPath};
pub use sampler::{sample_path, MeanEstimate, PathSampler, BATCH_SIZE};

/// Horizon used by the counterexample functionals.
pub const DEFAULT_HORIZON: f64 = 1.0;
