//! One-dimensional integration over finite, semi-infinite and
//! endpoint-singular domains with a three-way verdict.
//!
//! Every integrand is evaluated as a [`LogValue`](crate::LogValue) and each
//! Kronrod cell is rescaled by its largest log-magnitude, so integrands like
//! `e^{x²/4 + εx} φ(x)` never over- or underflow before the weight is applied.
//!
//! Unbounded domains are exhausted by doubling (`R_k = a + 2^k`), singular
//! endpoints by halving the gap or, at the origin, through `u = -ln x`. An
//! extension sequence stops with
//!
//! * `Converged` once `converged_run` consecutive increments are below
//!   `max(atol, rtol·|partial|)` and the accumulated error plus a geometric
//!   tail estimate is too;
//! * `Diverged` once increments have grown `growth_run` times in a row, or the
//!   partial integral exceeds `divergence_threshold` while still growing;
//! * `Inconclusive` when the evaluation budget or the f64 domain runs out.

mod gaussian;
mod improper;
mod integrand;
mod kronrod;
mod verdict;

pub use gaussian::{
    expectation_over, gaussian_expectation, gaussian_expectation_with, integrate, integrate_adaptive, Envelope,
    TailPolicy,
};
pub use improper::{integrate_semi_infinite, integrate_shrinking, integrate_singular_origin};
pub use integrand::{ln_phi, Integrand};
pub use verdict::{DivergenceEvidence, DivergenceRule, IntegralVerdict};

use crate::error::{Error, Result};

/// Tolerances, budget and verdict thresholds for one integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    pub atol: f64,
    pub rtol: f64,
    /// Integrand evaluations allowed per verdict.
    pub budget: usize,
    /// `K`: consecutive growing increments that certify divergence.
    pub growth_run: usize,
    pub divergence_threshold: f64,
    /// Consecutive small increments required before convergence is declared.
    pub converged_run: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings {
            atol: 1e-13,
            rtol: 1e-11,
            budget: 100_000,
            growth_run: 6,
            divergence_threshold: 1e12,
            converged_run: 3,
        }
    }
}

impl QuadSettings {
    pub fn with_tolerances(atol: f64, rtol: f64) -> Self {
        QuadSettings {
            atol,
            rtol,
            ..Self::default()
        }
    }

    /// Both tolerances divided by `factor`.
    pub fn tightened(self, factor: f64) -> Self {
        QuadSettings {
            atol: self.atol / factor,
            rtol: self.rtol / factor,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.atol >= 0.0 && self.rtol >= 0.0) || (self.atol == 0.0 && self.rtol == 0.0) {
            return Err(Error::param("atol/rtol", "must be nonnegative and not both zero"));
        }
        if self.budget < 15 {
            return Err(Error::param("budget", "must allow at least one Kronrod cell"));
        }
        if self.growth_run == 0 || self.converged_run == 0 {
            return Err(Error::param("growth_run/converged_run", "must be positive"));
        }
        if !(self.divergence_threshold > 0.0) {
            return Err(Error::param("divergence_threshold", "must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn settings_validation() {
        assert!(QuadSettings::default().validate().is_ok());
        assert!(QuadSettings::with_tolerances(0.0, 0.0).validate().is_err());
        assert!(QuadSettings::with_tolerances(-1.0, 1e-3).validate().is_err());
        let t = QuadSettings::default().tightened(10.0);
        assert_eq!(t.rtol, 1e-12);
    }
}
