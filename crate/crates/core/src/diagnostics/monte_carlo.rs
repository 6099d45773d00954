use super::EpsilonGrid;
use crate::error::{Error, Result};
use crate::functional::{mc_difference_quotient, CylindricalFunctional, WienerFunctional};
use crate::wiener::{girsanov_weight, shift_path, CameronMartinDirection, MeanEstimate, PathSampler, TimeGrid};

/// Monte Carlo estimates of both sides of `E[Z∘τ_h] = E[Z e^{W(h) - ½‖h‖²_H}]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmCheck {
    pub lhs: MeanEstimate,
    pub rhs: MeanEstimate,
}

impl CmCheck {
    /// `|lhs - rhs| ≤ 3 (SE_lhs + SE_rhs)`.
    pub fn agrees(&self) -> bool {
        (self.lhs.mean - self.rhs.mean).abs() <= 3.0 * (self.lhs.std_error + self.rhs.std_error)
    }
}

/// The coarsest grid on which `h` and every direction of `z` are piecewise
/// constant.
fn joint_grid(z: &CylindricalFunctional, h: &CameronMartinDirection) -> Result<TimeGrid> {
    z.directions()
        .iter()
        .try_fold(h.grid().clone(), |g, d| g.common_refinement(d.grid()))
}

fn check_samples(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::param("n-samples", "need at least 2 samples for a standard error"));
    }
    Ok(())
}

/// Both sides use the same paths (common random numbers).
pub fn cameron_martin_check(z: &CylindricalFunctional, h: &CameronMartinDirection, n: usize, seed: u64) -> Result<CmCheck> {
    check_samples(n)?;
    let sampler = PathSampler::new(joint_grid(z, h)?, seed);
    let sides = |w: &crate::wiener::BrownianPath| -> Result<[f64; 2]> {
        Ok([z.eval(&shift_path(w, h, 1.0)?)?, z.eval(w)? * girsanov_weight(h, w)?])
    };
    // Every path lives on the same grid, so one evaluation settles errors.
    sides(&sampler.path(0))?;
    let [lhs, rhs] = sampler.mean_estimates(n, |w| sides(w).expect("checked on the first path"));
    Ok(CmCheck { lhs, rhs })
}

/// `P(|X_ε - ⟨∇Z, h⟩_H| > δ)` at one `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgdRow {
    pub eps: f64,
    pub probability: MeanEstimate,
}

pub fn sgd_probability_test(
    z: &CylindricalFunctional,
    h: &CameronMartinDirection,
    grid: &EpsilonGrid,
    delta: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<SgdRow>> {
    check_samples(n)?;
    if !(delta > 0.0) {
        return Err(Error::param("delta", "must be positive"));
    }
    let sampler = PathSampler::new(joint_grid(z, h)?, seed);
    let exceed = |w: &crate::wiener::BrownianPath| -> Result<Vec<f64>> {
        let pairing = z.pairing_with_h(h, w)?.0;
        grid.iter()
            .map(|eps| {
                let r = mc_difference_quotient(z, h, eps, w)? - pairing;
                Ok(if r.abs() > delta { 1.0 } else { 0.0 })
            })
            .collect()
    };
    exceed(&sampler.path(0))?;
    let probs = sampler.mean_vector(n, grid.len(), |w| exceed(w).expect("checked on the first path"));
    Ok(grid
        .iter()
        .zip(probs)
        .map(|(eps, probability)| SgdRow { eps, probability })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::Polynomial;

    fn unit() -> CameronMartinDirection {
        CameronMartinDirection::constant(1.0, 1.0).unwrap()
    }

    #[test]
    fn constant_functional_sides_are_one() {
        let z = CylindricalFunctional::new(vec![unit()], Polynomial::constant(1, 1.0)).unwrap();
        let c = cameron_martin_check(&z, &unit(), 20_000, 3).unwrap();
        assert_eq!(c.lhs.mean, 1.0);
        assert!(c.rhs.within(1.0, 3.0));
        assert!(c.agrees());
    }

    #[test]
    fn square_exceedance_is_a_step() {
        let z = CylindricalFunctional::power_of(unit(), 2);
        let grid = EpsilonGrid::new(vec![0.5, 0.02, 0.005]).unwrap();
        let rows = sgd_probability_test(&z, &unit(), &grid, 0.01, 1000, 9).unwrap();
        assert_eq!(rows[0].probability.mean, 1.0);
        assert_eq!(rows[1].probability.mean, 1.0);
        assert_eq!(rows[2].probability.mean, 0.0);
    }

    #[test]
    fn refines_mismatched_direction_grids() {
        let h1 = CameronMartinDirection::uniform_cells(1.0, vec![1.0, 0.0, 2.0]).unwrap();
        let h = CameronMartinDirection::uniform_cells(1.0, vec![0.0, 1.0]).unwrap();
        let z = CylindricalFunctional::power_of(h1, 1);
        let c = cameron_martin_check(&z, &h, 10_000, 1).unwrap();
        assert!(c.agrees(), "{c:?}");
        assert!(cameron_martin_check(&z, &h, 1, 1).is_err());
    }
}
