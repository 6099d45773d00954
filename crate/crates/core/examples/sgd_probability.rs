//! Exceedance probabilities `P(|X_ε - ⟨∇Z, h⟩| > δ)` for cylindrical
//! functionals; they vanish as `ε → 0`.
//!
//! ```text
//! cargo run --release --example sgd_probability
//! ```

use malliavin_lab::diagnostics::{sgd_probability_test, EpsilonGrid};
use malliavin_lab::functional::CylindricalFunctional;
use malliavin_lab::wiener::CameronMartinDirection;

fn main() -> malliavin_lab::Result<()> {
    let h = CameronMartinDirection::constant(1.0, 1.0)?;
    let grid = EpsilonGrid::dyadic(1, 10)?;
    let delta = 0.01;
    let cases = [
        ("W(h)", CylindricalFunctional::power_of(h.clone(), 1)),
        ("W(h)^2", CylindricalFunctional::power_of(h.clone(), 2)),
        ("W(h)^3", CylindricalFunctional::power_of(h.clone(), 3)),
    ];
    for (name, z) in cases {
        println!("Z = {name}, delta = {delta}");
        for row in sgd_probability_test(&z, &h, &grid, delta, 50_000, 5)? {
            println!("  eps = {:<12e} P = {:.4} ± {:.1e}", row.eps, row.probability.mean, row.probability.std_error);
        }
    }
    Ok(())
}
