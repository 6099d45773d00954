use malliavin_lab::counterexamples::{catalog_functional, CatalogParams};
use malliavin_lab::functional::{mc_difference_quotient, CylindricalFunctional, Polynomial, WienerFunctional};
use malliavin_lab::wiener::{girsanov_weight, BrownianPath, CameronMartinDirection, PathSampler, TimeGrid};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn girsanov_weight_has_mean_one() {
    let h = CameronMartinDirection::uniform_cells(1.0, vec![1.0, -0.5, 2.0, 0.0]).unwrap();
    let sampler = PathSampler::new(h.grid().clone(), 5);
    let [m] = sampler.mean_estimates(1_000_000, |w| [girsanov_weight(&h, w).unwrap()]);
    assert!(m.within(1.0, 3.0), "{m:?}");
}

fn cubic_in_two() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0u32..=3, 0u32..=3), -2.0f64..2.0), 1..6).prop_map(|terms| {
        Polynomial::from_terms(
            2,
            terms
                .into_iter()
                .filter(|((a, b), _)| a + b <= 3)
                .map(|((a, b), c)| (vec![a, b], c)),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // For degree <= 3, X_ε - ⟨∇Z,h⟩ = a ε + b ε² on each path. Fit (a, b) from
    // two steps, then predict the third.
    #[test]
    fn cylindrical_residual_is_linear_in_eps_near_zero(poly in cubic_in_two(), seed in any::<u64>()) {
        let h1 = CameronMartinDirection::uniform_cells(1.0, vec![2.0, -1.0, 0.5, 1.0]).unwrap();
        let h2 = CameronMartinDirection::constant(1.0, 0.7).unwrap();
        let h = CameronMartinDirection::uniform_cells(1.0, vec![1.0, -1.0]).unwrap();
        let z = CylindricalFunctional::new(vec![h1.clone(), h2], poly).unwrap();
        let sampler = PathSampler::new(h1.grid().clone(), seed);
        let (e1, e2, e3) = (0.5, 0.25, 0.125);
        for i in 0..100 {
            let w = sampler.path(i);
            let pairing = z.pairing_with_h(&h, &w).unwrap().0;
            let r = |e: f64| mc_difference_quotient(&z, &h, e, &w).unwrap() - pairing;
            let (r1, r2, r3) = (r(e1), r(e2), r(e3));
            let b = (r1 / e1 - r2 / e2) / (e1 - e2);
            let a = r1 / e1 - b * e1;
            let k = a.abs() + b.abs();
            let scale = 1e-12 * (1.0 + z.eval(&w).unwrap().abs() + pairing.abs()) / e3;
            prop_assert!((r3 - (a * e3 + b * e3 * e3)).abs() <= scale, "path {i}: {r3} vs fit a={a} b={b}");
            prop_assert!(r3.abs() <= k * e3 + scale);
        }
    }
}

fn terminal_path(x: f64) -> BrownianPath {
    BrownianPath::from_values(TimeGrid::unit(), vec![0.0, x]).unwrap()
}

#[test]
fn scalar_pairing_matches_central_differences() {
    let params = CatalogParams::default();
    let h = CameronMartinDirection::constant(1.0, 1.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for name in ["linear", "square", "thm31", "thm33"] {
        let f = catalog_functional(name, &params).unwrap();
        let breaks: Vec<f64> = f.breakpoints().iter().map(|b| b.x).collect();
        let mut checked = 0;
        while checked < 1000 {
            // Half the points are log-spaced near the origin, where the
            // log-singular functional varies.
            let x: f64 = if rng.random_bool(0.5) {
                rng.random_range(-5.0..7.0)
            } else {
                let sign = if rng.random_bool(0.8) { 1.0 } else { -1.0 };
                sign * 10f64.powf(rng.random_range(-10.0..-2.0))
            };
            let gap = breaks.iter().map(|b| (x - b).abs()).fold(f64::INFINITY, f64::min);
            if gap < 1e-3 * x.abs() {
                continue;
            }
            let step = 1e-5 * gap.min(1.0);
            let fd = (f.value(x + step) - f.value(x - step)) / (2.0 * step) * 1.5;
            let pairing = f.pairing_with_h(&h, &terminal_path(x)).unwrap().0;
            // 1e-6 relative, plus the rounding of f(x ± step) divided by the step.
            let tol = 1e-6 * pairing.abs() + 4.0 * f64::EPSILON * f.value(x).abs() / step;
            assert!((fd - pairing).abs() <= tol, "{name} at {x}: {fd} vs {pairing}");
            checked += 1;
        }
    }
}
