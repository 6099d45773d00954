use malliavin_lab::cli::cylindrical_from_specs;
use malliavin_lab::counterexamples::{catalog_functional, CatalogParams};
use malliavin_lab::diagnostics::{
    cameron_martin_check, lq_diffquot_norm, membership_report, ssgd_test, EpsilonGrid, Flag, MembershipConfig,
};
use malliavin_lab::functional::ScalarFunctional;
use malliavin_lab::quadrature::QuadSettings;
use proptest::prelude::*;

fn catalog(name: &str) -> ScalarFunctional {
    catalog_functional(name, &CatalogParams::default()).unwrap()
}

fn cubic() -> impl Strategy<Value = Vec<f64>> {
    (-2.0f64..2.0, -2.0f64..2.0, 0.2f64..2.0, any::<bool>(), -1.0f64..1.0).prop_map(|(c0, c1, lead, neg, c3)| {
        let c2 = if neg { -lead } else { lead };
        vec![c0, c1, c2, c3]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lower_moments_are_bounded_by_higher_ones(
        name in prop::sample::select(vec!["linear", "square", "thm31"]),
        q in 1.1f64..2.0,
        t in 0.05f64..0.95,
        k in 1u32..=8,
        negative in any::<bool>(),
    ) {
        let f = catalog(name);
        let c = if negative && name != "thm31" { -1.0 } else { 1.0 };
        let eps = 0.5f64.powi(k as i32);
        let q_low = 1.0 + t * (q - 1.0);
        let s = QuadSettings::default();
        let high = lq_diffquot_norm(&f, q, eps, c, false, &s).unwrap();
        if let Some(v) = high.value() {
            let low = lq_diffquot_norm(&f, q_low, eps, c, false, &s).unwrap();
            let w = low.value();
            prop_assert!(w.is_some(), "{name}: q' = {q_low} gave {low} below a converged q = {q}");
            prop_assert!(w.unwrap() <= 1.0 + v);
        }
    }

    // The residual behaves like ε f''(x)/2 + ε² f'''(x)/6, so its L^q norm
    // falls at least linearly.
    #[test]
    fn polynomial_residuals_decay_linearly(coeffs in cubic(), q in 1.1f64..=2.0, c in -2.0f64..2.0) {
        prop_assume!(c.abs() > 0.1);
        let f = ScalarFunctional::polynomial("cubic", coeffs);
        let out = ssgd_test(&f, 2.0, q, c, &EpsilonGrid::default(), &QuadSettings::default()).unwrap();
        let points: Vec<(f64, f64)> = out
            .rows
            .iter()
            .map(|r| (r.eps.ln(), r.verdict.value().unwrap().ln() / q))
            .collect();
        let n = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let slope = sxy / sxx;
        prop_assert!(slope >= 0.9, "slope {slope}");
    }

    #[test]
    fn reports_respect_the_inclusion_chain(
        name in prop::sample::select(vec!["linear", "square", "thm31", "thm33"]),
        p in prop::sample::select(vec![1.5, 2.0, 3.0]),
        budget in prop::sample::select(vec![200usize, 2_000, 100_000]),
    ) {
        let f = catalog(name);
        let params = CatalogParams::default();
        let singular = name == "thm33";
        let cfg = MembershipConfig {
            p,
            h_values: vec![1.0],
            ui_eps_cap: singular.then_some(params.eta),
            majorant_upper: singular.then_some(params.eta + params.mu),
            settings: QuadSettings { budget, ..QuadSettings::default() },
            ..MembershipConfig::default()
        };
        let r = membership_report(&f, &cfg).unwrap();
        prop_assert!(r.chain_is_consistent(), "{name} p={p}: {:?}", r.chain());
        let [d, g, plus] = r.chain();
        if plus == Flag::Yes {
            prop_assert_eq!(g, Flag::Yes);
        }
        if g == Flag::Yes {
            prop_assert_eq!(d, Flag::Yes);
        }
    }
}

#[test]
fn starved_budget_gives_unknown_not_a_guess() {
    let cfg = MembershipConfig {
        settings: QuadSettings {
            budget: 15,
            ..QuadSettings::default()
        },
        ..MembershipConfig::default()
    };
    let r = membership_report(&catalog("square"), &cfg).unwrap();
    assert_eq!(r.chain(), [Flag::Unknown; 3]);
}

#[test]
fn cameron_martin_battery() {
    let shifts = ["const:1", "cells:1.5,-0.5", "cells:0,0,1,2"];
    let polys = ["1", "x1", "x2 - 2", "x1^2", "x1*x2", "x1^3 - x1", "x1^2*x2 + 3*x2", "x2^3"];
    for shift in shifts {
        for (k, poly) in polys.iter().enumerate() {
            let (z, h) = cylindrical_from_specs(poly, &format!("{shift};cells:0,0,1,2")).unwrap();
            let c = cameron_martin_check(&z, &h, 100_000, 100 + k as u64).unwrap();
            assert!(c.agrees(), "Z = {poly}, h = {shift}: {c:?}");
        }
    }
}
