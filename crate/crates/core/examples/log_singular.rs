//! `f(x) = √x / ln³x` on `(0, μ]`, zero on `x ≤ 0`: `Z = f(W₁)` lies in
//! `D^{1,2}` but in no `D^{1,2+δ}`, and `(|X_ε|²)_ε` is uniformly integrable
//! for `ε < η/|h_T|`.
//!
//! ```text
//! cargo run --release --example log_singular
//! ```

use malliavin_lab::counterexamples::{build_log_singular, validate_eta_mu, LogSingularParams};
use malliavin_lab::diagnostics::{dvp_uniform_integrability_test, sobolev_seminorm, EpsilonGrid};
use malliavin_lab::quadrature::QuadSettings;

fn main() -> malliavin_lab::Result<()> {
    for (eta, mu) in [(1e-4, 2e-4), (0.1, 0.2), (3e-4, 2e-4)] {
        match validate_eta_mu(eta, mu) {
            Ok(()) => println!("(eta, mu) = ({eta}, {mu}): admissible"),
            Err(c) => println!("(eta, mu) = ({eta}, {mu}): fails {c}"),
        }
    }

    let params = LogSingularParams::default();
    let f = build_log_singular(params)?;
    let s = QuadSettings::default();
    for p in [2.0, 2.1, 2.5] {
        let n = sobolev_seminorm(&f, p, &s)?;
        println!("p = {p}: E|Z|^p {}\n        E|f'|^p {}", n.value, n.derivative);
    }

    let upper = params.eta() + params.mu();
    for h in [1.0, -1.0] {
        let grid = EpsilonGrid::default().capped_or_below(params.eta() / f64::abs(h))?;
        let out = dvp_uniform_integrability_test(&f, 2.0, h, &grid, Some(upper), &s)?;
        println!("\nh_T = {h}: {} (sup {:?})", out.verdict, out.sup);
        for row in &out.rows {
            let pieces: Vec<String> = row.pieces.iter().map(|p| format!("{} {}", p.label, p.verdict)).collect();
            println!("  eps = {:e}: {}", row.eps, pieces.join(" | "));
        }
        for m in &out.majorants {
            println!("  Bertrand i = {}: {}  closed form {:e}", m.i, m.verdict, m.closed_form);
        }
    }
    Ok(())
}
