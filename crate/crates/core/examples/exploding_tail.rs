//! `f(x) = e^{x²/4} x^{-a} (2π)^{1/4}` beyond `√(2a)`: `Z = f(W₁)` has finite
//! Sobolev seminorm at `p = 2`, yet `|X_ε|²` is not integrable for any `ε`,
//! while the `L^{1.5}` norms of `X_ε` stay bounded.
//!
//! ```text
//! cargo run --release --example exploding_tail
//! ```

use malliavin_lab::counterexamples::{build_exploding_tail, quotient_lower_bound, ExplodingTailParams};
use malliavin_lab::diagnostics::{lq_sup_over_epsilon, lq_table, sobolev_seminorm, ssgd_test, EpsilonGrid, Quantity};
use malliavin_lab::quadrature::{integrate_semi_infinite, QuadSettings};

fn main() -> malliavin_lab::Result<()> {
    let params = ExplodingTailParams::new(2.0)?;
    let f = build_exploding_tail(params)?;
    let s = QuadSettings::default();
    let grid = EpsilonGrid::default();

    let norm = sobolev_seminorm(&f, 2.0, &s)?;
    println!("E|Z|^2       {}", norm.value);
    println!("E|f'(W1)|^2  {}", norm.derivative);

    println!("\nE|X_eps|^2 along h_T = 1:");
    for row in lq_table(&f, Quantity::Quotient, 1.0, &[2.0], &grid, &s)?.rows {
        let lower = integrate_semi_infinite(&quotient_lower_bound(params, row.eps), params.breakpoint(), &s)?;
        println!("  {row}\n    lower bound: {lower}");
    }

    let sup = lq_sup_over_epsilon(&f, 1.5, 1.0, &grid, &s)?;
    println!("\nsup_eps E|X_eps|^1.5 = {:?}", sup.sup);
    let t = ssgd_test(&f, 2.0, 1.5, 1.0, &grid, &s)?;
    println!("L^1.5 residual test: {} ({})", t.verdict, t.reason);
    let t = ssgd_test(&f, 2.0, 2.0, 1.0, &grid, &s)?;
    println!("L^2 residual test:   {} ({})", t.verdict, t.reason);
    Ok(())
}
