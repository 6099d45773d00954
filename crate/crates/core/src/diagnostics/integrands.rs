//! Gaussian-weighted integrands `x ↦ g(x) φ(x)` whose integrals over `ℝ` are
//! the diagnostics' expectations `E[g(W₁)]`.
//!
//! The weight is folded in here rather than by the quadrature layer: each
//! piece of `f` reports a Gaussian rate `κ` with `f = e^{κx²}·(reduced)`, and
//! `e^{qκx²} φ(x)` is formed as `e^{(qκ - ½)x²}/√(2π)` so the quadratic
//! exponents cancel before any rounding.

use crate::functional::{log_reduced_difference_quotient, Abscissa, ScalarFunctional};
use crate::logspace::LogValue;
use crate::quadrature::Integrand;

/// `ln √(2π)`.
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln(e^{qκx²} φ(x))`.
fn ln_weight(q: f64, kappa: f64, x: f64) -> f64 {
    (q * kappa - 0.5) * x * x - LN_SQRT_2PI
}

/// Breakpoints of `x ↦ f(x + εc)` together with those of `f`.
fn shifted_breakpoints(f: &ScalarFunctional, eps: f64, c: f64) -> Vec<f64> {
    f.breakpoints()
        .iter()
        .flat_map(|b| [b.x, b.x - eps * c])
        .collect()
}

fn plain_breakpoints(f: &ScalarFunctional) -> Vec<f64> {
    f.breakpoints().iter().map(|b| b.x).collect()
}

/// `|X_ε(x)|^q φ(x)`, or `|X_ε(x) - c f'(x)|^q φ(x)` when `centered`.
pub fn weighted_quotient_power(f: &ScalarFunctional, eps: f64, c: f64, q: f64, centered: bool) -> Integrand<'_> {
    let g = Integrand::from_log(move |at| {
        let (d, k) = log_reduced_difference_quotient(f, at, eps, c, centered);
        d.abs_powf(q).scale_ln(ln_weight(q, k, at.x()))
    })
    .with_breakpoints(shifted_breakpoints(f, eps, c));
    if centered {
        g.with_singularities(f.derivative_singularities())
    } else {
        g
    }
}

/// `|f(x)|^p φ(x)`.
pub fn weighted_value_power(f: &ScalarFunctional, p: f64) -> Integrand<'_> {
    Integrand::from_log(move |at| {
        let (v, k) = f.log_reduced_value_at(at);
        v.abs_powf(p).scale_ln(ln_weight(p, k, at.x()))
    })
    .with_breakpoints(plain_breakpoints(f))
}

/// `|f'(x)|^p φ(x)`, singular wherever `f'` is flagged unbounded.
pub fn weighted_derivative_power(f: &ScalarFunctional, p: f64) -> Integrand<'_> {
    Integrand::from_log(move |at| {
        let (v, k) = f.log_reduced_derivative_at(at);
        v.abs_powf(p).scale_ln(ln_weight(p, k, at.x()))
    })
    .with_breakpoints(plain_breakpoints(f))
    .with_singularities(f.derivative_singularities())
}

/// `ψ(|X_ε(x)|^p) φ(x)` with `ψ(y) = y |ln y|`.
pub fn weighted_psi_of_quotient(f: &ScalarFunctional, eps: f64, c: f64, p: f64) -> Integrand<'_> {
    Integrand::from_log(move |at| {
        let (d, k) = log_reduced_difference_quotient(f, at, eps, c, false);
        if d.is_zero() {
            return LogValue::ZERO;
        }
        let x = at.x();
        // ln y = p(ln|D| + Kx²); only ln|ln y| needs the unreduced value.
        let ln_y = p * (d.ln_abs() + k * x * x);
        if ln_y == 0.0 {
            return LogValue::ZERO;
        }
        LogValue::from_ln(p * d.ln_abs() + ln_y.abs().ln() + ln_weight(p, k, x))
    })
    .with_breakpoints(shifted_breakpoints(f, eps, c))
}

/// `x ↦ 1/(x |ln x|^i)` on `(0, 1)`.
pub fn bertrand(i: u32) -> Integrand<'static> {
    Integrand::from_log(move |at| {
        let t = match at {
            Abscissa::Log(t) => t,
            Abscissa::Linear(x) => x.ln(),
        };
        LogValue::from_ln(-t - f64::from(i) * t.abs().ln())
    })
    .with_singularities(vec![0.0])
}
