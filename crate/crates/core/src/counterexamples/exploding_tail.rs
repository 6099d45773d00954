//! `Z = f(W₁)` with `f(x) = e^{x²/4} x^{-a} (2π)^{1/4}` for `x ≥ √(2a)`, and a
//! bounded `C¹` completion below. `Z` has finite seminorm at `p = 2` while
//! `|X_ε|²` fails to be integrable for every `ε > 0`.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functional::{Breakpoint, Function1D, ScalarFunctional};
use crate::logspace::LogValue;
use crate::quadrature::Integrand;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplodingTailParams {
    a: f64,
}

impl Default for ExplodingTailParams {
    fn default() -> Self {
        ExplodingTailParams { a: 2.0 }
    }
}

impl ExplodingTailParams {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 1.5) || !a.is_finite() {
            return Err(Error::param("a", format!("must be a finite number > 3/2, got {a}")));
        }
        Ok(ExplodingTailParams { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `x₀ = √(2a)`, where `f` switches to the exploding branch.
    pub fn breakpoint(&self) -> f64 {
        (2.0 * self.a).sqrt()
    }
}

/// `U(x) = e^{x²/4} x^{-a} (2π)^{1/4}` on `x > 0`.
#[derive(Debug, Clone, Copy)]
pub struct ExplodingTail {
    a: f64,
}

impl ExplodingTail {
    pub fn new(a: f64) -> Self {
        ExplodingTail { a }
    }

    fn ln_value(&self, x: f64) -> f64 {
        0.25 * x * x + self.ln_reduced(x)
    }

    /// `ln(U(x) e^{-x²/4})`.
    fn ln_reduced(&self, x: f64) -> f64 {
        -self.a * x.ln() + 0.25 * (2.0 * PI).ln()
    }
}

impl Function1D for ExplodingTail {
    fn log_value(&self, x: f64) -> LogValue {
        if x <= 0.0 {
            return LogValue::from_f64(f64::NAN);
        }
        LogValue::from_ln(self.ln_value(x))
    }

    /// `U'(x) = U(x) (x/2 - a/x)`.
    fn log_derivative(&self, x: f64) -> LogValue {
        if x <= 0.0 {
            return LogValue::from_f64(f64::NAN);
        }
        LogValue::from_f64(0.5 * x - self.a / x).scale_ln(self.ln_value(x))
    }

    fn gaussian_rate(&self) -> f64 {
        0.25
    }

    fn log_reduced_value(&self, x: f64) -> LogValue {
        if x <= 0.0 {
            return LogValue::from_f64(f64::NAN);
        }
        LogValue::from_ln(self.ln_reduced(x))
    }

    fn log_reduced_derivative(&self, x: f64) -> LogValue {
        if x <= 0.0 {
            return LogValue::from_f64(f64::NAN);
        }
        LogValue::from_f64(0.5 * x - self.a / x).scale_ln(self.ln_reduced(x))
    }
}

/// `g(x) = v + d (x - x₀) e^{-(x - x₀)²}`.
#[derive(Debug, Clone, Copy)]
pub struct BumpCompletion {
    x0: f64,
    v: f64,
    d: f64,
}

impl BumpCompletion {
    /// `sup |g| ≤ |v| + |d| (2e)^{-1/2}`.
    pub fn sup_bound(&self) -> f64 {
        self.v.abs() + self.d.abs() / (2.0 * std::f64::consts::E).sqrt()
    }
}

impl Function1D for BumpCompletion {
    fn log_value(&self, x: f64) -> LogValue {
        LogValue::from_f64(self.value(x))
    }
    fn log_derivative(&self, x: f64) -> LogValue {
        LogValue::from_f64(self.derivative(x))
    }
    fn value(&self, x: f64) -> f64 {
        let t = x - self.x0;
        self.v + self.d * t * (-t * t).exp()
    }
    fn derivative(&self, x: f64) -> f64 {
        let t = x - self.x0;
        self.d * (-t * t).exp() * (1.0 - 2.0 * t * t)
    }
}

pub fn smooth_completion_g(x0: f64, v: f64, d: f64) -> BumpCompletion {
    BumpCompletion { x0, v, d }
}

/// The functional registered as `thm31` in the catalog.
pub fn build_exploding_tail(params: ExplodingTailParams) -> Result<ScalarFunctional> {
    let x0 = params.breakpoint();
    let tail = ExplodingTail::new(params.a);
    let g = smooth_completion_g(x0, tail.value(x0), tail.derivative(x0));
    ScalarFunctional::new(
        format!("thm31(a={})", params.a),
        vec![Arc::new(g), Arc::new(tail)],
        vec![Breakpoint::smooth(x0)],
    )
}

/// `x ↦ e^{s²/2 + s x} ψ_a(s, x)²` with `s = ε/2` and
/// `ψ_a(s, x) = -a (x+s)^{-a-1} + (x+s)^{1-a}/2`.
///
/// This is `f'(x + ε/2)² φ(x)`. On `[√(2a), ∞)`, `f' ≥ 0` is nondecreasing,
/// so `X_ε ≥ ε⁻¹ ∫_{ε/2}^{ε} f'(x+s) ds ≥ f'(x + ε/2)/2` and a quarter of
/// this integrand minorizes `|X_ε|² φ(x)`.
pub fn quotient_lower_bound(params: ExplodingTailParams, eps: f64) -> Integrand<'static> {
    let a = params.a;
    let s = 0.5 * eps;
    Integrand::from_log(move |at| {
        let y = at.x() + s;
        let psi = -a * y.powf(-a - 1.0) + 0.5 * y.powf(1.0 - a);
        LogValue::from_f64(psi).abs_powf(2.0).scale_ln(0.5 * s * s + s * at.x())
    })
}
