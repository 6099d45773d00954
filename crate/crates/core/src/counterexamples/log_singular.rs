//! `Z = f(W₁)` with `f = 0` on `(-∞, 0]`, `F(x) = √x / ln³x` on `(0, μ]` and a
//! compactly supported smooth completion `G` beyond. `Z` lies in `D^{1,2}`
//! and satisfies SSGD₂(2), yet `|f'|^p φ` fails to be integrable at `0⁺` for
//! every `p > 2`.
//!
//! The parameters must keep `x ↦ 1/(x|ln x|⁸)` decreasing on `(0, μ+η)`.
//! With `t = ln x` its logarithm is `-t - 8 ln|t|`, whose `t`-derivative
//! `-1 + 8/|t|` is negative exactly when `|t| > 8`, so the condition is
//! equivalent to `μ + η ≤ e^{-8}`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functional::{Breakpoint, Function1D, ScalarFunctional, ZeroFn};
use crate::logspace::LogValue;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSingularParams {
    eta: f64,
    mu: f64,
}

impl Default for LogSingularParams {
    fn default() -> Self {
        LogSingularParams { eta: 1e-4, mu: 2e-4 }
    }
}

impl LogSingularParams {
    pub fn new(eta: f64, mu: f64) -> Result<Self> {
        validate_eta_mu(eta, mu).map_err(|c| Error::param("eta/mu", format!("condition violated: {c}")))?;
        Ok(LogSingularParams { eta, mu })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

/// A condition on `(η, μ)` that failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaMuCondition {
    /// `0 < η < μ < e^{-1}`.
    Ordering,
    /// `x ↦ 1/(x|ln x|^i)` decreasing on `(0, μ+η)`.
    BertrandDecreasing(u32),
    /// `x ↦ ψ(x/ln⁶x)` increasing on `(0, η]`, `ψ(y) = y|ln y|`.
    PsiOfWeightIncreasing,
    /// `x ↦ x (ln x)^{-6}` increasing on `(0, η]`.
    WeightIncreasing,
}

impl fmt::Display for EtaMuCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaMuCondition::Ordering => write!(f, "0 < eta < mu < e^-1"),
            EtaMuCondition::BertrandDecreasing(i) => {
                write!(f, "x -> 1/(x|log x|^{i}) decreasing on (0, mu+eta)")
            }
            EtaMuCondition::PsiOfWeightIncreasing => {
                write!(f, "x -> -(x/log^6 x) log(x/log^6 x) increasing on (0, eta]")
            }
            EtaMuCondition::WeightIncreasing => write!(f, "x -> x (log x)^-6 increasing on (0, eta]"),
        }
    }
}

const GRID_POINTS: usize = 10_000;
/// The grid covers `x ∈ [upper·e^{-SPAN}, upper]`.
const SPAN: f64 = 700.0;

/// `ln x` on a grid of `(0, upper]`, increasing. Spacing in `ln x` grows
/// quadratically away from `upper`, where the conditions are tightest.
fn log_grid(upper: f64) -> impl Iterator<Item = f64> {
    let top = upper.ln();
    (0..GRID_POINTS).map(move |k| {
        let s = 1.0 - k as f64 / (GRID_POINTS - 1) as f64;
        top - SPAN * s * s
    })
}

/// Strict monotonicity of `t ↦ h(t)` along the grid.
fn monotone(upper: f64, increasing: bool, h: impl Fn(f64) -> f64) -> bool {
    let values: Vec<f64> = log_grid(upper).map(h).collect();
    values
        .windows(2)
        .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
}

/// Checks the admissibility conditions for `(η, μ)` on grids of `10⁴`
/// points, in log coordinates `t = ln x` so that `(0, upper]` is covered
/// down to `upper·e^{-700}`.
pub fn validate_eta_mu(eta: f64, mu: f64) -> std::result::Result<(), EtaMuCondition> {
    if !(eta > 0.0 && eta < mu && mu < (-1.0f64).exp()) {
        return Err(EtaMuCondition::Ordering);
    }
    let bertrand = |i: u32| move |t: f64| -t - f64::from(i) * t.abs().ln();
    if !monotone(mu + eta, false, bertrand(8)) {
        return Err(EtaMuCondition::BertrandDecreasing(8));
    }
    // ln y for y = x/ln⁶x; ψ(y) = -y ln y on y < 1, so ln ψ = ln y + ln|ln y|.
    let ln_y = |t: f64| t - 6.0 * t.abs().ln();
    if !monotone(eta, true, |t| {
        let l = ln_y(t);
        if l >= 0.0 {
            f64::NAN
        } else {
            l + (-l).ln()
        }
    }) {
        return Err(EtaMuCondition::PsiOfWeightIncreasing);
    }
    if !monotone(eta, true, ln_y) {
        return Err(EtaMuCondition::WeightIncreasing);
    }
    for i in (5..8).rev() {
        if !monotone(mu + eta, false, bertrand(i)) {
            return Err(EtaMuCondition::BertrandDecreasing(i));
        }
    }
    Ok(())
}

/// `F(x) = √x / ln³x` on `x > 0`, negative on `(0, 1)`.
#[derive(Debug, Clone, Copy)]
pub struct RootOverLogCube;

impl RootOverLogCube {
    fn at_ln(t: f64) -> LogValue {
        if t == f64::NEG_INFINITY {
            return LogValue::ZERO;
        }
        LogValue::new(t.signum() as i8, 0.5 * t - 3.0 * t.abs().ln())
    }

    /// `F'(x) = 1/(2√x t³) - 3/(√x t⁴) = (t - 6) / (2 √x t⁴)`, `t = ln x`.
    fn derivative_at_ln(t: f64) -> LogValue {
        LogValue::from_f64(t - 6.0).scale_ln(-0.5 * t - std::f64::consts::LN_2 - 4.0 * t.abs().ln())
    }
}

impl Function1D for RootOverLogCube {
    fn log_value(&self, x: f64) -> LogValue {
        if x <= 0.0 {
            return LogValue::ZERO;
        }
        Self::at_ln(x.ln())
    }
    fn log_derivative(&self, x: f64) -> LogValue {
        if x <= 0.0 {
            return LogValue::from_f64(f64::NAN);
        }
        Self::derivative_at_ln(x.ln())
    }
    fn log_value_at_ln(&self, t: f64) -> LogValue {
        Self::at_ln(t)
    }
    fn log_derivative_at_ln(&self, t: f64) -> LogValue {
        Self::derivative_at_ln(t)
    }
}

/// `ρ(t) = e^{-1/t}` for `t > 0`, `0` otherwise, and `ρ'`.
fn rho(t: f64) -> (f64, f64) {
    if t <= 0.0 {
        (0.0, 0.0)
    } else {
        let r = (-1.0 / t).exp();
        (r, r / (t * t))
    }
}

/// `G(x) = (v + d(x - μ)) χ(x)` where `χ = 1` on `(-∞, 1.5μ]`, `χ = 0` on
/// `[2μ, ∞)` and `χ(x) = 1 - S((x - 1.5μ)/(0.5μ))` with the smooth step
/// `S(u) = ρ(u) / (ρ(u) + ρ(1-u))` in between.
#[derive(Debug, Clone, Copy)]
pub struct CutoffCompletion {
    mu: f64,
    v: f64,
    d: f64,
}

impl CutoffCompletion {
    fn chi(&self, x: f64) -> (f64, f64) {
        let w = 0.5 * self.mu;
        let u = (x - 1.5 * self.mu) / w;
        if u <= 0.0 {
            return (1.0, 0.0);
        }
        if u >= 1.0 {
            return (0.0, 0.0);
        }
        let (a, da) = rho(u);
        let (b, db) = rho(1.0 - u);
        let s = a + b;
        let step = a / s;
        let dstep = (da * b + a * db) / (s * s);
        (1.0 - step, -dstep / w)
    }
}

impl Function1D for CutoffCompletion {
    fn log_value(&self, x: f64) -> LogValue {
        LogValue::from_f64(self.value(x))
    }
    fn log_derivative(&self, x: f64) -> LogValue {
        LogValue::from_f64(self.derivative(x))
    }
    fn value(&self, x: f64) -> f64 {
        (self.v + self.d * (x - self.mu)) * self.chi(x).0
    }
    fn derivative(&self, x: f64) -> f64 {
        let (c, dc) = self.chi(x);
        self.d * c + (self.v + self.d * (x - self.mu)) * dc
    }
}

pub fn smooth_completion_big_g(mu: f64, v: f64, d: f64) -> CutoffCompletion {
    CutoffCompletion { mu, v, d }
}

/// The functional registered as `thm33` in the catalog.
///
/// Breakpoints sit at `0` (continuous, `f'` unbounded), `μ` (`C¹` gluing)
/// and at `1.5μ`, `2μ` where the cutoff starts and ends; the last two are
/// smooth and only guide the quadrature.
pub fn build_log_singular(params: LogSingularParams) -> Result<ScalarFunctional> {
    let mu = params.mu;
    let big_f = RootOverLogCube;
    let big_g = Arc::new(smooth_completion_big_g(mu, big_f.value(mu), big_f.derivative(mu)));
    let origin = Breakpoint {
        x: 0.0,
        closed_left: true,
        differentiable: false,
        derivative_singular: true,
    };
    let glue = Breakpoint {
        closed_left: true,
        ..Breakpoint::smooth(mu)
    };
    ScalarFunctional::new(
        format!("thm33(eta={},mu={})", params.eta, params.mu),
        vec![Arc::new(ZeroFn), Arc::new(big_f), big_g.clone(), big_g, Arc::new(ZeroFn)],
        vec![origin, glue, Breakpoint::smooth(1.5 * mu), Breakpoint::smooth(2.0 * mu)],
    )
}
