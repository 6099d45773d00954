use std::fmt;
use std::sync::Arc;

use super::{PairingValue, WienerFunctional};
use crate::error::{Error, Result};
use crate::logspace::LogValue;
use crate::wiener::{BrownianPath, CameronMartinDirection};

/// Where a real function is evaluated: at `x` directly, or at `x = e^t` given
/// `t`, which reaches points far below the smallest positive `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Abscissa {
    Linear(f64),
    Log(f64),
}

impl Abscissa {
    /// The abscissa as an `f64` (underflows to `0` for very negative `t`).
    pub fn x(self) -> f64 {
        match self {
            Abscissa::Linear(x) => x,
            Abscissa::Log(t) => t.exp(),
        }
    }
}

/// A real function of one variable with closed-form derivative, evaluated in
/// signed log-magnitude form.
pub trait Function1D: Send + Sync + fmt::Debug {
    fn log_value(&self, x: f64) -> LogValue;

    fn log_derivative(&self, x: f64) -> LogValue;

    /// `f(e^t)`; override when `f` is used near `0⁺`.
    fn log_value_at_ln(&self, t: f64) -> LogValue {
        self.log_value(t.exp())
    }

    /// `f'(e^t)`; override when `f'` is used near `0⁺`.
    fn log_derivative_at_ln(&self, t: f64) -> LogValue {
        self.log_derivative(t.exp())
    }

    /// `κ` such that `f(x) e^{-κx²}` grows at most polynomially. Gaussian
    /// weighted integrands cancel `e^{κx²}` against `φ` before rounding.
    fn gaussian_rate(&self) -> f64 {
        0.0
    }

    /// `f(x) e^{-κx²}`; override together with [`Function1D::gaussian_rate`].
    fn log_reduced_value(&self, x: f64) -> LogValue {
        self.log_value(x).scale_ln(-self.gaussian_rate() * x * x)
    }

    /// `f'(x) e^{-κx²}`.
    fn log_reduced_derivative(&self, x: f64) -> LogValue {
        self.log_derivative(x).scale_ln(-self.gaussian_rate() * x * x)
    }

    fn value(&self, x: f64) -> f64 {
        self.log_value(x).to_f64()
    }

    fn derivative(&self, x: f64) -> f64 {
        self.log_derivative(x).to_f64()
    }

    fn log_abs_value(&self, x: f64) -> f64 {
        self.log_value(x).ln_abs()
    }

    fn sign(&self, x: f64) -> i8 {
        self.log_value(x).sign()
    }
}

/// `f ≡ 0`.
#[derive(Debug, Clone, Copy)]
pub struct ZeroFn;

impl Function1D for ZeroFn {
    fn log_value(&self, _: f64) -> LogValue {
        LogValue::ZERO
    }
    fn log_derivative(&self, _: f64) -> LogValue {
        LogValue::ZERO
    }
    fn log_value_at_ln(&self, _: f64) -> LogValue {
        LogValue::ZERO
    }
    fn log_derivative_at_ln(&self, _: f64) -> LogValue {
        LogValue::ZERO
    }
}

/// `f(x) = Σ c_k x^k`.
#[derive(Debug, Clone)]
pub struct PolynomialFn {
    coeffs: Vec<f64>,
    deriv: Vec<f64>,
}

impl PolynomialFn {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let deriv = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| k as f64 * c)
            .collect();
        PolynomialFn { coeffs, deriv }
    }

    fn horner(c: &[f64], x: f64) -> f64 {
        c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck)
    }
}

impl Function1D for PolynomialFn {
    fn log_value(&self, x: f64) -> LogValue {
        LogValue::from_f64(self.value(x))
    }
    fn log_derivative(&self, x: f64) -> LogValue {
        LogValue::from_f64(self.derivative(x))
    }
    fn value(&self, x: f64) -> f64 {
        Self::horner(&self.coeffs, x)
    }
    fn derivative(&self, x: f64) -> f64 {
        Self::horner(&self.deriv, x)
    }
}

/// A breakpoint between two consecutive pieces of a [`ScalarFunctional`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoint {
    pub x: f64,
    /// The point itself belongs to the piece on its left.
    pub closed_left: bool,
    /// `C¹` gluing is required (and verified) here.
    pub differentiable: bool,
    /// `|f'|` is unbounded at this point; integrands built from `f'` treat it
    /// as an endpoint singularity.
    pub derivative_singular: bool,
}

impl Breakpoint {
    /// A `C¹` junction owned by the right piece.
    pub fn smooth(x: f64) -> Self {
        Breakpoint {
            x,
            closed_left: false,
            differentiable: true,
            derivative_singular: false,
        }
    }
}

/// Tolerance of the `C¹` gluing check, relative to `max(1, |value|)`.
pub const GLUING_TOLERANCE: f64 = 1e-10;

/// `Z = f(W_T)` for a piecewise-defined `f`.
///
/// Pieces partition `ℝ`; `pieces[i]` lives between `breakpoints[i-1]` and
/// `breakpoints[i]`. Gluing is verified at construction.
#[derive(Clone)]
pub struct ScalarFunctional {
    name: String,
    pieces: Vec<Arc<dyn Function1D>>,
    breakpoints: Vec<Breakpoint>,
    horizon: f64,
}

impl fmt::Debug for ScalarFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunctional")
            .field("name", &self.name)
            .field("breakpoints", &self.breakpoints)
            .field("horizon", &self.horizon)
            .finish()
    }
}

impl ScalarFunctional {
    pub fn new(
        name: impl Into<String>,
        pieces: Vec<Arc<dyn Function1D>>,
        breakpoints: Vec<Breakpoint>,
    ) -> Result<Self> {
        let name = name.into();
        if pieces.len() != breakpoints.len() + 1 {
            return Err(Error::domain(format!(
                "{name}: {} pieces need {} breakpoints",
                pieces.len(),
                pieces.len().saturating_sub(1)
            )));
        }
        if breakpoints.windows(2).any(|w| w[0].x >= w[1].x) {
            return Err(Error::domain(format!("{name}: breakpoints must be increasing")));
        }
        for (i, b) in breakpoints.iter().enumerate() {
            let (left, right) = (&pieces[i], &pieces[i + 1]);
            let (vl, vr) = (left.value(b.x), right.value(b.x));
            let scale = vl.abs().max(vr.abs()).max(1.0);
            if !((vl - vr).abs() <= GLUING_TOLERANCE * scale) {
                return Err(Error::domain(format!(
                    "{name}: discontinuous at x = {}: {vl} vs {vr}",
                    b.x
                )));
            }
            if b.differentiable {
                let (dl, dr) = (left.derivative(b.x), right.derivative(b.x));
                let scale = dl.abs().max(dr.abs()).max(1.0);
                if !((dl - dr).abs() <= GLUING_TOLERANCE * scale) {
                    return Err(Error::domain(format!(
                        "{name}: derivative jumps at x = {}: {dl} vs {dr}",
                        b.x
                    )));
                }
            }
        }
        Ok(ScalarFunctional {
            name,
            pieces,
            breakpoints,
            horizon: crate::wiener::DEFAULT_HORIZON,
        })
    }

    /// A single smooth piece on all of `ℝ`.
    pub fn smooth(name: impl Into<String>, f: Arc<dyn Function1D>) -> Self {
        Self::new(name, vec![f], vec![]).expect("no breakpoints to check")
    }

    /// `f(x) = x`.
    pub fn linear() -> Self {
        Self::polynomial("linear", vec![0.0, 1.0])
    }

    pub fn polynomial(name: impl Into<String>, coeffs: Vec<f64>) -> Self {
        Self::smooth(name, Arc::new(PolynomialFn::new(coeffs)))
    }

    /// Same functional read at `W_T` for another horizon `T`.
    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    /// Points where `f'` is unbounded.
    pub fn derivative_singularities(&self) -> Vec<f64> {
        self.breakpoints
            .iter()
            .filter(|b| b.derivative_singular)
            .map(|b| b.x)
            .collect()
    }

    fn locate(&self, x: f64) -> usize {
        let i = self.breakpoints.partition_point(|b| b.x < x);
        match self.breakpoints.get(i) {
            Some(b) if b.x == x && !b.closed_left => i + 1,
            _ => i,
        }
    }

    fn piece_at(&self, at: Abscissa) -> (&dyn Function1D, Abscissa) {
        let x = at.x();
        let idx = match at {
            // e^t underflowed: take the piece that contains (0, tiny]
            Abscissa::Log(_) if x == 0.0 => self.locate(f64::MIN_POSITIVE),
            _ => self.locate(x),
        };
        (self.pieces[idx].as_ref(), at)
    }

    pub fn log_value_at(&self, at: Abscissa) -> LogValue {
        match self.piece_at(at) {
            (p, Abscissa::Linear(x)) => p.log_value(x),
            (p, Abscissa::Log(t)) => p.log_value_at_ln(t),
        }
    }

    pub fn log_derivative_at(&self, at: Abscissa) -> LogValue {
        match self.piece_at(at) {
            (p, Abscissa::Linear(x)) => p.log_derivative(x),
            (p, Abscissa::Log(t)) => p.log_derivative_at_ln(t),
        }
    }

    /// `(f(x) e^{-κx²}, κ)` with `κ` the Gaussian rate of the piece at `at`.
    pub fn log_reduced_value_at(&self, at: Abscissa) -> (LogValue, f64) {
        match self.piece_at(at) {
            (p, Abscissa::Linear(x)) => (p.log_reduced_value(x), p.gaussian_rate()),
            (p, Abscissa::Log(t)) => {
                let k = p.gaussian_rate();
                (p.log_value_at_ln(t).scale_ln(-k * (2.0 * t).exp()), k)
            }
        }
    }

    /// `(f'(x) e^{-κx²}, κ)`.
    pub fn log_reduced_derivative_at(&self, at: Abscissa) -> (LogValue, f64) {
        match self.piece_at(at) {
            (p, Abscissa::Linear(x)) => (p.log_reduced_derivative(x), p.gaussian_rate()),
            (p, Abscissa::Log(t)) => {
                let k = p.gaussian_rate();
                (p.log_derivative_at_ln(t).scale_ln(-k * (2.0 * t).exp()), k)
            }
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.pieces[self.locate(x)].value(x)
    }

    pub fn log_value(&self, x: f64) -> LogValue {
        self.log_value_at(Abscissa::Linear(x))
    }

    /// `f'(x)`, refusing flagged non-differentiable breakpoints.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        if self
            .breakpoints
            .iter()
            .any(|b| b.x == x && !b.differentiable)
        {
            return Err(Error::NotDifferentiable { x });
        }
        Ok(self.pieces[self.locate(x)].derivative(x))
    }

    pub fn log_derivative(&self, x: f64) -> LogValue {
        self.log_derivative_at(Abscissa::Linear(x))
    }
}

impl WienerFunctional for ScalarFunctional {
    fn eval(&self, path: &BrownianPath) -> Result<f64> {
        if path.grid().horizon() != self.horizon {
            return Err(Error::domain("path horizon differs from the functional's horizon"));
        }
        Ok(self.value(path.terminal()))
    }

    /// `⟨∇Z, h⟩_H = f'(W_T) h(T)`.
    fn pairing_with_h(&self, h: &CameronMartinDirection, path: &BrownianPath) -> Result<PairingValue> {
        if h.horizon() != self.horizon {
            return Err(Error::domain("direction horizon differs from the functional's horizon"));
        }
        Ok(PairingValue(self.derivative(path.terminal())? * h.terminal_value()))
    }
}

/// Log-magnitude above which difference quotients switch to the factorised
/// form `f(x)(e^Δ - 1)/ε`.
pub const LOG_OVERFLOW_SWITCH: f64 = 600.0;

/// `(f(x + εc) - f(x)) / ε` in signed log form.
pub fn log_difference_quotient(f: &ScalarFunctional, at: Abscissa, eps: f64, c: f64) -> LogValue {
    let x = at.x();
    let lo = f.log_value_at(at);
    let hi = f.log_value(x + eps * c);
    log_sub(hi, lo).scale_ln(-eps.ln())
}

/// `a - b`, in plain `f64` when both are moderate and in log form otherwise.
fn log_sub(a: LogValue, b: LogValue) -> LogValue {
    if a.ln_abs().max(b.ln_abs()) > LOG_OVERFLOW_SWITCH {
        a.sub(b)
    } else {
        LogValue::from_f64(a.to_f64() - b.to_f64())
    }
}

/// `X_ε = D e^{Kx²}`, returned as `(D, K)`, with `K` the larger Gaussian
/// rate of the pieces at `x` and `x + εc`. When `centered`, `D` is the
/// reduced residual of `X_ε - c f'(x)` instead.
///
/// Multiplying by `φ(x)` then only involves `(qK - ½)x²`, which vanishes
/// exactly for `q = 2, K = ¼`; adding `ln φ` to an unreduced `ln|X_ε|^q`
/// would leave a rounding error of order `ε_mach x²` in the exponent.
pub fn log_reduced_difference_quotient(
    f: &ScalarFunctional,
    at: Abscissa,
    eps: f64,
    c: f64,
    centered: bool,
) -> (LogValue, f64) {
    let x = at.x();
    let (hi, ka) = f.log_reduced_value_at(Abscissa::Linear(x + eps * c));
    let (lo, kb) = f.log_reduced_value_at(at);
    let k = ka.max(kb);
    let shift = eps * c;
    let hi = hi.scale_ln(ka * shift * (2.0 * x + shift) + (ka - k) * x * x);
    let lo = lo.scale_ln((kb - k) * x * x);
    let d = log_sub(hi, lo).scale_ln(-eps.ln());
    if !centered {
        return (d, k);
    }
    let (fp, kd) = f.log_reduced_derivative_at(at);
    let center = (fp * LogValue::from_f64(c)).scale_ln((kd - k) * x * x);
    (log_sub(d, center), k)
}

/// `X_ε = (f(x + εc) - f(x)) / ε` for `Z = f(W_T)`, `x = W_T(ω)`, `c = h(T)`.
///
/// Saturates to `±inf` when the quotient itself leaves the `f64` range; see
/// [`log_difference_quotient`].
pub fn difference_quotient_1d(f: &ScalarFunctional, x: f64, eps: f64, c: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::param("eps", "must be positive"));
    }
    Ok(log_difference_quotient(f, Abscissa::Linear(x), eps, c).to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wiener::TimeGrid;

    #[derive(Debug)]
    struct Affine(f64, f64);
    impl Function1D for Affine {
        fn log_value(&self, x: f64) -> LogValue {
            LogValue::from_f64(self.0 + self.1 * x)
        }
        fn log_derivative(&self, _: f64) -> LogValue {
            LogValue::from_f64(self.1)
        }
    }

    #[test]
    fn linear_difference_quotient_is_one() {
        let f = ScalarFunctional::linear();
        for (x, eps) in [(0.3, 0.5), (-4.0, 1e-3), (10.0, 0.25)] {
            assert!((difference_quotient_1d(&f, x, eps, 1.0).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn square_difference_quotient() {
        let f = ScalarFunctional::polynomial("square", vec![0.0, 0.0, 1.0]);
        assert_eq!(difference_quotient_1d(&f, 1.0, 0.5, 1.0).unwrap(), 2.5);
        assert!(difference_quotient_1d(&f, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn pairing_for_scalar_functionals() {
        let grid = TimeGrid::unit();
        let h = CameronMartinDirection::constant(1.0, 0.7).unwrap();
        let path = BrownianPath::from_values(grid.clone(), vec![0.0, 3.0]).unwrap();
        let lin = ScalarFunctional::linear();
        assert!((lin.pairing_with_h(&h, &path).unwrap().0 - 0.7).abs() < 1e-15);
        let sq = ScalarFunctional::polynomial("square", vec![0.0, 0.0, 1.0]);
        let one = CameronMartinDirection::constant(1.0, 1.0).unwrap();
        assert_eq!(sq.pairing_with_h(&one, &path).unwrap().0, 6.0);
        assert_eq!(sq.eval(&path).unwrap(), 9.0);
    }

    #[test]
    fn gluing_is_verified() {
        let left: Arc<dyn Function1D> = Arc::new(Affine(0.0, 1.0));
        let kink: Arc<dyn Function1D> = Arc::new(Affine(0.0, 2.0));
        let jump: Arc<dyn Function1D> = Arc::new(Affine(1.0, 1.0));
        assert!(ScalarFunctional::new("c1", vec![left.clone(), left.clone()], vec![Breakpoint::smooth(0.0)]).is_ok());
        assert!(ScalarFunctional::new("kink", vec![left.clone(), kink.clone()], vec![Breakpoint::smooth(0.0)]).is_err());
        assert!(ScalarFunctional::new("jump", vec![left.clone(), jump], vec![Breakpoint::smooth(0.0)]).is_err());
        let corner = Breakpoint {
            differentiable: false,
            ..Breakpoint::smooth(0.0)
        };
        let f = ScalarFunctional::new("corner", vec![left, kink], vec![corner]).unwrap();
        assert!(matches!(f.derivative(0.0), Err(Error::NotDifferentiable { .. })));
        assert_eq!(f.derivative(0.5).unwrap(), 2.0);
        assert_eq!(f.derivative(-0.5).unwrap(), 1.0);
    }

    #[test]
    fn breakpoint_ownership() {
        let a: Arc<dyn Function1D> = Arc::new(Affine(0.0, 1.0));
        let b: Arc<dyn Function1D> = Arc::new(Affine(0.0, 2.0));
        let mut bp = Breakpoint {
            differentiable: false,
            ..Breakpoint::smooth(0.0)
        };
        let right_owned = ScalarFunctional::new("r", vec![a.clone(), b.clone()], vec![bp]).unwrap();
        bp.closed_left = true;
        let left_owned = ScalarFunctional::new("l", vec![a, b], vec![bp]).unwrap();
        assert_eq!(right_owned.log_derivative(0.0).to_f64(), 2.0);
        assert_eq!(left_owned.log_derivative(0.0).to_f64(), 1.0);
    }

    #[test]
    fn log_factorised_branch_agrees_with_direct_branch() {
        // e^{x} is exactly representable in log form; compare both branches
        #[derive(Debug)]
        struct Exp;
        impl Function1D for Exp {
            fn log_value(&self, x: f64) -> LogValue {
                LogValue::from_ln(x)
            }
            fn log_derivative(&self, x: f64) -> LogValue {
                LogValue::from_ln(x)
            }
        }
        let f = ScalarFunctional::smooth("exp", Arc::new(Exp));
        let eps = 0.1;
        let direct = log_difference_quotient(&f, Abscissa::Linear(500.0), eps, 1.0);
        let factorised = log_difference_quotient(&f, Abscissa::Linear(700.0), eps, 1.0);
        let expected = |x: f64| x + eps.exp_m1().ln() - eps.ln();
        assert!((direct.ln_abs() - expected(500.0)).abs() < 1e-12);
        assert!((factorised.ln_abs() - expected(700.0)).abs() < 1e-12);
        assert_eq!(difference_quotient_1d(&f, 800.0, eps, 1.0).unwrap(), f64::INFINITY);
    }
}
