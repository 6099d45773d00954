use std::fmt;

use crate::functional::Abscissa;
use crate::logspace::{ln_gaussian_density, LogValue};

type LogFn<'a> = dyn Fn(Abscissa) -> LogValue + Send + Sync + 'a;

/// A real integrand evaluated in signed log-magnitude form, with the points
/// where it is non-smooth (`breakpoints`) or unbounded (`singularities`).
///
/// Integrands receive [`Abscissa::Log`] only from the singular-origin route,
/// for points `x = e^t` too close to `0` to be represented directly; an
/// integrand that does not care simply reads [`Abscissa::x`].
pub struct Integrand<'a> {
    f: Box<LogFn<'a>>,
    breakpoints: Vec<f64>,
    singularities: Vec<f64>,
}

impl fmt::Debug for Integrand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand")
            .field("breakpoints", &self.breakpoints)
            .field("singularities", &self.singularities)
            .finish()
    }
}

impl<'a> Integrand<'a> {
    /// A plain `f64` integrand.
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        Self::from_log(move |at| LogValue::from_f64(f(at.x())))
    }

    pub fn from_log(f: impl Fn(Abscissa) -> LogValue + Send + Sync + 'a) -> Self {
        Integrand {
            f: Box::new(f),
            breakpoints: Vec::new(),
            singularities: Vec::new(),
        }
    }

    pub fn with_breakpoints(mut self, mut points: Vec<f64>) -> Self {
        points.retain(|p| p.is_finite());
        self.breakpoints.extend(points);
        self.breakpoints.sort_by(f64::total_cmp);
        self.breakpoints.dedup();
        self
    }

    /// Declares points where the integrand may be unbounded; they become
    /// breakpoints as well.
    pub fn with_singularities(mut self, points: Vec<f64>) -> Self {
        self.singularities.extend(points.iter().copied());
        self.singularities.sort_by(f64::total_cmp);
        self.singularities.dedup();
        self.with_breakpoints(points)
    }

    pub fn eval(&self, at: Abscissa) -> LogValue {
        (self.f)(at)
    }

    pub fn eval_at(&self, x: f64) -> LogValue {
        (self.f)(Abscissa::Linear(x))
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn singularities(&self) -> &[f64] {
        &self.singularities
    }

    pub fn is_singular_at(&self, x: f64) -> bool {
        self.singularities.contains(&x)
    }

    /// `x ↦ g(x) φ(x)`, keeping breakpoints and singularities.
    pub fn times_gaussian(&'a self) -> Integrand<'a> {
        Integrand {
            f: Box::new(move |at| {
                let v = self.eval(at);
                v.scale_ln(ln_gaussian_density(at.x()))
            }),
            breakpoints: self.breakpoints.clone(),
            singularities: self.singularities.clone(),
        }
    }

    /// `x ↦ α g(x)`.
    pub fn scaled(&'a self, alpha: f64) -> Integrand<'a> {
        let a = LogValue::from_f64(alpha);
        Integrand {
            f: Box::new(move |at| self.eval(at) * a),
            breakpoints: self.breakpoints.clone(),
            singularities: self.singularities.clone(),
        }
    }
}

/// `ln φ(x)`, re-exported for integrand builders.
pub fn ln_phi(x: f64) -> f64 {
    ln_gaussian_density(x)
}
