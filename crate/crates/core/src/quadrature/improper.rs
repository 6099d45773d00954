use super::kronrod::{adaptive, Budget};
use super::{DivergenceEvidence, DivergenceRule, Integrand, IntegralVerdict, QuadSettings};
use crate::error::{Error, Result};
use crate::functional::Abscissa;

/// Integrates `g` over a sequence of adjacent segments exhausting an
/// unbounded or singular domain, applying the extension verdict rules.
///
/// Each item is `(lo, hi, limit)`: the segment and the domain end it reaches.
pub(crate) fn exhaust(
    g: &Integrand,
    segments: impl Iterator<Item = (f64, f64, f64)>,
    atol: f64,
    rtol: f64,
    s: &QuadSettings,
    budget: &mut Budget,
) -> Result<IntegralVerdict> {
    let mut limits = Vec::new();
    let mut partials: Vec<f64> = Vec::new();
    let mut increments: Vec<f64> = Vec::new();
    let mut partial = 0.0f64;
    let mut err = 0.0;
    let mut small_run = 0usize;
    let mut grow_run = 0usize;
    for (k, (lo, hi, limit)) in segments.enumerate() {
        // Shares of the running tolerance summing to at most 0.41 of it; the
        // relative part is what lets late, tiny increments be noisy.
        let sub_atol = 0.25 * atol.max(rtol * partial.abs()) / ((k + 1) * (k + 1)) as f64;
        let inc = match adaptive(g, lo, hi, sub_atol, 0.25 * rtol, budget)? {
            IntegralVerdict::Converged { value, abs_error } => {
                err += abs_error;
                value
            }
            IntegralVerdict::Diverged { .. } => f64::INFINITY,
            IntegralVerdict::Inconclusive { partials: mut p, reason } => {
                partials.append(&mut p);
                return Ok(IntegralVerdict::Inconclusive { partials, reason });
            }
        };
        let previous = partial;
        partial += inc;
        limits.push(limit);
        partials.push(partial);

        let growing = increments
            .last()
            .is_some_and(|&last: &f64| inc.abs() > last.abs() && partial.abs() > previous.abs());
        grow_run = if growing { grow_run + 1 } else { 0 };
        increments.push(inc);

        if !partial.is_finite() || (partial.abs() > s.divergence_threshold && grow_run > 0) {
            return Ok(diverged(DivergenceRule::Threshold, limits, partials));
        }
        if grow_run >= s.growth_run {
            return Ok(diverged(DivergenceRule::GrowingIncrements, limits, partials));
        }

        let tol = atol.max(rtol * partial.abs());
        small_run = if inc.abs() <= tol { small_run + 1 } else { 0 };
        if small_run >= s.converged_run {
            let tail = tail_estimate(&increments, s.converged_run);
            if err + tail <= tol {
                return Ok(IntegralVerdict::Converged {
                    value: partial,
                    abs_error: err + tail,
                });
            }
        }
    }
    Ok(IntegralVerdict::Inconclusive {
        partials,
        reason: "domain cannot be extended further in f64".into(),
    })
}

/// Geometric extrapolation of what the remaining extensions would add, using
/// the largest ratio among the last `window` increments. Increments that are
/// not shrinking give no bound.
fn tail_estimate(increments: &[f64], window: usize) -> f64 {
    let Some(&last) = increments.last() else {
        return 0.0;
    };
    let last = last.abs();
    if last == 0.0 {
        return 0.0;
    }
    let recent = &increments[increments.len().saturating_sub(window + 1)..];
    if recent.len() < 2 {
        return f64::INFINITY;
    }
    let r = recent
        .windows(2)
        .map(|w| w[1].abs() / w[0].abs())
        .fold(0.0, f64::max);
    if r < 1.0 {
        last * r / (1.0 - r)
    } else {
        f64::INFINITY
    }
}

fn diverged(rule: DivergenceRule, limits: Vec<f64>, partials: Vec<f64>) -> IntegralVerdict {
    IntegralVerdict::Diverged {
        evidence: DivergenceEvidence { rule, limits, partials },
    }
}

/// `[a + 2^{k-1}s₀, a + 2^k s₀]`, starting with `[a, a + s₀]`.
fn doublings(a: f64) -> impl Iterator<Item = (f64, f64, f64)> {
    const S0: f64 = 1.0;
    (0..)
        .map(move |k: i32| {
            let lo = if k == 0 { a } else { a + S0 * 2f64.powi(k - 1) };
            let hi = a + S0 * 2f64.powi(k);
            (lo, hi, hi)
        })
        .take_while(|&(lo, hi, _)| hi.is_finite() && lo < hi)
}

/// Segments between `s + δ_k` and `s + δ_{k-1}` with `δ_k = (b - s)·2^{-k}`,
/// approaching `s` from the side of `b`.
fn halvings(s: f64, b: f64) -> impl Iterator<Item = (f64, f64, f64)> {
    let width = b - s;
    (1..)
        .map(move |k: i32| {
            let near = s + width * 0.5f64.powi(k);
            let far = if k == 1 { b } else { s + width * 0.5f64.powi(k - 1) };
            (near.min(far), near.max(far), near)
        })
        // Below the smallest normal distance the segment ends lose precision.
        .take_while(move |&(lo, hi, near)| lo < hi && near != s && (near - s).abs() >= f64::MIN_POSITIVE)
}

pub(crate) fn semi_infinite(
    g: &Integrand,
    a: f64,
    atol: f64,
    rtol: f64,
    s: &QuadSettings,
    budget: &mut Budget,
) -> Result<IntegralVerdict> {
    exhaust(g, doublings(a), atol, rtol, s, budget)
}

pub(crate) fn shrinking(
    g: &Integrand,
    singular: f64,
    b: f64,
    atol: f64,
    rtol: f64,
    s: &QuadSettings,
    budget: &mut Budget,
) -> Result<IntegralVerdict> {
    exhaust(g, halvings(singular, b), atol, rtol, s, budget)
}

/// `∫_0^μ g = ∫_{-ln μ}^∞ g(e^{-u}) e^{-u} du`.
pub(crate) fn singular_origin(
    g: &Integrand,
    mu: f64,
    atol: f64,
    rtol: f64,
    s: &QuadSettings,
    budget: &mut Budget,
) -> Result<IntegralVerdict> {
    let substituted = Integrand::from_log(|at| g.eval(Abscissa::Log(-at.x())).scale_ln(-at.x()));
    semi_infinite(&substituted, -mu.ln(), atol, rtol, s, budget)
}

/// `∫_a^∞ g(x) dx` by doubling the upper limit `R_k = a + 2^k`.
pub fn integrate_semi_infinite(g: &Integrand, a: f64, s: &QuadSettings) -> Result<IntegralVerdict> {
    s.validate()?;
    if !a.is_finite() {
        return Err(Error::param("a", "lower limit must be finite"));
    }
    semi_infinite(g, a, s.atol, s.rtol, s, &mut Budget::new(s.budget))
}

/// `∫_0^μ g(x) dx` for `g` possibly unbounded at `0`, through `u = -ln x`.
pub fn integrate_singular_origin(g: &Integrand, mu: f64, s: &QuadSettings) -> Result<IntegralVerdict> {
    s.validate()?;
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::param("mu", "must lie in (0, 1)"));
    }
    singular_origin(g, mu, s.atol, s.rtol, s, &mut Budget::new(s.budget))
}

/// `∫ g` between `singular` and `b` by shrinking the distance to the
/// singular endpoint, `δ_k = |b - singular|·2^{-k}`.
pub fn integrate_shrinking(g: &Integrand, singular: f64, b: f64, s: &QuadSettings) -> Result<IntegralVerdict> {
    s.validate()?;
    if !(singular.is_finite() && b.is_finite()) || singular == b {
        return Err(Error::param("b", "endpoints must be finite and distinct"));
    }
    shrinking(g, singular, b, s.atol, s.rtol, s, &mut Budget::new(s.budget))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> QuadSettings {
        QuadSettings::default()
    }

    #[test]
    fn quartic_tail() {
        let g = Integrand::new(|x| x.powi(-4));
        let v = integrate_semi_infinite(&g, 2.0, &s()).unwrap();
        assert!((v.value().unwrap() - 1.0 / 24.0).abs() < 1e-9, "{v:?}");
    }

    #[test]
    fn harmonic_tail_diverges() {
        let g = Integrand::new(|x| 1.0 / x);
        let v = integrate_semi_infinite(&g, 2.0, &s()).unwrap();
        let IntegralVerdict::Diverged { evidence } = v else {
            panic!("{v:?}")
        };
        assert!(evidence.partials.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn exponential_growth_diverges() {
        let g = Integrand::new(|x| (0.01 * x).exp() / (x * x));
        assert!(integrate_semi_infinite(&g, 1.0, &s()).unwrap().is_diverged());
    }

    #[test]
    fn bertrand_closed_form() {
        let mu = (-10.0f64).exp();
        let g = Integrand::from_log(|at| {
            let t = match at {
                Abscissa::Log(t) => t,
                Abscissa::Linear(x) => x.ln(),
            };
            crate::logspace::LogValue::from_ln(-t - 6.0 * t.abs().ln())
        });
        let tight = QuadSettings { atol: 1e-20, rtol: 1e-12, ..s() };
        let v = integrate_singular_origin(&g, mu, &tight).unwrap();
        let x = v.value().unwrap();
        assert!(((x - 2e-6) / 2e-6).abs() < 1e-9, "{v:?}");
    }

    #[test]
    fn reciprocal_at_origin_diverges() {
        let g = Integrand::new(|x| 1.0 / x);
        assert!(integrate_singular_origin(&g, 0.1, &s()).unwrap().is_diverged());
        // Every halving adds ln 2, which the increment rules cannot tell from
        // a slowly converging tail before δ reaches the smallest normal f64.
        let direct = integrate_shrinking(&g, 0.0, 0.1, &s()).unwrap();
        assert!(matches!(direct, IntegralVerdict::Inconclusive { .. }), "{direct:?}");
    }

    #[test]
    fn shrinking_from_either_side() {
        let g = Integrand::new(|x: f64| 1.0 / x.abs().sqrt());
        let right = integrate_shrinking(&g, 0.0, 1.0, &s()).unwrap();
        let left = integrate_shrinking(&g, 0.0, -1.0, &s()).unwrap();
        assert!((right.value().unwrap() - 2.0).abs() < 1e-9, "{right:?}");
        assert!((left.value().unwrap() - 2.0).abs() < 1e-9, "{left:?}");
    }

    #[test]
    fn shrinking_away_from_zero_is_limited_by_spacing() {
        // Near 1 the gap cannot shrink below 2^-52, where the missing mass
        // √δ is still 1.5e-8.
        let g = Integrand::new(|x: f64| 1.0 / (x - 1.0).abs().sqrt());
        assert!(integrate_shrinking(&g, 1.0, 2.0, &s()).unwrap().is_inconclusive());
        let loose = QuadSettings::with_tolerances(1e-6, 1e-6);
        let v = integrate_shrinking(&g, 1.0, 2.0, &loose).unwrap();
        assert!((v.value().unwrap() - 2.0).abs() < 1e-5, "{v:?}");
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let g = Integrand::new(|x| (1.0 / x).sin() / x.sqrt());
        let tiny = QuadSettings { budget: 200, ..s() };
        assert!(integrate_singular_origin(&g, 0.5, &tiny).unwrap().is_inconclusive());
    }
}
