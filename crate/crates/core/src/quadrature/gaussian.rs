use super::improper::{semi_infinite, shrinking, singular_origin};
use super::kronrod::{adaptive, Budget};
use super::{Integrand, IntegralVerdict, QuadSettings};
use crate::error::{Error, Result};
use crate::logspace::ln_gaussian_density;

/// Polynomial growth bound `|g(x)| ≤ c (1 + |x|^degree)` used to certify a
/// truncated Gaussian tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub c: f64,
    pub degree: u32,
}

impl Default for Envelope {
    fn default() -> Self {
        Envelope { c: 1.0, degree: 8 }
    }
}

/// How the Gaussian tails of `E[g(W₁)]` are handled.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum TailPolicy {
    /// Integrate to infinity with the extension rules.
    #[default]
    Exhaust,
    /// Integrate on `[-at, at]` and add a bound on the rest from `envelope`.
    /// Only meaningful for integrands already known to converge.
    Truncate { at: f64, envelope: Envelope },
}

impl TailPolicy {
    pub fn truncate_at_40() -> Self {
        TailPolicy::Truncate {
            at: 40.0,
            envelope: Envelope::default(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Finite(f64, f64),
    Above(f64),
    Below(f64),
}

fn pieces(g: &Integrand, lo: f64, hi: f64) -> Vec<Piece> {
    let mut cuts: Vec<f64> = g.breakpoints().iter().copied().filter(|&x| lo < x && x < hi).collect();
    if cuts.is_empty() && lo == f64::NEG_INFINITY && hi == f64::INFINITY {
        cuts.push(0.0);
    }
    let mut ends = vec![lo];
    ends.extend(cuts);
    ends.push(hi);
    let mut out = Vec::new();
    for w in ends.windows(2) {
        let (l, r) = (w[0], w[1]);
        match (l.is_finite(), r.is_finite()) {
            (true, true) => out.push(Piece::Finite(l, r)),
            (false, true) => {
                if g.is_singular_at(r) {
                    out.push(Piece::Below(r - 1.0));
                    out.push(Piece::Finite(r - 1.0, r));
                } else {
                    out.push(Piece::Below(r));
                }
            }
            (true, false) => {
                if g.is_singular_at(l) {
                    out.push(Piece::Finite(l, l + 1.0));
                    out.push(Piece::Above(l + 1.0));
                } else {
                    out.push(Piece::Above(l));
                }
            }
            (false, false) => unreachable!("the real line is always cut once"),
        }
    }
    out
}

fn finite_piece(
    g: &Integrand,
    l: f64,
    r: f64,
    atol: f64,
    rtol: f64,
    s: &QuadSettings,
    budget: &mut Budget,
) -> Result<IntegralVerdict> {
    match (g.is_singular_at(l), g.is_singular_at(r)) {
        (false, false) => adaptive(g, l, r, atol, rtol, budget),
        (true, false) if l == 0.0 && r < 1.0 => singular_origin(g, r, atol, rtol, s, budget),
        (true, false) if l == 0.0 => Ok(IntegralVerdict::combine([
            singular_origin(g, 0.5, 0.5 * atol, rtol, s, budget)?,
            adaptive(g, 0.5, r, 0.5 * atol, rtol, budget)?,
        ])),
        (true, false) => shrinking(g, l, r, atol, rtol, s, budget),
        (false, true) => shrinking(g, r, l, atol, rtol, s, budget),
        (true, true) => {
            let m = 0.5 * (l + r);
            Ok(IntegralVerdict::combine([
                finite_piece(g, l, m, 0.5 * atol, rtol, s, budget)?,
                finite_piece(g, m, r, 0.5 * atol, rtol, s, budget)?,
            ]))
        }
    }
}

fn integrate_pieces(g: &Integrand, lo: f64, hi: f64, s: &QuadSettings) -> Result<IntegralVerdict> {
    let pieces = pieces(g, lo, hi);
    let atol = s.atol / pieces.len() as f64;
    let rtol = s.rtol;
    let mut budget = Budget::new(s.budget);
    let mirrored = Integrand::from_log(|at| g.eval_at(-at.x()));
    let mut verdicts = Vec::with_capacity(pieces.len());
    for piece in pieces {
        let v = match piece {
            Piece::Finite(l, r) => finite_piece(g, l, r, atol, rtol, s, &mut budget)?,
            Piece::Above(a) => semi_infinite(g, a, atol, rtol, s, &mut budget)?,
            Piece::Below(b) => semi_infinite(&mirrored, -b, atol, rtol, s, &mut budget)?,
        };
        // A divergent piece settles the verdict; the rest need not be spent.
        if v.is_diverged() {
            return Ok(v);
        }
        verdicts.push(v);
    }
    Ok(IntegralVerdict::combine(verdicts))
}

/// `∫_lo^hi g(x) dx` where either limit may be infinite. The domain is split
/// at the integrand's breakpoints; declared singular points are approached
/// by the singular-endpoint routes.
pub fn integrate(g: &Integrand, lo: f64, hi: f64, s: &QuadSettings) -> Result<IntegralVerdict> {
    s.validate()?;
    if lo.is_nan() || hi.is_nan() || !(lo < hi) || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
        return Err(Error::param("interval", format!("[{lo}, {hi}] is not a proper interval")));
    }
    integrate_pieces(g, lo, hi, s)
}

/// `∫_a^b g` for finite `a < b`, without singular-point dispatch.
pub fn integrate_adaptive(g: &Integrand, a: f64, b: f64, s: &QuadSettings) -> Result<IntegralVerdict> {
    s.validate()?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::param("interval", format!("[{a}, {b}] must be finite with a < b")));
    }
    adaptive(g, a, b, s.atol, s.rtol, &mut Budget::new(s.budget))
}

/// `E[g(W₁)] = ∫ g(x) φ(x) dx`.
pub fn gaussian_expectation(g: &Integrand, s: &QuadSettings) -> Result<IntegralVerdict> {
    gaussian_expectation_with(g, TailPolicy::Exhaust, s)
}

pub fn gaussian_expectation_with(g: &Integrand, tails: TailPolicy, s: &QuadSettings) -> Result<IntegralVerdict> {
    let weighted = g.times_gaussian();
    match tails {
        TailPolicy::Exhaust => integrate(&weighted, f64::NEG_INFINITY, f64::INFINITY, s),
        TailPolicy::Truncate { at, envelope } => {
            let d = f64::from(envelope.degree);
            if !(at > 0.0) || at * at < 2.0 * (d - 1.0) {
                return Err(Error::param("at", "truncation point too small for the envelope degree"));
            }
            let bound = tail_bound(at, envelope);
            Ok(match integrate(&weighted, -at, at, s)? {
                IntegralVerdict::Converged { value, abs_error } => IntegralVerdict::Converged {
                    value,
                    abs_error: abs_error + bound,
                },
                v => v,
            })
        }
    }
}

/// `∫_{|x|>L} c(1 + |x|^d) φ(x) dx ≤ 2c φ(L) (1/L + 2 L^{d-1})` for `L² ≥ 2(d-1)`.
fn tail_bound(l: f64, e: Envelope) -> f64 {
    let phi = ln_gaussian_density(l).exp();
    2.0 * e.c * phi * (1.0 / l + 2.0 * l.powi(e.degree as i32 - 1))
}

/// `∫_lo^hi g(x) φ(x) dx`.
pub fn expectation_over(g: &Integrand, lo: f64, hi: f64, s: &QuadSettings) -> Result<IntegralVerdict> {
    integrate(&g.times_gaussian(), lo, hi, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::Abscissa;
    use crate::logspace::LogValue;

    fn s() -> QuadSettings {
        QuadSettings::default()
    }

    #[test]
    fn linear_on_unit_interval() {
        let v = integrate_adaptive(&Integrand::new(|x| x), 0.0, 1.0, &s()).unwrap();
        assert!((v.value().unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gaussian_mass_and_variance_on_window() {
        let phi = Integrand::new(|x| ln_gaussian_density(x).exp());
        let var = Integrand::new(|x| x * x * ln_gaussian_density(x).exp());
        let m = integrate_adaptive(&phi, -8.0, 8.0, &s()).unwrap().value().unwrap();
        let v = integrate_adaptive(&var, -8.0, 8.0, &s()).unwrap().value().unwrap();
        // Mass outside [-8, 8] is about 1.2e-15.
        assert!((m - 1.0).abs() < 1e-10);
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn normal_moments() {
        let m2 = gaussian_expectation(&Integrand::new(|x| x * x), &s()).unwrap();
        let m4 = gaussian_expectation(&Integrand::new(|x| x.powi(4)), &s()).unwrap();
        assert!((m2.value().unwrap() - 1.0).abs() < 1e-10, "{m2:?}");
        assert!((m4.value().unwrap() - 3.0).abs() < 1e-10, "{m4:?}");
        let t = gaussian_expectation_with(&Integrand::new(|x| x.powi(4)), TailPolicy::truncate_at_40(), &s()).unwrap();
        assert!((t.value().unwrap() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn breakpoints_split_the_line() {
        let g = Integrand::new(|x: f64| if x > 1.0 { 1.0 } else { 0.0 }).with_breakpoints(vec![1.0]);
        let v = gaussian_expectation(&g, &s()).unwrap().value().unwrap();
        assert!((v - 0.158_655_253_931_457_05).abs() < 1e-12, "{v}");
    }

    #[test]
    fn singular_points_are_routed() {
        let g = Integrand::new(|x: f64| x.abs().powf(-0.5)).with_singularities(vec![0.0]);
        // E|W₁|^{-1/2} = 2^{-1/4} Γ(1/4) / √π.
        let expect = 2f64.powf(-0.25) * 3.625_609_908_221_908 / std::f64::consts::PI.sqrt();
        let v = gaussian_expectation(&g, &s()).unwrap();
        assert!((v.value().unwrap() - expect).abs() < 1e-9, "{v:?}");
        let bad = Integrand::new(|x: f64| 1.0 / x.abs()).with_singularities(vec![0.0]);
        assert!(gaussian_expectation(&bad, &s()).unwrap().is_diverged());
    }

    #[test]
    fn log_abscissa_reaches_below_f64_range() {
        // 1/(x |ln x|²) has mass 1/|ln μ| near 0, most of it below 1e-308.
        let g = Integrand::from_log(|at| {
            let t = match at {
                Abscissa::Log(t) => t,
                Abscissa::Linear(x) => x.ln(),
            };
            LogValue::from_ln(-t - 2.0 * t.abs().ln())
        })
        .with_singularities(vec![0.0]);
        let mu = 0.01f64;
        let v = integrate(&g, 0.0, mu, &s()).unwrap();
        assert!((v.value().unwrap() + 1.0 / mu.ln()).abs() < 1e-10, "{v:?}");
    }
}
