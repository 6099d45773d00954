use std::fmt;

use rayon::prelude::*;

use super::integrands::{weighted_derivative_power, weighted_quotient_power, weighted_value_power};
use super::{EpsilonGrid, Flag};
use crate::error::{Error, Result};
use crate::functional::ScalarFunctional;
use crate::quadrature::{integrate, IntegralVerdict, QuadSettings};

/// Threshold below which the last residual counts as `→ 0`.
pub const SSGD_TOLERANCE: f64 = 1e-3;

/// Tail length inspected by [`ssgd_test`].
const TAIL: usize = 4;

/// `E|Z|^p` and `E‖∇Z‖_H^p`, the two parts of `‖Z‖_{1,p}^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeminormVerdicts {
    pub p: f64,
    pub value: IntegralVerdict,
    pub derivative: IntegralVerdict,
}

impl SeminormVerdicts {
    pub fn flag(&self) -> Flag {
        if self.value.is_diverged() || self.derivative.is_diverged() {
            Flag::No
        } else if self.value.is_converged() && self.derivative.is_converged() {
            Flag::Yes
        } else {
            Flag::Unknown
        }
    }

    /// `‖Z‖_{1,p}` when both parts converged.
    pub fn norm(&self) -> Option<f64> {
        Some((self.value.value()? + self.derivative.value()?).powf(1.0 / self.p))
    }
}

/// For `Z = f(W₁)`, `‖∇Z‖_H = |f'(W₁)|` (the derivative points along the unit
/// direction `ḣ ≡ T^{-1/2}`).
pub fn sobolev_seminorm(f: &ScalarFunctional, p: f64, s: &QuadSettings) -> Result<SeminormVerdicts> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::param("p", format!("must be a finite number > 1, got {p}")));
    }
    let (value, derivative) = rayon::join(
        || over_line(&weighted_value_power(f, p), s),
        || over_line(&weighted_derivative_power(f, p), s),
    );
    Ok(SeminormVerdicts {
        p,
        value: value?,
        derivative: derivative?,
    })
}

/// Which `L^q` quantity a row holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    /// `E|X_ε|^q`.
    Quotient,
    /// `E|X_ε - ⟨∇Z, h⟩_H|^q`.
    Residual,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Quotient => "quotient",
            Quantity::Residual => "residual",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LqRow {
    pub quantity: Quantity,
    /// `h_T`.
    pub h: f64,
    pub q: f64,
    pub eps: f64,
    pub verdict: IntegralVerdict,
}

impl fmt::Display for LqRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}(h={}) q={} eps={:e}: {}",
            self.quantity.name(),
            self.h,
            self.q,
            self.eps,
            self.verdict
        )
    }
}

/// `E|X_ε - center|^q` with `center = c f'` or `0`.
pub fn lq_diffquot_norm(
    f: &ScalarFunctional,
    q: f64,
    eps: f64,
    c: f64,
    centered: bool,
    s: &QuadSettings,
) -> Result<IntegralVerdict> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::param("q", format!("must be a finite positive number, got {q}")));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::param("eps", format!("must be positive, got {eps}")));
    }
    over_line(&weighted_quotient_power(f, eps, c, q, centered), s)
}

fn over_line(g: &crate::quadrature::Integrand, s: &QuadSettings) -> Result<IntegralVerdict> {
    integrate(g, f64::NEG_INFINITY, f64::INFINITY, s)
}

/// Rows for every `(q, ε)`, ordered by `q` then by position in the grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LqTable {
    pub rows: Vec<LqRow>,
}

impl LqTable {
    pub fn select(&self, quantity: Quantity, h: f64, q: f64) -> impl Iterator<Item = &LqRow> {
        self.rows
            .iter()
            .filter(move |r| r.quantity == quantity && r.h == h && r.q == q)
    }

    pub fn extend(&mut self, other: LqTable) {
        self.rows.extend(other.rows);
    }
}

/// Fills one [`LqTable`] for `quantity` along `h_T = c`. Cells run in
/// parallel; rows keep grid order.
pub fn lq_table(
    f: &ScalarFunctional,
    quantity: Quantity,
    c: f64,
    qs: &[f64],
    grid: &EpsilonGrid,
    s: &QuadSettings,
) -> Result<LqTable> {
    let cells: Vec<(f64, f64)> = qs.iter().flat_map(|&q| grid.iter().map(move |e| (q, e))).collect();
    let centered = quantity == Quantity::Residual;
    let rows = cells
        .par_iter()
        .map(|&(q, eps)| {
            lq_diffquot_norm(f, q, eps, c, centered, s).map(|verdict| LqRow {
                quantity,
                h: c,
                q,
                eps,
                verdict,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LqTable { rows })
}

/// `sup_ε E|X_ε|^q` over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SupOutcome {
    pub rows: Vec<LqRow>,
    /// `Some` only when every row converged.
    pub sup: Option<f64>,
}

pub fn lq_sup_over_epsilon(
    f: &ScalarFunctional,
    q: f64,
    c: f64,
    grid: &EpsilonGrid,
    s: &QuadSettings,
) -> Result<SupOutcome> {
    let rows = lq_table(f, Quantity::Quotient, c, &[q], grid, s)?.rows;
    let sup = rows
        .iter()
        .map(|r| r.verdict.value())
        .collect::<Option<Vec<f64>>>()
        .map(|v| v.into_iter().fold(f64::NEG_INFINITY, f64::max));
    Ok(SupOutcome { rows, sup })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SsgdOutcome {
    pub p: f64,
    pub q: f64,
    pub h: f64,
    pub rows: Vec<LqRow>,
    pub verdict: Flag,
    pub reason: String,
}

/// Decides `X_ε → ⟨∇Z, h⟩_H` in `L^q` from the residual rows on the grid.
///
/// Yes when the last four residuals are non-increasing and the final one is
/// below [`SSGD_TOLERANCE`]; No when a row diverged or the tail plateaus above
/// the tolerance (every step shrinks by less than 10%); Unknown otherwise.
pub fn ssgd_test(
    f: &ScalarFunctional,
    p: f64,
    q: f64,
    c: f64,
    grid: &EpsilonGrid,
    s: &QuadSettings,
) -> Result<SsgdOutcome> {
    if !(p > 1.0) || !(q > 1.0 && q <= p) {
        return Err(Error::param("q", format!("need 1 < q <= p, got q = {q}, p = {p}")));
    }
    let rows = lq_table(f, Quantity::Residual, c, &[q], grid, s)?.rows;
    let (verdict, reason) = ssgd_verdict(&rows);
    Ok(SsgdOutcome {
        p,
        q,
        h: c,
        rows,
        verdict,
        reason,
    })
}

pub(crate) fn ssgd_verdict(rows: &[LqRow]) -> (Flag, String) {
    if let Some(r) = rows.iter().find(|r| r.verdict.is_diverged()) {
        return (Flag::No, format!("residual diverged at eps = {:e}", r.eps));
    }
    if let Some(r) = rows.iter().find(|r| r.verdict.is_inconclusive()) {
        return (Flag::Unknown, format!("residual inconclusive at eps = {:e}", r.eps));
    }
    let values: Vec<f64> = rows.iter().filter_map(|r| r.verdict.value()).collect();
    if values.len() < TAIL {
        return (Flag::Unknown, format!("need at least {TAIL} grid points"));
    }
    let tail = &values[values.len() - TAIL..];
    let last = tail[TAIL - 1];
    let non_increasing = tail.windows(2).all(|w| w[1] <= w[0]);
    if non_increasing && last < SSGD_TOLERANCE {
        return (Flag::Yes, format!("tail non-increasing, final residual {last:e}"));
    }
    let plateau = tail.iter().all(|&v| v > SSGD_TOLERANCE) && tail.windows(2).all(|w| w[1] > 0.9 * w[0]);
    if plateau {
        return (Flag::No, format!("residual plateaus near {last:e}"));
    }
    (Flag::Unknown, format!("no decision from tail, final residual {last:e}"))
}
