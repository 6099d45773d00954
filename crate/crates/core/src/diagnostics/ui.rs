//! de la Vallée-Poussin test for uniform integrability of `(|X_ε|^p)_ε`.
//!
//! With `ψ(y) = y|ln y|`, which is superlinear, the family is uniformly
//! integrable as soon as `sup_ε E[ψ(|X_ε|^p)] < ∞`. The expectation is split
//! at the first two breakpoints `b₀ < b₁` of `f`, shifted by `ε|h|` when
//! `h < 0`, so each piece can be traced separately. For the log-singular
//! functional these are the pieces `(-∞, 0]`, `[0, μ]`, `[μ, ∞)` (and their
//! shifts for `h < 0`).

use rayon::prelude::*;

use super::integrands::{bertrand, weighted_psi_of_quotient};
use super::{EpsilonGrid, Flag};
use crate::error::{Error, Result};
use crate::functional::ScalarFunctional;
use crate::quadrature::{integrate, IntegralVerdict, QuadSettings};

/// Exponents of the Bertrand majorants `1/(x|ln x|^i)`.
pub const MAJORANT_EXPONENTS: [u32; 4] = [5, 6, 7, 8];

#[derive(Debug, Clone, PartialEq)]
pub struct UiPiece {
    pub label: &'static str,
    pub lo: f64,
    pub hi: f64,
    pub verdict: IntegralVerdict,
}

/// `E[ψ(|X_ε|^p)]` at one `ε`, piece by piece.
#[derive(Debug, Clone, PartialEq)]
pub struct UiRow {
    pub eps: f64,
    pub pieces: Vec<UiPiece>,
    pub total: IntegralVerdict,
}

/// `∫_0^upper dx/(x|ln x|^i)` next to its closed form `|ln upper|^{1-i}/(i-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorantCheck {
    pub i: u32,
    pub upper: f64,
    pub verdict: IntegralVerdict,
    pub closed_form: f64,
}

impl MajorantCheck {
    pub fn relative_error(&self) -> Option<f64> {
        Some(((self.verdict.value()? - self.closed_form) / self.closed_form).abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UiOutcome {
    pub p: f64,
    pub h: f64,
    pub rows: Vec<UiRow>,
    /// Grid maximum of `E[ψ(|X_ε|^p)]`, when every row converged.
    pub sup: Option<f64>,
    pub majorants: Vec<MajorantCheck>,
    pub verdict: Flag,
}

fn cuts(f: &ScalarFunctional) -> Vec<f64> {
    f.breakpoints().iter().take(2).map(|b| b.x).collect()
}

const LABELS: [&str; 3] = ["below", "inside", "above"];

/// Runs the test along `h_T = c` over `grid`. The caller restricts the grid
/// to admissible steps (e.g. `ε < η/|h_T|`). `majorant_upper` adds the
/// Bertrand cross-check on `(0, upper)`.
pub fn dvp_uniform_integrability_test(
    f: &ScalarFunctional,
    p: f64,
    c: f64,
    grid: &EpsilonGrid,
    majorant_upper: Option<f64>,
    s: &QuadSettings,
) -> Result<UiOutcome> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::param("p", format!("must be a finite number > 1, got {p}")));
    }
    let majorants = match majorant_upper {
        Some(upper) => majorant_checks(upper, s)?,
        None => Vec::new(),
    };
    if c == 0.0 {
        // X_ε vanishes identically.
        return Ok(UiOutcome {
            p,
            h: c,
            rows: Vec::new(),
            sup: Some(0.0),
            majorants,
            verdict: Flag::Yes,
        });
    }
    let rows = grid
        .values()
        .par_iter()
        .map(|&eps| ui_row(f, p, c, eps, s))
        .collect::<Result<Vec<_>>>()?;
    let totals: Vec<&IntegralVerdict> = rows.iter().map(|r| &r.total).collect();
    let sup = totals
        .iter()
        .map(|v| v.value())
        .collect::<Option<Vec<f64>>>()
        .map(|v| v.into_iter().fold(0.0, f64::max));
    let majorants_ok = majorants.iter().all(|m| m.verdict.is_converged());
    let verdict = if totals.iter().any(|v| v.is_diverged()) {
        Flag::No
    } else if sup.is_some_and(f64::is_finite) && majorants_ok {
        Flag::Yes
    } else {
        Flag::Unknown
    };
    Ok(UiOutcome {
        p,
        h: c,
        rows,
        sup,
        majorants,
        verdict,
    })
}

fn ui_row(f: &ScalarFunctional, p: f64, c: f64, eps: f64, s: &QuadSettings) -> Result<UiRow> {
    let g = weighted_psi_of_quotient(f, eps, c, p);
    let shift = if c < 0.0 { eps * c.abs() } else { 0.0 };
    let mut ends = vec![f64::NEG_INFINITY];
    ends.extend(cuts(f).into_iter().map(|b| b + shift));
    ends.push(f64::INFINITY);
    let share = QuadSettings {
        atol: s.atol / (ends.len() - 1) as f64,
        ..*s
    };
    let labels: &[&'static str] = match ends.len() - 1 {
        1 => &["all"],
        2 => &["below", "above"],
        _ => &LABELS,
    };
    let pieces = ends
        .windows(2)
        .zip(labels)
        .map(|(w, &label)| {
            integrate(&g, w[0], w[1], &share).map(|verdict| UiPiece {
                label,
                lo: w[0],
                hi: w[1],
                verdict,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let total = IntegralVerdict::combine(pieces.iter().map(|p| p.verdict.clone()));
    Ok(UiRow { eps, pieces, total })
}

fn majorant_checks(upper: f64, s: &QuadSettings) -> Result<Vec<MajorantCheck>> {
    if !(upper > 0.0 && upper < 1.0) {
        return Err(Error::param("majorant upper limit", "must lie in (0, 1)"));
    }
    MAJORANT_EXPONENTS
        .iter()
        .map(|&i| {
            let verdict = integrate(&bertrand(i), 0.0, upper, s)?;
            let closed_form = upper.ln().abs().powi(1 - i as i32) / f64::from(i - 1);
            Ok(MajorantCheck {
                i,
                upper,
                verdict,
                closed_form,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_functional_is_constant_in_eps() {
        let f = ScalarFunctional::linear();
        let grid = EpsilonGrid::dyadic(1, 4).unwrap();
        let s = QuadSettings::default();
        for c in [1.0, -1.0, 2.0] {
            let out = dvp_uniform_integrability_test(&f, 2.0, c, &grid, None, &s).unwrap();
            assert_eq!(out.verdict, Flag::Yes);
            let y: f64 = c * c;
            let want = y * y.ln().abs();
            for r in &out.rows {
                assert!((r.total.value().unwrap() - want).abs() < 1e-10, "{:?}", r.total);
            }
        }
    }

    #[test]
    fn zero_direction_is_trivial() {
        let f = ScalarFunctional::linear();
        let out = dvp_uniform_integrability_test(&f, 2.0, 0.0, &EpsilonGrid::default(), None, &QuadSettings::default()).unwrap();
        assert_eq!(out.verdict, Flag::Yes);
        assert!(out.rows.is_empty());
    }

    #[test]
    fn majorants_match_closed_form() {
        let s = QuadSettings::default();
        for m in majorant_checks(3e-4, &s).unwrap() {
            assert!(m.relative_error().unwrap() < 1e-8, "{m:?}");
        }
    }
}
