//! Decision procedures for Malliavin–Sobolev membership of `Z = f(W₁)`.
//!
//! Every quantity is a Gaussian expectation computed by [`crate::quadrature`]
//! and keeps its [`IntegralVerdict`]. Flags derived from the verdicts are
//! three-valued: Inconclusive evidence yields [`Flag::Unknown`], never a
//! guess.
//!
//! `ε → 0` is rendered on an [`EpsilonGrid`]: a residual sequence "tends to
//! zero" when its last four values are non-increasing and the final one is
//! below [`SSGD_TOLERANCE`].

mod grid;
pub mod integrands;
mod lq;
mod membership;
mod monte_carlo;
mod ui;

use std::fmt;

pub use grid::EpsilonGrid;
pub use lq::{
    lq_diffquot_norm, lq_sup_over_epsilon, lq_table, sobolev_seminorm, ssgd_test, LqRow, LqTable, Quantity,
    SeminormVerdicts, SsgdOutcome, SupOutcome, SSGD_TOLERANCE,
};
pub use membership::{membership_report, Conclusion, MembershipConfig, MembershipReport};
pub use monte_carlo::{cameron_martin_check, sgd_probability_test, CmCheck, SgdRow};
pub use ui::{dvp_uniform_integrability_test, MajorantCheck, UiOutcome, UiPiece, UiRow, MAJORANT_EXPONENTS};

use crate::quadrature::IntegralVerdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flag {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::Yes => "yes",
            Flag::No => "no",
            Flag::Unknown => "unknown",
        })
    }
}

/// One line of machine-readable evidence: which quantity, at which `q` and
/// `ε` (when they apply), and its verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceRow {
    pub quantity: String,
    pub q: Option<f64>,
    pub eps: Option<f64>,
    pub verdict: IntegralVerdict,
}

impl EvidenceRow {
    pub fn new(quantity: impl Into<String>, q: Option<f64>, eps: Option<f64>, verdict: IntegralVerdict) -> Self {
        EvidenceRow {
            quantity: quantity.into(),
            q,
            eps,
            verdict,
        }
    }

    /// `E|Z|^p` as `moment` and `E‖∇Z‖^p` as `derivative_moment`.
    pub fn from_seminorm(s: &SeminormVerdicts) -> [EvidenceRow; 2] {
        [
            EvidenceRow::new("moment", Some(s.p), None, s.value.clone()),
            EvidenceRow::new("derivative_moment", Some(s.p), None, s.derivative.clone()),
        ]
    }

    pub fn from_lq(r: &LqRow) -> EvidenceRow {
        EvidenceRow::new(format!("{}(h={})", r.quantity.name(), r.h), Some(r.q), Some(r.eps), r.verdict.clone())
    }

    /// One `ui(h=..)` row per `ε`.
    pub fn from_ui_totals(u: &UiOutcome) -> Vec<EvidenceRow> {
        u.rows
            .iter()
            .map(|r| EvidenceRow::new(format!("ui(h={})", u.h), Some(u.p), Some(r.eps), r.total.clone()))
            .collect()
    }

    /// Totals, then pieces, then the Bertrand majorants.
    pub fn from_ui(u: &UiOutcome) -> Vec<EvidenceRow> {
        let mut out = Vec::new();
        for r in &u.rows {
            out.push(EvidenceRow::new(format!("ui(h={})", u.h), Some(u.p), Some(r.eps), r.total.clone()));
            for piece in &r.pieces {
                out.push(EvidenceRow::new(
                    format!("ui_{}(h={})", piece.label, u.h),
                    Some(u.p),
                    Some(r.eps),
                    piece.verdict.clone(),
                ));
            }
        }
        for m in &u.majorants {
            out.push(EvidenceRow::new(
                format!("bertrand(i={},upper={:e},h={})", m.i, m.upper, u.h),
                None,
                None,
                m.verdict.clone(),
            ));
        }
        out
    }
}
