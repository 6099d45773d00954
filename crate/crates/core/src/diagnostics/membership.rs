use super::lq::{lq_table, sobolev_seminorm, ssgd_verdict, LqTable, Quantity, SeminormVerdicts, SsgdOutcome};
use super::ui::{dvp_uniform_integrability_test, UiOutcome};
use super::{EpsilonGrid, EvidenceRow, Flag};
use crate::error::{Error, Result};
use crate::functional::ScalarFunctional;
use crate::quadrature::QuadSettings;

/// Inputs of [`membership_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipConfig {
    pub p: f64,
    /// Sampled `δ` for `D^{1,p+}`.
    pub deltas: Vec<f64>,
    /// Values of `h_T`.
    pub h_values: Vec<f64>,
    pub grid: EpsilonGrid,
    /// Uniform integrability is tested on `ε < ui_eps_cap/|h_T|`.
    pub ui_eps_cap: Option<f64>,
    /// Upper limit of the Bertrand-majorant cross-check.
    pub majorant_upper: Option<f64>,
    pub settings: QuadSettings,
}

impl Default for MembershipConfig {
    fn default() -> Self {
        MembershipConfig {
            p: 2.0,
            deltas: vec![0.1, 0.5],
            h_values: vec![1.0, -1.0],
            grid: EpsilonGrid::default(),
            ui_eps_cap: None,
            majorant_upper: None,
            settings: QuadSettings::default(),
        }
    }
}

impl MembershipConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0) || !self.p.is_finite() {
            return Err(Error::param("p", format!("must be a finite number > 1, got {}", self.p)));
        }
        if self.deltas.is_empty() || self.deltas.iter().any(|&d| !(d > 0.0) || !d.is_finite()) {
            return Err(Error::param("delta", "need at least one finite positive value"));
        }
        if self.h_values.is_empty() || self.h_values.iter().any(|h| !h.is_finite()) {
            return Err(Error::param("h", "need at least one finite value"));
        }
        if let Some(cap) = self.ui_eps_cap {
            if !(cap > 0.0) {
                return Err(Error::param("ui eps cap", "must be positive"));
            }
        }
        self.settings.validate()
    }

    /// `(1 + p)/2`, the intermediate exponent of the evidence rows.
    pub fn q_mid(&self) -> f64 {
        0.5 * (1.0 + self.p)
    }
}

/// A membership flag with the evidence that decided it.
#[derive(Debug, Clone, PartialEq)]
pub struct Conclusion {
    pub flag: Flag,
    pub evidence: Vec<EvidenceRow>,
    pub notes: Vec<String>,
}

impl Conclusion {
    fn new(flag: Flag, evidence: Vec<EvidenceRow>, note: impl Into<String>) -> Self {
        Conclusion {
            flag,
            evidence,
            notes: vec![note.into()],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub functional: String,
    pub p: f64,
    /// Seminorm parts at `p` followed by `p + δ` for each sampled `δ`.
    pub seminorms: Vec<SeminormVerdicts>,
    pub table: LqTable,
    /// Residual tests at `q = (1+p)/2` and `q = p`, per `h_T`.
    pub ssgd: Vec<SsgdOutcome>,
    pub ui: Vec<UiOutcome>,
    pub in_d1p: Conclusion,
    pub ssgd_pp: Conclusion,
    /// Sampled over the configured `δ` list.
    pub in_d1p_plus: Conclusion,
    /// Inclusion-chain violations found in the raw flags; the flags involved
    /// are reset to Unknown.
    pub contradictions: Vec<String>,
}

impl MembershipReport {
    /// The three flags, from the largest space down.
    pub fn chain(&self) -> [Flag; 3] {
        [self.in_d1p.flag, self.ssgd_pp.flag, self.in_d1p_plus.flag]
    }

    /// `D^{1,p+} ⇒ SSGD_p(p) ⇒ D^{1,p}` for Yes, and the reverse for No.
    pub fn chain_is_consistent(&self) -> bool {
        chain_violations(self.chain()).is_empty()
    }

    /// Every evidence row of the report in a fixed order.
    pub fn rows(&self) -> Vec<EvidenceRow> {
        let mut out = Vec::new();
        for s in &self.seminorms {
            out.extend(EvidenceRow::from_seminorm(s));
        }
        out.extend(self.table.rows.iter().map(EvidenceRow::from_lq));
        for u in &self.ui {
            out.extend(EvidenceRow::from_ui(u));
        }
        out
    }
}

fn chain_violations([d, g, plus]: [Flag; 3]) -> Vec<String> {
    let mut v = Vec::new();
    if plus == Flag::Yes && g == Flag::No {
        v.push("D^{1,p+} = yes but SSGD_p(p) = no".to_string());
    }
    if g == Flag::Yes && d == Flag::No {
        v.push("SSGD_p(p) = yes but D^{1,p} = no".to_string());
    }
    if plus == Flag::Yes && d == Flag::No {
        v.push("D^{1,p+} = yes but D^{1,p} = no".to_string());
    }
    v
}

/// Assembles seminorms at `p` and `p + δ`, residual tables at `q = (1+p)/2`
/// and `q = p`, the quotient tables at the same exponents and the
/// uniform-integrability test, then maps the evidence to three flags:
///
/// * `D^{1,p}`: both seminorm parts at `p` converge (yes) or one diverges (no).
/// * `SSGD_p(p)`: no if `D^{1,p}` is no or a `q = p` residual row diverges;
///   yes if `D^{1,p}` is yes and, for every `h_T`, either the `q = p` residual
///   test passes or `(|X_ε|^p)_ε` is uniformly integrable. The second route is
///   Vitali's theorem: `X_ε → ⟨∇Z,h⟩` in probability (true in `D^{1,p}`) plus
///   uniform integrability of `|X_ε|^p` gives convergence in `L^p`.
/// * `D^{1,p+}`: yes if some sampled `δ` has both parts converging at `p + δ`,
///   no if every sampled `δ` diverges.
///
/// Yes propagates down the chain `D^{1,p+} ⊂ SSGD_p(p) ⊂ D^{1,p}` and No
/// propagates up. Inconclusive evidence only ever produces Unknown.
pub fn membership_report(f: &ScalarFunctional, cfg: &MembershipConfig) -> Result<MembershipReport> {
    cfg.validate()?;
    let s = &cfg.settings;
    let p = cfg.p;
    let exponents: Vec<f64> = std::iter::once(p).chain(cfg.deltas.iter().map(|d| p + d)).collect();
    let seminorms = exponents
        .iter()
        .map(|&e| sobolev_seminorm(f, e, s))
        .collect::<Result<Vec<_>>>()?;
    let qs = [cfg.q_mid(), p];

    let mut table = LqTable::default();
    let mut ssgd = Vec::new();
    let mut ui = Vec::new();
    for &h in &cfg.h_values {
        let residual = lq_table(f, Quantity::Residual, h, &qs, &cfg.grid, s)?;
        for &q in &qs {
            let rows: Vec<_> = residual.select(Quantity::Residual, h, q).cloned().collect();
            let (verdict, reason) = ssgd_verdict(&rows);
            ssgd.push(SsgdOutcome {
                p,
                q,
                h,
                rows,
                verdict,
                reason,
            });
        }
        table.extend(lq_table(f, Quantity::Quotient, h, &qs, &cfg.grid, s)?);
        table.extend(residual);
        let ui_grid = match cfg.ui_eps_cap {
            Some(cap) if h != 0.0 => cfg.grid.capped_or_below(cap / h.abs())?,
            _ => cfg.grid.clone(),
        };
        ui.push(dvp_uniform_integrability_test(f, p, h, &ui_grid, cfg.majorant_upper, s)?);
    }

    let in_d1p = d1p_conclusion(&seminorms[0]);
    let ssgd_pp = ssgd_pp_conclusion(&in_d1p, &ssgd, &ui, p);
    let in_d1p_plus = d1p_plus_conclusion(&seminorms[1..]);
    let mut report = MembershipReport {
        functional: f.name().to_string(),
        p,
        seminorms,
        table,
        ssgd,
        ui,
        in_d1p,
        ssgd_pp,
        in_d1p_plus,
        contradictions: Vec::new(),
    };
    enforce_chain(&mut report);
    Ok(report)
}

fn d1p_conclusion(s: &SeminormVerdicts) -> Conclusion {
    let flag = s.flag();
    let note = match flag {
        Flag::Yes => "both seminorm parts converge",
        Flag::No => "a seminorm part diverges",
        Flag::Unknown => "seminorm evidence inconclusive",
    };
    Conclusion::new(flag, EvidenceRow::from_seminorm(s).to_vec(), note)
}

fn ssgd_pp_conclusion(d: &Conclusion, ssgd: &[SsgdOutcome], ui: &[UiOutcome], p: f64) -> Conclusion {
    let at_p: Vec<&SsgdOutcome> = ssgd.iter().filter(|o| o.q == p).collect();
    let mut evidence: Vec<EvidenceRow> = at_p.iter().flat_map(|o| o.rows.iter().map(EvidenceRow::from_lq)).collect();
    evidence.extend(ui.iter().flat_map(EvidenceRow::from_ui_totals));
    if d.flag == Flag::No {
        return Conclusion::new(Flag::No, evidence, "not in D^{1,p}");
    }
    if let Some(o) = at_p.iter().find(|o| o.verdict == Flag::No) {
        return Conclusion::new(Flag::No, evidence, format!("h = {}: {}", o.h, o.reason));
    }
    let per_h_yes = at_p.iter().zip(ui).all(|(o, u)| o.verdict == Flag::Yes || u.verdict == Flag::Yes);
    if d.flag == Flag::Yes && per_h_yes {
        let routes: Vec<String> = at_p
            .iter()
            .zip(ui)
            .map(|(o, u)| {
                if o.verdict == Flag::Yes {
                    format!("h = {}: residual -> 0 in L^p", o.h)
                } else {
                    debug_assert_eq!(u.verdict, Flag::Yes);
                    format!("h = {}: |X_eps|^p uniformly integrable (Vitali)", o.h)
                }
            })
            .collect();
        return Conclusion::new(Flag::Yes, evidence, routes.join("; "));
    }
    Conclusion::new(Flag::Unknown, evidence, "neither route decided every direction")
}

fn d1p_plus_conclusion(plus: &[SeminormVerdicts]) -> Conclusion {
    let evidence: Vec<EvidenceRow> = plus.iter().flat_map(EvidenceRow::from_seminorm).collect();
    if let Some(s) = plus.iter().find(|s| s.flag() == Flag::Yes) {
        return Conclusion::new(Flag::Yes, evidence, format!("in D^{{1,{}}}", s.p));
    }
    if plus.iter().all(|s| s.flag() == Flag::No) {
        let ps: Vec<String> = plus.iter().map(|s| s.p.to_string()).collect();
        return Conclusion::new(
            Flag::No,
            evidence,
            format!("diverges at every sampled exponent {{{}}} (sampled)", ps.join(", ")),
        );
    }
    Conclusion::new(Flag::Unknown, evidence, "no sampled exponent decided")
}

fn enforce_chain(r: &mut MembershipReport) {
    let violations = chain_violations(r.chain());
    if !violations.is_empty() {
        for c in [&mut r.in_d1p, &mut r.ssgd_pp, &mut r.in_d1p_plus] {
            if c.flag != Flag::Unknown {
                c.notes.push("reset: inclusion chain violated".into());
                c.flag = Flag::Unknown;
            }
        }
        r.contradictions = violations;
        return;
    }
    let imply = |c: &mut Conclusion, flag: Flag, why: &str| {
        if c.flag == Flag::Unknown {
            c.flag = flag;
            c.notes.push(why.to_string());
        }
    };
    if r.in_d1p_plus.flag == Flag::Yes {
        imply(&mut r.ssgd_pp, Flag::Yes, "implied by D^{1,p+} = yes");
    }
    if r.ssgd_pp.flag == Flag::Yes {
        imply(&mut r.in_d1p, Flag::Yes, "implied by SSGD_p(p) = yes");
    }
    if r.in_d1p.flag == Flag::No {
        imply(&mut r.ssgd_pp, Flag::No, "implied by D^{1,p} = no");
    }
    if r.ssgd_pp.flag == Flag::No {
        imply(&mut r.in_d1p_plus, Flag::No, "implied by SSGD_p(p) = no");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_functional_is_in_every_space() {
        let cfg = MembershipConfig {
            deltas: vec![0.1],
            grid: EpsilonGrid::dyadic(1, 5).unwrap(),
            ..Default::default()
        };
        let r = membership_report(&ScalarFunctional::linear(), &cfg).unwrap();
        assert_eq!(r.chain(), [Flag::Yes; 3], "{r:#?}");
        assert!(r.contradictions.is_empty());
    }

    #[test]
    fn chain_rules() {
        assert!(chain_violations([Flag::Yes, Flag::Yes, Flag::Yes]).is_empty());
        assert!(chain_violations([Flag::Yes, Flag::No, Flag::No]).is_empty());
        assert_eq!(chain_violations([Flag::No, Flag::Yes, Flag::Unknown]).len(), 1);
        assert_eq!(chain_violations([Flag::No, Flag::No, Flag::Yes]).len(), 2);
    }

    #[test]
    fn config_validation() {
        let bad = MembershipConfig { p: 1.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = MembershipConfig { deltas: vec![], ..Default::default() };
        assert!(bad.validate().is_err());
        assert_eq!(MembershipConfig::default().q_mid(), 1.5);
    }
}
