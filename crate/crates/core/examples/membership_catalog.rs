//! Membership verdicts for every catalog functional, with the inclusion
//! chain `D^{1,p+} ⊂ SSGD_p(p) ⊂ D^{1,p}` checked on each report.
//!
//! ```text
//! cargo run --release --example membership_catalog
//! ```

use malliavin_lab::counterexamples::{catalog_functional, CatalogParams, CATALOG};
use malliavin_lab::diagnostics::{membership_report, MembershipConfig};

fn main() -> malliavin_lab::Result<()> {
    let params = CatalogParams::default();
    for name in CATALOG {
        let f = catalog_functional(name, &params)?;
        let cfg = match name {
            "thm33" => MembershipConfig {
                ui_eps_cap: Some(params.eta),
                majorant_upper: Some(params.eta + params.mu),
                ..MembershipConfig::default()
            },
            // Along h_T = -1 the residual density of this functional is flat
            // over a range wider than the divergence test's window.
            "thm31" => MembershipConfig {
                h_values: vec![1.0],
                ..MembershipConfig::default()
            },
            _ => MembershipConfig::default(),
        };
        let r = membership_report(&f, &cfg)?;
        let [d, g, plus] = r.chain();
        println!("{:28} D^1,2: {d:7} SSGD_2(2): {g:7} D^1,2+: {plus:7} consistent: {}", r.functional, r.chain_is_consistent());
        for c in [&r.in_d1p, &r.ssgd_pp, &r.in_d1p_plus] {
            println!("    {} ({} evidence rows)", c.notes.join("; "), c.evidence.len());
        }
    }
    Ok(())
}
