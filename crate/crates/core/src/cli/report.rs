//! Evidence files: a versioned CSV and a Markdown summary.

use std::fmt::Write as _;

use crate::diagnostics::{CmCheck, EvidenceRow, Flag, MembershipReport};
use crate::error::Result;

/// First line of every CSV file.
pub const SCHEMA_LINE: &str = "# schema=1";

pub const CSV_HEADER: [&str; 6] = ["quantity", "q", "epsilon", "verdict", "value", "abs_error"];

/// One CSV record. Absent fields are written as empty cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub quantity: String,
    pub q: Option<f64>,
    pub eps: Option<f64>,
    pub verdict: String,
    pub value: Option<f64>,
    pub abs_error: Option<f64>,
}

impl From<&EvidenceRow> for CsvRow {
    fn from(r: &EvidenceRow) -> Self {
        CsvRow {
            quantity: r.quantity.clone(),
            q: r.q,
            eps: r.eps,
            verdict: r.verdict.label().to_string(),
            value: r.verdict.value(),
            abs_error: r.verdict.abs_error(),
        }
    }
}

impl CsvRow {
    fn flag(quantity: &str, flag: Flag) -> Self {
        CsvRow {
            quantity: quantity.to_string(),
            q: None,
            eps: None,
            verdict: flag.to_string(),
            value: None,
            abs_error: None,
        }
    }

    fn estimate(quantity: &str, mean: f64, se: f64) -> Self {
        CsvRow {
            quantity: quantity.to_string(),
            q: None,
            eps: None,
            verdict: "estimate".to_string(),
            value: Some(mean),
            abs_error: Some(se),
        }
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub fn csv_bytes(rows: &[CsvRow]) -> Result<Vec<u8>> {
    let mut out = format!("{SCHEMA_LINE}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(CSV_HEADER)?;
        for r in rows {
            w.write_record([
                r.quantity.clone(),
                cell(r.q),
                cell(r.eps),
                r.verdict.clone(),
                cell(r.value),
                cell(r.abs_error),
            ])?;
        }
        w.flush()?;
    }
    Ok(out)
}

/// Evidence rows of `report` followed by its three flags.
pub fn membership_rows(report: &MembershipReport, extra: &[EvidenceRow]) -> Vec<CsvRow> {
    let mut rows: Vec<CsvRow> = report.rows().iter().map(CsvRow::from).collect();
    rows.extend(extra.iter().map(CsvRow::from));
    let [d, g, plus] = report.chain();
    rows.push(CsvRow::flag("flag_d1p", d));
    rows.push(CsvRow::flag("flag_ssgd_pp", g));
    rows.push(CsvRow::flag("flag_d1p_plus", plus));
    rows
}

pub fn cm_rows(check: &CmCheck) -> Vec<CsvRow> {
    vec![
        CsvRow::estimate("cm_lhs", check.lhs.mean, check.lhs.std_error),
        CsvRow::estimate("cm_rhs", check.rhs.mean, check.rhs.std_error),
    ]
}

/// The verdict chain as printed on the terminal.
pub fn chain_summary(report: &MembershipReport) -> String {
    let p = report.p;
    let [d, g, plus] = report.chain();
    let mut s = format!("{}: p = {p}\n", report.functional);
    let _ = writeln!(s, "  D^{{1,{p}}}: {d}");
    let _ = writeln!(s, "  SSGD_{p}({p}): {g}");
    let _ = writeln!(s, "  D^{{1,{p}+}} (sampled): {plus}");
    for c in &report.contradictions {
        let _ = writeln!(s, "  contradiction: {c}");
    }
    s
}

fn md_cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6e}")).unwrap_or_else(|| "-".to_string())
}

fn md_table(s: &mut String, rows: &[CsvRow]) {
    s.push_str("| quantity | q | epsilon | verdict | value | abs_error |\n");
    s.push_str("|---|---|---|---|---|---|\n");
    for r in rows {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} |",
            r.quantity,
            md_cell(r.q),
            md_cell(r.eps),
            r.verdict,
            md_cell(r.value),
            md_cell(r.abs_error)
        );
    }
}

pub fn membership_markdown(title: &str, report: &MembershipReport, rows: &[CsvRow], status: &str) -> String {
    let p = report.p;
    let mut s = format!("# {title}\n\nFunctional `{}`, p = {p}.\n\n", report.functional);
    s.push_str("| space | verdict | notes |\n|---|---|---|\n");
    for (name, c) in [
        (format!("D^{{1,{p}}}"), &report.in_d1p),
        (format!("SSGD_{p}({p})"), &report.ssgd_pp),
        (format!("D^{{1,{p}+}} (sampled)"), &report.in_d1p_plus),
    ] {
        let _ = writeln!(s, "| {name} | {} | {} |", c.flag, c.notes.join("; "));
    }
    if report.contradictions.is_empty() {
        s.push_str("\nNo inclusion-chain contradictions.\n");
    } else {
        s.push_str("\nInclusion-chain contradictions:\n\n");
        for c in &report.contradictions {
            let _ = writeln!(s, "- {c}");
        }
    }
    s.push_str("\n## Residual tests\n\n| q | h | verdict | reason |\n|---|---|---|---|\n");
    for t in &report.ssgd {
        let _ = writeln!(s, "| {} | {} | {} | {} |", t.q, t.h, t.verdict, t.reason);
    }
    if !report.ui.is_empty() {
        s.push_str("\n## Uniform integrability\n\n| h | sup | verdict |\n|---|---|---|\n");
        for u in &report.ui {
            let _ = writeln!(s, "| {} | {} | {} |", u.h, md_cell(u.sup), u.verdict);
        }
    }
    let _ = write!(s, "\n## Outcome\n\n{status}\n\n## Evidence\n\n");
    md_table(&mut s, rows);
    s
}

pub fn cm_markdown(poly: &str, dir: &str, n: usize, seed: u64, check: &CmCheck, status: &str) -> String {
    let mut s = format!(
        "# Cameron-Martin check\n\n`Z = {poly}` with directions `{dir}`, N = {n}, seed = {seed}.\n\n"
    );
    md_table(&mut s, &cm_rows(check));
    let _ = write!(
        s,
        "\n|lhs - rhs| = {:.6e}, 3(SE_lhs + SE_rhs) = {:.6e}.\n\n{status}\n",
        (check.lhs.mean - check.rhs.mean).abs(),
        3.0 * (check.lhs.std_error + check.rhs.std_error)
    );
    s
}
