//! The `malliavin-lab` command line: subcommands, run configuration, report
//! files and exit codes.
//!
//! Exit codes: 0 when the configured conclusions are established, 1 on a
//! contradiction with them, 2 when evidence is Inconclusive, 64 on usage or
//! parameter errors.

mod config;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{Command, Format, RunConfig, KEYS, OUT_ENV};
pub use report::{cm_rows, csv_bytes, membership_rows, CsvRow, CSV_HEADER, SCHEMA_LINE};

use crate::counterexamples::catalog_functional;
use crate::diagnostics::{cameron_martin_check, lq_table, EvidenceRow, Flag, MembershipReport, Quantity};
use crate::error::{Error, Result};
use crate::functional::{CylindricalFunctional, Polynomial};
use crate::wiener::CameronMartinDirection;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONTRADICTION: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "malliavin-lab", version, about = "Numerical laboratory for Malliavin-Sobolev membership")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Exploding-tail functional: in D^{1,2} but not SSGD_2(2).
    ReproduceThm31(RunArgs),
    /// Log-singular functional: in SSGD_2(2) but not D^{1,2+}.
    ReproduceThm33(RunArgs),
    /// Membership report for any catalog functional.
    Diagnose(RunArgs),
    /// Monte Carlo check of the Cameron-Martin formula.
    CmCheck(RunArgs),
}

/// Flags override the config file, which overrides the defaults.
#[derive(Debug, Args)]
struct RunArgs {
    /// key=value file with any of the settings below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Catalog name: linear, square, thm31, thm33.
    #[arg(long)]
    functional: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    /// Extra quotient exponents, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// Sampled δ for D^{1,p+}, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// ε = 2^-k for k in k1..k2.
    #[arg(long = "eps-grid")]
    eps_grid: Option<String>,
    /// Values of h_T, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
    #[arg(long = "n-samples")]
    n_samples: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    atol: Option<String>,
    #[arg(long)]
    rtol: Option<String>,
    /// Integrand evaluations per verdict.
    #[arg(long)]
    budget: Option<String>,
    /// Output directory (default: $MALLIAVIN_LAB_OUT or .).
    #[arg(long)]
    out: Option<String>,
    /// csv or md.
    #[arg(long)]
    format: Option<String>,
    /// cm-check polynomial in x1, x2, ... with x_i = W(h_i).
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    /// cm-check directions h_1;h_2;..., each const:v or cells:d1,d2,...
    #[arg(long, allow_hyphen_values = true)]
    dir: Option<String>,
}

impl RunArgs {
    fn pairs(&self) -> [(&'static str, &Option<String>); 18] {
        [
            ("functional", &self.functional),
            ("a", &self.a),
            ("eta", &self.eta),
            ("mu", &self.mu),
            ("p", &self.p),
            ("q", &self.q),
            ("delta", &self.delta),
            ("eps-grid", &self.eps_grid),
            ("h", &self.h),
            ("n-samples", &self.n_samples),
            ("seed", &self.seed),
            ("atol", &self.atol),
            ("rtol", &self.rtol),
            ("budget", &self.budget),
            ("out", &self.out),
            ("format", &self.format),
            ("poly", &self.poly),
            ("dir", &self.dir),
        ]
    }
}

fn build_config(command: Command, args: &RunArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::defaults(command);
    if let Some(path) = &args.config {
        cfg.apply_file(path)?;
    }
    for (key, value) in args.pairs() {
        if let Some(v) = value {
            cfg.apply(key, v)?;
        }
    }
    Ok(cfg)
}

/// The result of a run before anything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub csv: Vec<u8>,
    pub markdown: String,
    /// Short terminal summary.
    pub summary: String,
}

/// Runs the configured command.
pub fn evaluate(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::ReproduceThm31 => reproduce(cfg, "thm31", [Flag::Yes, Flag::No, Flag::No]),
        Command::ReproduceThm33 => reproduce(cfg, "thm33", [Flag::Yes, Flag::Yes, Flag::No]),
        Command::Diagnose => diagnose(cfg),
        Command::CmCheck => cm_check(cfg),
    }
}

fn file_stem(cfg: &RunConfig) -> String {
    match cfg.command {
        Command::Diagnose => format!("diagnose-{}", cfg.functional),
        c => c.name().to_string(),
    }
}

/// Writes the evidence in the configured format plus the config that
/// reproduces it, returning both paths.
pub fn write_outputs(cfg: &RunConfig, outcome: &Outcome) -> Result<[PathBuf; 2]> {
    std::fs::create_dir_all(&cfg.out)?;
    let stem = file_stem(cfg);
    let evidence = cfg.out.join(format!("{stem}.{}", cfg.format.extension()));
    match cfg.format {
        Format::Csv => std::fs::write(&evidence, &outcome.csv)?,
        Format::Md => std::fs::write(&evidence, &outcome.markdown)?,
    }
    let conf = cfg.out.join(format!("{stem}.config"));
    std::fs::write(&conf, cfg.to_text())?;
    Ok([evidence, conf])
}

/// Parses `args` (program name first), runs and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (command, args) = match &cli.command {
        Sub::ReproduceThm31(a) => (Command::ReproduceThm31, a),
        Sub::ReproduceThm33(a) => (Command::ReproduceThm33, a),
        Sub::Diagnose(a) => (Command::Diagnose, a),
        Sub::CmCheck(a) => (Command::CmCheck, a),
    };
    let result = build_config(command, args).and_then(|cfg| {
        let outcome = evaluate(&cfg)?;
        let paths = write_outputs(&cfg, &outcome)?;
        Ok((outcome, paths))
    });
    match result {
        Ok((outcome, paths)) => {
            print!("{}", outcome.summary);
            for p in paths {
                println!("wrote {}", p.display());
            }
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("malliavin-lab: {e}");
            EXIT_USAGE
        }
    }
}

/// 1 if a flag contradicts `expected`, 2 if one is Unknown, else 0.
fn judge(report: &MembershipReport, expected: [Flag; 3]) -> (i32, String) {
    if !report.contradictions.is_empty() {
        return (EXIT_CONTRADICTION, "inclusion chain violated".to_string());
    }
    let got = report.chain();
    if got.iter().zip(&expected).any(|(g, e)| *g != Flag::Unknown && g != e) {
        return (
            EXIT_CONTRADICTION,
            format!("expected {}, got {}", show(&expected), show(&got)),
        );
    }
    if got.contains(&Flag::Unknown) {
        return (EXIT_INCONCLUSIVE, format!("inconclusive: {}", show(&got)));
    }
    (EXIT_OK, format!("established: {}", show(&got)))
}

fn show(flags: &[Flag; 3]) -> String {
    format!("D^{{1,p}} {}, SSGD_p(p) {}, D^{{1,p+}} {}", flags[0], flags[1], flags[2])
}

fn membership(cfg: &RunConfig) -> Result<(MembershipReport, Vec<EvidenceRow>)> {
    let f = catalog_functional(&cfg.functional, &cfg.catalog_params())?;
    let m = cfg.membership()?;
    let report = crate::diagnostics::membership_report(&f, &m)?;
    let mut extra = Vec::new();
    let qs = cfg.extra_qs();
    if !qs.is_empty() {
        for &h in &m.h_values {
            let t = lq_table(&f, Quantity::Quotient, h, &qs, &m.grid, &m.settings)?;
            extra.extend(t.rows.iter().map(EvidenceRow::from_lq));
        }
    }
    Ok((report, extra))
}

fn render(title: &str, report: &MembershipReport, extra: &[EvidenceRow], code: i32, status: String) -> Result<Outcome> {
    let rows = report::membership_rows(report, extra);
    let status = format!("{status} (exit {code})");
    Ok(Outcome {
        exit_code: code,
        csv: csv_bytes(&rows)?,
        markdown: report::membership_markdown(title, report, &rows, &status),
        summary: format!("{}{status}\n", report::chain_summary(report)),
    })
}

fn reproduce(cfg: &RunConfig, name: &str, expected: [Flag; 3]) -> Result<Outcome> {
    if cfg.functional != name {
        return Err(Error::param(
            "functional",
            format!("{} always uses '{name}', got '{}'", cfg.command, cfg.functional),
        ));
    }
    let (report, extra) = membership(cfg)?;
    let (mut code, mut status) = judge(&report, expected);
    if name == "thm31" && code != EXIT_CONTRADICTION {
        // The intermediate exponent must stay bounded along every direction.
        let mid = 0.5 * (1.0 + cfg.p);
        let rows: Vec<_> = cfg
            .h_values
            .iter()
            .flat_map(|&h| report.table.select(Quantity::Quotient, h, mid))
            .collect();
        if rows.iter().any(|r| r.verdict.is_diverged()) {
            code = EXIT_CONTRADICTION;
            status = format!("E|X_eps|^{mid} diverged");
        } else if rows.iter().any(|r| r.verdict.is_inconclusive()) {
            code = EXIT_INCONCLUSIVE;
            status = format!("E|X_eps|^{mid} inconclusive");
        }
    }
    render(&format!("{} report", cfg.command), &report, &extra, code, status)
}

fn diagnose(cfg: &RunConfig) -> Result<Outcome> {
    if cfg.functional.is_empty() {
        return Err(Error::param("functional", "diagnose needs --functional"));
    }
    let (report, extra) = membership(cfg)?;
    let (code, status) = if !report.contradictions.is_empty() {
        (EXIT_CONTRADICTION, "inclusion chain violated".to_string())
    } else if report.chain().contains(&Flag::Unknown) {
        (EXIT_INCONCLUSIVE, format!("inconclusive: {}", show(&report.chain())))
    } else {
        (EXIT_OK, format!("decided: {}", show(&report.chain())))
    };
    render(&format!("Membership report for {}", cfg.functional), &report, &extra, code, status)
}

/// `const:v` or `cells:d1,d2,...` on `[0, 1]`.
fn parse_direction(spec: &str) -> Result<CameronMartinDirection> {
    let bad = || Error::param("dir", format!("expected const:v or cells:d1,d2,..., got '{spec}'"));
    let (kind, rest) = spec.trim().split_once(':').ok_or_else(bad)?;
    let values = rest
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<Vec<f64>>>()?;
    match (kind.trim(), values.as_slice()) {
        ("const", [v]) => CameronMartinDirection::constant(1.0, *v),
        ("cells", d) if !d.is_empty() => CameronMartinDirection::uniform_cells(1.0, d.to_vec()),
        _ => Err(bad()),
    }
}

/// `(Z, h)` from the polynomial and direction specs. Variables missing from
/// the polynomial are padded so every direction has a coordinate.
pub fn cylindrical_from_specs(poly: &str, dir: &str) -> Result<(CylindricalFunctional, CameronMartinDirection)> {
    let dirs = dir
        .split(';')
        .map(parse_direction)
        .collect::<Result<Vec<_>>>()?;
    let p: Polynomial = poly.parse()?;
    if p.vars() > dirs.len() {
        return Err(Error::param(
            "poly",
            format!("uses {} variables but only {} directions were given", p.vars(), dirs.len()),
        ));
    }
    let n = dirs.len();
    let padded = Polynomial::from_terms(
        n,
        p.terms().map(|(e, c)| {
            let mut e = e.to_vec();
            e.resize(n, 0);
            (e, c)
        }),
    );
    let h = dirs[0].clone();
    Ok((CylindricalFunctional::new(dirs, padded)?, h))
}

fn cm_check(cfg: &RunConfig) -> Result<Outcome> {
    let (z, h) = cylindrical_from_specs(&cfg.poly, &cfg.dir)?;
    let check = cameron_martin_check(&z, &h, cfg.n_samples, cfg.seed)?;
    let (code, status) = if check.agrees() {
        (EXIT_OK, "sides agree within 3(SE_lhs + SE_rhs)")
    } else {
        (EXIT_CONTRADICTION, "sides differ by more than 3(SE_lhs + SE_rhs)")
    };
    let status = format!("{status} (exit {code})");
    Ok(Outcome {
        exit_code: code,
        csv: csv_bytes(&report::cm_rows(&check))?,
        markdown: report::cm_markdown(&cfg.poly, &cfg.dir, cfg.n_samples, cfg.seed, &check, &status),
        summary: format!(
            "lhs = {:.6} ± {:.2e}\nrhs = {:.6} ± {:.2e}\n{status}\n",
            check.lhs.mean, check.lhs.std_error, check.rhs.mean, check.rhs.std_error
        ),
    })
}
