use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::counterexamples::CatalogParams;
use crate::diagnostics::{EpsilonGrid, MembershipConfig};
use crate::error::{Error, Result};
use crate::quadrature::QuadSettings;

/// Environment variable holding the default output directory.
pub const OUT_ENV: &str = "MALLIAVIN_LAB_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    ReproduceThm31,
    ReproduceThm33,
    Diagnose,
    CmCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::ReproduceThm31 => "reproduce-thm31",
            Command::ReproduceThm33 => "reproduce-thm33",
            Command::Diagnose => "diagnose",
            Command::CmCheck => "cm-check",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Md,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Md => "md",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "md" => Ok(Format::Md),
            _ => Err(Error::param("format", format!("expected csv or md, got '{s}'"))),
        }
    }
}

/// Everything a run depends on. Serialises to `key=value` lines that
/// [`RunConfig::apply`] reads back, so a written config reproduces the run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub functional: String,
    pub a: f64,
    pub eta: f64,
    pub mu: f64,
    pub p: f64,
    /// Extra quotient exponents beyond `(1+p)/2` and `p`.
    pub qs: Vec<f64>,
    pub deltas: Vec<f64>,
    /// `ε = 2^{-k}` for `k` in this inclusive range.
    pub eps_grid: (u32, u32),
    pub h_values: Vec<f64>,
    pub atol: f64,
    pub rtol: f64,
    pub budget: usize,
    pub n_samples: usize,
    pub seed: u64,
    /// Polynomial in `x1, x2, ...` with `x_i = W(h_i)` (cm-check).
    pub poly: String,
    /// `;`-separated directions `h_1; h_2; ...`, each `const:v` or
    /// `cells:d1,d2,...` on `[0, 1]`; the shift is `h_1` (cm-check).
    pub dir: String,
    pub out: PathBuf,
    pub format: Format,
}

/// Keys in serialisation order.
pub const KEYS: [&str; 19] = [
    "command",
    "functional",
    "a",
    "eta",
    "mu",
    "p",
    "q",
    "delta",
    "eps-grid",
    "h",
    "atol",
    "rtol",
    "budget",
    "n-samples",
    "seed",
    "poly",
    "dir",
    "out",
    "format",
];

impl RunConfig {
    /// Defaults for `command`; the output directory comes from
    /// [`OUT_ENV`] when set.
    pub fn defaults(command: Command) -> Self {
        let catalog = CatalogParams::default();
        let q = QuadSettings::default();
        let (functional, h_values) = match command {
            Command::ReproduceThm31 => ("thm31", vec![1.0]),
            Command::ReproduceThm33 => ("thm33", vec![1.0, -1.0]),
            Command::Diagnose => ("", vec![1.0]),
            Command::CmCheck => ("", vec![1.0]),
        };
        RunConfig {
            command,
            functional: functional.to_string(),
            a: catalog.a,
            eta: catalog.eta,
            mu: catalog.mu,
            p: 2.0,
            qs: Vec::new(),
            deltas: vec![0.1, 0.5],
            eps_grid: (1, 8),
            h_values,
            atol: q.atol,
            rtol: q.rtol,
            budget: q.budget,
            n_samples: 100_000,
            seed: 0,
            poly: "x1^2".to_string(),
            dir: "const:1".to_string(),
            out: std::env::var_os(OUT_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from),
            format: Format::Csv,
        }
    }

    /// Sets one key from its textual value. `command` is accepted but must
    /// match the running command.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "command" => {
                if value != self.command.name() {
                    return Err(Error::param(
                        "command",
                        format!("config is for '{value}', running '{}'", self.command),
                    ));
                }
            }
            "functional" => self.functional = value.to_string(),
            "a" => self.a = number("a", value)?,
            "eta" => self.eta = number("eta", value)?,
            "mu" => self.mu = number("mu", value)?,
            "p" => self.p = number("p", value)?,
            "q" => self.qs = list("q", value)?,
            "delta" => self.deltas = list("delta", value)?,
            "eps-grid" => self.eps_grid = range(value)?,
            "h" => self.h_values = list("h", value)?,
            "atol" => self.atol = number("atol", value)?,
            "rtol" => self.rtol = number("rtol", value)?,
            "budget" => self.budget = integer("budget", value)?,
            "n-samples" => self.n_samples = integer("n-samples", value)?,
            "seed" => self.seed = integer("seed", value)?,
            "poly" => self.poly = value.to_string(),
            "dir" => self.dir = value.to_string(),
            "out" => self.out = PathBuf::from(value),
            "format" => self.format = value.parse()?,
            other => return Err(Error::Parse(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Applies a `key=value` file. Blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", n + 1)))?;
            self.apply(k.trim(), v)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn value_of(&self, key: &str) -> String {
        match key {
            "command" => self.command.name().to_string(),
            "functional" => self.functional.clone(),
            "a" => self.a.to_string(),
            "eta" => self.eta.to_string(),
            "mu" => self.mu.to_string(),
            "p" => self.p.to_string(),
            "q" => join(&self.qs),
            "delta" => join(&self.deltas),
            "eps-grid" => format!("{}..{}", self.eps_grid.0, self.eps_grid.1),
            "h" => join(&self.h_values),
            "atol" => format!("{:e}", self.atol),
            "rtol" => format!("{:e}", self.rtol),
            "budget" => self.budget.to_string(),
            "n-samples" => self.n_samples.to_string(),
            "seed" => self.seed.to_string(),
            "poly" => self.poly.clone(),
            "dir" => self.dir.clone(),
            "out" => self.out.display().to_string(),
            "format" => self.format.extension().to_string(),
            _ => String::new(),
        }
    }

    pub fn to_text(&self) -> String {
        KEYS.iter().map(|k| format!("{k}={}\n", self.value_of(k))).collect()
    }

    pub fn catalog_params(&self) -> CatalogParams {
        CatalogParams {
            a: self.a,
            eta: self.eta,
            mu: self.mu,
        }
    }

    pub fn settings(&self) -> Result<QuadSettings> {
        let s = QuadSettings {
            atol: self.atol,
            rtol: self.rtol,
            budget: self.budget,
            ..QuadSettings::default()
        };
        s.validate()?;
        Ok(s)
    }

    pub fn grid(&self) -> Result<EpsilonGrid> {
        EpsilonGrid::dyadic(self.eps_grid.0, self.eps_grid.1)
    }

    /// The membership inputs. The log-singular functional gets its
    /// uniform-integrability cap `η` and majorant range `(0, η + μ)`.
    pub fn membership(&self) -> Result<MembershipConfig> {
        let singular = self.functional == "thm33";
        let cfg = MembershipConfig {
            p: self.p,
            deltas: self.deltas.clone(),
            h_values: self.h_values.clone(),
            grid: self.grid()?,
            ui_eps_cap: singular.then_some(self.eta),
            majorant_upper: singular.then_some(self.eta + self.mu),
            settings: self.settings()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Exponents of the extra quotient tables.
    pub fn extra_qs(&self) -> Vec<f64> {
        let mid = 0.5 * (1.0 + self.p);
        self.qs.iter().copied().filter(|&q| q != mid && q != self.p).collect()
    }
}

fn number(name: &'static str, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::param(name, format!("not a number: '{s}'")))
}

fn integer<T: FromStr>(name: &'static str, s: &str) -> Result<T> {
    s.parse::<T>()
        .map_err(|_| Error::param(name, format!("not a nonnegative integer: '{s}'")))
}

fn list(name: &'static str, s: &str) -> Result<Vec<f64>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| number(name, t.trim())).collect()
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

/// `k1..k2`.
fn range(s: &str) -> Result<(u32, u32)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::param("eps-grid", format!("expected k1..k2, got '{s}'")))?;
    Ok((integer("eps-grid", a.trim())?, integer("eps-grid", b.trim())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut c = RunConfig::defaults(Command::ReproduceThm33);
        c.apply("h", "1, -2.5").unwrap();
        c.apply("eps-grid", "2..6").unwrap();
        c.apply("atol", "1e-9").unwrap();
        let mut back = RunConfig::defaults(Command::ReproduceThm33);
        back.out = PathBuf::from("elsewhere");
        back.apply_text(&c.to_text()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = RunConfig::defaults(Command::Diagnose);
        assert!(c.apply("eps-grid", "3").is_err());
        assert!(c.apply("p", "two").is_err());
        assert!(c.apply("format", "json").is_err());
        assert!(c.apply("command", "cm-check").is_err());
        assert!(c.apply_text("nonsense").is_err());
        assert!(c.apply_text("colour=red").is_err());
        c.apply_text("# comment\n\np = 3\n").unwrap();
        assert_eq!(c.p, 3.0);
    }

    #[test]
    fn singular_functional_gets_its_cap() {
        let c = RunConfig::defaults(Command::ReproduceThm33);
        let m = c.membership().unwrap();
        assert_eq!(m.ui_eps_cap, Some(c.eta));
        assert_eq!(m.majorant_upper, Some(c.eta + c.mu));
        let d = RunConfig::defaults(Command::ReproduceThm31).membership().unwrap();
        assert_eq!(d.ui_eps_cap, None);
    }
}
