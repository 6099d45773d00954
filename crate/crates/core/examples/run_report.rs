//! Builds a run configuration in code, evaluates it and prints the CSV
//! evidence that `malliavin-lab reproduce-thm31` would write.
//!
//! ```text
//! cargo run --release --example run_report
//! ```

use malliavin_lab::cli::{evaluate, Command, RunConfig};

fn main() -> malliavin_lab::Result<()> {
    let mut cfg = RunConfig::defaults(Command::ReproduceThm31);
    cfg.apply("eps-grid", "1..4")?;
    cfg.apply("delta", "0.1")?;
    print!("{}", cfg.to_text());
    let out = evaluate(&cfg)?;
    println!("\n{}", out.summary);
    print!("{}", String::from_utf8_lossy(&out.csv));
    Ok(())
}
