//! `galgauge` command-line harness: runs check suites, writes `report.json`,
//! and exits 0 when every check passes, 1 when any fails, 2 on bad input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use galgauge::harness::{emit_report, run_suites, Bound, SuiteConfig, SuiteReport, SUITES};

#[derive(Parser, Debug)]
#[command(
    name = "galgauge",
    version,
    about = "Galilei group and U(1) gauge verification harness"
)]
struct Cli {
    /// TOML configuration file; missing keys take their defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Directory for report.json, timings.json and CSV dumps.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Restricts `all` to the named suites; repeatable.
    #[arg(long, global = true, value_name = "NAME", value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
    suite: Vec<String>,
    /// Prints the effective configuration as TOML and exits.
    #[arg(long, global = true)]
    print_config: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Group law, representations D and C, Lie algebra, Lorentz control.
    GroupCheck,
    /// Projective law in position and momentum space for each cocycle variant.
    RepCheck,
    /// Global and local U(1) invariance and Noether currents.
    GaugeCheck,
    /// Field-equation residuals against their Maxwell specialisation.
    EomCheck,
    /// Galilean covariance of the coupled residuals.
    CovarianceCheck,
    /// Lattice Schrödinger and Maxwell evolution scenarios.
    Evolve,
    /// Every suite, or those selected with --suite.
    All,
}

impl Command {
    fn suites(self, filter: &[String]) -> Vec<&'static str> {
        match self {
            Command::GroupCheck => vec!["group"],
            Command::RepCheck => vec!["rep"],
            Command::GaugeCheck => vec!["gauge"],
            Command::EomCheck => vec!["eom"],
            Command::CovarianceCheck => vec!["covariance"],
            Command::Evolve => vec!["dynamics"],
            Command::All if filter.is_empty() => SUITES.to_vec(),
            Command::All => SUITES
                .iter()
                .copied()
                .filter(|s| filter.iter().any(|f| f == s))
                .collect(),
        }
    }
}

fn load_config(cli: &Cli) -> Result<SuiteConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => SuiteConfig::load(path).map_err(|e| e.to_string())?,
        None => SuiteConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn describe(bound: &Bound) -> String {
    match bound {
        Bound::Upper { tolerance } => format!("≤ {tolerance:e}"),
        Bound::Lower { threshold } => format!("> {threshold:e}"),
        Bound::Range { lo, hi } => format!("in [{lo}, {hi}]"),
    }
}

fn print_suite(report: &SuiteReport) {
    let verdict = if report.passed { "PASS" } else { "FAIL" };
    println!("[{verdict}] {}", report.name);
    for c in &report.checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        let error = c.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default();
        println!(
            "  {mark} {:<48} {:>12.3e}  {}{error}",
            c.name,
            c.value,
            describe(&c.bound)
        );
    }
    for (k, v) in &report.notes {
        println!("  note {k} = {v}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.print_config {
        print!("{}", cfg.to_toml());
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (try --help)");
        return ExitCode::from(2);
    };
    if !cli.suite.is_empty() && !matches!(command, Command::All) {
        eprintln!("error: --suite only applies to `all`");
        return ExitCode::from(2);
    }

    let names = command.suites(&cli.suite);
    let out = cli.out.as_path();
    let (reports, timings) = match run_suites(&names, &cfg, Some(out)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit_report(out, &cfg, &reports, &timings) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    for r in &reports {
        print_suite(r);
    }
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    println!("report written to {}", out.join("report.json").display());
    if failed.is_empty() {
        println!("all {} suite(s) passed", reports.len());
        ExitCode::SUCCESS
    } else {
        println!("failed suites: {}", failed.join(", "));
        ExitCode::from(1)
    }
}
