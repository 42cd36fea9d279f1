//! Command-line front end.
//!
//! Exit codes: 0 all checks pass; 1 at least one check failed; 2 parse,
//! configuration, or I/O error; 3 numeric anomaly (NaN/Inf residual).

use clap::{Args, Parser, Subcommand, ValueEnum};
use prepotentials::report::write_csv;
use prepotentials::runner::{run_scenario, RunOutcome};
use prepotentials::scenario::{load_scenario, parse_scenario, Scenario, CATALOG};
use prepotentials_cli::{oracle, EXIT_ANOMALY, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_PASS};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "prepotentials",
    version,
    about = "Construct massless fields of spin 0..2 from pre-potentials and certify \
             the field equations numerically at sampled points"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one scenario file and emit a residual report
    Verify(VerifyArgs),
    /// List the shipped catalog scenarios
    ListCatalog,
    /// Run a shipped catalog scenario by name, or `all`
    RunCatalog { name: String },
    /// Re-check every pre-potential's jet coefficients against the
    /// finite-difference oracle at sampled points
    Oracle {
        scenario: PathBuf,
        /// points to sample (defaults to a small independent batch)
        #[arg(long, default_value_t = 16)]
        count: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct VerifyArgs {
    scenario: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// override the scenario's sample count
    #[arg(long)]
    count: Option<usize>,
    /// override the scenario's seed
    #[arg(long)]
    seed: Option<u64>,
    /// override the base relative tolerance
    #[arg(long)]
    tolerance: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::ListCatalog => cmd_list_catalog(),
        Cmd::RunCatalog { name } => cmd_run_catalog(&name),
        Cmd::Oracle { scenario, count } => oracle::cmd_oracle(&scenario, count),
    };
    ExitCode::from(code)
}

fn apply_overrides(s: &mut Scenario, args: &VerifyArgs) -> Result<(), String> {
    if let Some(count) = args.count {
        if count == 0 {
            return Err("--count must be >= 1".into());
        }
        s.sampling.count = count;
    }
    if let Some(seed) = args.seed {
        s.sampling.seed = seed;
    }
    if let Some(tol) = args.tolerance {
        // rejects NaN too, not just non-positive values
        if tol.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err("--tolerance must be positive".into());
        }
        s.tol.rel = tol;
    }
    Ok(())
}

fn emit(out: &RunOutcome, s: &Scenario, format: Format, dest: Option<&Path>) -> Result<(), String> {
    let payload = match format {
        Format::Json => out.report.to_json().into_bytes(),
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&mut buf, s.chart.coords(), &out.rows)
                .map_err(|e| format!("serializing CSV: {e}"))?;
            buf
        }
    };
    match dest {
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&payload)
                .map_err(|e| format!("writing report to stdout: {e}"))
        }
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| format!("writing report to {}: {e}", path.display())),
    }
}

fn run_and_code(s: &Scenario) -> (Option<RunOutcome>, u8) {
    match run_scenario(s) {
        Err(e) => {
            eprintln!("error: {e}");
            (None, EXIT_CONFIG)
        }
        Ok(out) => {
            let code = if out.anomaly {
                EXIT_ANOMALY
            } else if !out.report.overall_pass {
                EXIT_CHECK_FAILED
            } else {
                EXIT_PASS
            };
            (Some(out), code)
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> u8 {
    let mut s = match load_scenario(&args.scenario) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    if let Err(msg) = apply_overrides(&mut s, &args) {
        eprintln!("error: {msg}");
        return EXIT_CONFIG;
    }
    let (out, code) = run_and_code(&s);
    if let Some(out) = out {
        if let Err(msg) = emit(&out, &s, args.format, args.out.as_deref()) {
            eprintln!("error: {msg}");
            return EXIT_CONFIG;
        }
    }
    code
}

fn cmd_list_catalog() -> u8 {
    for (name, text) in CATALOG {
        let chart = parse_scenario(text)
            .map(|s| s.chart.name)
            .unwrap_or("<broken>");
        println!("{name}  [{chart}]");
    }
    EXIT_PASS
}

fn cmd_run_catalog(name: &str) -> u8 {
    let selected: Vec<&(&str, &str)> = if name == "all" {
        CATALOG.iter().collect()
    } else {
        match CATALOG.iter().find(|(n, _)| *n == name) {
            Some(entry) => vec![entry],
            None => {
                eprintln!("error: no catalog scenario named `{name}`");
                return EXIT_CONFIG;
            }
        }
    };
    let mut worst = EXIT_PASS;
    for (nm, text) in selected {
        let s = match parse_scenario(text) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: catalog entry {nm}: {e}");
                return EXIT_CONFIG;
            }
        };
        let (out, code) = run_and_code(&s);
        if let Some(out) = &out {
            let max_rel = out
                .report
                .checks
                .iter()
                .map(|c| c.max_rel)
                .fold(0.0f64, f64::max);
            println!(
                "{nm}: {} ({} checks, {} points, max_rel {:.3e}, {:.2}s)",
                if code == EXIT_PASS { "PASS" } else { "FAIL" },
                out.report.checks.len(),
                s.sampling.count,
                max_rel,
                out.report.runtime_seconds,
            );
        }
        worst = worst.max(code);
    }
    worst
}
