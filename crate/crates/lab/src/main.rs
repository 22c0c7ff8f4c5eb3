use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use toda_lab::{emit_plot_data, param_cases, run, LabError, LabResult, ParamsSource, RunConfig, Suite};

/// Verification driver for the SU(n+1) Toda solution family.
#[derive(Parser)]
#[command(name = "toda-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and write reports.
    Verify(VerifyArgs),
    /// Emit plot-ready CSV tables from an existing report directory.
    PlotData {
        /// Directory holding report.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the normalized parameter sets a config would use.
    ShowParams(ParamArgs),
}

#[derive(Args)]
struct ParamArgs {
    /// JSON RunConfig; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameter file (one set or a list); replaces random sampling.
    #[arg(long, conflicts_with_all = ["n", "seed", "count", "magnitude"])]
    params: Option<PathBuf>,
    /// Ranks to sample, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    count: Option<u64>,
    #[arg(long)]
    magnitude: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Suites to run (repeatable or comma separated). Defaults to all
    /// suites, or to the config's list when --config is given.
    #[arg(long, value_delimiter = ',', value_parser = parse_suite)]
    suite: Vec<Suite>,
    /// Outer radius R of the frequency probes; the pair is (R/2, R).
    #[arg(long)]
    radius: Option<f64>,
    /// Grid spacing for residual suites.
    #[arg(long)]
    grid_h: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = "toda-report")]
    out: PathBuf,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: LabError| e.to_string())
}

fn base_config(a: &ParamArgs) -> LabResult<(RunConfig, bool)> {
    let from_file = a.config.is_some();
    let mut cfg = match &a.config {
        Some(p) => RunConfig::from_json_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(p) = &a.params {
        cfg.params = ParamsSource::File(p.clone());
    } else if a.n.is_some() || a.seed.is_some() || a.count.is_some() || a.magnitude.is_some() {
        let (mut n, mut count, mut seed, mut magnitude, mut zero) = (vec![1, 2, 3], 1, 0, 0.5, false);
        if let ParamsSource::Random { n: n0, count: c0, seed: s0, magnitude: m0, zero_coefficients: z0 } = &cfg.params {
            (n, count, seed, magnitude, zero) = (n0.clone(), *c0, *s0, *m0, *z0);
        }
        cfg.params = ParamsSource::Random {
            n: a.n.clone().unwrap_or(n),
            count: a.count.unwrap_or(count),
            seed: a.seed.unwrap_or(seed),
            magnitude: a.magnitude.unwrap_or(magnitude),
            zero_coefficients: zero,
        };
    }
    Ok((cfg, from_file))
}

fn verify(a: &VerifyArgs) -> LabResult<i32> {
    let (mut cfg, from_file) = base_config(&a.params)?;
    if !a.suite.is_empty() {
        cfg.suites = a.suite.clone();
    } else if !from_file {
        cfg.suites = Suite::ALL.to_vec();
    }
    if let Some(r) = a.radius {
        cfg.settings.radius_pair = (r / 2.0, r);
    }
    if let Some(h) = a.grid_h {
        cfg.settings.grid_h = h;
    }
    cfg.out = Some(a.out.clone());
    let outcome = run(&cfg)?;
    for s in &outcome.report.suites {
        let asserted = s.cases.iter().filter(|c| c.asserted()).count();
        let failed = s.failures().count();
        println!("{:<12} {} ({} checks, {} failed)", s.suite.name(), if s.pass { "PASS" } else { "FAIL" }, asserted, failed);
        for f in s.failures() {
            println!("  {} {}: measured {} tolerance {}", f.case_id, f.quantity, f.measured, f.tolerance);
        }
    }
    println!("report written to {}", a.out.display());
    Ok(outcome.exit_code())
}

fn show_params(a: &ParamArgs) -> LabResult<i32> {
    let (cfg, _) = base_config(a)?;
    cfg.validate()?;
    let summaries: Vec<_> = param_cases(&cfg.params)?.iter().map(|c| c.summary()).collect();
    let text = serde_json::to_string_pretty(&summaries).expect("summaries serialize");
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => verify(a),
        Command::PlotData { out } => emit_plot_data(out).map(|_| 0),
        Command::ShowParams(a) => show_params(a),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
