//! Runs configured suites and writes report files.

use std::fs;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{RunConfig, Suite};
use crate::error::{LabError, LabResult};
use crate::params_io::{param_cases, ParamCase};
use crate::report::{
    AsymptoticPoint, CaseRecord, CaseTiming, ResidualPoint, RunMetadata, SuiteReport, SuiteTiming, VerificationReport,
};
use crate::suites::{self, Partial};

pub const REPORT_FILE: &str = "report.json";
pub const METADATA_FILE: &str = "metadata.json";
pub const PLOT_ASYMPTOTICS_FILE: &str = "plot_asymptotics.csv";
pub const PLOT_RESIDUAL_FILE: &str = "plot_residual.csv";

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: VerificationReport,
    pub metadata: RunMetadata,
}

impl RunOutcome {
    /// 0 when every asserted case passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.pass {
            0
        } else {
            1
        }
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn run_suite(suite: Suite, cases: &[ParamCase], config: &RunConfig) -> (SuiteReport, SuiteTiming) {
    let start = Instant::now();
    let (s, tol) = (&config.settings, &config.tolerances);
    // Cases run in parallel; collect() keeps their order, so the report does not
    // depend on scheduling.
    let parts: Vec<(String, Partial, f64)> = if suite == Suite::Identities {
        let t = Instant::now();
        let p = suites::identities(s);
        vec![("sweep".to_string(), p, ms(t))]
    } else {
        cases
            .par_iter()
            .map(|c| {
                let t = Instant::now();
                let p = match suite {
                    Suite::Pde => suites::pde(c, s, tol),
                    Suite::Linearized => suites::linearized(c, s, tol),
                    Suite::Asymptotics => suites::asymptotics(c, s, tol),
                    Suite::Mass => suites::mass(c, s, tol),
                    Suite::TIntegrals => suites::t_integrals(c, s, tol),
                    Suite::Identities => unreachable!(),
                };
                (c.id.clone(), p, ms(t))
            })
            .collect()
    };
    let mut report = SuiteReport::new(suite);
    let mut timings = Vec::new();
    for (id, p, t) in parts {
        report.cases.extend(p.cases);
        report.residual_points.extend(p.residual_points);
        report.asymptotic_points.extend(p.asymptotic_points);
        timings.push(CaseTiming { case_id: id, runtime_ms: t });
    }
    (report.finish(), SuiteTiming { suite, runtime_ms: ms(start), cases: timings })
}

/// Runs every configured suite. Writes report files when `config.out` is set.
pub fn run(config: &RunConfig) -> LabResult<RunOutcome> {
    config.validate()?;
    let started_unix_s = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let start = Instant::now();
    let needs_params = config.suites.iter().any(|&s| s != Suite::Identities);
    let cases = if needs_params { param_cases(&config.params)? } else { Vec::new() };
    let mut suites = Vec::new();
    let mut timings = Vec::new();
    for &suite in &config.suites {
        let (r, t) = run_suite(suite, &cases, config);
        suites.push(r);
        timings.push(t);
    }
    let report = VerificationReport {
        pass: suites.iter().all(|s| s.pass),
        tolerances: config.tolerances.clone(),
        settings: config.settings.clone(),
        params: cases.iter().map(ParamCase::summary).collect(),
        suites,
    };
    let metadata = RunMetadata { started_unix_s, total_runtime_ms: ms(start), suites: timings };
    let outcome = RunOutcome { report, metadata };
    if let Some(dir) = &config.out {
        write_outputs(dir, &outcome)?;
    }
    Ok(outcome)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> LabResult<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| LabError::Json { path: path.into(), source })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| LabError::io(path, e))
}

fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> LabResult<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| LabError::io(path, e))
}

#[derive(Serialize)]
struct CaseRow<'a> {
    case_id: &'a str,
    quantity: &'a str,
    measured: f64,
    expected: f64,
    tolerance: f64,
    check: &'a str,
    pass: bool,
}

const CASE_HEADER: [&str; 7] = ["case_id", "quantity", "measured", "expected", "tolerance", "check", "pass"];

fn case_rows(cases: &[CaseRecord]) -> Vec<CaseRow<'_>> {
    cases
        .iter()
        .map(|c| CaseRow {
            case_id: &c.case_id,
            quantity: &c.quantity,
            measured: c.measured,
            expected: c.expected,
            tolerance: c.tolerance,
            check: match c.check {
                crate::report::Check::Within => "within",
                crate::report::Check::AtMost => "at_most",
                crate::report::Check::AtLeast => "at_least",
                crate::report::Check::Info => "info",
            },
            pass: c.pass,
        })
        .collect()
}

/// `report.json`, `metadata.json` and one `<suite>.csv` per suite.
pub fn write_outputs(dir: &Path, outcome: &RunOutcome) -> LabResult<()> {
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    write_json(&dir.join(REPORT_FILE), &outcome.report)?;
    write_json(&dir.join(METADATA_FILE), &outcome.metadata)?;
    for s in &outcome.report.suites {
        write_csv(&dir.join(format!("{}.csv", s.suite)), &CASE_HEADER, &case_rows(&s.cases))?;
    }
    Ok(())
}

pub fn load_report(dir: &Path) -> LabResult<VerificationReport> {
    let path = dir.join(REPORT_FILE);
    if !path.exists() {
        return Err(LabError::MissingReport(path));
    }
    let text = fs::read_to_string(&path).map_err(|e| LabError::io(&path, e))?;
    serde_json::from_str(&text).map_err(|source| LabError::Json { path, source })
}

#[derive(Serialize)]
struct AsymptoticRow<'a> {
    case_id: &'a str,
    m: usize,
    which: &'a str,
    r: f64,
    measured: f64,
    predicted: f64,
    rel_err: f64,
}

#[derive(Serialize)]
struct ResidualRow<'a> {
    case_id: &'a str,
    suite: &'a str,
    n: usize,
    seed: Option<u64>,
    which: &'a str,
    h: f64,
    max_residual: f64,
}

pub const ASYMPTOTIC_HEADER: [&str; 7] = ["case_id", "m", "which", "r", "measured", "predicted", "rel_err"];
pub const RESIDUAL_HEADER: [&str; 7] = ["case_id", "suite", "n", "seed", "which", "h", "max_residual"];

/// Writes tidy plot tables (error vs radius, residual vs spacing) next to the
/// report in `dir`. Suites without points produce header-only files.
pub fn emit_plot_data(dir: &Path) -> LabResult<()> {
    let report = load_report(dir)?;
    let asym: Vec<(&AsymptoticPoint, Suite)> = report
        .suites
        .iter()
        .flat_map(|s| s.asymptotic_points.iter().map(move |p| (p, s.suite)))
        .collect();
    let rows: Vec<AsymptoticRow> = asym
        .iter()
        .map(|(p, _)| AsymptoticRow {
            case_id: &p.case_id,
            m: p.m,
            which: &p.which,
            r: p.r,
            measured: p.measured,
            predicted: p.predicted,
            rel_err: p.rel_err,
        })
        .collect();
    write_csv(&dir.join(PLOT_ASYMPTOTICS_FILE), &ASYMPTOTIC_HEADER, &rows)?;
    let res: Vec<(&ResidualPoint, Suite)> = report
        .suites
        .iter()
        .flat_map(|s| s.residual_points.iter().map(move |p| (p, s.suite)))
        .collect();
    let rows: Vec<ResidualRow> = res
        .iter()
        .map(|(p, s)| ResidualRow {
            case_id: &p.case_id,
            suite: s.name(),
            n: p.n,
            seed: p.seed,
            which: &p.which,
            h: p.h,
            max_residual: p.max_residual,
        })
        .collect();
    write_csv(&dir.join(PLOT_RESIDUAL_FILE), &RESIDUAL_HEADER, &rows)
}
