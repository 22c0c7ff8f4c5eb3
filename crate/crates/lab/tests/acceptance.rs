//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Runs as a plain binary (no libtest harness) so every line is printed.

use std::time::Instant;

use num_complex::Complex64;
use toda_core::asymptotics::{first_frequency_check, kernel_signature_check, leading_coefficient_check};
use toda_core::residual::{pde_residual, GridSpec};
use toda_core::{ParamDirection, SolutionParams};
use toda_lab::config::{ParamsSource, RunConfig, Suite};
use toda_lab::report::VerificationReport;
use toda_lab::{emit_plot_data, run};

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Outcome {
    Outcome { pass, summary: summary.into() }
}

fn random(n: &[usize], count: u64, zero_coefficients: bool) -> ParamsSource {
    ParamsSource::Random { n: n.to_vec(), count, seed: 0, magnitude: 0.5, zero_coefficients }
}

fn run_suites(suites: &[Suite], params: ParamsSource) -> VerificationReport {
    let cfg = RunConfig { suites: suites.to_vec(), params, ..Default::default() };
    run(&cfg).expect("run").report
}

fn seeds() -> std::ops::Range<u64> {
    0..5
}

fn identities() -> Outcome {
    let t = Instant::now();
    let report = run_suites(&[Suite::Identities], random(&[1], 1, false));
    let secs = t.elapsed().as_secs_f64();
    let s = report.suite(Suite::Identities).unwrap();
    let asserted = s.cases.iter().filter(|c| c.asserted()).count();
    let per_m = report.settings.identity_n_count;
    outcome(
        s.pass && secs < 10.0 && per_m >= 10 && asserted == 19,
        format!("F(1..10), G(2..10) exact at {per_m} values of n each, {secs:.2} s"),
    )
}

fn liouville() -> Outcome {
    let (sp, _) = SolutionParams::new(1, &[0.5, 0.5], &[]).unwrap();
    let g = GridSpec::with_spacing(Complex64::new(0.0, 0.0), 2.0, 1e-2).unwrap();
    let r = pde_residual(&sp, &g).unwrap();
    let (max, ratio) = (r.max_residual(), r.ratio());
    outcome(max <= 1e-3 && (3.5..=4.5).contains(&ratio), format!("max residual {max:.3e} at h=1e-2, ratio {ratio:.3}"))
}

fn random_pde() -> Outcome {
    let report = run_suites(&[Suite::Pde], random(&[2, 3], 5, false));
    let orders: Vec<_> = report.suites[0].cases.iter().filter(|c| c.quantity == "residual order").collect();
    let (lo, hi) = orders.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, c| (a.0.min(c.measured), a.1.max(c.measured)));
    let pass = orders.len() == 10 && orders.iter().all(|c| (1.5..=2.5).contains(&c.measured));
    outcome(pass, format!("{} parameter sets, order estimates in [{lo:.3}, {hi:.3}]", orders.len()))
}

fn mass() -> Outcome {
    let cfg = RunConfig { suites: vec![Suite::Mass], params: random(&[1, 2, 3], 5, false), ..Default::default() };
    let out = run(&cfg).expect("run");
    let s = out.report.suite(Suite::Mass).unwrap();
    let worst = |q: &str| s.cases.iter().filter(|c| c.quantity.ends_with(q)).fold(0.0f64, |a, c| a.max(c.measured));
    let slowest = out.metadata.suites[0].cases.iter().fold(0.0f64, |a, c| a.max(c.runtime_ms)) / 1e3;
    outcome(
        s.pass && slowest < 60.0 && out.report.params.len() == 15,
        format!(
            "worst flux error {:.2e}, flux/quadrature gap {:.2e}, sum rule {:.2e}, slowest set {slowest:.2} s",
            worst(" flux"),
            worst("flux vs quadrature"),
            worst("sum rule")
        ),
    )
}

fn first_frequency() -> Outcome {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for n in 1..=3 {
        for seed in seeds() {
            let sp = SolutionParams::sample(n, seed, 0.5).unwrap();
            for m in 1..=n {
                let ff = first_frequency_check(&sp, m, (200.0, 400.0)).unwrap();
                worst = worst.max(ff.cos.error_richardson).max(ff.sin.error_richardson);
                checked += 2;
            }
        }
    }
    outcome(worst <= 0.02, format!("{checked} coefficients, worst relative error {worst:.2e}"))
}

fn second_frequency() -> Outcome {
    let mut worst_on = 0.0f64;
    let mut worst_off = 0.0f64;
    for n in 2..=3 {
        for seed in seeds() {
            let sp = SolutionParams::sample(n, seed, 0.5).unwrap();
            for j in 2..=n {
                for dir in [ParamDirection::Alpha2(j), ParamDirection::Beta2(j)] {
                    for m in 1..=n {
                        let k = kernel_signature_check(&sp, dir, m, (200.0, 400.0), 1e-4).unwrap();
                        if k.predicted == 0.0 {
                            worst_off = worst_off.max(k.error_outer);
                        } else {
                            worst_on = worst_on.max(k.error_outer);
                        }
                    }
                }
            }
        }
    }
    outcome(
        worst_on <= 0.03 && worst_off <= 0.03,
        format!("at r=400: worst relative error {worst_on:.2e}, worst off-pattern |coeff|/m(m+1) {worst_off:.2e}"),
    )
}

fn linearized() -> Outcome {
    let report = run_suites(&[Suite::Linearized], random(&[1, 2, 3], 1, false));
    let cases = &report.suites[0].cases;
    let orders: Vec<_> = cases.iter().filter(|c| c.quantity.ends_with(" order")).collect();
    // 2n + 2(n-1) directions for n = 1, 2, 3
    let order_ok = orders.len() == 2 + 6 + 10 && orders.iter().all(|c| c.pass);
    let mut parts = Vec::new();
    let mut bound_ok = true;
    for n in 1..=3 {
        let id = format!("n{n}-seed0");
        let worst = cases
            .iter()
            .filter(|c| c.case_id == id && c.quantity.ends_with("max residual"))
            .fold(0.0f64, |a, c| a.max(c.measured));
        bound_ok &= worst <= 1e-3;
        parts.push(format!("n={n} worst {worst:.2e}"));
    }
    let (lo, hi) = orders.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, c| (a.0.min(c.measured), a.1.max(c.measured)));
    outcome(
        order_ok && bound_ok,
        format!("{} directions, orders in [{lo:.3}, {hi:.3}]; max residual at h=1e-2: {}", orders.len(), parts.join(", ")),
    )
}

fn leading() -> Outcome {
    let mut worst = 0.0f64;
    let mut alt_min_decades = f64::INFINITY;
    for n in 1..=3 {
        for seed in seeds() {
            let sampled = SolutionParams::sample(n, seed, 0.5).unwrap();
            let (sp, _) = SolutionParams::new(n, sampled.lambdas(), &[]).unwrap();
            for m in 1..=n {
                let lc = leading_coefficient_check(&sp, m, 1e3).unwrap();
                worst = worst.max(lc.relative_error);
                alt_min_decades = alt_min_decades.min((lc.predicted / lc.alternative_measured).log10());
            }
        }
    }
    outcome(
        worst <= 0.01 && alt_min_decades >= 2.0,
        format!("worst relative error {worst:.2e}; exponent 2m(n+2-m) misses by >= {alt_min_decades:.1} decades"),
    )
}

fn t_integrals() -> Outcome {
    let report = run_suites(&[Suite::TIntegrals], random(&[2, 3], 5, false));
    let shrink: Vec<_> = report.suites[0].cases.iter().filter(|c| c.quantity.ends_with(" shrink")).collect();
    let min = shrink.iter().fold(f64::INFINITY, |a, c| a.min(c.measured));
    let errors = report.suites[0].cases.iter().filter(|c| !c.pass).count();
    // n=2: 1 l x 2 directions x 2 components; n=3: 2 x 2 x 2; five seeds each.
    outcome(
        shrink.len() == 5 * (4 + 8) && min >= 1.5 && errors == 0,
        format!("{} partial-integral sequences, smallest shrink factor per doubling {min:.2}", shrink.len()),
    )
}

fn determinism() -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut cfg = RunConfig { suites: Suite::ALL.to_vec(), params: random(&[1, 2], 1, false), ..Default::default() };
    cfg.settings.grid_h = 5e-2;
    cfg.settings.identity_m_max = 6;
    for d in &dirs {
        cfg.out = Some(d.path().to_path_buf());
        run(&cfg).expect("run");
        emit_plot_data(d.path()).expect("plot data");
    }
    let mut names: Vec<String> = std::fs::read_dir(dirs[0].path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n != "metadata.json")
        .collect();
    names.sort();
    let same = names.iter().all(|n| {
        let a = std::fs::read(dirs[0].path().join(n)).unwrap();
        let b = std::fs::read(dirs[1].path().join(n)).ok();
        Some(a) == b
    });
    outcome(same && names.len() == 9, format!("{} report files compared byte for byte", names.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("exact determinant identities", identities),
        ("Liouville residual", liouville),
        ("random-parameter PDE residual order", random_pde),
        ("mass quantization", mass),
        ("first-frequency expansion", first_frequency),
        ("second-frequency kernel signatures", second_frequency),
        ("linearized kernel residual", linearized),
        ("leading asymptotic coefficient", leading),
        ("T-integral finiteness", t_integrals),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!(
            "acceptance {:>2} {:<38} {}  {} ({:.1} s)",
            k + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.summary,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
