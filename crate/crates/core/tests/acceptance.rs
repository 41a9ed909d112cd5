//! Acceptance criteria. Each test writes one PASS/FAIL line to stderr
//! (bypassing the test harness's output capture) and then asserts.

mod common;

use std::io::Write;
use std::sync::OnceLock;
use std::time::Instant;

use common::{audit, erlang_c_wait, more_patient, random_small_config, till_only, traced};
use floorsim::results::{argmax, write_rows, Kpi, ResultRow, Stats};
use floorsim::scenario::{
    preset, run_replication, run_replication_traced, run_replications, run_sweep, Department, ExperimentResult,
    SweepSpec,
};
use floorsim::Execution;

fn verdict(criterion: u32, name: &str, pass: bool, detail: &str) {
    let line = format!(
        "[acceptance] criterion {criterion} {:<4} {name}: {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
}

fn csv_bytes(config: &floorsim::scenario::ScenarioConfig, mode: Execution) -> Vec<u8> {
    let reports = run_replications(config, mode).unwrap();
    let rows: Vec<ResultRow> = reports.iter().enumerate().map(|(i, r)| ResultRow::from_report(0, i as u32, r)).collect();
    let mut out = Vec::new();
    write_rows(&mut out, &rows).unwrap();
    out
}

#[test]
fn criterion_1_determinism() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for dept in Department::ALL {
        let cfg = preset(dept);
        let first = csv_bytes(&cfg, Execution::default());
        let second = csv_bytes(&cfg, Execution::default());
        let sequential = csv_bytes(&cfg, Execution::Sequential);
        if first != second {
            failures.push(format!("{dept}: repeated run differs"));
        }
        if first != sequential {
            failures.push(format!("{dept}: sequential run differs"));
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed.as_secs() < 60;
    let detail = if failures.is_empty() {
        format!("both presets byte-identical across runs and execution modes ({elapsed:.1?})")
    } else {
        failures.join("; ")
    };
    verdict(1, "determinism", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_2_erlang_c() {
    let (lambda, mu, c) = (1.0, 0.7, 2);
    let expected = erlang_c_wait(lambda, mu, c);
    let cfg = till_only(lambda, mu, c);
    assert_eq!((cfg.weeks, cfg.warmup_weeks), (10, 1));
    let (mut total, mut n) = (0.0, 0u64);
    for rep in 0..10 {
        let r = run_replication(&cfg, rep).unwrap();
        total += r.till_wait.mean * r.till_wait.count as f64;
        n += r.till_wait.count;
    }
    let got = total / n as f64;
    let rel = (got - expected).abs() / expected;
    let pass = rel < 0.05;
    let detail = format!("simulated mean till wait {got:.4} vs Erlang-C {expected:.4} min ({:.2}% off, {n} waits)", rel * 100.0);
    verdict(2, "Erlang-C M/M/2", pass, &detail);
    assert!(pass, "{detail}");
}

fn till_sweep(dept: Department) -> &'static ExperimentResult {
    static ATV: OnceLock<ExperimentResult> = OnceLock::new();
    static WW: OnceLock<ExperimentResult> = OnceLock::new();
    let cell = match dept {
        Department::AudioTv => &ATV,
        Department::WomensWear => &WW,
    };
    cell.get_or_init(|| {
        let mut spec = SweepSpec::tills(preset(dept));
        spec.replications = 20;
        run_sweep(&spec, Execution::default()).unwrap()
    })
}

fn interior_peak(result: &ExperimentResult) -> Result<String, String> {
    let summary = result.summary(Kpi::ServiceLevelIndex);
    let best = argmax(&summary).unwrap();
    let peak = summary.iter().find(|(a, _)| *a == best).unwrap().1;
    let (first, last) = (summary.first().unwrap(), summary.last().unwrap());
    let margin = |end: &(u32, Stats)| (peak.mean - end.1.mean, peak.se.max(end.1.se));
    let (m1, se1) = margin(first);
    let (m9, se9) = margin(last);
    let text = format!(
        "peak at {best} cashiers ({:.4}), +{m1:.4} over {} (se {se1:.4}), +{m9:.4} over {} (se {se9:.4})",
        peak.mean, first.0, last.0
    );
    if (2..=8).contains(&best) && m1 > se1 && m9 > se9 {
        Ok(text)
    } else {
        Err(text)
    }
}

#[test]
fn criterion_3_curvilinear_tills() {
    let mut pass = true;
    let mut parts = Vec::new();
    for dept in Department::ALL {
        let result = till_sweep(dept);
        assert_eq!(result.total_reports(), 9 * 20);
        match interior_peak(result) {
            Ok(t) => parts.push(format!("{dept}: {t}")),
            Err(t) => {
                pass = false;
                parts.push(format!("{dept}: {t}"));
            }
        }
    }
    let detail = parts.join("; ");
    verdict(3, "interior staffing peak", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_4_peak_ordering() {
    let peak = |d| argmax(&till_sweep(d).summary(Kpi::ServiceLevelIndex)).unwrap();
    let (atv, ww) = (peak(Department::AudioTv), peak(Department::WomensWear));
    let pass = atv <= ww;
    let detail = format!("A&TV peaks at {atv} cashiers, WW at {ww} (preset-dependent)");
    verdict(4, "department peak ordering", pass, &detail);
    assert!(pass, "{detail}");
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|&(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn criterion_5_expert_subtlety() {
    let mut spec = SweepSpec::experts(preset(Department::AudioTv));
    spec.replications = 20;
    let result = run_sweep(&spec, Execution::default()).unwrap();
    let summary = result.summary(Kpi::ServiceLevelIndex);
    assert_eq!(summary.iter().map(|s| s.0).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);

    let slope = least_squares_slope(&summary.iter().map(|(a, s)| (f64::from(*a), s.mean)).collect::<Vec<_>>());
    let means = summary.iter().map(|s| s.1.mean);
    let gap = means.clone().fold(f64::NEG_INFINITY, f64::max) - means.fold(f64::INFINITY, f64::min);
    // Equal group sizes: pooled variance is the mean of the arm variances.
    let pooled_sd = (summary.iter().map(|s| s.1.sd.powi(2)).sum::<f64>() / summary.len() as f64).sqrt();

    let pass = slope >= 0.0 && gap < 0.5 * pooled_sd;
    let detail = format!(
        "slope {slope:+.5} per expert, max gap {gap:.4} vs 0.5 x pooled sd {:.4}",
        0.5 * pooled_sd
    );
    verdict(5, "expert availability effect", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_6_invariant_suite() {
    const CASES: u64 = 100;
    let mut failures: Vec<String> = Vec::new();
    let mut served_diffs = Vec::new();
    let mut argmax_checks = 0;

    for case in 0..CASES {
        let cfg = random_small_config(case);

        // Conservation, staff conservation, edge audit, index linearity.
        let (report, trace) = traced(&cfg);
        if let Err(e) = audit(&cfg, &trace, &report) {
            failures.push(format!("case {case}: {e}"));
        }

        // Argmax stability under positive weight scaling.
        let mut spec = SweepSpec::tills(cfg.clone());
        spec.values = (0..=cfg.staffing.floor_staff()).collect();
        spec.replications = 2;
        let base = argmax(&run_sweep(&spec, Execution::Sequential).unwrap().summary(Kpi::ServiceLevelIndex));
        for k in [0.5, 4.0] {
            let mut scaled = spec.clone();
            scaled.base.weights = cfg.weights.scaled(k);
            let got = argmax(&run_sweep(&scaled, Execution::Sequential).unwrap().summary(Kpi::ServiceLevelIndex));
            argmax_checks += 1;
            if got != base {
                failures.push(format!("case {case}: argmax moved from {base:?} to {got:?} at k={k}"));
            }
        }

        // Reneging monotonicity, paired through common random numbers.
        let patient = more_patient(&cfg, 2.0);
        let served = |c| run_replication_traced(c, 0).unwrap().1.services.len() as f64;
        served_diffs.push(served(&patient) - served(&cfg));
    }

    let s = Stats::of(served_diffs);
    if s.mean + 2.0 * s.se < 0.0 {
        failures.push(format!("doubling patience lowered services served by {:.2} (se {:.2})", -s.mean, s.se));
    }

    let pass = failures.is_empty();
    let detail = if pass {
        format!(
            "{CASES} configs audited, {argmax_checks} scaled sweeps kept their argmax, doubling patience served {:+.2} (se {:.2}) more",
            s.mean, s.se
        )
    } else {
        failures.join("; ")
    };
    verdict(6, "invariant suite", pass, &detail);
    assert!(pass, "{detail}");
}
