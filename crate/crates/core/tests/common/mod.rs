#![allow(dead_code)]

use floorsim::agents::{legal_edge, CustomerProfile, ServiceTimes};
use floorsim::kernel::Distribution;
use floorsim::metrics::{KpiReport, SatisfactionWeights};
use floorsim::queuing::QueueRule;
use floorsim::scenario::{
    preset, run_replication, run_replication_traced, Arrivals, Department, OpeningSchedule, ScenarioConfig, Staffing,
    Trace,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Mean queueing delay of M/M/c, straight from the Erlang-C formula.
pub fn erlang_c_wait(lambda: f64, mu: f64, c: u32) -> f64 {
    let a = lambda / mu;
    let rho = a / f64::from(c);
    assert!(rho < 1.0, "unstable system");
    let mut term = 1.0; // a^k / k!
    let mut below = 0.0;
    for k in 0..c {
        if k > 0 {
            term *= a / f64::from(k);
        }
        below += term;
    }
    let top = term * a / f64::from(c) / (1.0 - rho); // a^c / c! / (1 - rho)
    let p_wait = top / (below + top);
    p_wait / (f64::from(c) * mu - lambda)
}

/// Everyone goes straight to a till and waits as long as it takes; the shop
/// never closes, so the till line is an M/M/c queue.
pub fn till_only(lambda: f64, mu: f64, cashiers: u32) -> ScenarioConfig {
    let mut cfg = preset(Department::AudioTv);
    cfg.name = "till only".into();
    cfg.preset = None;
    cfg.schedule = OpeningSchedule { days_per_week: 7, hours_per_day: 24.0 };
    cfg.weeks = 10;
    cfg.warmup_weeks = 1;
    cfg.arrivals = Arrivals { inter_arrival: Distribution::Exponential { rate: lambda } };
    cfg.staffing = Staffing { cashiers, sellers_normal: 0, sellers_expert: 0, managers: 0 };
    cfg.service_times.till = Distribution::Exponential { rate: mu };
    cfg.customers = CustomerProfile {
        browse_time: Distribution::constant(0.0),
        help_need: Distribution::constant(0.0),
        expert_help: Distribution::constant(0.0),
        help_patience: Distribution::constant(f64::INFINITY),
        till_patience: Distribution::constant(f64::INFINITY),
        purchase: Distribution::constant(1.0),
        till_after_help: Distribution::constant(1.0),
    };
    cfg.validate().unwrap();
    cfg
}

fn tri(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Distribution {
    let mut v = [rng.random_range(lo..hi), rng.random_range(lo..hi), rng.random_range(lo..hi)];
    v.sort_by(f64::total_cmp);
    Distribution::triangular(v[0], v[1], v[2])
}

fn probability(rng: &mut ChaCha8Rng) -> Distribution {
    match rng.random_range(0..3) {
        0 => Distribution::constant(rng.random_range(0.0..=1.0)),
        1 => tri(rng, 0.0, 1.0),
        _ => {
            let p = rng.random_range(0.0..=1.0);
            Distribution::Empirical { table: vec![(0.0, 1.0 - p), (1.0, p)] }
        }
    }
}

fn delay(rng: &mut ChaCha8Rng, scale: f64) -> Distribution {
    match rng.random_range(0..4) {
        0 => Distribution::exponential_mean(rng.random_range(0.2..2.0) * scale),
        1 => Distribution::constant(rng.random_range(0.0..2.0) * scale),
        _ => tri(rng, 0.0, 3.0 * scale),
    }
}

/// A small random scenario: a couple of short weeks, a handful of staff.
pub fn random_small_config(case: u64) -> ScenarioConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0000 + case);
    let mut staffing = Staffing {
        cashiers: rng.random_range(0..=3),
        sellers_normal: rng.random_range(0..=3),
        sellers_expert: rng.random_range(0..=2),
        managers: rng.random_range(0..=2),
    };
    if staffing.total() == 0 {
        staffing.cashiers = 1;
    }
    let weeks = rng.random_range(1..=3);
    let cfg = ScenarioConfig {
        preset: None,
        name: format!("random-{case}"),
        seed: rng.random(),
        replications: 1,
        weeks,
        warmup_weeks: rng.random_range(0..weeks),
        queue_rule: [QueueRule::Fifo, QueueRule::Lifo, QueueRule::ShortestDeadlineFirst][rng.random_range(0..3)],
        schedule: OpeningSchedule { days_per_week: rng.random_range(1..=3), hours_per_day: rng.random_range(1.0..4.0) },
        arrivals: Arrivals { inter_arrival: Distribution::exponential_mean(rng.random_range(0.3..3.0)) },
        staffing,
        service_times: ServiceTimes {
            till: delay(&mut rng, 1.0),
            help_normal: delay(&mut rng, 3.0),
            help_expert: delay(&mut rng, 3.0),
        },
        customers: CustomerProfile {
            browse_time: delay(&mut rng, 3.0),
            help_need: probability(&mut rng),
            expert_help: probability(&mut rng),
            help_patience: delay(&mut rng, 3.0),
            till_patience: delay(&mut rng, 2.0),
            purchase: probability(&mut rng),
            till_after_help: probability(&mut rng),
        },
        weights: SatisfactionWeights::default(),
    };
    cfg.validate().unwrap_or_else(|e| panic!("case {case}: {e}"));
    cfg
}

/// Same distribution family, every value multiplied by `k`.
pub fn scale(d: &Distribution, k: f64) -> Distribution {
    match d {
        Distribution::Exponential { rate } => Distribution::Exponential { rate: rate / k },
        Distribution::Triangular { min, mode, max } => Distribution::triangular(min * k, mode * k, max * k),
        Distribution::Empirical { table } => Distribution::Empirical { table: table.iter().map(|&(v, p)| (v * k, p)).collect() },
        Distribution::Constant { value } => Distribution::constant(value * k),
    }
}

pub fn more_patient(cfg: &ScenarioConfig, k: f64) -> ScenarioConfig {
    let mut out = cfg.clone();
    out.customers.help_patience = scale(&cfg.customers.help_patience, k);
    out.customers.till_patience = scale(&cfg.customers.till_patience, k);
    out
}

/// Every invariant a single traced replication must satisfy. Returns the
/// first violation found.
pub fn audit(cfg: &ScenarioConfig, trace: &Trace, report: &KpiReport) -> Result<(), String> {
    for w in trace.dispatched.windows(2) {
        if w[1].0 < w[0].0 {
            return Err(format!("clock went backwards: {:?}", w));
        }
    }
    for s in &trace.snapshots {
        if s.arrived != s.in_system + s.departed.total() {
            return Err(format!("customer conservation broken at t={}: {s:?}", s.time));
        }
        for role in 0..4 {
            if s.available[role] + s.serving[role] != s.headcount[role] {
                return Err(format!("staff conservation broken at t={} role {role}: {s:?}", s.time));
            }
        }
    }
    let last = trace.snapshots.last().ok_or("no final snapshot")?;
    if last.in_system != 0 {
        return Err(format!("{} customers never left", last.in_system));
    }
    for t in &trace.transitions {
        if !legal_edge(t.from, t.trigger, t.to) {
            return Err(format!("illegal edge {:?} --{:?}--> {:?}", t.from, t.trigger, t.to));
        }
    }
    for (role, sampled, served) in &trace.staff_time {
        if (sampled - served).abs() > 1e-6 * sampled.max(1.0) {
            return Err(format!("{role:?} busy {served} but sampled {sampled}"));
        }
    }
    for s in &trace.services {
        if s.started < s.requested {
            return Err(format!("service started before request: {s:?}"));
        }
    }
    if report.customers_arrived > last.arrived {
        return Err("report counts more arrivals than the trace".into());
    }
    for u in [report.utilization.cashier, report.utilization.seller_normal, report.utilization.seller_expert, report.utilization.manager] {
        if !(0.0..=1.0 + 1e-9).contains(&u) {
            return Err(format!("utilization {u} out of range"));
        }
    }
    // Index linearity: doubling and scaling by an odd factor.
    for k in [2.0, 0.5, 3.7] {
        let mut scaled = cfg.clone();
        scaled.weights = cfg.weights.scaled(k);
        let r = run_replication(&scaled, 0).map_err(|e| e.to_string())?;
        let want = k * report.service_level_index;
        if (r.service_level_index - want).abs() > 1e-9 * want.abs().max(1.0) {
            return Err(format!("index not linear: k={k} gives {} not {want}", r.service_level_index));
        }
    }
    Ok(())
}

pub fn traced(cfg: &ScenarioConfig) -> (KpiReport, Trace) {
    run_replication_traced(cfg, 0).unwrap()
}
