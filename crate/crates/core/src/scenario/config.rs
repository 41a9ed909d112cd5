//! Scenario files: TOML with nested sections, optionally layered on top of a
//! department preset. Unknown keys are rejected and every violation found is
//! reported together.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::presets::{preset, Department};
use crate::agents::{CustomerProfile, ServiceTimes, StaffRole};
use crate::error::ConfigError;
use crate::kernel::Distribution;
use crate::metrics::SatisfactionWeights;
use crate::queuing::QueueRule;

pub const MINUTES_PER_DAY: f64 = 24.0 * 60.0;
pub const MINUTES_PER_WEEK: f64 = 7.0 * MINUTES_PER_DAY;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpeningSchedule {
    pub days_per_week: u32,
    pub hours_per_day: f64,
}

impl OpeningSchedule {
    /// Opening instant of the `day`-th trading day (0-based).
    pub fn open_at(&self, day: u32) -> f64 {
        let week = day / self.days_per_week;
        let weekday = day % self.days_per_week;
        (week * 7 + weekday) as f64 * MINUTES_PER_DAY
    }

    pub fn close_at(&self, day: u32) -> f64 {
        self.open_at(day) + self.hours_per_day * 60.0
    }

    pub fn trading_days(&self, weeks: u32) -> u32 {
        self.days_per_week * weeks
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Staffing {
    pub cashiers: u32,
    pub sellers_normal: u32,
    pub sellers_expert: u32,
    pub managers: u32,
}

impl Staffing {
    pub fn count(&self, role: StaffRole) -> u32 {
        match role {
            StaffRole::Cashier => self.cashiers,
            StaffRole::SellerNormal => self.sellers_normal,
            StaffRole::SellerExpert => self.sellers_expert,
            StaffRole::SectionManager => self.managers,
        }
    }

    pub fn sellers(&self) -> u32 {
        self.sellers_normal + self.sellers_expert
    }

    /// Cashiers plus sellers; managers are not part of the floor headcount.
    pub fn floor_staff(&self) -> u32 {
        self.cashiers + self.sellers()
    }

    pub fn total(&self) -> u32 {
        self.floor_staff() + self.managers
    }

    /// Roles in roster order: cashiers first, managers last.
    pub fn roster(&self) -> impl Iterator<Item = StaffRole> + '_ {
        StaffRole::ALL
            .into_iter()
            .flat_map(move |role| std::iter::repeat_n(role, self.count(role) as usize))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arrivals {
    /// Minutes between successive arrivals while the shop is open.
    pub inter_arrival: Distribution,
}

/// Everything a replication needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<Department>,
    pub name: String,
    pub seed: u64,
    pub replications: u32,
    pub weeks: u32,
    pub warmup_weeks: u32,
    pub queue_rule: QueueRule,
    pub schedule: OpeningSchedule,
    pub arrivals: Arrivals,
    pub staffing: Staffing,
    pub service_times: ServiceTimes,
    pub customers: CustomerProfile,
    pub weights: SatisfactionWeights,
}

impl ScenarioConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serialises")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ConfigError { violations })
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let s = &self.schedule;
        if !(1..=7).contains(&s.days_per_week) {
            v.push(format!("schedule.days_per_week: must be in 1..=7, got {}", s.days_per_week));
        }
        if !(s.hours_per_day > 0.0 && s.hours_per_day <= 24.0) {
            v.push(format!("schedule.hours_per_day: must be in (0, 24], got {}", s.hours_per_day));
        }
        if self.weeks == 0 {
            v.push("weeks: run length must be > 0".to_string());
        }
        if self.warmup_weeks >= self.weeks.max(1) {
            v.push(format!(
                "warmup_weeks: must be less than weeks ({}), got {}",
                self.weeks, self.warmup_weeks
            ));
        }
        if self.replications == 0 {
            v.push("replications: must be > 0".to_string());
        }
        if self.staffing.total() == 0 {
            v.push("staffing: total staff must be > 0".to_string());
        }

        // Inter-arrival may be a constant +inf meaning "nobody comes".
        non_negative(&self.arrivals.inter_arrival, "arrivals.inter_arrival", &mut v);
        non_negative(&self.service_times.till, "service_times.till", &mut v);
        non_negative(&self.service_times.help_normal, "service_times.help_normal", &mut v);
        non_negative(&self.service_times.help_expert, "service_times.help_expert", &mut v);

        let c = &self.customers;
        non_negative(&c.browse_time, "customers.browse_time", &mut v);
        non_negative(&c.help_patience, "customers.help_patience", &mut v);
        non_negative(&c.till_patience, "customers.till_patience", &mut v);
        probability(&c.help_need, "customers.help_need", &mut v);
        probability(&c.expert_help, "customers.expert_help", &mut v);
        probability(&c.purchase, "customers.purchase", &mut v);
        probability(&c.till_after_help, "customers.till_after_help", &mut v);

        v.extend(self.weights.violations());
        v
    }
}

fn non_negative(d: &Distribution, field: &str, out: &mut Vec<String>) {
    let found = d.violations(field);
    if found.is_empty() && d.support().0 < 0.0 {
        out.push(format!("{field}: values must be non-negative"));
    }
    out.extend(found);
}

fn probability(d: &Distribution, field: &str, out: &mut Vec<String>) {
    let found = d.violations(field);
    if found.is_empty() {
        if matches!(d, Distribution::Exponential { .. }) {
            out.push(format!("{field}: exponential is unbounded; a probability needs support in [0, 1]"));
        } else {
            let (lo, hi) = d.support();
            if lo < 0.0 || hi > 1.0 {
                out.push(format!("{field}: probability outside [0, 1] (support {lo}..{hi})"));
            }
        }
    }
    out.extend(found);
}

// On-disk shape: every key optional so a file can override a preset piecemeal.
// Counts are signed so negative input is reported by name instead of failing
// to parse.

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    preset: Option<String>,
    name: Option<String>,
    seed: Option<u64>,
    replications: Option<i64>,
    weeks: Option<i64>,
    warmup_weeks: Option<i64>,
    queue_rule: Option<QueueRule>,
    schedule: Option<ScheduleFile>,
    arrivals: Option<ArrivalsFile>,
    staffing: Option<StaffingFile>,
    service_times: Option<ServiceTimesFile>,
    customers: Option<CustomersFile>,
    weights: Option<WeightsFile>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleFile {
    days_per_week: Option<i64>,
    hours_per_day: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrivalsFile {
    inter_arrival: Option<Distribution>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct StaffingFile {
    cashiers: Option<i64>,
    sellers_normal: Option<i64>,
    sellers_expert: Option<i64>,
    managers: Option<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ServiceTimesFile {
    till: Option<Distribution>,
    help_normal: Option<Distribution>,
    help_expert: Option<Distribution>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CustomersFile {
    browse_time: Option<Distribution>,
    help_need: Option<Distribution>,
    expert_help: Option<Distribution>,
    help_patience: Option<Distribution>,
    till_patience: Option<Distribution>,
    purchase: Option<Distribution>,
    till_after_help: Option<Distribution>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsFile {
    served_immediately: Option<f64>,
    served_after_wait: Option<f64>,
    help_abandoned: Option<f64>,
    till_abandoned: Option<f64>,
    purchase_completed: Option<f64>,
    left_without_purchase: Option<f64>,
}

/// Collects missing-key and range violations while resolving a file.
struct Resolver<'a> {
    base: Option<&'a ScenarioConfig>,
    violations: Vec<String>,
}

impl<'a> Resolver<'a> {
    fn pick<T: Clone>(&mut self, value: Option<T>, from_base: impl FnOnce(&ScenarioConfig) -> T, field: &str) -> Option<T> {
        match value.or_else(|| self.base.map(from_base)) {
            Some(v) => Some(v),
            None => {
                self.violations.push(format!("{field}: missing (no preset to inherit from)"));
                None
            }
        }
    }

    fn count(&mut self, value: Option<i64>, from_base: impl FnOnce(&ScenarioConfig) -> u32, field: &str) -> Option<u32> {
        let raw = self.pick(value, |b| i64::from(from_base(b)), field)?;
        match u32::try_from(raw) {
            Ok(n) => Some(n),
            Err(_) => {
                // Carry on with a placeholder so the remaining checks still run.
                self.violations.push(format!("{field}: must be a non-negative integer, got {raw}"));
                Some(0)
            }
        }
    }
}

/// Parses a scenario document and validates the result.
pub fn load_and_validate(source: &str) -> Result<ScenarioConfig, ConfigError> {
    let file: ScenarioFile = toml::from_str(source).map_err(|e| ConfigError::single(e.message().trim().to_string()))?;

    let mut violations = Vec::new();
    let base = match file.preset.as_deref() {
        Some(name) => match name.parse::<Department>() {
            Ok(dept) => Some(preset(dept)),
            Err(e) => {
                violations.push(e);
                None
            }
        },
        None => None,
    };
    let mut r = Resolver { base: base.as_ref(), violations };

    let sched = file.schedule.unwrap_or_default();
    let arr = file.arrivals.unwrap_or_default();
    let staff = file.staffing.unwrap_or_default();
    let svc = file.service_times.unwrap_or_default();
    let cust = file.customers.unwrap_or_default();
    let w = file.weights.unwrap_or_default();

    let name = r.pick(file.name, |b| b.name.clone(), "name");
    let seed = r.pick(file.seed, |b| b.seed, "seed");
    let replications = r.count(file.replications, |b| b.replications, "replications");
    let weeks = r.count(file.weeks, |b| b.weeks, "weeks");
    let warmup_weeks = r.count(file.warmup_weeks, |b| b.warmup_weeks, "warmup_weeks");
    let queue_rule = file.queue_rule.or(base.as_ref().map(|b| b.queue_rule)).unwrap_or_default();
    let days_per_week = r.count(sched.days_per_week, |b| b.schedule.days_per_week, "schedule.days_per_week");
    let hours_per_day = r.pick(sched.hours_per_day, |b| b.schedule.hours_per_day, "schedule.hours_per_day");
    let inter_arrival = r.pick(arr.inter_arrival, |b| b.arrivals.inter_arrival.clone(), "arrivals.inter_arrival");
    let cashiers = r.count(staff.cashiers, |b| b.staffing.cashiers, "staffing.cashiers");
    let sellers_normal = r.count(staff.sellers_normal, |b| b.staffing.sellers_normal, "staffing.sellers_normal");
    let sellers_expert = r.count(staff.sellers_expert, |b| b.staffing.sellers_expert, "staffing.sellers_expert");
    // A department without a manager is a normal thing to write down.
    let managers = r.count(staff.managers.or(r.base.is_none().then_some(0)), |b| b.staffing.managers, "staffing.managers");
    let till = r.pick(svc.till, |b| b.service_times.till.clone(), "service_times.till");
    let help_normal = r.pick(svc.help_normal, |b| b.service_times.help_normal.clone(), "service_times.help_normal");
    let help_expert = match (svc.help_expert, &help_normal) {
        (Some(d), _) => Some(d),
        (None, _) if r.base.is_some() => r.pick(None, |b| b.service_times.help_expert.clone(), "service_times.help_expert"),
        (None, hn) => hn.clone(),
    };
    let browse_time = r.pick(cust.browse_time, |b| b.customers.browse_time.clone(), "customers.browse_time");
    let help_need = r.pick(cust.help_need, |b| b.customers.help_need.clone(), "customers.help_need");
    let expert_help = r.pick(cust.expert_help, |b| b.customers.expert_help.clone(), "customers.expert_help");
    let help_patience = r.pick(cust.help_patience, |b| b.customers.help_patience.clone(), "customers.help_patience");
    let till_patience = r.pick(cust.till_patience, |b| b.customers.till_patience.clone(), "customers.till_patience");
    let purchase = r.pick(cust.purchase, |b| b.customers.purchase.clone(), "customers.purchase");
    let till_after_help = r
        .pick(cust.till_after_help, |b| b.customers.till_after_help.clone(), "customers.till_after_help");

    let defaults = base.as_ref().map(|b| b.weights).unwrap_or_default();
    let weights = SatisfactionWeights {
        served_immediately: w.served_immediately.unwrap_or(defaults.served_immediately),
        served_after_wait: w.served_after_wait.unwrap_or(defaults.served_after_wait),
        help_abandoned: w.help_abandoned.unwrap_or(defaults.help_abandoned),
        till_abandoned: w.till_abandoned.unwrap_or(defaults.till_abandoned),
        purchase_completed: w.purchase_completed.unwrap_or(defaults.purchase_completed),
        left_without_purchase: w.left_without_purchase.unwrap_or(defaults.left_without_purchase),
    };

    let mut violations = r.violations;
    let resolved = (|| {
        Some(ScenarioConfig {
            preset: base.as_ref().and_then(|b| b.preset),
            name: name?,
            seed: seed?,
            replications: replications?,
            weeks: weeks?,
            warmup_weeks: warmup_weeks?,
            queue_rule,
            schedule: OpeningSchedule { days_per_week: days_per_week?, hours_per_day: hours_per_day? },
            arrivals: Arrivals { inter_arrival: inter_arrival? },
            staffing: Staffing {
                cashiers: cashiers?,
                sellers_normal: sellers_normal?,
                sellers_expert: sellers_expert?,
                managers: managers?,
            },
            service_times: ServiceTimes { till: till?, help_normal: help_normal?, help_expert: help_expert? },
            customers: CustomerProfile {
                browse_time: browse_time?,
                help_need: help_need?,
                expert_help: expert_help?,
                help_patience: help_patience?,
                till_patience: till_patience?,
                purchase: purchase?,
                till_after_help: till_after_help?,
            },
            weights,
        })
    })();

    match resolved {
        Some(config) => {
            violations.extend(config.violations());
            if violations.is_empty() {
                Ok(config)
            } else {
                Err(ConfigError { violations })
            }
        }
        None => Err(ConfigError { violations }),
    }
}

pub fn load_file(path: &Path) -> Result<ScenarioConfig, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io(path.display().to_string(), e.to_string()))?;
    load_and_validate(&text).map_err(LoadError::Invalid)
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {0}: {1}")]
    Io(String, String),
    #[error(transparent)]
    Invalid(ConfigError),
}
