//! Department presets.
//!
//! Audio & TV is advice-heavy: most customers want help and help takes a
//! while. WomensWear sees more traffic, needs less advice and turns tills over
//! faster and converts more browsers into buyers. Only the expert-help
//! probabilities (10% and 5%) come from staff reports; every other number is a
//! calibration choice and can be overridden in a scenario file.
//!
//! Both floors run busy (sellers about 70% utilised at the base staffing), which
//! is what makes the cashier/seller split matter: on a quiet floor sellers
//! cover the tills and any split looks the same.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::{Arrivals, OpeningSchedule, ScenarioConfig, Staffing};
use crate::agents::{CustomerProfile, ServiceTimes};
use crate::kernel::Distribution;
use crate::metrics::SatisfactionWeights;
use crate::queuing::QueueRule;

/// Floor headcount held constant across the staffing experiments.
pub const FLOOR_STAFF: u32 = 10;
pub const DEFAULT_REPLICATIONS: u32 = 20;
pub const DEFAULT_WEEKS: u32 = 10;
pub const DEFAULT_WARMUP_WEEKS: u32 = 1;
pub const DEFAULT_SEED: u64 = 20_070_205;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Department {
    #[serde(rename = "atv", alias = "A&TV")]
    AudioTv,
    #[serde(rename = "ww", alias = "WW")]
    WomensWear,
}

impl Department {
    pub const ALL: [Department; 2] = [Department::AudioTv, Department::WomensWear];

    pub fn key(self) -> &'static str {
        match self {
            Department::AudioTv => "atv",
            Department::WomensWear => "ww",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Department::AudioTv => "A&TV",
            Department::WomensWear => "WW",
        }
    }
}

impl fmt::Display for Department {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Department {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "atv" | "a&tv" | "audio-tv" => Ok(Department::AudioTv),
            "ww" | "womenswear" => Ok(Department::WomensWear),
            _ => Err(format!("preset: unknown department '{s}' (expected atv or ww)")),
        }
    }
}

pub fn preset(dept: Department) -> ScenarioConfig {
    let schedule = OpeningSchedule { days_per_week: 6, hours_per_day: 9.0 };
    match dept {
        Department::AudioTv => ScenarioConfig {
            preset: Some(dept),
            name: "Audio & TV".to_string(),
            seed: DEFAULT_SEED,
            replications: DEFAULT_REPLICATIONS,
            weeks: DEFAULT_WEEKS,
            warmup_weeks: DEFAULT_WARMUP_WEEKS,
            queue_rule: QueueRule::Fifo,
            schedule,
            arrivals: Arrivals { inter_arrival: Distribution::exponential_mean(1.0) },
            staffing: Staffing { cashiers: 2, sellers_normal: 7, sellers_expert: 1, managers: 2 },
            service_times: ServiceTimes {
                till: Distribution::triangular(1.0, 2.0, 4.0),
                help_normal: Distribution::triangular(3.0, 8.0, 20.0),
                help_expert: Distribution::triangular(3.0, 8.0, 20.0),
            },
            customers: CustomerProfile {
                browse_time: Distribution::triangular(2.0, 8.0, 20.0),
                help_need: Distribution::triangular(0.4, 0.6, 0.8),
                expert_help: Distribution::constant(0.10),
                help_patience: Distribution::triangular(5.0, 15.0, 30.0),
                till_patience: Distribution::triangular(2.0, 5.0, 15.0),
                purchase: Distribution::triangular(0.3, 0.5, 0.7),
                till_after_help: Distribution::constant(0.7),
            },
            weights: SatisfactionWeights::default(),
        },
        Department::WomensWear => ScenarioConfig {
            preset: Some(dept),
            name: "WomensWear".to_string(),
            seed: DEFAULT_SEED,
            replications: DEFAULT_REPLICATIONS,
            weeks: DEFAULT_WEEKS,
            warmup_weeks: DEFAULT_WARMUP_WEEKS,
            queue_rule: QueueRule::Fifo,
            schedule,
            arrivals: Arrivals { inter_arrival: Distribution::Exponential { rate: 3.5 } },
            staffing: Staffing { cashiers: 5, sellers_normal: 4, sellers_expert: 1, managers: 2 },
            service_times: ServiceTimes {
                till: Distribution::triangular(0.5, 1.5, 3.0),
                help_normal: Distribution::triangular(1.0, 3.0, 8.0),
                help_expert: Distribution::triangular(1.0, 3.0, 8.0),
            },
            customers: CustomerProfile {
                browse_time: Distribution::triangular(2.0, 6.0, 15.0),
                help_need: Distribution::triangular(0.1, 0.25, 0.4),
                expert_help: Distribution::constant(0.05),
                help_patience: Distribution::triangular(5.0, 15.0, 30.0),
                till_patience: Distribution::triangular(2.0, 5.0, 15.0),
                purchase: Distribution::triangular(0.5, 0.7, 0.9),
                till_after_help: Distribution::constant(0.7),
            },
            weights: SatisfactionWeights::default(),
        },
    }
}
