//! Staffing sweeps: each arm changes one staffing count while the floor
//! headcount stays fixed, and every arm is replicated.

use serde::Serialize;

use super::config::{ScenarioConfig, Staffing};
use super::presets::{preset, Department};
use super::replication::run_replication;
use crate::error::{ConfigError, SimError};
use crate::exec::{map_jobs, Execution};
use crate::kernel::mix_seed;
use crate::metrics::KpiReport;
use crate::results::{Kpi, ResultRow, Stats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SweptParameter {
    /// Tills open; the remaining floor staff are sellers.
    Cashiers,
    /// Expert sellers; the remaining sellers are normal sellers.
    Experts,
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub base: ScenarioConfig,
    pub parameter: SweptParameter,
    pub values: Vec<u32>,
    pub replications: u32,
    /// Share random streams across arms so arm differences come from staffing.
    pub common_random_numbers: bool,
}

impl SweepSpec {
    /// Tills 1..=9 of a ten-strong floor.
    pub fn tills(base: ScenarioConfig) -> Self {
        let floor = base.staffing.floor_staff();
        Self {
            replications: base.replications,
            base,
            parameter: SweptParameter::Cashiers,
            values: (1..floor).collect(),
            common_random_numbers: true,
        }
    }

    /// Experts 0..=4, normal sellers making up the difference.
    pub fn experts(base: ScenarioConfig) -> Self {
        let max = base.staffing.sellers().min(4);
        Self {
            replications: base.replications,
            base,
            parameter: SweptParameter::Experts,
            values: (0..=max).collect(),
            common_random_numbers: true,
        }
    }

    pub fn arm_staffing(&self, value: u32) -> Result<Staffing, ConfigError> {
        let base = self.base.staffing;
        match self.parameter {
            SweptParameter::Cashiers => {
                let floor = base.floor_staff();
                if value > floor {
                    return Err(ConfigError::single(format!(
                        "sweep: {value} cashiers exceeds the floor headcount {floor}"
                    )));
                }
                let sellers = floor - value;
                let experts = base.sellers_expert.min(sellers);
                Ok(Staffing { cashiers: value, sellers_normal: sellers - experts, sellers_expert: experts, ..base })
            }
            SweptParameter::Experts => {
                let sellers = base.sellers();
                if value > sellers {
                    return Err(ConfigError::single(format!(
                        "sweep: {value} experts exceeds the seller headcount {sellers}"
                    )));
                }
                Ok(Staffing { sellers_expert: value, sellers_normal: sellers - value, ..base })
            }
        }
    }

    pub fn arm_config(&self, arm: usize) -> Result<ScenarioConfig, ConfigError> {
        let value = self.values[arm];
        let mut config = self.base.clone();
        config.staffing = self.arm_staffing(value)?;
        config.replications = self.replications;
        if !self.common_random_numbers {
            config.seed = mix_seed(self.base.seed, arm as u64 + 1);
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ArmResult {
    pub value: u32,
    pub staffing: Staffing,
    pub reports: Vec<KpiReport>,
}

impl ArmResult {
    pub fn stats(&self, kpi: Kpi) -> Stats {
        Stats::of(self.reports.iter().map(|r| kpi.of(r)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentResult {
    pub parameter: SweptParameter,
    pub arms: Vec<ArmResult>,
}

impl ExperimentResult {
    pub fn total_reports(&self) -> usize {
        self.arms.iter().map(|a| a.reports.len()).sum()
    }

    /// Rows ordered by (arm, replication).
    pub fn rows(&self) -> Vec<ResultRow> {
        self.arms
            .iter()
            .flat_map(|arm| {
                arm.reports
                    .iter()
                    .enumerate()
                    .map(move |(rep, r)| ResultRow::from_report(arm.value, rep as u32, r))
            })
            .collect()
    }

    pub fn summary(&self, kpi: Kpi) -> Vec<(u32, Stats)> {
        self.arms.iter().map(|a| (a.value, a.stats(kpi))).collect()
    }
}

/// Runs every (arm, replication) pair, in parallel when available.
pub fn run_sweep(spec: &SweepSpec, mode: Execution) -> Result<ExperimentResult, SimError> {
    let configs = (0..spec.values.len())
        .map(|arm| spec.arm_config(arm))
        .collect::<Result<Vec<_>, _>>()?;
    let reps = spec.replications as usize;
    let reports = map_jobs(configs.len() * reps, mode, |job| {
        run_replication(&configs[job / reps], (job % reps) as u32)
    });
    let mut reports = reports.into_iter();
    let mut arms = Vec::with_capacity(configs.len());
    for (config, &value) in configs.iter().zip(&spec.values) {
        let arm_reports = reports.by_ref().take(reps).collect::<Result<Vec<_>, _>>()?;
        arms.push(ArmResult { value, staffing: config.staffing, reports: arm_reports });
    }
    Ok(ExperimentResult { parameter: spec.parameter, arms })
}

/// Replications of a single scenario, in index order.
pub fn run_replications(config: &ScenarioConfig, mode: Execution) -> Result<Vec<KpiReport>, SimError> {
    config.validate()?;
    map_jobs(config.replications as usize, mode, |i| run_replication(config, i as u32))
        .into_iter()
        .map(|r| r.map_err(SimError::from))
        .collect()
}

pub fn run_experiment_tills(dept: Department, replications: u32) -> Result<ExperimentResult, SimError> {
    let mut spec = SweepSpec::tills(preset(dept));
    spec.replications = replications;
    run_sweep(&spec, Execution::default())
}

pub fn run_experiment_experts(dept: Department, replications: u32) -> Result<ExperimentResult, SimError> {
    let mut spec = SweepSpec::experts(preset(dept));
    spec.replications = replications;
    run_sweep(&spec, Execution::default())
}
