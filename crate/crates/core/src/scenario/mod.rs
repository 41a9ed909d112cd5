//! Scenario configuration, department presets, the replication runner and the
//! staffing experiments.

mod config;
mod experiment;
mod presets;
mod replication;

pub use config::{
    load_and_validate, load_file, Arrivals, LoadError, OpeningSchedule, ScenarioConfig, Staffing, MINUTES_PER_DAY,
    MINUTES_PER_WEEK,
};
pub use experiment::{
    run_experiment_experts, run_experiment_tills, run_replications, run_sweep, ArmResult, ExperimentResult,
    SweepSpec, SweptParameter,
};
pub use presets::{
    preset, Department, DEFAULT_REPLICATIONS, DEFAULT_SEED, DEFAULT_WARMUP_WEEKS, DEFAULT_WEEKS, FLOOR_STAFF,
};
pub use replication::{
    replication_seed, run_replication, run_replication_traced, ServiceStart, Snapshot, Trace, TransitionRecord,
};
