//! Results tables: one CSV row per (arm, replication) with a fixed column order.
//!
//! ```text
//! arm_value,replication,transactions,service_level_index,help_index,till_index,
//! mean_help_wait,mean_till_wait,p95_till_wait,abandoned_help,abandoned_till,
//! util_cashier,util_seller_normal,util_seller_expert,util_manager
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::KpiReport;

/// Column order of the results CSV.
pub const COLUMNS: [&str; 15] = [
    "arm_value",
    "replication",
    "transactions",
    "service_level_index",
    "help_index",
    "till_index",
    "mean_help_wait",
    "mean_till_wait",
    "p95_till_wait",
    "abandoned_help",
    "abandoned_till",
    "util_cashier",
    "util_seller_normal",
    "util_seller_expert",
    "util_manager",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kpi {
    Transactions,
    ServiceLevelIndex,
    HelpIndex,
    TillIndex,
    MeanHelpWait,
    MeanTillWait,
    P95TillWait,
    AbandonedHelp,
    AbandonedTill,
    UtilCashier,
    UtilSellerNormal,
    UtilSellerExpert,
    UtilManager,
}

impl Kpi {
    pub const ALL: [Kpi; 13] = [
        Kpi::Transactions,
        Kpi::ServiceLevelIndex,
        Kpi::HelpIndex,
        Kpi::TillIndex,
        Kpi::MeanHelpWait,
        Kpi::MeanTillWait,
        Kpi::P95TillWait,
        Kpi::AbandonedHelp,
        Kpi::AbandonedTill,
        Kpi::UtilCashier,
        Kpi::UtilSellerNormal,
        Kpi::UtilSellerExpert,
        Kpi::UtilManager,
    ];

    pub fn name(self) -> &'static str {
        COLUMNS[self as usize + 2]
    }

    pub fn of(self, r: &KpiReport) -> f64 {
        match self {
            Kpi::Transactions => r.transactions as f64,
            Kpi::ServiceLevelIndex => r.service_level_index,
            Kpi::HelpIndex => r.help_index,
            Kpi::TillIndex => r.till_index,
            Kpi::MeanHelpWait => r.help_wait.mean,
            Kpi::MeanTillWait => r.till_wait.mean,
            Kpi::P95TillWait => r.till_wait.p95,
            Kpi::AbandonedHelp => r.outcomes.abandoned_help as f64,
            Kpi::AbandonedTill => r.outcomes.abandoned_till as f64,
            Kpi::UtilCashier => r.utilization.cashier,
            Kpi::UtilSellerNormal => r.utilization.seller_normal,
            Kpi::UtilSellerExpert => r.utilization.seller_expert,
            Kpi::UtilManager => r.utilization.manager,
        }
    }

    pub fn of_row(self, row: &ResultRow) -> f64 {
        match self {
            Kpi::Transactions => row.transactions as f64,
            Kpi::ServiceLevelIndex => row.service_level_index,
            Kpi::HelpIndex => row.help_index,
            Kpi::TillIndex => row.till_index,
            Kpi::MeanHelpWait => row.mean_help_wait,
            Kpi::MeanTillWait => row.mean_till_wait,
            Kpi::P95TillWait => row.p95_till_wait,
            Kpi::AbandonedHelp => row.abandoned_help as f64,
            Kpi::AbandonedTill => row.abandoned_till as f64,
            Kpi::UtilCashier => row.util_cashier,
            Kpi::UtilSellerNormal => row.util_seller_normal,
            Kpi::UtilSellerExpert => row.util_seller_expert,
            Kpi::UtilManager => row.util_manager,
        }
    }
}

impl fmt::Display for Kpi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kpi {
    type Err = ResultsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kpi::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ResultsError::UnknownKpi(s.to_string()))
    }
}

/// One row of the results CSV; field order is the column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRow {
    pub arm_value: u32,
    pub replication: u32,
    pub transactions: u64,
    pub service_level_index: f64,
    pub help_index: f64,
    pub till_index: f64,
    pub mean_help_wait: f64,
    pub mean_till_wait: f64,
    pub p95_till_wait: f64,
    pub abandoned_help: u64,
    pub abandoned_till: u64,
    pub util_cashier: f64,
    pub util_seller_normal: f64,
    pub util_seller_expert: f64,
    pub util_manager: f64,
}

impl ResultRow {
    pub fn from_report(arm_value: u32, replication: u32, r: &KpiReport) -> Self {
        Self {
            arm_value,
            replication,
            transactions: r.transactions,
            service_level_index: r.service_level_index,
            help_index: r.help_index,
            till_index: r.till_index,
            mean_help_wait: r.help_wait.mean,
            mean_till_wait: r.till_wait.mean,
            p95_till_wait: r.till_wait.p95,
            abandoned_help: r.outcomes.abandoned_help,
            abandoned_till: r.outcomes.abandoned_till,
            util_cashier: r.utilization.cashier,
            util_seller_normal: r.utilization.seller_normal,
            util_seller_expert: r.utilization.seller_expert,
            util_manager: r.utilization.manager,
        }
    }
}

#[derive(Debug, Error)]
pub enum ResultsError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("malformed results CSV: {0}")]
    Malformed(String),
    #[error("unknown KPI '{0}'")]
    UnknownKpi(String),
    #[error("results table is empty")]
    Empty,
}

pub fn write_rows<W: io::Write>(out: W, rows: &[ResultRow]) -> Result<(), ResultsError> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(COLUMNS).map_err(|e| ResultsError::Io(e.into()))?;
    }
    for row in rows {
        w.serialize(row).map_err(|e| ResultsError::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<R: io::Read>(input: R) -> Result<Vec<ResultRow>, ResultsError> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers().map_err(|e| ResultsError::Malformed(e.to_string()))?.clone();
    if headers.iter().ne(COLUMNS) {
        return Err(ResultsError::Malformed(format!(
            "expected header {}, got {}",
            COLUMNS.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    rdr.deserialize()
        .map(|r| r.map_err(|e: csv::Error| ResultsError::Malformed(e.to_string())))
        .collect()
}

/// Mean, sample standard deviation and standard error.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Stats {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub se: f64,
}

impl Stats {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let v: Vec<f64> = values.into_iter().collect();
        let n = v.len();
        if n == 0 {
            return Self::default();
        }
        let mean = v.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 {
            (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self { n, mean, sd, se: sd / (n as f64).sqrt() }
    }
}

/// Per-arm statistics of one KPI, ordered by arm value.
pub fn summarize(rows: &[ResultRow], kpi: Kpi) -> Vec<(u32, Stats)> {
    let mut by_arm: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for row in rows {
        by_arm.entry(row.arm_value).or_default().push(kpi.of_row(row));
    }
    by_arm.into_iter().map(|(arm, v)| (arm, Stats::of(v))).collect()
}

/// Header of the summary CSV: one row per (arm, KPI).
pub const SUMMARY_COLUMNS: [&str; 6] = ["arm_value", "kpi", "n", "mean", "sd", "se"];

/// Writes per-arm mean / sd / se of every KPI, ordered by arm then KPI.
pub fn write_summary<W: io::Write>(out: W, rows: &[ResultRow]) -> Result<(), ResultsError> {
    let mut w = csv::Writer::from_writer(out);
    let io_err = |e: csv::Error| ResultsError::Io(e.into());
    w.write_record(SUMMARY_COLUMNS).map_err(io_err)?;
    let per_kpi: Vec<Vec<(u32, Stats)>> = Kpi::ALL.iter().map(|&k| summarize(rows, k)).collect();
    let arms = per_kpi.first().map_or(0, Vec::len);
    for i in 0..arms {
        for (k, summary) in Kpi::ALL.iter().zip(&per_kpi) {
            let (arm, s) = summary[i];
            w.write_record([
                arm.to_string(),
                k.name().to_string(),
                s.n.to_string(),
                s.mean.to_string(),
                s.sd.to_string(),
                s.se.to_string(),
            ])
            .map_err(io_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Arm with the highest mean; the first such arm on ties.
pub fn argmax(summary: &[(u32, Stats)]) -> Option<u32> {
    summary
        .iter()
        .fold(None::<(u32, f64)>, |best, &(arm, s)| match best {
            Some((_, m)) if m >= s.mean => best,
            _ => Some((arm, s.mean)),
        })
        .map(|(arm, _)| arm)
}
