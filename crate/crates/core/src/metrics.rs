//! Satisfaction accounting and KPI aggregation.
//!
//! Every weighted moment of a customer's visit lands in a [`Ledger`]. The
//! service level index is the weighted sum of those events divided by the
//! number of customers who arrived, so departments with different traffic
//! can be compared on the same scale.

use serde::{Deserialize, Serialize};

use crate::agents::{Customer, DepartureOutcome, StaffRole};
use crate::kernel::{CustomerId, SimTime};
use crate::queuing::RequestKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SatisfactionEventKind {
    ServedImmediately,
    ServedAfterWait,
    HelpAbandoned,
    TillAbandoned,
    PurchaseCompleted,
    LeftWithoutPurchase,
}

impl SatisfactionEventKind {
    pub const ALL: [SatisfactionEventKind; 6] = [
        SatisfactionEventKind::ServedImmediately,
        SatisfactionEventKind::ServedAfterWait,
        SatisfactionEventKind::HelpAbandoned,
        SatisfactionEventKind::TillAbandoned,
        SatisfactionEventKind::PurchaseCompleted,
        SatisfactionEventKind::LeftWithoutPurchase,
    ];

    /// Events that end a visit. Each customer gets exactly one.
    pub fn is_terminal(self) -> bool {
        matches!(
            self,
            SatisfactionEventKind::HelpAbandoned
                | SatisfactionEventKind::TillAbandoned
                | SatisfactionEventKind::PurchaseCompleted
                | SatisfactionEventKind::LeftWithoutPurchase
        )
    }
}

/// Which part of the visit an event belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Channel {
    Help,
    Till,
    /// Leaving without buying; counts only towards the overall index.
    Exit,
}

impl Channel {
    pub fn of_request(kind: RequestKind) -> Channel {
        if kind.is_help() {
            Channel::Help
        } else {
            Channel::Till
        }
    }

    pub fn of_event(kind: SatisfactionEventKind, request: Option<RequestKind>) -> Channel {
        match kind {
            SatisfactionEventKind::HelpAbandoned => Channel::Help,
            SatisfactionEventKind::TillAbandoned | SatisfactionEventKind::PurchaseCompleted => Channel::Till,
            SatisfactionEventKind::LeftWithoutPurchase => Channel::Exit,
            SatisfactionEventKind::ServedImmediately | SatisfactionEventKind::ServedAfterWait => {
                request.map_or(Channel::Exit, Channel::of_request)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SatisfactionWeights {
    pub served_immediately: f64,
    pub served_after_wait: f64,
    pub help_abandoned: f64,
    pub till_abandoned: f64,
    pub purchase_completed: f64,
    pub left_without_purchase: f64,
}

impl Default for SatisfactionWeights {
    fn default() -> Self {
        Self {
            served_immediately: 2.0,
            served_after_wait: 1.0,
            help_abandoned: -2.0,
            till_abandoned: -3.0,
            purchase_completed: 2.0,
            left_without_purchase: 0.0,
        }
    }
}

impl SatisfactionWeights {
    pub fn weight(&self, kind: SatisfactionEventKind) -> f64 {
        match kind {
            SatisfactionEventKind::ServedImmediately => self.served_immediately,
            SatisfactionEventKind::ServedAfterWait => self.served_after_wait,
            SatisfactionEventKind::HelpAbandoned => self.help_abandoned,
            SatisfactionEventKind::TillAbandoned => self.till_abandoned,
            SatisfactionEventKind::PurchaseCompleted => self.purchase_completed,
            SatisfactionEventKind::LeftWithoutPurchase => self.left_without_purchase,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            served_immediately: self.served_immediately * factor,
            served_after_wait: self.served_after_wait * factor,
            help_abandoned: self.help_abandoned * factor,
            till_abandoned: self.till_abandoned * factor,
            purchase_completed: self.purchase_completed * factor,
            left_without_purchase: self.left_without_purchase * factor,
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let all: Vec<f64> = SatisfactionEventKind::ALL.iter().map(|&k| self.weight(k)).collect();
        let mut out = Vec::new();
        if all.iter().any(|w| !w.is_finite()) {
            out.push("weights: every weight must be finite".to_string());
        }
        if !all.iter().any(|&w| w > 0.0) || !all.iter().any(|&w| w < 0.0) {
            out.push("weights: need at least one positive and one negative weight".to_string());
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub time: SimTime,
    pub customer: CustomerId,
    pub kind: SatisfactionEventKind,
    pub channel: Channel,
    /// Week the customer entered in; entries from warm-up weeks are excluded
    /// from the KPIs.
    pub entry_week: u32,
}

/// Every satisfaction event of a replication, plus arrival counts.
#[derive(Clone, Debug, Default)]
pub struct Ledger {
    entries: Vec<LedgerEntry>,
    arrivals_by_week: Vec<u64>,
    warmup_weeks: u32,
}

impl Ledger {
    pub fn new(weeks: u32, warmup_weeks: u32) -> Self {
        Self {
            entries: Vec::new(),
            arrivals_by_week: vec![0; weeks as usize],
            warmup_weeks,
        }
    }

    pub fn register_arrival(&mut self, week: u32) {
        if let Some(n) = self.arrivals_by_week.get_mut(week as usize) {
            *n += 1;
        }
    }

    /// Appends the event to the customer's own log and to the ledger.
    pub fn record(
        &mut self,
        customer: &mut Customer,
        entry_week: u32,
        kind: SatisfactionEventKind,
        channel: Channel,
        now: SimTime,
    ) {
        customer.log.push(kind);
        self.entries.push(LedgerEntry { time: now, customer: customer.id, kind, channel, entry_week });
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn warmup_weeks(&self) -> u32 {
        self.warmup_weeks
    }

    pub fn counts(&self, entry_week: u32) -> bool {
        entry_week >= self.warmup_weeks
    }

    /// Arrivals outside the warm-up.
    pub fn customers_arrived(&self) -> u64 {
        self.arrivals_by_week.iter().skip(self.warmup_weeks as usize).sum()
    }

    pub fn arrivals_by_week(&self) -> &[u64] {
        &self.arrivals_by_week
    }

    pub fn counted_entries(&self) -> impl Iterator<Item = &LedgerEntry> {
        self.entries.iter().filter(|e| self.counts(e.entry_week))
    }
}

fn weighted_index<'a>(entries: impl Iterator<Item = &'a LedgerEntry>, arrivals: u64, weights: &SatisfactionWeights) -> f64 {
    if arrivals == 0 {
        return 0.0;
    }
    let total: f64 = entries.map(|e| weights.weight(e.kind)).sum();
    total / arrivals as f64
}

/// Weighted satisfaction per arriving customer over the counted window.
pub fn service_level_index(ledger: &Ledger, weights: &SatisfactionWeights) -> f64 {
    weighted_index(ledger.counted_entries(), ledger.customers_arrived(), weights)
}

/// Same normalisation as [`service_level_index`], restricted to one channel.
pub fn channel_index(ledger: &Ledger, weights: &SatisfactionWeights, channel: Channel) -> f64 {
    weighted_index(
        ledger.counted_entries().filter(|e| e.channel == channel),
        ledger.customers_arrived(),
        weights,
    )
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct WaitSummary {
    pub count: u64,
    pub mean: f64,
    pub p95: f64,
}

impl WaitSummary {
    /// Nearest-rank 95th percentile; sorts `waits` in place.
    pub fn from_samples(waits: &mut [f64]) -> Self {
        if waits.is_empty() {
            return Self::default();
        }
        waits.sort_by(f64::total_cmp);
        let n = waits.len();
        let rank = ((0.95 * n as f64).ceil() as usize).clamp(1, n);
        Self {
            count: n as u64,
            mean: waits.iter().sum::<f64>() / n as f64,
            p95: waits[rank - 1],
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub purchased: u64,
    pub left_without_purchase: u64,
    pub abandoned_help: u64,
    pub abandoned_till: u64,
}

impl OutcomeCounts {
    pub fn add(&mut self, outcome: DepartureOutcome) {
        match outcome {
            DepartureOutcome::Purchased => self.purchased += 1,
            DepartureOutcome::LeftWithoutPurchase => self.left_without_purchase += 1,
            DepartureOutcome::AbandonedHelpQueue => self.abandoned_help += 1,
            DepartureOutcome::AbandonedTillQueue => self.abandoned_till += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.purchased + self.left_without_purchase + self.abandoned_help + self.abandoned_till
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RoleUtilization {
    pub cashier: f64,
    pub seller_normal: f64,
    pub seller_expert: f64,
    pub manager: f64,
}

impl RoleUtilization {
    pub fn get(&self, role: StaffRole) -> f64 {
        match role {
            StaffRole::Cashier => self.cashier,
            StaffRole::SellerNormal => self.seller_normal,
            StaffRole::SellerExpert => self.seller_expert,
            StaffRole::SectionManager => self.manager,
        }
    }

    fn set(&mut self, role: StaffRole, value: f64) {
        match role {
            StaffRole::Cashier => self.cashier = value,
            StaffRole::SellerNormal => self.seller_normal = value,
            StaffRole::SellerExpert => self.seller_expert = value,
            StaffRole::SectionManager => self.manager = value,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct WeekKpi {
    pub week: u32,
    pub warmup: bool,
    pub arrived: u64,
    pub transactions: u64,
    pub service_level_index: f64,
    pub abandoned_help: u64,
    pub abandoned_till: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct KpiReport {
    pub transactions: u64,
    pub service_level_index: f64,
    pub help_index: f64,
    pub till_index: f64,
    pub customers_arrived: u64,
    pub outcomes: OutcomeCounts,
    pub help_wait: WaitSummary,
    pub till_wait: WaitSummary,
    pub utilization: RoleUtilization,
    pub weekly: Vec<WeekKpi>,
}

impl KpiReport {
    pub fn customers_served(&self) -> u64 {
        self.outcomes.purchased
    }

    pub fn customers_abandoned(&self) -> u64 {
        self.outcomes.abandoned_help + self.outcomes.abandoned_till
    }
}

/// Raw measurements collected during a replication, restricted to the
/// counted window.
#[derive(Clone, Debug, Default)]
pub struct Observations {
    /// Enqueue-to-assignment minutes per served request, by request kind.
    pub waits: [Vec<f64>; 3],
    /// Busy minutes summed per role.
    pub busy_minutes: [f64; 4],
    pub headcount: [u32; 4],
    /// Minutes the department was staffed: opening hours plus any drain time.
    pub staffed_minutes: f64,
}

impl Observations {
    pub fn record_wait(&mut self, kind: RequestKind, minutes: f64) {
        self.waits[kind.index()].push(minutes);
    }
}

pub fn finalize_report(ledger: &Ledger, mut obs: Observations, weights: &SatisfactionWeights) -> KpiReport {
    let weeks = ledger.arrivals_by_week().len();
    let mut weekly: Vec<WeekKpi> = (0..weeks)
        .map(|w| WeekKpi {
            week: w as u32,
            warmup: !ledger.counts(w as u32),
            arrived: ledger.arrivals_by_week()[w],
            ..WeekKpi::default()
        })
        .collect();
    let mut weekly_weight = vec![0.0; weeks];
    let mut outcomes = OutcomeCounts::default();

    for e in ledger.entries() {
        let w = e.entry_week as usize;
        weekly_weight[w] += weights.weight(e.kind);
        let outcome = match e.kind {
            SatisfactionEventKind::PurchaseCompleted => Some(DepartureOutcome::Purchased),
            SatisfactionEventKind::LeftWithoutPurchase => Some(DepartureOutcome::LeftWithoutPurchase),
            SatisfactionEventKind::HelpAbandoned => Some(DepartureOutcome::AbandonedHelpQueue),
            SatisfactionEventKind::TillAbandoned => Some(DepartureOutcome::AbandonedTillQueue),
            _ => None,
        };
        let Some(outcome) = outcome else { continue };
        let week = &mut weekly[w];
        match outcome {
            DepartureOutcome::Purchased => week.transactions += 1,
            DepartureOutcome::AbandonedHelpQueue => week.abandoned_help += 1,
            DepartureOutcome::AbandonedTillQueue => week.abandoned_till += 1,
            DepartureOutcome::LeftWithoutPurchase => {}
        }
        if ledger.counts(e.entry_week) {
            outcomes.add(outcome);
        }
    }
    for (week, total) in weekly.iter_mut().zip(weekly_weight) {
        if week.arrived > 0 {
            week.service_level_index = total / week.arrived as f64;
        }
    }

    let mut utilization = RoleUtilization::default();
    for role in StaffRole::ALL {
        let capacity = obs.headcount[role.index()] as f64 * obs.staffed_minutes;
        if capacity > 0.0 {
            utilization.set(role, (obs.busy_minutes[role.index()] / capacity).clamp(0.0, 1.0));
        }
    }

    let mut help_waits: Vec<f64> = obs.waits[RequestKind::HelpNormal.index()]
        .iter()
        .chain(&obs.waits[RequestKind::HelpExpert.index()])
        .copied()
        .collect();

    KpiReport {
        transactions: outcomes.purchased,
        service_level_index: service_level_index(ledger, weights),
        help_index: channel_index(ledger, weights, Channel::Help),
        till_index: channel_index(ledger, weights, Channel::Till),
        customers_arrived: ledger.customers_arrived(),
        outcomes,
        help_wait: WaitSummary::from_samples(&mut help_waits),
        till_wait: WaitSummary::from_samples(&mut obs.waits[RequestKind::Till.index()]),
        utilization,
        weekly,
    }
}
