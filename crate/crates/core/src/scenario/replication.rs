//! One replication: the event loop that drives customers and staff through a
//! run of trading days.

use std::collections::HashMap;

use serde::Serialize;

use super::config::{ScenarioConfig, MINUTES_PER_WEEK};
use crate::agents::{
    spawn_customer, Action, Customer, CustomerState, DepartureOutcome, StaffAgent, StaffRole, StaffState, Trigger,
    TriggerKind,
};
use crate::error::ModelError;
use crate::kernel::{
    mix_seed, sample, streams, CustomerId, Event, EventKind, EventQueue, RngStream, SimTime, StaffId, Target,
};
use crate::metrics::{finalize_report, Channel, KpiReport, Ledger, Observations, OutcomeCounts};
use crate::queuing::{QueueSystem, RequestKind, RequestOutcome};

/// Seed for replication `index` of a scenario with base seed `base`.
pub fn replication_seed(base: u64, index: u32) -> u64 {
    mix_seed(base, u64::from(index))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitionRecord {
    pub time: f64,
    pub customer: CustomerId,
    pub from: CustomerState,
    pub trigger: TriggerKind,
    pub to: CustomerState,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ServiceStart {
    pub customer: CustomerId,
    pub staff: StaffId,
    pub kind: RequestKind,
    pub requested: f64,
    pub started: f64,
    /// Whether the request went through the queue rather than straight to a server.
    pub queued: bool,
}

/// State of the shop at a report tick, a closing time, or the very end.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Snapshot {
    pub time: f64,
    pub arrived: u64,
    pub in_system: u64,
    pub departed: OutcomeCounts,
    pub available: [u32; 4],
    pub serving: [u32; 4],
    pub headcount: [u32; 4],
    pub queued: [usize; 3],
}

/// Full audit trail of a replication, used by invariant checks.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Trace {
    /// `(time, seq)` of every dispatched event, in dispatch order.
    pub dispatched: Vec<(f64, u64)>,
    pub transitions: Vec<TransitionRecord>,
    pub services: Vec<ServiceStart>,
    pub snapshots: Vec<Snapshot>,
    /// Events that found their customer already gone.
    pub events_for_departed: u64,
    /// Per staff member: (role, sum of sampled service durations, measured serving minutes).
    pub staff_time: Vec<(StaffRole, f64, f64)>,
    /// Satisfaction events recorded per customer, terminal outcome last.
    pub customer_logs: Vec<(CustomerId, Vec<crate::metrics::SatisfactionEventKind>)>,
}

struct Replication<'a> {
    config: &'a ScenarioConfig,
    events: EventQueue,
    arrivals: RngStream,
    attributes: RngStream,
    behaviour_seed: u64,
    customers: HashMap<CustomerId, Customer>,
    next_customer: CustomerId,
    staff: Vec<StaffAgent>,
    /// Serving minutes per staff member, unclipped.
    served_minutes: Vec<f64>,
    queues: QueueSystem,
    ledger: Ledger,
    obs: Observations,
    departed: OutcomeCounts,
    arrived: u64,
    current_day: u32,
    /// Trading day whose close has passed while customers were still inside.
    draining_day: Option<u32>,
    warmup_end: f64,
    trace: Option<Trace>,
}

impl<'a> Replication<'a> {
    fn new(config: &'a ScenarioConfig, seed: u64, traced: bool) -> Self {
        let warmup_end = f64::from(config.warmup_weeks) * MINUTES_PER_WEEK;
        let staff: Vec<StaffAgent> = config
            .staffing
            .roster()
            .enumerate()
            .map(|(id, role)| StaffAgent::new(id, role, config.service_times.clone(), SimTime::new(warmup_end)))
            .collect();
        let mut obs = Observations::default();
        for role in StaffRole::ALL {
            obs.headcount[role.index()] = config.staffing.count(role);
        }
        Self {
            config,
            events: EventQueue::new(),
            arrivals: RngStream::new(seed, streams::ARRIVALS),
            attributes: RngStream::new(seed, streams::CUSTOMER_ATTRIBUTES),
            behaviour_seed: mix_seed(seed, streams::CUSTOMER_BEHAVIOUR),
            customers: HashMap::new(),
            next_customer: 0,
            served_minutes: vec![0.0; staff.len()],
            staff,
            queues: QueueSystem::new(config.queue_rule),
            ledger: Ledger::new(config.weeks, config.warmup_weeks),
            obs,
            departed: OutcomeCounts::default(),
            arrived: 0,
            current_day: 0,
            draining_day: None,
            warmup_end,
            trace: traced.then(Trace::default),
        }
    }

    fn now(&self) -> SimTime {
        self.events.now()
    }

    fn week_of(time: SimTime) -> u32 {
        (time.minutes() / MINUTES_PER_WEEK) as u32
    }

    fn run(mut self) -> Result<(KpiReport, Option<Trace>), ModelError> {
        let days = self.config.schedule.trading_days(self.config.weeks);
        for week in 0..self.config.weeks {
            let at = SimTime::new(f64::from(week + 1) * MINUTES_PER_WEEK);
            self.events.schedule(at, Target::Shop, EventKind::ReportTick { week })?;
        }
        if days > 0 {
            self.open_day(0)?;
        }

        while let Some(event) = self.events.pop_next() {
            if let Some(trace) = self.trace.as_mut() {
                trace.dispatched.push((event.time.minutes(), event.seq));
            }
            self.dispatch(event)?;
        }
        if let Some(day) = self.draining_day.take() {
            self.finish_day(day, self.now().minutes());
        }
        self.snapshot();

        if let Some(trace) = self.trace.as_mut() {
            trace.staff_time = self
                .staff
                .iter()
                .zip(&self.served_minutes)
                .map(|(s, &served)| (s.role, s.sampled_minutes(), served))
                .collect();
        }
        for (role, busy) in self.staff.iter().map(|s| (s.role, s.busy_minutes())) {
            self.obs.busy_minutes[role.index()] += busy;
        }
        let report = finalize_report(&self.ledger, self.obs, &self.config.weights);
        Ok((report, self.trace))
    }

    fn open_day(&mut self, day: u32) -> Result<(), ModelError> {
        let schedule = &self.config.schedule;
        let (open, close) = (schedule.open_at(day), schedule.close_at(day));
        self.current_day = day;
        self.events.schedule(SimTime::new(close), Target::Shop, EventKind::ShopClose { day })?;
        self.schedule_arrival(open)
    }

    /// Schedules the next arrival after `from` if it falls before closing.
    fn schedule_arrival(&mut self, from: f64) -> Result<(), ModelError> {
        let gap = sample(&self.config.arrivals.inter_arrival, &mut self.arrivals);
        let at = from + gap;
        if at < self.config.schedule.close_at(self.current_day) {
            self.events.schedule(SimTime::new(at), Target::Shop, EventKind::Arrival)?;
        }
        Ok(())
    }

    fn dispatch(&mut self, event: Event) -> Result<(), ModelError> {
        match (event.target, event.kind) {
            (Target::Shop, EventKind::Arrival) => self.on_arrival(),
            (Target::Shop, EventKind::ShopClose { day }) => self.on_close(day),
            (Target::Shop, EventKind::ReportTick { .. }) => {
                self.snapshot();
                Ok(())
            }
            (Target::Customer(id), kind) => {
                if !self.customers.contains_key(&id) {
                    if let Some(trace) = self.trace.as_mut() {
                        trace.events_for_departed += 1;
                    }
                    return Ok(());
                }
                match kind {
                    EventKind::DelayElapsed => self.apply(id, Trigger::DelayElapsed, None),
                    EventKind::PatienceExpired => match self.queues.renege(id) {
                        Some(entry) => self.apply(id, Trigger::PatienceExpired, Some(entry.kind)),
                        // Already being served: stale expiry.
                        None => Ok(()),
                    },
                    EventKind::ServiceComplete => self.apply(id, Trigger::ServiceComplete, None),
                    _ => Ok(()),
                }
            }
            _ => Ok(()),
        }
    }

    fn on_arrival(&mut self) -> Result<(), ModelError> {
        let now = self.now();
        let id = self.next_customer;
        self.next_customer += 1;
        let customer = spawn_customer(id, &self.config.customers, &mut self.attributes, self.behaviour_seed, now);
        self.customers.insert(id, customer);
        self.arrived += 1;
        self.ledger.register_arrival(Self::week_of(now));
        // Contemplating is a routing state: leave it at once.
        self.events.schedule(now, Target::Customer(id), EventKind::DelayElapsed)?;
        self.schedule_arrival(now.minutes())
    }

    fn on_close(&mut self, day: u32) -> Result<(), ModelError> {
        self.snapshot();
        let close = self.config.schedule.close_at(day);
        if let Some(previous) = self.draining_day.take() {
            self.finish_day(previous, close);
        }
        if self.customers.is_empty() {
            self.finish_day(day, close);
        } else {
            self.draining_day = Some(day);
        }
        if day + 1 < self.config.schedule.trading_days(self.config.weeks) {
            self.open_day(day + 1)?;
        }
        Ok(())
    }

    /// Books a trading day's staffed time: from opening until the shop emptied
    /// (at least until closing), never overlapping the next opening.
    fn finish_day(&mut self, day: u32, end: f64) {
        let schedule = &self.config.schedule;
        let open = schedule.open_at(day);
        let end = end.max(schedule.close_at(day)).min(schedule.open_at(day + 1));
        let start = open.max(self.warmup_end);
        if end > start {
            self.obs.staffed_minutes += end - start;
        }
    }

    /// Runs one customer transition and carries out its actions.
    fn apply(&mut self, id: CustomerId, trigger: Trigger, request: Option<RequestKind>) -> Result<(), ModelError> {
        let now = self.now();
        let customer = self.customers.get_mut(&id).expect("caller checked presence");
        let transition = customer.transition(trigger, &self.config.customers)?;
        let entry_week = Self::week_of(customer.entered);
        if let Some(kind) = transition.satisfaction {
            let channel = Channel::of_event(kind, request);
            self.ledger.record(customer, entry_week, kind, channel, now);
        }
        if let Some(trace) = self.trace.as_mut() {
            trace.transitions.push(TransitionRecord {
                time: now.minutes(),
                customer: id,
                from: transition.from,
                trigger: transition.trigger,
                to: transition.to,
            });
        }

        for action in transition.actions {
            match action {
                Action::ScheduleDelay(delay) => {
                    self.events.schedule(now.after(delay), Target::Customer(id), EventKind::DelayElapsed)?;
                }
                Action::Request(kind) => self.request(id, kind)?,
                Action::Release(staff) => self.release(staff)?,
                Action::Depart(outcome) => self.depart(id, outcome),
            }
        }
        Ok(())
    }

    fn request(&mut self, id: CustomerId, kind: RequestKind) -> Result<(), ModelError> {
        let now = self.now();
        let patience = self.customers[&id].attributes.patience_for(kind);
        match self.queues.request_service(id, kind, patience, now, &self.staff)? {
            RequestOutcome::Assigned(staff) => self.start_service(staff, id, kind, now, false),
            RequestOutcome::Enqueued { deadline } => {
                if let Some(deadline) = deadline {
                    let seq = self.events.schedule(deadline, Target::Customer(id), EventKind::PatienceExpired)?;
                    self.queues.attach_patience_event(id, seq);
                }
                Ok(())
            }
        }
    }

    fn start_service(
        &mut self,
        staff: StaffId,
        id: CustomerId,
        kind: RequestKind,
        requested: SimTime,
        queued: bool,
    ) -> Result<(), ModelError> {
        let now = self.now();
        let customer = self.customers.get_mut(&id).expect("customer in shop");
        let completion = self.staff[staff].begin_service(id, kind, customer.behaviour_stream(), now)?;
        let waited = now.minutes() - requested.minutes();
        if customer.entered.minutes() >= self.warmup_end {
            self.obs.record_wait(kind, waited);
        }
        if let Some(trace) = self.trace.as_mut() {
            trace.services.push(ServiceStart {
                customer: id,
                staff,
                kind,
                requested: requested.minutes(),
                started: now.minutes(),
                queued,
            });
        }
        self.events.schedule(completion.at, Target::Customer(id), EventKind::ServiceComplete)?;
        self.apply(id, Trigger::Assigned { staff, waited }, Some(kind))
    }

    fn release(&mut self, staff: StaffId) -> Result<(), ModelError> {
        let now = self.now();
        if let StaffState::Serving { since, .. } = self.staff[staff].state {
            self.served_minutes[staff] += now.minutes() - since.minutes();
        }
        self.staff[staff].release(now)?;
        if let Some(entry) = self.queues.on_staff_freed(&self.staff[staff]) {
            if let Some(seq) = entry.patience_event {
                self.events.cancel(seq);
            }
            self.start_service(staff, entry.customer, entry.kind, entry.enqueued, true)?;
        }
        Ok(())
    }

    fn depart(&mut self, id: CustomerId, outcome: DepartureOutcome) {
        let customer = self.customers.remove(&id).expect("departing customer present");
        self.departed.add(outcome);
        if let Some(trace) = self.trace.as_mut() {
            trace.customer_logs.push((id, customer.log));
        }
        if self.customers.is_empty() {
            if let Some(day) = self.draining_day.take() {
                self.finish_day(day, self.now().minutes());
            }
        }
    }

    fn snapshot(&mut self) {
        let Some(trace) = self.trace.as_mut() else { return };
        let mut snap = Snapshot {
            time: self.events.now().minutes(),
            arrived: self.arrived,
            in_system: self.customers.len() as u64,
            departed: self.departed,
            available: [0; 4],
            serving: [0; 4],
            headcount: self.obs.headcount,
            queued: RequestKind::ALL.map(|k| self.queues.queue(k).len()),
        };
        for s in &self.staff {
            if s.is_available() {
                snap.available[s.role.index()] += 1;
            } else {
                snap.serving[s.role.index()] += 1;
            }
        }
        trace.snapshots.push(snap);
    }
}

/// Runs replication `index` of `config`. The config must already be valid.
pub fn run_replication(config: &ScenarioConfig, index: u32) -> Result<KpiReport, ModelError> {
    let seed = replication_seed(config.seed, index);
    Replication::new(config, seed, false).run().map(|(report, _)| report)
}

/// Like [`run_replication`] but also returns the full audit trail.
pub fn run_replication_traced(config: &ScenarioConfig, index: u32) -> Result<(KpiReport, Trace), ModelError> {
    let seed = replication_seed(config.seed, index);
    let (report, trace) = Replication::new(config, seed, true).run()?;
    Ok((report, trace.expect("tracing enabled")))
}
