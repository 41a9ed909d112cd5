//! Customer and staff agents.
//!
//! Customers follow a state chart: they enter in a zero-duration
//! `Contemplating` routing state, browse, and then either seek help, queue at
//! a till, or leave. Help and till service share the same shape: request,
//! wait (possibly zero time), get served or renege. Staff are simple servers
//! that stay busy until the customer they serve releases them.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::kernel::{bernoulli, mix_seed, sample, streams, CustomerId, Distribution, RngStream, SimTime, StaffId};
use crate::metrics::SatisfactionEventKind;
use crate::queuing::RequestKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DepartureOutcome {
    Purchased,
    LeftWithoutPurchase,
    AbandonedHelpQueue,
    AbandonedTillQueue,
}

impl DepartureOutcome {
    pub const ALL: [DepartureOutcome; 4] = [
        DepartureOutcome::Purchased,
        DepartureOutcome::LeftWithoutPurchase,
        DepartureOutcome::AbandonedHelpQueue,
        DepartureOutcome::AbandonedTillQueue,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CustomerState {
    Contemplating,
    Browsing,
    WaitingForHelp,
    ReceivingHelp,
    WaitingAtTill,
    BeingServedAtTill,
    Departed(DepartureOutcome),
}

impl CustomerState {
    pub fn is_departed(self) -> bool {
        matches!(self, CustomerState::Departed(_))
    }
}

/// What woke the customer up.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Trigger {
    DelayElapsed,
    Assigned { staff: StaffId, waited: f64 },
    PatienceExpired,
    ServiceComplete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TriggerKind {
    DelayElapsed,
    Assigned,
    PatienceExpired,
    ServiceComplete,
}

impl Trigger {
    pub fn kind(self) -> TriggerKind {
        match self {
            Trigger::DelayElapsed => TriggerKind::DelayElapsed,
            Trigger::Assigned { .. } => TriggerKind::Assigned,
            Trigger::PatienceExpired => TriggerKind::PatienceExpired,
            Trigger::ServiceComplete => TriggerKind::ServiceComplete,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Trigger::DelayElapsed => "delay-elapsed",
            Trigger::Assigned { .. } => "assigned",
            Trigger::PatienceExpired => "patience-expired",
            Trigger::ServiceComplete => "service-complete",
        }
    }
}

/// Side effects the replication must carry out after a transition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Action {
    /// Fire `DelayElapsed` for this customer after the given minutes.
    ScheduleDelay(f64),
    Request(RequestKind),
    Release(StaffId),
    Depart(DepartureOutcome),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub from: CustomerState,
    pub trigger: TriggerKind,
    pub to: CustomerState,
    pub actions: Vec<Action>,
    pub satisfaction: Option<SatisfactionEventKind>,
}

/// The legal edges of the customer state chart. Used by trace audits; kept
/// separate from [`Customer::transition`] so each checks the other.
pub fn legal_edge(from: CustomerState, trigger: TriggerKind, to: CustomerState) -> bool {
    use CustomerState::*;
    use DepartureOutcome::*;
    use TriggerKind as T;
    matches!(
        (from, trigger, to),
        (Contemplating, T::DelayElapsed, Browsing)
            | (Browsing, T::DelayElapsed, WaitingForHelp)
            | (Browsing, T::DelayElapsed, WaitingAtTill)
            | (Browsing, T::DelayElapsed, Departed(LeftWithoutPurchase))
            | (WaitingForHelp, T::Assigned, ReceivingHelp)
            | (WaitingForHelp, T::PatienceExpired, Departed(AbandonedHelpQueue))
            | (ReceivingHelp, T::ServiceComplete, Browsing)
            | (ReceivingHelp, T::ServiceComplete, WaitingAtTill)
            | (WaitingAtTill, T::Assigned, BeingServedAtTill)
            | (WaitingAtTill, T::PatienceExpired, Departed(AbandonedTillQueue))
            | (BeingServedAtTill, T::ServiceComplete, Departed(Purchased))
    )
}

/// Population-level distributions from which each customer's personal
/// attributes are drawn.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomerProfile {
    /// Minutes spent browsing per visit to the shop floor.
    pub browse_time: Distribution,
    pub help_need: Distribution,
    pub expert_help: Distribution,
    pub help_patience: Distribution,
    pub till_patience: Distribution,
    /// Probability of buying after browsing without help.
    pub purchase: Distribution,
    /// Probability of heading to a till after being helped; otherwise browse again.
    pub till_after_help: Distribution,
}

/// Attributes fixed for the lifetime of one customer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CustomerAttributes {
    pub help_need: f64,
    pub expert_help: f64,
    pub help_patience: f64,
    pub till_patience: f64,
    pub purchase: f64,
    pub till_after_help: f64,
}

impl CustomerAttributes {
    pub fn patience_for(&self, kind: RequestKind) -> f64 {
        match kind {
            RequestKind::Till => self.till_patience,
            RequestKind::HelpNormal | RequestKind::HelpExpert => self.help_patience,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Customer {
    pub id: CustomerId,
    pub state: CustomerState,
    pub attributes: CustomerAttributes,
    pub entered: SimTime,
    /// Satisfaction events in the order recorded; see [`crate::metrics::Ledger::record`].
    pub log: Vec<SatisfactionEventKind>,
    /// Private stream for this customer's decisions and service demands, so
    /// the same customer behaves identically across experiment arms.
    behaviour: RngStream,
    open_request: Option<RequestKind>,
    serving_staff: Option<StaffId>,
    /// Set once help has been received; a helped customer who browses on
    /// decides only between buying and leaving, so every visit ends.
    helped: bool,
}

/// Creates a customer in the `Contemplating` state. The caller schedules the
/// first `DelayElapsed` at `now`.
pub fn spawn_customer(
    id: CustomerId,
    profile: &CustomerProfile,
    attributes_stream: &mut RngStream,
    behaviour_seed: u64,
    now: SimTime,
) -> Customer {
    let mut draw = |d: &Distribution| sample(d, attributes_stream);
    let attributes = CustomerAttributes {
        help_need: draw(&profile.help_need),
        expert_help: draw(&profile.expert_help),
        help_patience: draw(&profile.help_patience),
        till_patience: draw(&profile.till_patience),
        purchase: draw(&profile.purchase),
        till_after_help: draw(&profile.till_after_help),
    };
    Customer {
        id,
        state: CustomerState::Contemplating,
        attributes,
        entered: now,
        log: Vec::new(),
        behaviour: RngStream::new(mix_seed(behaviour_seed, id as u64), streams::CUSTOMER_BEHAVIOUR),
        open_request: None,
        serving_staff: None,
        helped: false,
    }
}

impl Customer {
    pub fn behaviour_stream(&mut self) -> &mut RngStream {
        &mut self.behaviour
    }

    pub fn open_request(&self) -> Option<RequestKind> {
        self.open_request
    }

    fn illegal(&self, trigger: Trigger) -> ModelError {
        ModelError::IllegalTransition {
            customer: self.id,
            state: self.state,
            trigger: trigger.name(),
        }
    }

    /// Applies one state-chart edge.
    pub fn transition(
        &mut self,
        trigger: Trigger,
        profile: &CustomerProfile,
    ) -> Result<Transition, ModelError> {
        use CustomerState::*;
        let from = self.state;
        let mut actions = Vec::with_capacity(2);
        let mut satisfaction = None;

        let to = match (from, trigger) {
            (Contemplating, Trigger::DelayElapsed) => {
                actions.push(Action::ScheduleDelay(sample(&profile.browse_time, &mut self.behaviour)));
                Browsing
            }
            (Browsing, Trigger::DelayElapsed) => {
                if !self.helped && bernoulli(self.attributes.help_need, &mut self.behaviour) {
                    let kind = if bernoulli(self.attributes.expert_help, &mut self.behaviour) {
                        RequestKind::HelpExpert
                    } else {
                        RequestKind::HelpNormal
                    };
                    self.open_request = Some(kind);
                    actions.push(Action::Request(kind));
                    WaitingForHelp
                } else if bernoulli(self.attributes.purchase, &mut self.behaviour) {
                    self.open_request = Some(RequestKind::Till);
                    actions.push(Action::Request(RequestKind::Till));
                    WaitingAtTill
                } else {
                    satisfaction = Some(SatisfactionEventKind::LeftWithoutPurchase);
                    actions.push(Action::Depart(DepartureOutcome::LeftWithoutPurchase));
                    Departed(DepartureOutcome::LeftWithoutPurchase)
                }
            }
            (WaitingForHelp | WaitingAtTill, Trigger::Assigned { staff, waited }) => {
                self.open_request = None;
                self.serving_staff = Some(staff);
                satisfaction = Some(if waited > 0.0 {
                    SatisfactionEventKind::ServedAfterWait
                } else {
                    SatisfactionEventKind::ServedImmediately
                });
                if from == WaitingForHelp {
                    ReceivingHelp
                } else {
                    BeingServedAtTill
                }
            }
            (WaitingForHelp, Trigger::PatienceExpired) => {
                self.open_request = None;
                satisfaction = Some(SatisfactionEventKind::HelpAbandoned);
                actions.push(Action::Depart(DepartureOutcome::AbandonedHelpQueue));
                Departed(DepartureOutcome::AbandonedHelpQueue)
            }
            (WaitingAtTill, Trigger::PatienceExpired) => {
                self.open_request = None;
                satisfaction = Some(SatisfactionEventKind::TillAbandoned);
                actions.push(Action::Depart(DepartureOutcome::AbandonedTillQueue));
                Departed(DepartureOutcome::AbandonedTillQueue)
            }
            (ReceivingHelp, Trigger::ServiceComplete) => {
                let staff = self.serving_staff.take().ok_or_else(|| self.illegal(trigger))?;
                actions.push(Action::Release(staff));
                self.helped = true;
                if bernoulli(self.attributes.till_after_help, &mut self.behaviour) {
                    self.open_request = Some(RequestKind::Till);
                    actions.push(Action::Request(RequestKind::Till));
                    WaitingAtTill
                } else {
                    actions.push(Action::ScheduleDelay(sample(&profile.browse_time, &mut self.behaviour)));
                    Browsing
                }
            }
            (BeingServedAtTill, Trigger::ServiceComplete) => {
                let staff = self.serving_staff.take().ok_or_else(|| self.illegal(trigger))?;
                actions.push(Action::Release(staff));
                actions.push(Action::Depart(DepartureOutcome::Purchased));
                satisfaction = Some(SatisfactionEventKind::PurchaseCompleted);
                Departed(DepartureOutcome::Purchased)
            }
            _ => return Err(self.illegal(trigger)),
        };

        self.state = to;
        Ok(Transition {
            from,
            trigger: trigger.kind(),
            to,
            actions,
            satisfaction,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StaffRole {
    Cashier,
    SellerNormal,
    SellerExpert,
    SectionManager,
}

impl StaffRole {
    pub const ALL: [StaffRole; 4] = [
        StaffRole::Cashier,
        StaffRole::SellerNormal,
        StaffRole::SellerExpert,
        StaffRole::SectionManager,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Capability matrix: which roles may serve which request kinds.
pub fn qualified(role: StaffRole, kind: RequestKind) -> bool {
    use RequestKind::*;
    use StaffRole::*;
    match role {
        Cashier => kind == Till,
        SellerNormal => matches!(kind, Till | HelpNormal),
        SellerExpert => true,
        SectionManager => matches!(kind, HelpNormal | HelpExpert),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceTimes {
    pub till: Distribution,
    pub help_normal: Distribution,
    pub help_expert: Distribution,
}

impl ServiceTimes {
    pub fn for_kind(&self, kind: RequestKind) -> &Distribution {
        match kind {
            RequestKind::Till => &self.till,
            RequestKind::HelpNormal => &self.help_normal,
            RequestKind::HelpExpert => &self.help_expert,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StaffState {
    Available { since: SimTime },
    Serving { customer: CustomerId, kind: RequestKind, since: SimTime },
}

#[derive(Clone, Debug)]
pub struct StaffAgent {
    pub id: StaffId,
    pub role: StaffRole,
    pub state: StaffState,
    service_times: ServiceTimes,
    /// Serving time before this instant is excluded from `busy_minutes`.
    accounting_from: SimTime,
    busy_minutes: f64,
    /// Sum of every sampled service duration, warm-up included.
    sampled_minutes: f64,
    services: u64,
}

/// When the service just started will finish.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ServiceCompletion {
    pub customer: CustomerId,
    pub at: SimTime,
    pub duration: f64,
}

impl StaffAgent {
    pub fn new(id: StaffId, role: StaffRole, service_times: ServiceTimes, accounting_from: SimTime) -> Self {
        Self {
            id,
            role,
            state: StaffState::Available { since: SimTime::ZERO },
            service_times,
            accounting_from,
            busy_minutes: 0.0,
            sampled_minutes: 0.0,
            services: 0,
        }
    }

    pub fn is_available(&self) -> bool {
        matches!(self.state, StaffState::Available { .. })
    }

    pub fn idle_since(&self) -> Option<SimTime> {
        match self.state {
            StaffState::Available { since } => Some(since),
            StaffState::Serving { .. } => None,
        }
    }

    /// Serving time inside the accounting window.
    pub fn busy_minutes(&self) -> f64 {
        self.busy_minutes
    }

    pub fn sampled_minutes(&self) -> f64 {
        self.sampled_minutes
    }

    pub fn services(&self) -> u64 {
        self.services
    }

    /// Starts serving `customer`; the service duration is drawn from `stream`.
    pub fn begin_service(
        &mut self,
        customer: CustomerId,
        kind: RequestKind,
        stream: &mut RngStream,
        now: SimTime,
    ) -> Result<ServiceCompletion, ModelError> {
        if !self.is_available() {
            return Err(ModelError::StaffBusy { staff: self.id });
        }
        if !qualified(self.role, kind) {
            return Err(ModelError::Unqualified { staff: self.id, role: self.role, kind });
        }
        let duration = sample(self.service_times.for_kind(kind), stream);
        self.state = StaffState::Serving { customer, kind, since: now };
        self.sampled_minutes += duration;
        self.services += 1;
        Ok(ServiceCompletion { customer, at: now.after(duration), duration })
    }

    /// Returns the staff member to `Available`. The caller must then offer
    /// them to the queues.
    pub fn release(&mut self, now: SimTime) -> Result<(), ModelError> {
        match self.state {
            StaffState::Serving { since, .. } => {
                let start = since.minutes().max(self.accounting_from.minutes());
                self.busy_minutes += (now.minutes() - start).max(0.0);
                self.state = StaffState::Available { since: now };
                Ok(())
            }
            StaffState::Available { .. } => Err(ModelError::ReleaseIdle { staff: self.id }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_profile(help: f64, purchase: f64) -> CustomerProfile {
        CustomerProfile {
            browse_time: Distribution::constant(5.0),
            help_need: Distribution::constant(help),
            expert_help: Distribution::constant(0.0),
            help_patience: Distribution::constant(10.0),
            till_patience: Distribution::constant(10.0),
            purchase: Distribution::constant(purchase),
            till_after_help: Distribution::constant(1.0),
        }
    }

    fn times() -> ServiceTimes {
        ServiceTimes {
            till: Distribution::constant(3.0),
            help_normal: Distribution::constant(9.0),
            help_expert: Distribution::constant(12.0),
        }
    }

    fn spawn(profile: &CustomerProfile) -> Customer {
        let mut attrs = RngStream::new(1, streams::CUSTOMER_ATTRIBUTES);
        spawn_customer(0, profile, &mut attrs, 99, SimTime::ZERO)
    }

    #[test]
    fn constant_profiles_give_identical_customers() {
        let profile = constant_profile(0.3, 0.8);
        let mut attrs = RngStream::new(1, streams::CUSTOMER_ATTRIBUTES);
        let a = spawn_customer(0, &profile, &mut attrs, 5, SimTime::ZERO);
        let b = spawn_customer(1, &profile, &mut attrs, 5, SimTime::ZERO);
        assert_eq!(a.attributes, b.attributes);
        assert_eq!(a.state, CustomerState::Contemplating);
    }

    #[test]
    fn certain_help_need_requests_help() {
        let profile = constant_profile(1.0, 1.0);
        let mut c = spawn(&profile);
        let t = c.transition(Trigger::DelayElapsed, &profile).unwrap();
        assert_eq!(t.to, CustomerState::Browsing);
        assert_eq!(t.actions, vec![Action::ScheduleDelay(5.0)]);
        let t = c.transition(Trigger::DelayElapsed, &profile).unwrap();
        assert_eq!(t.to, CustomerState::WaitingForHelp);
        assert_eq!(t.actions, vec![Action::Request(RequestKind::HelpNormal)]);
        assert_eq!(c.open_request(), Some(RequestKind::HelpNormal));
    }

    #[test]
    fn till_abandonment_is_dissatisfying() {
        let profile = constant_profile(0.0, 1.0);
        let mut c = spawn(&profile);
        c.transition(Trigger::DelayElapsed, &profile).unwrap();
        assert_eq!(c.transition(Trigger::DelayElapsed, &profile).unwrap().to, CustomerState::WaitingAtTill);
        let t = c.transition(Trigger::PatienceExpired, &profile).unwrap();
        assert_eq!(t.to, CustomerState::Departed(DepartureOutcome::AbandonedTillQueue));
        assert_eq!(t.satisfaction, Some(SatisfactionEventKind::TillAbandoned));
    }

    #[test]
    fn departed_is_terminal() {
        let profile = constant_profile(0.0, 0.0);
        let mut c = spawn(&profile);
        c.transition(Trigger::DelayElapsed, &profile).unwrap();
        let t = c.transition(Trigger::DelayElapsed, &profile).unwrap();
        assert_eq!(t.to, CustomerState::Departed(DepartureOutcome::LeftWithoutPurchase));
        for trig in [Trigger::DelayElapsed, Trigger::PatienceExpired, Trigger::ServiceComplete] {
            assert!(matches!(
                c.transition(trig, &profile),
                Err(ModelError::IllegalTransition { .. })
            ));
        }
    }

    #[test]
    fn direct_till_path() {
        let profile = constant_profile(0.0, 1.0);
        let mut c = spawn(&profile);
        let mut path = vec![c.state];
        path.push(c.transition(Trigger::DelayElapsed, &profile).unwrap().to);
        path.push(c.transition(Trigger::DelayElapsed, &profile).unwrap().to);
        let t = c.transition(Trigger::Assigned { staff: 3, waited: 0.0 }, &profile).unwrap();
        assert_eq!(t.satisfaction, Some(SatisfactionEventKind::ServedImmediately));
        path.push(t.to);
        let t = c.transition(Trigger::ServiceComplete, &profile).unwrap();
        assert_eq!(t.actions, vec![Action::Release(3), Action::Depart(DepartureOutcome::Purchased)]);
        path.push(t.to);
        use CustomerState::*;
        assert_eq!(
            path,
            vec![Contemplating, Browsing, WaitingAtTill, BeingServedAtTill, Departed(DepartureOutcome::Purchased)]
        );
    }

    #[test]
    fn every_produced_edge_is_in_the_table() {
        let profile = CustomerProfile {
            browse_time: Distribution::constant(1.0),
            help_need: Distribution::constant(0.5),
            expert_help: Distribution::constant(0.5),
            help_patience: Distribution::constant(1.0),
            till_patience: Distribution::constant(1.0),
            purchase: Distribution::constant(0.5),
            till_after_help: Distribution::constant(0.5),
        };
        let mut attrs = RngStream::new(4, streams::CUSTOMER_ATTRIBUTES);
        for id in 0..200 {
            let mut c = spawn_customer(id, &profile, &mut attrs, 17, SimTime::ZERO);
            let mut step = 0;
            let mut terminal = 0;
            while !c.state.is_departed() {
                let trigger = match c.state {
                    CustomerState::Contemplating | CustomerState::Browsing => Trigger::DelayElapsed,
                    CustomerState::WaitingForHelp | CustomerState::WaitingAtTill => {
                        if step % 3 == 0 {
                            Trigger::PatienceExpired
                        } else {
                            Trigger::Assigned { staff: 0, waited: 1.0 }
                        }
                    }
                    _ => Trigger::ServiceComplete,
                };
                let t = c.transition(trigger, &profile).unwrap();
                assert!(legal_edge(t.from, t.trigger, t.to), "{t:?}");
                terminal += t.satisfaction.filter(|k| k.is_terminal()).is_some() as usize;
                step += 1;
            }
            assert_eq!(terminal, 1);
        }
    }

    #[test]
    fn helped_customer_does_not_ask_again() {
        let mut profile = constant_profile(1.0, 0.0);
        profile.till_after_help = Distribution::constant(0.0);
        let mut c = spawn(&profile);
        c.transition(Trigger::DelayElapsed, &profile).unwrap();
        assert_eq!(c.transition(Trigger::DelayElapsed, &profile).unwrap().to, CustomerState::WaitingForHelp);
        c.transition(Trigger::Assigned { staff: 1, waited: 0.0 }, &profile).unwrap();
        assert_eq!(c.transition(Trigger::ServiceComplete, &profile).unwrap().to, CustomerState::Browsing);
        let t = c.transition(Trigger::DelayElapsed, &profile).unwrap();
        assert_eq!(t.to, CustomerState::Departed(DepartureOutcome::LeftWithoutPurchase));
    }

    #[test]
    fn capability_matrix() {
        use RequestKind::*;
        use StaffRole::*;
        assert!(!qualified(SellerNormal, HelpExpert));
        assert!(qualified(SellerExpert, HelpNormal));
        assert!(qualified(Cashier, Till));
        assert!(!qualified(Cashier, HelpNormal));
        assert!(!qualified(SectionManager, Till));
        assert!(qualified(SectionManager, HelpExpert));
        assert!(qualified(SellerNormal, Till));
    }

    #[test]
    fn begin_service_schedules_completion() {
        let mut staff = StaffAgent::new(0, StaffRole::Cashier, times(), SimTime::ZERO);
        let mut s = RngStream::new(1, 1);
        let done = staff.begin_service(7, RequestKind::Till, &mut s, SimTime::new(10.0)).unwrap();
        assert_eq!(done.at, SimTime::new(13.0));
        assert!(matches!(
            staff.begin_service(8, RequestKind::Till, &mut s, SimTime::new(10.0)),
            Err(ModelError::StaffBusy { .. })
        ));
    }

    #[test]
    fn unqualified_assignment_fails() {
        let mut staff = StaffAgent::new(0, StaffRole::Cashier, times(), SimTime::ZERO);
        let mut s = RngStream::new(1, 1);
        assert!(matches!(
            staff.begin_service(7, RequestKind::HelpNormal, &mut s, SimTime::ZERO),
            Err(ModelError::Unqualified { .. })
        ));
    }

    #[test]
    fn release_twice_fails() {
        let mut staff = StaffAgent::new(0, StaffRole::SellerNormal, times(), SimTime::ZERO);
        let mut s = RngStream::new(1, 1);
        staff.begin_service(7, RequestKind::HelpNormal, &mut s, SimTime::ZERO).unwrap();
        staff.release(SimTime::new(9.0)).unwrap();
        assert!(staff.is_available());
        assert_eq!(staff.busy_minutes(), 9.0);
        assert_eq!(staff.release(SimTime::new(9.0)), Err(ModelError::ReleaseIdle { staff: 0 }));
    }

    #[test]
    fn busy_time_is_clipped_to_accounting_window() {
        let mut staff = StaffAgent::new(0, StaffRole::SellerNormal, times(), SimTime::new(5.0));
        let mut s = RngStream::new(1, 1);
        staff.begin_service(7, RequestKind::HelpNormal, &mut s, SimTime::ZERO).unwrap();
        staff.release(SimTime::new(9.0)).unwrap();
        assert_eq!(staff.busy_minutes(), 4.0);
        assert_eq!(staff.sampled_minutes(), 9.0);
    }
}
