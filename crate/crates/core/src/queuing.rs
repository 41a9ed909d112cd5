//! Matching service requests to qualified staff.
//!
//! Each request kind has its own queue. A request is served at once when a
//! qualified staff member is free; otherwise the customer waits in the queue
//! for that kind until someone qualified frees up or their patience runs out.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::agents::{qualified, StaffAgent, StaffRole};
use crate::error::ModelError;
use crate::kernel::{CustomerId, SimTime, StaffId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RequestKind {
    Till,
    HelpNormal,
    HelpExpert,
}

impl RequestKind {
    pub const ALL: [RequestKind; 3] = [RequestKind::Till, RequestKind::HelpNormal, RequestKind::HelpExpert];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_help(self) -> bool {
        !matches!(self, RequestKind::Till)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueueRule {
    #[default]
    Fifo,
    Lifo,
    ShortestDeadlineFirst,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct OrderKey {
    primary: f64,
    seq: u64,
}

impl Eq for OrderKey {}

impl Ord for OrderKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.primary.total_cmp(&other.primary).then(self.seq.cmp(&other.seq))
    }
}

impl PartialOrd for OrderKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QueueEntry {
    pub customer: CustomerId,
    pub kind: RequestKind,
    pub enqueued: SimTime,
    /// `f64::INFINITY` when the customer never reneges.
    pub deadline: f64,
    /// Sequence number of the pending patience-expired event, if any.
    pub patience_event: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct ServiceQueue {
    kind: RequestKind,
    rule: QueueRule,
    entries: BTreeMap<OrderKey, QueueEntry>,
    keys: HashMap<CustomerId, OrderKey>,
    next_seq: u64,
}

impl ServiceQueue {
    pub fn new(kind: RequestKind, rule: QueueRule) -> Self {
        Self {
            kind,
            rule,
            entries: BTreeMap::new(),
            keys: HashMap::new(),
            next_seq: 0,
        }
    }

    pub fn kind(&self) -> RequestKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, customer: CustomerId) -> bool {
        self.keys.contains_key(&customer)
    }

    fn push(&mut self, customer: CustomerId, enqueued: SimTime, deadline: f64) {
        let seq = self.next_seq;
        self.next_seq += 1;
        let key = match self.rule {
            QueueRule::Fifo => OrderKey { primary: 0.0, seq },
            QueueRule::Lifo => OrderKey { primary: 0.0, seq: u64::MAX - seq },
            QueueRule::ShortestDeadlineFirst => OrderKey { primary: deadline, seq },
        };
        self.entries.insert(
            key,
            QueueEntry { customer, kind: self.kind, enqueued, deadline, patience_event: None },
        );
        self.keys.insert(customer, key);
    }

    fn pop(&mut self) -> Option<QueueEntry> {
        let (_, entry) = self.entries.pop_first()?;
        self.keys.remove(&entry.customer);
        Some(entry)
    }

    fn remove(&mut self, customer: CustomerId) -> Option<QueueEntry> {
        let key = self.keys.remove(&customer)?;
        self.entries.remove(&key)
    }

    fn entry_mut(&mut self, customer: CustomerId) -> Option<&mut QueueEntry> {
        let key = self.keys.get(&customer)?;
        self.entries.get_mut(key)
    }

    /// Entries in dequeue order.
    pub fn iter(&self) -> impl Iterator<Item = &QueueEntry> {
        self.entries.values()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RequestOutcome {
    Assigned(StaffId),
    /// Waiting; `deadline` is `None` for infinite patience.
    Enqueued { deadline: Option<SimTime> },
}

/// The three per-kind queues of a replication.
#[derive(Clone, Debug)]
pub struct QueueSystem {
    queues: [ServiceQueue; 3],
}

impl QueueSystem {
    pub fn new(rule: QueueRule) -> Self {
        Self {
            queues: RequestKind::ALL.map(|k| ServiceQueue::new(k, rule)),
        }
    }

    pub fn queue(&self, kind: RequestKind) -> &ServiceQueue {
        &self.queues[kind.index()]
    }

    pub fn is_waiting(&self, customer: CustomerId) -> bool {
        self.queues.iter().any(|q| q.contains(customer))
    }

    /// Serves the request at once if a qualified staff member is free,
    /// otherwise queues it. The caller starts the service or schedules the
    /// patience expiry accordingly.
    pub fn request_service(
        &mut self,
        customer: CustomerId,
        kind: RequestKind,
        patience: f64,
        now: SimTime,
        staff: &[StaffAgent],
    ) -> Result<RequestOutcome, ModelError> {
        if self.is_waiting(customer) {
            return Err(ModelError::DuplicateRequest { customer });
        }
        let free = staff.iter().filter(|s| s.is_available() && qualified(s.role, kind));
        if let Some(id) = select_staff(free, kind) {
            return Ok(RequestOutcome::Assigned(id));
        }
        let deadline = now.minutes() + patience;
        self.queues[kind.index()].push(customer, now, deadline);
        Ok(RequestOutcome::Enqueued {
            deadline: deadline.is_finite().then(|| SimTime::new(deadline)),
        })
    }

    pub fn attach_patience_event(&mut self, customer: CustomerId, seq: u64) {
        if let Some(entry) = self.queues.iter_mut().find_map(|q| q.entry_mut(customer)) {
            entry.patience_event = Some(seq);
        }
    }

    /// Offers a newly available staff member to the queues they can serve,
    /// most demanding kind first. Returns the dequeued request, if any.
    pub fn on_staff_freed(&mut self, staff: &StaffAgent) -> Option<QueueEntry> {
        debug_assert!(staff.is_available());
        service_priority(staff.role)
            .iter()
            .find_map(|&kind| self.queues[kind.index()].pop())
    }

    /// Removes a customer whose patience ran out. Returns `None` when the
    /// customer is no longer queued (the expiry is stale).
    pub fn renege(&mut self, customer: CustomerId) -> Option<QueueEntry> {
        self.queues.iter_mut().find_map(|q| q.remove(customer))
    }
}

/// Queues a role checks when freed, in order.
pub fn service_priority(role: StaffRole) -> &'static [RequestKind] {
    use RequestKind::*;
    match role {
        StaffRole::Cashier => &[Till],
        StaffRole::SellerNormal => &[HelpNormal, Till],
        StaffRole::SellerExpert => &[HelpExpert, HelpNormal, Till],
        StaffRole::SectionManager => &[HelpExpert, HelpNormal],
    }
}

/// Rank of a role for a request kind; lower ranks are picked first so the
/// most skilled staff stay free for work only they can do.
fn skill_rank(role: StaffRole, kind: RequestKind) -> u8 {
    use StaffRole::*;
    match (kind, role) {
        (RequestKind::Till, Cashier) => 0,
        (RequestKind::Till, SellerNormal) => 1,
        (RequestKind::Till, SellerExpert) => 2,
        (RequestKind::HelpNormal, SellerNormal) => 0,
        (RequestKind::HelpNormal, SellerExpert) => 1,
        (RequestKind::HelpNormal, SectionManager) => 2,
        (RequestKind::HelpExpert, SellerExpert) => 0,
        (RequestKind::HelpExpert, SectionManager) => 1,
        _ => u8::MAX,
    }
}

/// Least-qualified first, then longest idle, then lowest id.
pub fn select_staff<'a>(candidates: impl IntoIterator<Item = &'a StaffAgent>, kind: RequestKind) -> Option<StaffId> {
    candidates
        .into_iter()
        .filter_map(|s| s.idle_since().map(|since| (s, since)))
        .min_by(|(a, a_since), (b, b_since)| {
            skill_rank(a.role, kind)
                .cmp(&skill_rank(b.role, kind))
                .then(a_since.minutes().total_cmp(&b_since.minutes()))
                .then(a.id.cmp(&b.id))
        })
        .map(|(s, _)| s.id)
}
