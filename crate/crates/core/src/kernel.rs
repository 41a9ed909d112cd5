//! Discrete-event scheduling core and reproducible random-variate generation.
//!
//! Events are dispatched in `(time, seq)` order where `seq` is the scheduling
//! sequence number, so simultaneous events fire in the order they were
//! scheduled. Every random draw in a replication flows through an
//! [`RngStream`], a ChaCha8 generator keyed by `(seed, stream id)`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Exp, Triangular};
use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Simulated minutes since the start of the scenario.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SimTime(f64);

impl SimTime {
    pub const ZERO: SimTime = SimTime(0.0);

    /// Panics on negative or NaN input; simulated time never runs backwards
    /// from the origin.
    pub fn new(minutes: f64) -> Self {
        assert!(minutes >= 0.0, "simulation time must be non-negative, got {minutes}");
        SimTime(minutes)
    }

    pub fn minutes(self) -> f64 {
        self.0
    }

    pub fn after(self, delay: f64) -> SimTime {
        SimTime::new(self.0 + delay)
    }
}

impl fmt::Display for SimTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3}min", self.0)
    }
}

pub type CustomerId = usize;
pub type StaffId = usize;

/// Who an event is addressed to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Target {
    Customer(CustomerId),
    Staff(StaffId),
    Shop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EventKind {
    Arrival,
    DelayElapsed,
    PatienceExpired,
    ServiceComplete,
    ShopClose { day: u32 },
    ReportTick { week: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Event {
    pub time: SimTime,
    pub seq: u64,
    pub target: Target,
    pub kind: EventKind,
}

impl Eq for Event {}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap and we want the earliest event.
        other
            .time
            .0
            .total_cmp(&self.time.0)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Pending-event set plus the simulation clock.
#[derive(Debug, Default)]
pub struct EventQueue {
    heap: BinaryHeap<Event>,
    cancelled: HashSet<u64>,
    clock: SimTime,
    next_seq: u64,
}

impl EventQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn now(&self) -> SimTime {
        self.clock
    }

    /// Schedules an event and returns its sequence number.
    pub fn schedule(&mut self, time: SimTime, target: Target, kind: EventKind) -> Result<u64, ModelError> {
        if time < self.clock || time.0.is_nan() {
            return Err(ModelError::ScheduledInPast {
                clock: self.clock.0,
                requested: time.0,
            });
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Event { time, seq, target, kind });
        Ok(seq)
    }

    /// Lazily removes a pending event; it will be skipped by [`pop_next`](Self::pop_next).
    pub fn cancel(&mut self, seq: u64) {
        self.cancelled.insert(seq);
    }

    pub fn pop_next(&mut self) -> Option<Event> {
        while let Some(event) = self.heap.pop() {
            if self.cancelled.remove(&event.seq) {
                continue;
            }
            self.clock = event.time;
            return Some(event);
        }
        None
    }

    pub fn len(&self) -> usize {
        self.heap.len() - self.cancelled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Named stream identifiers. Each population/decision category owns a stream
/// so adding draws to one category never shifts another.
pub mod streams {
    pub const ARRIVALS: u64 = 1;
    pub const CUSTOMER_ATTRIBUTES: u64 = 2;
    pub const CUSTOMER_BEHAVIOUR: u64 = 3;
}

/// A seeded, independently positioned random stream.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform draw on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.random::<u64>()
    }
}

/// SplitMix64 finaliser, used to derive child seeds.
pub fn mix_seed(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Delay and decision distributions, all in minutes where applicable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Distribution {
    Exponential { rate: f64 },
    Triangular { min: f64, mode: f64, max: f64 },
    /// `(value, probability)` pairs.
    Empirical { table: Vec<(f64, f64)> },
    Constant { value: f64 },
}

impl Distribution {
    pub fn exponential_mean(mean: f64) -> Self {
        Distribution::Exponential { rate: 1.0 / mean }
    }

    pub fn triangular(min: f64, mode: f64, max: f64) -> Self {
        Distribution::Triangular { min, mode, max }
    }

    pub fn constant(value: f64) -> Self {
        Distribution::Constant { value }
    }

    /// Returns every parameter violation, described in terms of `field`.
    pub fn violations(&self, field: &str) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            Distribution::Exponential { rate } => {
                if !(rate.is_finite() && *rate > 0.0) {
                    out.push(format!("{field}: exponential rate must be finite and > 0, got {rate}"));
                }
            }
            Distribution::Triangular { min, mode, max } => {
                if !(min.is_finite() && mode.is_finite() && max.is_finite()) {
                    out.push(format!("{field}: triangular bounds must be finite"));
                } else if !(min <= mode && mode <= max) {
                    out.push(format!(
                        "{field}: triangular requires min <= mode <= max, got ({min}, {mode}, {max})"
                    ));
                }
            }
            Distribution::Empirical { table } => {
                if table.is_empty() {
                    out.push(format!("{field}: empirical table is empty"));
                }
                if table.iter().any(|&(v, p)| !v.is_finite() || p.is_nan() || p < 0.0) {
                    out.push(format!("{field}: empirical table has a non-finite value or negative probability"));
                }
                let total: f64 = table.iter().map(|&(_, p)| p).sum();
                if (total - 1.0).abs() > 1e-9 {
                    out.push(format!("{field}: empirical table probabilities sum to {total}, expected 1"));
                }
            }
            Distribution::Constant { value } => {
                if value.is_nan() {
                    out.push(format!("{field}: constant value is NaN"));
                }
            }
        }
        out
    }

    /// Smallest and largest value the distribution can produce.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Distribution::Exponential { .. } => (0.0, f64::INFINITY),
            Distribution::Triangular { min, max, .. } => (*min, *max),
            Distribution::Empirical { table } => table
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(v, _)| (lo.min(v), hi.max(v))),
            Distribution::Constant { value } => (*value, *value),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Distribution::Exponential { rate } => 1.0 / rate,
            Distribution::Triangular { min, mode, max } => (min + mode + max) / 3.0,
            Distribution::Empirical { table } => table.iter().map(|&(v, p)| v * p).sum(),
            Distribution::Constant { value } => *value,
        }
    }
}

/// Draws one value. Parameters are assumed valid (checked at config load).
pub fn sample(dist: &Distribution, stream: &mut RngStream) -> f64 {
    match dist {
        Distribution::Exponential { rate } => Exp::new(*rate).expect("validated rate").sample(&mut stream.rng),
        Distribution::Triangular { min, mode, max } => {
            if min == max {
                *min
            } else {
                Triangular::new(*min, *max, *mode).expect("validated triangular").sample(&mut stream.rng)
            }
        }
        Distribution::Empirical { table } => {
            let u = stream.uniform();
            let mut cumulative = 0.0;
            for &(value, p) in table {
                cumulative += p;
                if u < cumulative {
                    return value;
                }
            }
            // Rounding slack in the cumulative sum.
            table.iter().rev().find(|&&(_, p)| p > 0.0).map_or(table[0].0, |&(v, _)| v)
        }
        Distribution::Constant { value } => *value,
    }
}

pub fn bernoulli(p: f64, stream: &mut RngStream) -> bool {
    debug_assert!((0.0..=1.0).contains(&p));
    // p = 0 never fires and p = 1 always fires since uniform() is in [0, 1).
    stream.uniform() < p
}
