use floorsim::agents::{ServiceTimes, StaffAgent, StaffRole};
use floorsim::kernel::{sample, Distribution, EventKind, EventQueue, RngStream, SimTime, Target};
use floorsim::metrics::SatisfactionWeights;
use floorsim::queuing::{QueueRule, QueueSystem, RequestKind, RequestOutcome};
use floorsim::results::Stats;
use proptest::prelude::*;

fn cashier() -> StaffAgent {
    let t = Distribution::constant(1.0);
    let times = ServiceTimes { till: t.clone(), help_normal: t.clone(), help_expert: t };
    StaffAgent::new(0, StaffRole::Cashier, times, SimTime::ZERO)
}

proptest! {
    #[test]
    fn pops_are_ordered_and_clock_never_rewinds(
        batches in prop::collection::vec(prop::collection::vec(0.0f64..50.0, 0..8), 1..20)
    ) {
        let mut q = EventQueue::new();
        let mut last = (f64::NEG_INFINITY, 0u64);
        let mut popped = 0;
        let mut scheduled = 0;
        // Interleave: schedule a batch relative to now, then pop one.
        for batch in &batches {
            for &d in batch {
                q.schedule(q.now().after(d), Target::Shop, EventKind::Arrival).unwrap();
                scheduled += 1;
            }
            if let Some(e) = q.pop_next() {
                let key = (e.time.minutes(), e.seq);
                prop_assert!(key.0 > last.0 || (key.0 == last.0 && key.1 > last.1));
                last = key;
                popped += 1;
            }
        }
        while let Some(e) = q.pop_next() {
            prop_assert!(e.time.minutes() >= last.0);
            last = (e.time.minutes(), e.seq);
            popped += 1;
        }
        prop_assert_eq!(popped, scheduled);
    }

    #[test]
    fn scheduling_before_the_clock_fails(t in 1.0f64..100.0, back in 0.001f64..1.0) {
        let mut q = EventQueue::new();
        q.schedule(SimTime::new(t), Target::Shop, EventKind::Arrival).unwrap();
        q.pop_next();
        prop_assert!(q.schedule(SimTime::new(t - back), Target::Shop, EventKind::Arrival).is_err());
    }

    #[test]
    fn triangular_draws_stay_in_support(a in 0.0f64..10.0, b in 0.0f64..10.0, c in 0.0f64..10.0, seed: u64) {
        let mut v = [a, b, c];
        v.sort_by(f64::total_cmp);
        let d = Distribution::triangular(v[0], v[1], v[2]);
        prop_assert!(d.violations("x").is_empty());
        let mut s = RngStream::new(seed, 1);
        for _ in 0..100 {
            let x = sample(&d, &mut s);
            prop_assert!(x >= v[0] && x <= v[2]);
        }
    }

    #[test]
    fn same_seed_same_draws(seed: u64, stream in 0u64..16) {
        let d = Distribution::exponential_mean(3.0);
        let mut a = RngStream::new(seed, stream);
        let mut b = RngStream::new(seed, stream);
        for _ in 0..32 {
            prop_assert_eq!(sample(&d, &mut a).to_bits(), sample(&d, &mut b).to_bits());
        }
    }

    #[test]
    fn queue_rules_match_reference_order(
        patience in prop::collection::vec(0.0f64..30.0, 1..30),
        rule_index in 0usize..3
    ) {
        let rule = [QueueRule::Fifo, QueueRule::Lifo, QueueRule::ShortestDeadlineFirst][rule_index];
        let mut qs = QueueSystem::new(rule);
        for (id, &p) in patience.iter().enumerate() {
            let now = SimTime::new(id as f64);
            let out = qs.request_service(id, RequestKind::Till, p, now, &[]).unwrap();
            prop_assert!(matches!(out, RequestOutcome::Enqueued { .. }), "queued with no staff");
        }
        let staff = cashier();
        let got: Vec<usize> = std::iter::from_fn(|| qs.on_staff_freed(&staff).map(|e| e.customer)).collect();

        let mut want: Vec<usize> = (0..patience.len()).collect();
        match rule {
            QueueRule::Fifo => {}
            QueueRule::Lifo => want.reverse(),
            QueueRule::ShortestDeadlineFirst => {
                let deadline = |i: usize| i as f64 + patience[i];
                want.sort_by(|&x, &y| deadline(x).total_cmp(&deadline(y)).then(x.cmp(&y)));
            }
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn weight_scaling_is_linear(k in 0.01f64..100.0) {
        let w = SatisfactionWeights::default();
        let s = w.scaled(k);
        prop_assert!((s.till_abandoned - k * w.till_abandoned).abs() < 1e-12 * k.max(1.0));
        prop_assert!(s.violations().is_empty());
    }

    #[test]
    fn stats_mean_within_range(v in prop::collection::vec(-100.0f64..100.0, 1..50)) {
        let s = Stats::of(v.iter().copied());
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(s.mean >= lo - 1e-9 && s.mean <= hi + 1e-9);
        prop_assert!(s.sd >= 0.0);
    }
}
