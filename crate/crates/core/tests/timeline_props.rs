use evokernel::{Tick, TickRange, TimedMap};
use proptest::prelude::*;

const SPAN: u64 = 24;

/// Ordered, disjoint runs with small values so neighbours often coincide.
fn timed_map() -> impl Strategy<Value = TimedMap<u8>> {
    prop::collection::vec((0u64..3, 0u64..4, 0u8..3, prop::bool::weighted(0.15)), 0..5).prop_map(
        |steps| {
            let mut runs = Vec::new();
            let mut t = 0;
            for (gap, len, v, open) in steps {
                let start = t + gap;
                if open {
                    runs.push((Tick(start), None, v));
                    break;
                }
                runs.push((Tick(start), Some(Tick(start + len)), v));
                t = start + len + 1;
            }
            TimedMap::from_runs(runs).expect("ordered runs")
        },
    )
}

fn pointwise(m: &TimedMap<u8>) -> Vec<Option<u8>> {
    (0..SPAN).map(|s| m.get(Tick(s)).copied()).collect()
}

proptest! {
    #[test]
    fn prefix_matches_definition(m in timed_map(), t in 0u64..SPAN) {
        let p = m.prefix(Tick(t));
        for s in 0..SPAN {
            let expected = if s <= t { m.get(Tick(s)) } else { m.get(Tick(t)) };
            prop_assert_eq!(p.get(Tick(s)), expected);
        }
    }

    #[test]
    fn later_idempotence(m in timed_map(), a in 0u64..SPAN, b in 0u64..SPAN) {
        let (u, t) = (Tick(a.min(b)), Tick(a.max(b)));
        prop_assert_eq!(m.prefix(t).prefix(u), m.prefix(u));
    }

    #[test]
    fn earlier_idempotence(m in timed_map(), a in 0u64..SPAN, b in 0u64..SPAN) {
        let (t, u) = (Tick(a.min(b)), Tick(a.max(b)));
        prop_assert_eq!(m.prefix(t).prefix(u), m.prefix(t));
    }

    #[test]
    fn definedness_beyond_prefix(m in timed_map(), t in 0u64..SPAN, d in 1u64..8) {
        let s = Tick(t + d);
        prop_assert_eq!(m.prefix(Tick(t)).defined_at(s), m.defined_at(Tick(t)));
    }

    #[test]
    fn equality_is_extensional(m in timed_map()) {
        prop_assume!(!m.is_open_ended());
        let rebuilt = TimedMap::from_runs(
            (0..SPAN).filter_map(|s| m.get(Tick(s)).map(|v| (Tick(s), Some(Tick(s)), *v))),
        )
        .expect("single-tick runs are ordered");
        prop_assert_eq!(pointwise(&rebuilt), pointwise(&m));
        prop_assert_eq!(rebuilt, m);
    }

    #[test]
    fn restrict_keeps_only_the_range(m in timed_map(), a in 0u64..SPAN, len in 0u64..6) {
        let range = TickRange::between(Tick(a), Tick(a + len)).unwrap();
        let r = m.restrict(range);
        for s in 0..SPAN + 8 {
            let expected = if range.contains(Tick(s)) { m.get(Tick(s)) } else { None };
            prop_assert_eq!(r.get(Tick(s)), expected);
        }
    }

    #[test]
    fn set_from_overrides_the_tail(m in timed_map(), t in 0u64..SPAN, v in 0u8..3) {
        let mut n = m.clone();
        n.set_from(Tick(t), v);
        for s in 0..SPAN + 4 {
            let expected = if s < t { m.get(Tick(s)).copied() } else { Some(v) };
            prop_assert_eq!(n.get(Tick(s)).copied(), expected);
        }
    }
}
