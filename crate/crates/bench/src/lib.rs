//! Scalable workloads for the kernel benchmarks.

use evokernel::fixtures;
use evokernel::{
    ElementClass, ElementEvolution, ElementVersion, EventLog, History, InstanceTyping,
    InstanceValue, Tick, TimedMap,
};

/// The broker hierarchy with `instances` typed instances spread over `ticks`
/// ticks. Instance `i` appears at tick `1 + i % ticks` and stays, cycling
/// through the three valid broker typing shapes.
pub fn broker_scaled(instances: usize, ticks: u64) -> History {
    let shapes: [&[&str]; 3] = [
        &["House", "Product", "Real estate"],
        &["Boat", "Product"],
        &["Boat", "Product", "Real estate"],
    ];
    let mut h = fixtures::broker();
    for i in 0..instances {
        let g = InstanceTyping::new(
            InstanceValue::surrogate(format!("x{i}")),
            shapes[i % shapes.len()].iter().copied(),
        );
        let from = Tick(1 + i as u64 % ticks.max(1));
        let track = TimedMap::starting(from, ElementVersion::from(g));
        h.insert(ElementEvolution::new(
            format!("g:x{i}"),
            ElementClass::InstanceTyping,
            track,
        ))
        .expect("generated ids are unique");
    }
    h
}

/// The store frozen at its first tick together with the events that grow it
/// into the full store.
pub fn store_replay() -> (History, EventLog) {
    (fixtures::store().prefix(Tick(1)), fixtures::store_events())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_broker_stays_well_formed() {
        for (n, ticks) in [(0, 1), (7, 3), (50, 5)] {
            let h = broker_scaled(n, ticks);
            assert!(evokernel::is_amh(&h), "{n} instances over {ticks} ticks");
            assert_eq!(h.typings_at(Tick(ticks)).len(), 3 + n);
        }
    }

    #[test]
    fn store_replay_reaches_the_store() {
        let (h0, log) = store_replay();
        assert_eq!(evokernel::replay(&h0, &log).unwrap(), fixtures::store());
    }
}
