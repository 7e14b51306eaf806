use std::path::PathBuf;

use evokernel::document::{event_log_from_json, history_from_json};
use evokernel::{fixtures, History, Tick};

fn read(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn load(name: &str) -> History {
    history_from_json(&read(name)).unwrap()
}

#[test]
fn history_files_match_builtin_fixtures() {
    let cases: [(&str, History); 9] = [
        ("rental-store.json", fixtures::rental_store_table()),
        ("broker.json", fixtures::broker()),
        ("broker-w1.json", fixtures::broker_with_w1()),
        ("store.json", fixtures::store()),
        ("store-t1.json", fixtures::store().prefix(Tick(1))),
        ("airplane.json", fixtures::airplane()),
        (
            "airplane-orphan-code.json",
            fixtures::airplane_orphan_code(),
        ),
        ("reversal-mutant.json", fixtures::reversal_mutant()),
        ("separation-mutant.json", fixtures::separation_mutant()),
    ];
    for (name, h) in cases {
        let got = load(name);
        assert_eq!(got, h, "{name}");
        assert_eq!(got.universe(), h.universe(), "{name}");
    }
}

#[test]
fn event_files_match_builtin_logs() {
    let store_t1 = load("store-t1.json");
    assert_eq!(
        event_log_from_json(&read("store-events.json"), Some(&store_t1)).unwrap(),
        fixtures::store_events()
    );
    let rental = load("rental-store.json");
    assert_eq!(
        event_log_from_json(&read("rental-store-events.json"), Some(&rental)).unwrap(),
        fixtures::rental_store_table_events()
    );
}

#[test]
fn dangling_event_file_resolves_classes_from_base() {
    let base = load("store-t1.json");
    let log = event_log_from_json(&read("store-dangling-events.json"), Some(&base)).unwrap();
    assert_eq!(log.len(), 1);
    assert!(log.get(Tick(1)).is_some());
}
