//! Write the built-in fixtures as JSON documents.
//!
//! Usage: cargo run -p evokernel --example export_fixtures -- <dir>

use std::path::PathBuf;

use evokernel::document::{event_log_to_json, history_to_value};
use evokernel::fixtures;
use evokernel::History;
use serde_json::Value;

/// Rewrite integer ticks as `t<n>` labels, the form hand-written files use.
fn labelled(mut v: Value) -> Value {
    fn relabel(x: &mut Value) {
        if let Some(n) = x.as_u64() {
            *x = Value::String(format!("t{n}"));
        }
    }
    for e in v["evolutions"].as_array_mut().into_iter().flatten() {
        for run in e["track"].as_array_mut().into_iter().flatten() {
            relabel(&mut run["from"]);
            if let Some(to) = run.get_mut("to") {
                relabel(to);
            }
        }
    }
    relabel(&mut v["horizon"]);
    v
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialise") + "\n"
}

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    std::fs::create_dir_all(&dir)?;
    let histories: [(&str, History); 8] = [
        ("broker", fixtures::broker()),
        ("broker-w1", fixtures::broker_with_w1()),
        ("store", fixtures::store()),
        ("store-t1", fixtures::store().prefix(evokernel::Tick(1))),
        ("airplane", fixtures::airplane()),
        ("airplane-orphan-code", fixtures::airplane_orphan_code()),
        ("reversal-mutant", fixtures::reversal_mutant()),
        ("separation-mutant", fixtures::separation_mutant()),
    ];
    for (name, h) in histories {
        std::fs::write(
            dir.join(format!("{name}.json")),
            pretty(&history_to_value(&h)),
        )?;
    }
    let rental = labelled(history_to_value(&fixtures::rental_store_table()));
    std::fs::write(dir.join("rental-store.json"), pretty(&rental))?;
    std::fs::write(
        dir.join("rental-store-events.json"),
        event_log_to_json(&fixtures::rental_store_table_events()) + "\n",
    )?;
    std::fs::write(
        dir.join("store-events.json"),
        event_log_to_json(&fixtures::store_events()) + "\n",
    )?;
    Ok(())
}
