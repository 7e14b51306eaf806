use std::path::PathBuf;
use std::process::{Command, Output};

use evokernel::document::{history_from_json, history_to_json};
use evokernel::{fixtures, Tick};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn evokernel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evokernel"))
        .args(args)
        .env_remove("EVOKERNEL_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

fn temp_file(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const EMPTY: &str = r#"{"universe": {"otypes": []}}"#;

#[test]
fn validate_rental_store_golden_file() {
    let o = evokernel(&["validate", path_str(&fixture("rental-store.json"))]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("well-formed"));
}

#[test]
fn validate_reports_w1_unique_root() {
    let o = evokernel(&[
        "--format",
        "json",
        "validate",
        path_str(&fixture("broker-w1.json")),
    ]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], false);
    let axioms: Vec<&str> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["axiom"].as_str().unwrap())
        .collect();
    assert!(axioms.contains(&"UniqueRoot"), "{axioms:?}");
}

#[test]
fn validate_malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = temp_file(&dir, "bad.json", "{ \"universe\": ");
    assert_eq!(code(&evokernel(&["validate", path_str(&p)])), 2);
    assert_eq!(
        code(&evokernel(&["validate", "/nonexistent/history.json"])),
        2
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&evokernel(&["frobnicate"])), 2);
    let p = fixture("broker.json");
    assert_eq!(code(&evokernel(&["pop", path_str(&p), "Product"])), 2);
    assert_eq!(
        code(&evokernel(&[
            "pop",
            path_str(&p),
            "Product",
            "--at",
            "1",
            "--infinity"
        ])),
        2
    );
}

#[test]
fn format_env_sets_default_and_flag_overrides_it() {
    let p = fixture("broker.json");
    let with_env = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_evokernel"))
            .args(args)
            .env("EVOKERNEL_FORMAT", "json")
            .output()
            .unwrap()
    };
    let json = with_env(&["validate", path_str(&p)]);
    let v: Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["valid"], true);
    let text = with_env(&["--format", "text", "validate", path_str(&p)]);
    assert!(serde_json::from_str::<Value>(&stdout(&text)).is_err());
    assert!(stdout(&text).contains("well-formed"));
}

#[test]
fn snapshot_store_at_t4_has_medium() {
    let o = evokernel(&["snapshot", path_str(&fixture("store.json")), "--at", "t4"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let otypes: Vec<&str> = v["otypes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert!(otypes.contains(&"Medium"));
    assert_eq!(v["tick"], 4);
}

#[test]
fn snapshot_of_empty_history_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let p = temp_file(&dir, "empty.json", EMPTY);
    let o = evokernel(&["snapshot", path_str(&p), "--at", "0"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v,
        serde_json::json!({"tick": 0, "otypes": [], "constraints": {}, "tasks": {},
                           "typings": {}, "domains": {}})
    );
}

#[test]
fn snapshot_matches_snapshot_of_exported_prefix() {
    let dir = tempfile::tempdir().unwrap();
    for h in [
        fixtures::store(),
        fixtures::airplane(),
        fixtures::rental_store_table(),
    ] {
        let full = temp_file(&dir, "full.json", &history_to_json(&h));
        for t in 0..=6 {
            let prefix = temp_file(&dir, "prefix.json", &history_to_json(&h.prefix(Tick(t))));
            let at = t.to_string();
            let a = evokernel(&["snapshot", path_str(&full), "--at", &at]);
            let b = evokernel(&["snapshot", path_str(&prefix), "--at", &at]);
            assert_eq!(code(&a), 0);
            assert_eq!(a.stdout, b.stdout, "tick {t}");
        }
    }
}

#[test]
fn apply_store_events_reproduces_store() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let o = evokernel(&[
        "apply",
        path_str(&fixture("store-t1.json")),
        path_str(&fixture("store-events.json")),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let got = history_from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(got, fixtures::store());
}

#[test]
fn apply_empty_log_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let events = temp_file(&dir, "events.json", "[]");
    for name in ["store.json", "airplane.json", "rental-store.json"] {
        let out = dir.path().join("out.json");
        let input = fixture(name);
        let o = evokernel(&[
            "apply",
            path_str(&input),
            path_str(&events),
            "--out",
            path_str(&out),
        ]);
        assert_eq!(code(&o), 0, "{name}: {}", stdout(&o));
        let before = history_from_json(&std::fs::read_to_string(&input).unwrap()).unwrap();
        let after = history_from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(after, before, "{name}");
    }
}

#[test]
fn apply_rejects_dangling_reference() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let o = evokernel(&[
        "--format",
        "json",
        "apply",
        path_str(&fixture("store-t1.json")),
        path_str(&fixture("store-dangling-events.json")),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["accepted"], false);
    assert!(v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .any(|x| x["axiom"] == "DanglingTypes"));
    assert!(!out.exists());
}

#[test]
fn apply_malformed_events_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let events = temp_file(&dir, "events.json", "[{\"tick\": 1}");
    let out = dir.path().join("out.json");
    let o = evokernel(&[
        "apply",
        path_str(&fixture("store-t1.json")),
        path_str(&events),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn broker_graph_edges() {
    let o = evokernel(&[
        "graph",
        path_str(&fixture("broker.json")),
        "--at",
        "1",
        "--dot",
    ]);
    assert_eq!(code(&o), 0);
    let dot = stdout(&o);
    let edges: Vec<&str> = dot
        .lines()
        .filter(|l| l.contains("->"))
        .map(str::trim)
        .collect();
    assert_eq!(
        edges,
        [
            "\"Boat\" -> \"Product\";",
            "\"Boat\" -> \"Real estate\";",
            "\"House\" -> \"Product\";",
            "\"House\" -> \"Real estate\";",
        ]
    );
    assert!(dot.starts_with("digraph roots {"));
}

#[test]
fn hierarchy_free_schema_graph_has_no_edges() {
    let dir = tempfile::tempdir().unwrap();
    let p = temp_file(
        &dir,
        "flat.json",
        r#"{"universe": {"otypes": [{"name": "A", "kind": "non_label"},
                                    {"name": "B", "kind": "non_label"}]},
            "evolutions": [
              {"id": "ot:A", "class": "object_type", "track": [{"from": 1, "version": "A"}]},
              {"id": "ot:B", "class": "object_type", "track": [{"from": 1, "version": "B"}]}]}"#,
    );
    let o = evokernel(&["--format", "json", "graph", path_str(&p), "--at", "1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["nodes"], serde_json::json!(["A", "B"]));
    assert_eq!(v["edges"], serde_json::json!([]));
}

#[test]
fn empty_snapshot_gives_empty_graph() {
    let dir = tempfile::tempdir().unwrap();
    let p = temp_file(&dir, "empty.json", EMPTY);
    let o = evokernel(&["graph", path_str(&p), "--at", "0"]);
    assert_eq!(stdout(&o), "digraph roots {\n}\n");
}

#[test]
fn pop_product_in_broker() {
    let o = evokernel(&[
        "pop",
        path_str(&fixture("broker.json")),
        "Product",
        "--at",
        "1",
    ]);
    assert_eq!(code(&o), 0);
    let mut got: Vec<String> = stdout(&o).lines().map(String::from).collect();
    got.sort();
    assert_eq!(got, ["b1", "b2", "h1"]);
}

#[test]
fn pop_infinity_medium_includes_i1() {
    let o = evokernel(&[
        "pop",
        path_str(&fixture("store.json")),
        "Medium",
        "--infinity",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l == "i1"));
}

#[test]
fn pop_unknown_type_exits_1() {
    let o = evokernel(&[
        "pop",
        path_str(&fixture("store.json")),
        "Spaceship",
        "--at",
        "1",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn output_is_byte_deterministic() {
    let store = fixture("store.json");
    let broker = fixture("broker-w1.json");
    let runs: [Vec<&str>; 5] = [
        vec!["--format", "json", "validate", path_str(&broker)],
        vec!["validate", path_str(&broker)],
        vec!["snapshot", path_str(&store), "--at", "2"],
        vec!["graph", path_str(&store), "--at", "4"],
        vec![
            "--format",
            "json",
            "pop",
            path_str(&store),
            "Medium",
            "--infinity",
        ],
    ];
    for args in runs {
        let a = evokernel(&args);
        let b = evokernel(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let outs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("out{i}.json"));
            evokernel(&[
                "apply",
                path_str(&fixture("store-t1.json")),
                path_str(&fixture("store-events.json")),
                "--out",
                path_str(&out),
            ]);
            std::fs::read(&out).unwrap()
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn run_entry_point_matches_binary() {
    let broker = fixture("broker.json");
    let args = [
        "evokernel",
        "pop",
        path_str(&broker),
        "Product",
        "--at",
        "1",
    ];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code_lib = evokernel_cli::run(args, &mut out, &mut err);
    let o = evokernel(&args[1..]);
    assert_eq!(code_lib, code(&o));
    assert_eq!(out, o.stdout);
}
