//! Command-line surface over the evokernel library.
//!
//! Exit codes: 0 success, 1 violations, rejected events or unknown types,
//! 2 unreadable or unparsable input.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use evokernel::document::{
    event_log_from_json, history_from_json, history_to_json, parse_tick, snapshot_to_value,
    tick_labels, value_to_json,
};
use evokernel::version::{pop_at, pop_infinity};
use evokernel::{
    apply_event, derive_version, validate, EventLog, History, KernelError, ObjectTypeId, Tick,
};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "evokernel",
    version,
    about = "Validate and query evolving application model histories"
)]
struct Cli {
    /// Output format; EVOKERNEL_FORMAT sets the default.
    #[arg(
        long,
        global = true,
        value_enum,
        env = "EVOKERNEL_FORMAT",
        default_value = "text"
    )]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every well-formedness rule; exit 1 when any fails.
    Validate { history: PathBuf },
    /// Print the application model version at a tick as JSON.
    Snapshot {
        history: PathBuf,
        #[arg(long)]
        at: String,
    },
    /// Apply an event log to a history frozen at the first event tick.
    Apply {
        history: PathBuf,
        events: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the root dependency graph at a tick.
    Graph {
        history: PathBuf,
        #[arg(long)]
        at: String,
        /// Emit DOT even when the format is json.
        #[arg(long)]
        dot: bool,
    },
    /// Print the population of an object type.
    Pop {
        history: PathBuf,
        otype: String,
        #[command(flatten)]
        when: PopTime,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct PopTime {
    #[arg(long)]
    at: Option<String>,
    /// Union of the populations over all ticks.
    #[arg(long)]
    infinity: bool,
}

/// A failed command: exit code plus the message for stderr.
struct Failure(i32, String);

type CmdResult = std::result::Result<i32, Failure>;

fn parse_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure(EXIT_PARSE, format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| parse_failure(path, e))
}

struct Loaded {
    history: History,
    labels: Vec<String>,
}

fn load(path: &Path) -> std::result::Result<Loaded, Failure> {
    let text = read(path)?;
    let history = history_from_json(&text).map_err(|e| parse_failure(path, e))?;
    let labels = tick_labels(&text).map_err(|e| parse_failure(path, e))?;
    Ok(Loaded { history, labels })
}

fn tick_arg(spec: &str, labels: &[String]) -> std::result::Result<Tick, Failure> {
    parse_tick(spec, labels).map_err(|e| Failure(EXIT_PARSE, format!("--at {spec}: {e}")))
}

fn write_json(out: &mut dyn Write, v: &serde_json::Value) -> std::io::Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("json values serialise")
    )
}

/// Run the CLI on `args` (including the program name) and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "evokernel: {msg}");
            code
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> CmdResult {
    let format = cli.format;
    match cli.command {
        Command::Validate { history } => cmd_validate(&history, format, out),
        Command::Snapshot { history, at } => cmd_snapshot(&history, &at, out),
        Command::Apply {
            history,
            events,
            out: dest,
        } => cmd_apply(&history, &events, &dest, format, out),
        Command::Graph { history, at, dot } => cmd_graph(&history, &at, dot, format, out),
        Command::Pop {
            history,
            otype,
            when,
        } => cmd_pop(&history, &otype, &when, format, out),
    }
}

fn cmd_validate(path: &Path, format: Format, out: &mut dyn Write) -> CmdResult {
    let h = load(path)?.history;
    let report = validate(&h).normalized();
    let valid = !report.has_errors();
    match format {
        Format::Json => write_json(
            out,
            &json!({ "valid": valid, "violations": report.to_json() }),
        ),
        Format::Text => write!(out, "{report}").and_then(|_| {
            if valid {
                writeln!(out, "ok: history is well-formed")
            } else {
                writeln!(out, "invalid: {} error(s)", report.errors().count())
            }
        }),
    }
    .map_err(write_failure)?;
    Ok(if valid { EXIT_OK } else { EXIT_REJECTED })
}

fn cmd_snapshot(path: &Path, at: &str, out: &mut dyn Write) -> CmdResult {
    let l = load(path)?;
    let t = tick_arg(at, &l.labels)?;
    let v = derive_version(&l.history, t);
    write_json(out, &snapshot_to_value(&v)).map_err(write_failure)?;
    Ok(EXIT_OK)
}

fn write_failure(e: std::io::Error) -> Failure {
    Failure(EXIT_PARSE, format!("write failed: {e}"))
}

fn cmd_apply(
    history: &Path,
    events: &Path,
    dest: &Path,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let base = load(history)?.history;
    let log =
        event_log_from_json(&read(events)?, Some(&base)).map_err(|e| parse_failure(events, e))?;

    let mut h = base.clone();
    for (t, body) in log.iter() {
        match apply_event(&h, t, body) {
            Ok(next) => h = next,
            Err(e) => {
                report_rejection(t, &e, format, out).map_err(write_failure)?;
                return Ok(EXIT_REJECTED);
            }
        }
    }
    let mismatches = unexplained_changes(&log, &base, &h);
    if !mismatches.is_empty() {
        match format {
            Format::Json => {
                write_json(out, &json!({ "accepted": false, "mismatches": mismatches }))
            }
            Format::Text => mismatches.iter().try_for_each(|m| writeln!(out, "{m}")),
        }
        .map_err(write_failure)?;
        return Ok(EXIT_REJECTED);
    }
    fs::write(dest, history_to_json(&h) + "\n")
        .map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", dest.display())))?;
    match format {
        Format::Json => write_json(out, &json!({ "accepted": true, "events": log.len() })),
        Format::Text => writeln!(out, "applied {} event(s)", log.len()),
    }
    .map_err(write_failure)?;
    Ok(EXIT_OK)
}

/// Behaviour check restricted to what the log is responsible for: each event
/// reproduces its successor state, and every change after the base horizon
/// has an event.
fn unexplained_changes(log: &EventLog, base: &History, h: &History) -> Vec<String> {
    let mut out = Vec::new();
    for (t, body) in log.iter() {
        match apply_event(&h.prefix(t), t, body) {
            Ok(after) if after == h.prefix(t.next()) => {}
            Ok(_) => out.push(format!("event at {t} does not produce the recorded state")),
            Err(e) => out.push(format!("event at {t} fails: {e}")),
        }
    }
    for b in h.breakpoints() {
        if b > base.horizon() {
            let t = b.prev().expect("b exceeds the horizon");
            if log.get(t).is_none() {
                out.push(format!("change after {t} has no event"));
            }
        }
    }
    out
}

fn report_rejection(
    t: Tick,
    e: &KernelError,
    format: Format,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    let violations = match e {
        KernelError::RejectedEvent(r) => Some(r.clone().normalized()),
        _ => None,
    };
    match format {
        Format::Json => {
            let mut v = json!({ "accepted": false, "tick": t.value(), "error": e.to_string() });
            if let Some(r) = &violations {
                v["violations"] = r.to_json();
            }
            write_json(out, &v)
        }
        Format::Text => match &violations {
            Some(r) => {
                writeln!(
                    out,
                    "event at {t} rejected: {} error(s)",
                    r.errors().count()
                )?;
                write!(out, "{r}")
            }
            None => writeln!(out, "event at {t} rejected: {e}"),
        },
    }
}

/// Nodes are the object types alive at the tick; x -> y when x is a root of y
/// and differs from it.
pub fn root_graph(h: &History, t: Tick) -> (Vec<String>, Vec<(String, String)>) {
    let v = derive_version(h, t);
    let view = v.structure(h.universe());
    let nodes: Vec<String> = v.otypes.iter().map(ToString::to_string).collect();
    let edges: BTreeSet<(String, String)> = v
        .otypes
        .iter()
        .flat_map(|y| {
            view.roots_of(y)
                .into_iter()
                .filter(move |x| *x != y)
                .map(move |x| (x.to_string(), y.to_string()))
        })
        .collect();
    (nodes, edges.into_iter().collect())
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn cmd_graph(path: &Path, at: &str, dot: bool, format: Format, out: &mut dyn Write) -> CmdResult {
    let l = load(path)?;
    let t = tick_arg(at, &l.labels)?;
    let (nodes, edges) = root_graph(&l.history, t);
    if format == Format::Json && !dot {
        let edges: Vec<_> = edges.iter().map(|(x, y)| json!([x, y])).collect();
        write_json(
            out,
            &json!({ "tick": t.value(), "nodes": nodes, "edges": edges }),
        )
    } else {
        (|| {
            writeln!(out, "digraph roots {{")?;
            for n in &nodes {
                writeln!(out, "  {};", dot_id(n))?;
            }
            for (x, y) in &edges {
                writeln!(out, "  {} -> {};", dot_id(x), dot_id(y))?;
            }
            writeln!(out, "}}")
        })()
    }
    .map_err(write_failure)?;
    Ok(EXIT_OK)
}

fn cmd_pop(
    path: &Path,
    otype: &str,
    when: &PopTime,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let l = load(path)?;
    let x = ObjectTypeId::new(otype);
    let pop = match &when.at {
        Some(at) => {
            let t = tick_arg(at, &l.labels)?;
            pop_at(&l.history, t, &x)
        }
        None => pop_infinity(&l.history, &x),
    }
    .map_err(|e| Failure(EXIT_REJECTED, e.to_string()))?;
    match format {
        Format::Json => write_json(out, &pop.iter().map(value_to_json).collect()),
        Format::Text => pop.iter().try_for_each(|v| writeln!(out, "{v}")),
    }
    .map_err(write_failure)?;
    Ok(EXIT_OK)
}
