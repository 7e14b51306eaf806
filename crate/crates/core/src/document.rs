//! JSON documents for histories, event logs and snapshots.
//!
//! Ticks are integers, or labels: a label listed in the document's `ticks`
//! array maps to its 1-based position, and a label of the form `t<n>` maps to
//! `n`.
//!
//! Instance values: a number is an integer, a plain string is a surrogate,
//! and `{"str": s}`, `{"tuple": {role: value}}`, `{"set": [values]}` cover
//! the rest.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::amu::{
    ConcreteDomain, Concretisation, ConstraintDef, InstanceTyping, InstanceValue, OwnedDefinition,
    TaskDef,
};
use crate::error::{KernelError, Result};
use crate::history::{
    Edit, ElementClass, ElementEvolution, ElementId, ElementVersion, EventLog, History,
    TransactionBody,
};
use crate::isu::{InformationStructureUniverse, ObjectKind, ObjectTypeDecl, Technique};
use crate::timeline::{Tick, TimedMap};
use crate::version::AppModelVersion;

fn doc_err(msg: impl Into<String>) -> KernelError {
    KernelError::Document(msg.into())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum TickSpec {
    Int(u64),
    Label(String),
}

#[derive(Default)]
struct TickLabels(BTreeMap<String, u64>);

impl TickLabels {
    fn new(labels: &[String]) -> Self {
        Self(
            labels
                .iter()
                .enumerate()
                .map(|(i, l)| (l.clone(), i as u64 + 1))
                .collect(),
        )
    }

    fn resolve(&self, t: &TickSpec) -> Result<Tick> {
        match t {
            TickSpec::Int(n) => Ok(Tick(*n)),
            TickSpec::Label(l) => {
                if let Some(n) = self.0.get(l) {
                    return Ok(Tick(*n));
                }
                l.strip_prefix('t')
                    .and_then(|n| n.parse().ok())
                    .map(Tick)
                    .ok_or_else(|| doc_err(format!("unknown tick label `{l}`")))
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct OtypeDoc {
    name: String,
    kind: ObjectKind,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    roles: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    supertype: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    power_of: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct UniverseDoc {
    otypes: Vec<OtypeDoc>,
    #[serde(default)]
    type_rel: Vec<(String, String)>,
    #[serde(default)]
    parent_of: Vec<(String, String)>,
    #[serde(default)]
    adapter: Technique,
}

#[derive(Debug, Serialize, Deserialize)]
struct TrackEntry {
    from: TickSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    to: Option<TickSpec>,
    /// Overrides the evolution's class for this run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class: Option<ElementClass>,
    version: Value,
}

#[derive(Debug, Serialize, Deserialize)]
struct EvolutionDoc {
    id: String,
    class: ElementClass,
    track: Vec<TrackEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DomainDoc {
    label: String,
    domain: ConcreteDomain,
    from: TickSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    to: Option<TickSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
struct HistoryDoc {
    universe: UniverseDoc,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    ticks: Vec<String>,
    #[serde(default)]
    evolutions: Vec<EvolutionDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    domains: Vec<DomainDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    horizon: Option<TickSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EditDoc {
    op: String,
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class: Option<ElementClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    version: Option<Value>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EventDoc {
    tick: TickSpec,
    edits: Vec<EditDoc>,
}

pub fn value_to_json(v: &InstanceValue) -> Value {
    match v {
        InstanceValue::Int(n) => json!(n),
        InstanceValue::Surrogate(s) => json!(s),
        InstanceValue::Str(s) => json!({ "str": s }),
        InstanceValue::Tuple(fields) => {
            let m: Map<String, Value> = fields
                .iter()
                .map(|(k, v)| (k.clone(), value_to_json(v)))
                .collect();
            json!({ "tuple": m })
        }
        InstanceValue::Set(xs) => {
            json!({ "set": xs.iter().map(value_to_json).collect::<Vec<_>>() })
        }
    }
}

pub fn value_from_json(v: &Value) -> Result<InstanceValue> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(InstanceValue::Int)
            .ok_or_else(|| doc_err(format!("not an integer value: {n}"))),
        Value::String(s) => Ok(InstanceValue::Surrogate(s.clone())),
        Value::Object(m) if m.len() == 1 => {
            let (k, inner) = m.iter().next().expect("one entry");
            match (k.as_str(), inner) {
                ("str", Value::String(s)) => Ok(InstanceValue::Str(s.clone())),
                ("tuple", Value::Object(fields)) => fields
                    .iter()
                    .map(|(r, x)| Ok((r.clone(), value_from_json(x)?)))
                    .collect::<Result<BTreeMap<_, _>>>()
                    .map(InstanceValue::Tuple),
                ("set", Value::Array(xs)) => xs
                    .iter()
                    .map(value_from_json)
                    .collect::<Result<BTreeSet<_>>>()
                    .map(InstanceValue::Set),
                _ => Err(doc_err(format!("bad instance value: {v}"))),
            }
        }
        _ => Err(doc_err(format!("bad instance value: {v}"))),
    }
}

fn owners_to_json<D>(def: &OwnedDefinition<D>, text: impl Fn(&D) -> &str) -> Value {
    let owners: Map<String, Value> = def
        .owners
        .iter()
        .map(|(o, d)| (o.to_string(), json!(text(d))))
        .collect();
    json!({ "owners": owners })
}

fn owners_from_json<D: Clone>(v: &Value, make: impl Fn(&str) -> D) -> Result<OwnedDefinition<D>> {
    let owners = v
        .get("owners")
        .and_then(Value::as_object)
        .ok_or_else(|| doc_err(format!("expected {{\"owners\": ...}}, got {v}")))?;
    owners
        .iter()
        .map(|(o, text)| {
            text.as_str()
                .map(|t| (o.as_str(), make(t)))
                .ok_or_else(|| doc_err(format!("definition of owner {o} is not a string")))
        })
        .collect::<Result<Vec<_>>>()
        .map(OwnedDefinition::new)
}

pub fn version_to_json(v: &ElementVersion) -> Value {
    match v {
        ElementVersion::ObjectType(x) => json!(x.as_str()),
        ElementVersion::Constraint(c) => owners_to_json(c, ConstraintDef::text),
        ElementVersion::Task(m) => owners_to_json(m, TaskDef::text),
        ElementVersion::Typing(g) => typing_to_json(g),
        ElementVersion::Concretisation(c) => {
            json!({ "label": c.label.as_str(), "domain": c.domain })
        }
    }
}

fn typing_to_json(g: &InstanceTyping) -> Value {
    json!({
        "value": value_to_json(&g.value),
        "types": g.types.iter().map(|x| x.as_str()).collect::<Vec<_>>(),
    })
}

/// Definitions are parsed leniently; syntax errors surface during validation.
pub fn version_from_json(class: ElementClass, v: &Value) -> Result<ElementVersion> {
    let bad = || doc_err(format!("bad {class} version: {v}"));
    Ok(match class {
        ElementClass::ObjectType => ElementVersion::ObjectType(v.as_str().ok_or_else(bad)?.into()),
        ElementClass::Constraint => {
            ElementVersion::Constraint(owners_from_json(v, |t| ConstraintDef::new(t))?)
        }
        ElementClass::Task => ElementVersion::Task(owners_from_json(v, |t| TaskDef::new(t))?),
        ElementClass::InstanceTyping => {
            let value = value_from_json(v.get("value").ok_or_else(bad)?)?;
            let types = v
                .get("types")
                .and_then(Value::as_array)
                .ok_or_else(bad)?
                .iter()
                .map(|x| x.as_str().ok_or_else(bad))
                .collect::<Result<Vec<_>>>()?;
            ElementVersion::Typing(InstanceTyping::new(value, types))
        }
        ElementClass::Concretisation => {
            let label = v.get("label").and_then(Value::as_str).ok_or_else(bad)?;
            let domain = serde_json::from_value(v.get("domain").cloned().ok_or_else(bad)?)
                .map_err(|e| doc_err(e.to_string()))?;
            ElementVersion::Concretisation(Concretisation {
                label: label.into(),
                domain,
            })
        }
    })
}

fn universe_from_doc(d: UniverseDoc) -> Result<InformationStructureUniverse> {
    let mut b = InformationStructureUniverse::builder().technique(d.adapter);
    for o in d.otypes {
        let decl = ObjectTypeDecl {
            kind: o.kind,
            roles: o.roles.into_iter().map(|(r, p)| (r, p.into())).collect(),
            supertype: o.supertype.map(Into::into),
            power_of: o.power_of.map(Into::into),
        };
        b = b.declare(o.name, decl);
    }
    for (x, y) in &d.type_rel {
        b = b.related(x, y);
    }
    for (x, y) in &d.parent_of {
        b = b.parent(x, y);
    }
    b.build()
}

fn universe_to_doc(u: &InformationStructureUniverse) -> UniverseDoc {
    let pairs = |s: &BTreeSet<(_, _)>| {
        s.iter()
            .map(
                |(x, y): &(crate::isu::ObjectTypeId, crate::isu::ObjectTypeId)| {
                    (x.to_string(), y.to_string())
                },
            )
            .collect()
    };
    UniverseDoc {
        otypes: u
            .decls()
            .map(|(name, d)| OtypeDoc {
                name: name.to_string(),
                kind: d.kind,
                roles: d
                    .roles
                    .iter()
                    .map(|(r, p)| (r.clone(), p.to_string()))
                    .collect(),
                supertype: d.supertype.as_ref().map(ToString::to_string),
                power_of: d.power_of.as_ref().map(ToString::to_string),
            })
            .collect(),
        type_rel: pairs(u.type_rel_pairs()),
        parent_of: pairs(u.parent_pairs()),
        adapter: u.technique(),
    }
}

/// Resolve a tick given on a command line: an integer, `t<n>`, or one of the
/// document's declared `labels`.
pub fn parse_tick(spec: &str, labels: &[String]) -> Result<Tick> {
    match spec.parse::<u64>() {
        Ok(n) => Ok(Tick(n)),
        Err(_) => TickLabels::new(labels).resolve(&TickSpec::Label(spec.to_string())),
    }
}

/// The `ticks` label list of a history document, empty when absent.
pub fn tick_labels(text: &str) -> Result<Vec<String>> {
    #[derive(Deserialize)]
    struct Labels {
        #[serde(default)]
        ticks: Vec<String>,
    }
    let doc: Labels = serde_json::from_str(text).map_err(|e| doc_err(e.to_string()))?;
    Ok(doc.ticks)
}

pub fn history_from_json(text: &str) -> Result<History> {
    let doc: HistoryDoc = serde_json::from_str(text).map_err(|e| doc_err(e.to_string()))?;
    let labels = TickLabels::new(&doc.ticks);
    let mut h = History::new(universe_from_doc(doc.universe)?);
    for e in doc.evolutions {
        let runs = e
            .track
            .iter()
            .map(|r| {
                let version = version_from_json(r.class.unwrap_or(e.class), &r.version)?;
                let to = r.to.as_ref().map(|t| labels.resolve(t)).transpose()?;
                Ok((labels.resolve(&r.from)?, to, version))
            })
            .collect::<Result<Vec<_>>>()?;
        h.insert(ElementEvolution::new(
            e.id,
            e.class,
            TimedMap::from_runs(runs)?,
        ))?;
    }
    let mut domains: BTreeMap<String, Vec<_>> = BTreeMap::new();
    for d in doc.domains {
        let to = d.to.as_ref().map(|t| labels.resolve(t)).transpose()?;
        let c = Concretisation {
            label: d.label.as_str().into(),
            domain: d.domain,
        };
        domains.entry(d.label).or_default().push((
            labels.resolve(&d.from)?,
            to,
            ElementVersion::Concretisation(c),
        ));
    }
    for (label, mut runs) in domains {
        runs.sort_by_key(|r| r.0);
        let track = TimedMap::from_runs(runs)?;
        h.insert(ElementEvolution::new(
            format!("dom:{label}"),
            ElementClass::Concretisation,
            track,
        ))?;
    }
    if let Some(t) = doc.horizon {
        let t = labels.resolve(&t)?;
        if t > h.horizon() {
            h.set_horizon(t);
        }
    }
    Ok(h)
}

pub fn history_to_value(h: &History) -> Value {
    let evolutions: Vec<EvolutionDoc> = h
        .evolutions()
        .map(|e| EvolutionDoc {
            id: e.id.to_string(),
            class: e.class,
            track: e
                .track
                .runs()
                .map(|(a, b, v)| TrackEntry {
                    from: TickSpec::Int(a.0),
                    to: b.map(|t| TickSpec::Int(t.0)),
                    class: (v.class() != e.class).then(|| v.class()),
                    version: version_to_json(v),
                })
                .collect(),
        })
        .collect();
    let doc = HistoryDoc {
        universe: universe_to_doc(h.universe()),
        ticks: Vec::new(),
        evolutions,
        domains: Vec::new(),
        horizon: Some(TickSpec::Int(h.horizon().0)),
    };
    serde_json::to_value(doc).expect("documents serialise")
}

pub fn history_to_json(h: &History) -> String {
    serde_json::to_string_pretty(&history_to_value(h)).expect("documents serialise")
}

/// Edits without a `class` take it from the element's evolution in `base`.
pub fn event_log_from_json(text: &str, base: Option<&History>) -> Result<EventLog> {
    let docs: Vec<EventDoc> = serde_json::from_str(text).map_err(|e| doc_err(e.to_string()))?;
    let labels = TickLabels::default();
    let mut log = EventLog::new();
    for ev in docs {
        let tick = labels.resolve(&ev.tick)?;
        let mut created: BTreeMap<String, ElementClass> = BTreeMap::new();
        let mut edits = Vec::new();
        for e in ev.edits {
            let class = e.class.or_else(|| created.get(&e.id).copied()).or_else(|| {
                base.and_then(|h| h.get(&ElementId::new(e.id.as_str())))
                    .map(|x| x.class)
            });
            let version = |class: Option<ElementClass>| -> Result<ElementVersion> {
                let class = class.ok_or_else(|| doc_err(format!("no class for `{}`", e.id)))?;
                let v = e
                    .version
                    .as_ref()
                    .ok_or_else(|| doc_err(format!("{} of `{}` needs a version", e.op, e.id)))?;
                version_from_json(class, v)
            };
            edits.push(match e.op.as_str() {
                "create" => {
                    let v = version(class)?;
                    created.insert(e.id.clone(), v.class());
                    Edit::Create {
                        class: v.class(),
                        id: e.id.as_str().into(),
                        version: v,
                    }
                }
                "set" => Edit::set(e.id.as_str(), version(class)?),
                "terminate" => Edit::terminate(e.id.as_str()),
                other => return Err(doc_err(format!("unknown op `{other}`"))),
            });
        }
        log.push(tick, TransactionBody::new(edits))?;
    }
    Ok(log)
}

pub fn event_log_to_json(log: &EventLog) -> String {
    let docs: Vec<EventDoc> = log
        .iter()
        .map(|(t, body)| EventDoc {
            tick: TickSpec::Int(t.0),
            edits: body
                .edits
                .iter()
                .map(|e| match e {
                    Edit::Create { class, id, version } => EditDoc {
                        op: "create".into(),
                        id: id.to_string(),
                        class: Some(*class),
                        version: Some(version_to_json(version)),
                    },
                    Edit::Set { id, version } => EditDoc {
                        op: "set".into(),
                        id: id.to_string(),
                        class: Some(version.class()),
                        version: Some(version_to_json(version)),
                    },
                    Edit::Terminate { id } => EditDoc {
                        op: "terminate".into(),
                        id: id.to_string(),
                        class: None,
                        version: None,
                    },
                })
                .collect(),
        })
        .collect();
    serde_json::to_string_pretty(&docs).expect("documents serialise")
}

/// The five components of a snapshot, each sorted.
pub fn snapshot_to_value(v: &AppModelVersion) -> Value {
    fn by_id<T>(m: &BTreeMap<ElementId, T>, f: impl Fn(&T) -> Value) -> Map<String, Value> {
        m.iter().map(|(id, x)| (id.to_string(), f(x))).collect()
    }
    json!({
        "tick": v.tick.0,
        "otypes": v.otypes.iter().map(|x| x.as_str()).collect::<Vec<_>>(),
        "constraints": by_id(&v.constraints, |c| owners_to_json(c, ConstraintDef::text)),
        "tasks": by_id(&v.tasks, |m| owners_to_json(m, TaskDef::text)),
        "typings": by_id(&v.typings, typing_to_json),
        "domains": by_id(&v.domains, |c| json!({ "label": c.label.as_str(), "domain": c.domain })),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_round_trip() {
        for h in [
            fixtures::rental_store_table(),
            fixtures::store(),
            fixtures::broker_with_w1(),
            fixtures::airplane(),
            fixtures::separation_mutant(),
        ] {
            let back = history_from_json(&history_to_json(&h)).unwrap();
            assert_eq!(back, h);
            assert_eq!(back.universe(), h.universe());
            assert_eq!(back.horizon(), h.horizon());
        }
    }

    #[test]
    fn event_log_round_trips() {
        let log = fixtures::store_events();
        let back = event_log_from_json(&event_log_to_json(&log), None).unwrap();
        assert_eq!(back, log);
    }

    #[test]
    fn command_line_ticks() {
        let labels = vec!["mon".to_string(), "tue".to_string()];
        assert_eq!(parse_tick("7", &labels).unwrap(), Tick(7));
        assert_eq!(parse_tick("t4", &labels).unwrap(), Tick(4));
        assert_eq!(parse_tick("tue", &labels).unwrap(), Tick(2));
        assert!(parse_tick("wed", &labels).is_err());
    }

    #[test]
    fn labelled_ticks() {
        let text = r#"{
            "universe": {"otypes": [{"name": "A", "kind": "non_label"}]},
            "ticks": ["mon", "tue"],
            "evolutions": [{"id": "a", "class": "object_type",
                            "track": [{"from": "tue", "version": "A"}]},
                           {"id": "g", "class": "typing",
                            "track": [{"from": "t3", "to": 4,
                                       "version": {"value": {"str": "x"}, "types": ["A"]}}]}]
        }"#;
        let h = history_from_json(text).unwrap();
        assert_eq!(h.first_tick(), Some(Tick(2)));
        assert_eq!(h.horizon(), Tick(4));
    }

    #[test]
    fn domain_list_becomes_concretisations() {
        let text = r#"{
            "universe": {"otypes": [{"name": "Age", "kind": "label"}], "adapter": "er"},
            "domains": [{"label": "Age", "domain": "Natno", "from": 1}]
        }"#;
        let h = history_from_json(text).unwrap();
        assert!(h.get(&ElementId::new("dom:Age")).is_some());
    }

    #[test]
    fn values_round_trip() {
        let v = InstanceValue::Set(
            [
                InstanceValue::Int(-3),
                InstanceValue::str("s"),
                InstanceValue::tuple([("r", InstanceValue::surrogate("i"))]),
            ]
            .into_iter()
            .collect(),
        );
        assert_eq!(value_from_json(&value_to_json(&v)).unwrap(), v);
    }

    #[test]
    fn malformed_documents_error() {
        assert!(history_from_json("{").is_err());
        assert!(history_from_json(r#"{"universe": {"otypes": []}, "evolutions": [{"id": "x", "class": "typing", "track": [{"from": 1, "version": 3}]}]}"#).is_err());
    }
}
