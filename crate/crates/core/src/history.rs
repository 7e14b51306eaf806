//! Application model histories: element evolutions over time, the evolution
//! well-formedness checks, and the transaction engine that extends a history
//! one tick at a time.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::amu::{
    adapter_for, Concretisation, ConstraintDef, InstanceTyping, OwnedDefinition, TaskDef,
    TechniqueAdapter,
};
use crate::constraints::eval_constraint;
use crate::error::{KernelError, Result};
use crate::isu::{check_isu, InformationStructureUniverse, ObjectTypeId};
use crate::report::{Axiom, ValidationReport, Violation};
use crate::timeline::{Tick, TickRange, TimedMap};
use crate::version::{check_strong_typing, check_version, derive_version};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(String);

impl ElementId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ElementId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

impl From<String> for ElementId {
    fn from(s: String) -> Self {
        Self(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementClass {
    ObjectType,
    Constraint,
    Task,
    #[serde(rename = "typing")]
    InstanceTyping,
    Concretisation,
}

impl ElementClass {
    pub const ALL: [ElementClass; 5] = [
        ElementClass::ObjectType,
        ElementClass::Constraint,
        ElementClass::Task,
        ElementClass::InstanceTyping,
        ElementClass::Concretisation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ElementClass::ObjectType => "object_type",
            ElementClass::Constraint => "constraint",
            ElementClass::Task => "task",
            ElementClass::InstanceTyping => "typing",
            ElementClass::Concretisation => "concretisation",
        }
    }
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ElementClass {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self> {
        ElementClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| KernelError::Document(format!("unknown element class `{s}`")))
    }
}

/// The value of an element at one tick.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementVersion {
    ObjectType(ObjectTypeId),
    Constraint(OwnedDefinition<ConstraintDef>),
    Task(OwnedDefinition<TaskDef>),
    Typing(InstanceTyping),
    Concretisation(Concretisation),
}

impl ElementVersion {
    pub fn class(&self) -> ElementClass {
        match self {
            ElementVersion::ObjectType(_) => ElementClass::ObjectType,
            ElementVersion::Constraint(_) => ElementClass::Constraint,
            ElementVersion::Task(_) => ElementClass::Task,
            ElementVersion::Typing(_) => ElementClass::InstanceTyping,
            ElementVersion::Concretisation(_) => ElementClass::Concretisation,
        }
    }

    pub fn object_type(&self) -> Option<&ObjectTypeId> {
        match self {
            ElementVersion::ObjectType(x) => Some(x),
            _ => None,
        }
    }

    pub fn typing(&self) -> Option<&InstanceTyping> {
        match self {
            ElementVersion::Typing(g) => Some(g),
            _ => None,
        }
    }

    pub fn constraint(&self) -> Option<&OwnedDefinition<ConstraintDef>> {
        match self {
            ElementVersion::Constraint(c) => Some(c),
            _ => None,
        }
    }
}

impl From<ObjectTypeId> for ElementVersion {
    fn from(x: ObjectTypeId) -> Self {
        ElementVersion::ObjectType(x)
    }
}

impl From<InstanceTyping> for ElementVersion {
    fn from(g: InstanceTyping) -> Self {
        ElementVersion::Typing(g)
    }
}

impl From<Concretisation> for ElementVersion {
    fn from(c: Concretisation) -> Self {
        ElementVersion::Concretisation(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementEvolution {
    pub id: ElementId,
    pub class: ElementClass,
    pub track: TimedMap<ElementVersion>,
}

impl ElementEvolution {
    pub fn new(
        id: impl Into<ElementId>,
        class: ElementClass,
        track: TimedMap<ElementVersion>,
    ) -> Self {
        Self {
            id: id.into(),
            class,
            track,
        }
    }

    /// Build from `(from, to, version)` runs; the class is taken from the
    /// first version.
    pub fn from_runs<V: Into<ElementVersion>>(
        id: impl Into<ElementId>,
        runs: impl IntoIterator<Item = (u64, Option<u64>, V)>,
    ) -> Result<Self> {
        let runs: Vec<(Tick, Option<Tick>, ElementVersion)> = runs
            .into_iter()
            .map(|(a, b, v)| (Tick(a), b.map(Tick), v.into()))
            .collect();
        let class = runs
            .first()
            .map_or(ElementClass::ObjectType, |(_, _, v)| v.class());
        Ok(Self::new(id, class, TimedMap::from_runs(runs)?))
    }

    /// Classes of the versions this evolution takes.
    pub fn classes(&self) -> BTreeSet<ElementClass> {
        self.track.values().map(ElementVersion::class).collect()
    }
}

/// A universe plus the evolutions of every element over time.
#[derive(Clone, Debug)]
pub struct History {
    universe: Arc<InformationStructureUniverse>,
    evolutions: BTreeMap<ElementId, ElementEvolution>,
    horizon: Tick,
}

/// Histories compare by universe and evolutions; the horizon is bookkeeping.
impl PartialEq for History {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.evolutions == other.evolutions
    }
}

impl Eq for History {}

impl History {
    pub fn new(universe: impl Into<Arc<InformationStructureUniverse>>) -> Self {
        Self {
            universe: universe.into(),
            evolutions: BTreeMap::new(),
            horizon: Tick::ZERO,
        }
    }

    /// Add an evolution; the horizon grows to cover its last defined tick.
    pub fn insert(&mut self, ev: ElementEvolution) -> Result<()> {
        if self.evolutions.contains_key(&ev.id) {
            return Err(KernelError::DuplicateElement(ev.id.to_string()));
        }
        if ev.track.is_empty() {
            return Ok(());
        }
        let last = ev
            .track
            .runs()
            .map(|(s, e, _)| e.unwrap_or(s))
            .max()
            .unwrap_or(Tick::ZERO);
        self.horizon = self.horizon.max(last);
        self.evolutions.insert(ev.id.clone(), ev);
        Ok(())
    }

    pub fn with(mut self, ev: ElementEvolution) -> Result<Self> {
        self.insert(ev)?;
        Ok(self)
    }

    pub fn universe(&self) -> &InformationStructureUniverse {
        &self.universe
    }

    pub fn universe_arc(&self) -> &Arc<InformationStructureUniverse> {
        &self.universe
    }

    pub fn adapter(&self) -> &'static dyn TechniqueAdapter {
        adapter_for(self.universe.technique())
    }

    pub fn horizon(&self) -> Tick {
        self.horizon
    }

    pub fn set_horizon(&mut self, t: Tick) {
        self.horizon = t;
    }

    pub fn evolutions(&self) -> impl Iterator<Item = &ElementEvolution> + '_ {
        self.evolutions.values()
    }

    pub fn get(&self, id: &ElementId) -> Option<&ElementEvolution> {
        self.evolutions.get(id)
    }

    pub fn is_empty(&self) -> bool {
        self.evolutions.is_empty()
    }

    /// Ticks where some element may change, ascending.
    pub fn breakpoints(&self) -> Vec<Tick> {
        let set: BTreeSet<Tick> = self
            .evolutions
            .values()
            .flat_map(|e| e.track.breakpoints())
            .collect();
        set.into_iter().collect()
    }

    pub fn first_tick(&self) -> Option<Tick> {
        self.evolutions
            .values()
            .filter_map(|e| e.track.first_defined())
            .min()
    }

    /// After this tick nothing changes.
    pub fn last_breakpoint(&self) -> Option<Tick> {
        self.breakpoints().last().copied()
    }

    /// First defined tick and last breakpoint.
    pub fn span(&self) -> Option<(Tick, Tick)> {
        Some((self.first_tick()?, self.last_breakpoint()?))
    }

    /// Ticks `t` whose step `t -> t+1` needs checking: every tick before a
    /// change, plus one tick per constant stretch.
    pub fn transition_ticks(&self) -> Vec<Tick> {
        let Some(first) = self.first_tick() else {
            return Vec::new();
        };
        let bps: BTreeSet<Tick> = self.breakpoints().into_iter().collect();
        let mut out = BTreeSet::new();
        for &b in &bps {
            if b > first {
                out.insert(b.prev().expect("b > first"));
            }
            if b >= first && !bps.contains(&b.next()) {
                out.insert(b);
            }
        }
        out.into_iter().collect()
    }

    pub fn versions_at(&self, t: Tick) -> impl Iterator<Item = (&ElementId, &ElementVersion)> + '_ {
        self.evolutions
            .values()
            .filter_map(move |e| e.track.get(t).map(|v| (&e.id, v)))
    }

    pub fn typings_at(&self, t: Tick) -> Vec<&InstanceTyping> {
        self.versions_at(t)
            .filter_map(|(_, v)| v.typing())
            .collect()
    }

    /// Frozen at `t`: identical up to `t`, constant afterwards.
    pub fn prefix(&self, t: Tick) -> History {
        let evolutions = self
            .evolutions
            .iter()
            .filter_map(|(id, e)| {
                let track = e.track.prefix(t);
                (!track.is_empty()).then(|| {
                    (
                        id.clone(),
                        ElementEvolution {
                            id: id.clone(),
                            class: e.class,
                            track,
                        },
                    )
                })
            })
            .collect();
        History {
            universe: self.universe.clone(),
            evolutions,
            horizon: self.horizon.min(t),
        }
    }

    /// Every track restricted to `range`.
    pub fn restrict(&self, range: TickRange) -> History {
        let evolutions = self
            .evolutions
            .iter()
            .filter_map(|(id, e)| {
                let track = e.track.restrict(range);
                (!track.is_empty()).then(|| {
                    (
                        id.clone(),
                        ElementEvolution {
                            id: id.clone(),
                            class: e.class,
                            track,
                        },
                    )
                })
            })
            .collect();
        History {
            universe: self.universe.clone(),
            evolutions,
            horizon: range.end.map_or(self.horizon, |e| self.horizon.min(e)),
        }
    }

    /// Evolutions per class: an evolution belongs to every class one of its
    /// versions belongs to.
    pub fn partition(&self) -> BTreeMap<ElementClass, Vec<&ElementEvolution>> {
        let mut out: BTreeMap<ElementClass, Vec<&ElementEvolution>> = BTreeMap::new();
        for e in self.evolutions.values() {
            for c in e.classes() {
                out.entry(c).or_default().push(e);
            }
        }
        out
    }

    fn object_evolutions(&self) -> Vec<&ElementEvolution> {
        self.evolutions
            .values()
            .filter(|e| e.track.values().any(|v| v.object_type().is_some()))
            .collect()
    }
}

pub fn prefix_history(h: &History, t: Tick) -> History {
    h.prefix(t)
}

pub fn restrict_history(h: &History, range: TickRange) -> History {
    h.restrict(range)
}

/// Every version of an evolution must belong to its declared class.
pub fn check_separation(h: &History) -> ValidationReport {
    let mut report = ValidationReport::new();
    for e in h.evolutions() {
        for (start, _, v) in e.track.runs() {
            if v.class() != e.class {
                report.push(
                    Violation::new(
                        Axiom::Separation,
                        vec![
                            e.id.to_string(),
                            format!("{} version in {} evolution", v.class(), e.class),
                        ],
                    )
                    .at(start),
                );
            }
        }
    }
    report
}

/// A parent stays a parent while the two types remain related. The
/// root-promotion lemma is checked on its own as a cross-check.
pub fn check_monotonous_ancestors(h: &History) -> ValidationReport {
    let u = h.universe();
    let objs = h.object_evolutions();
    let mut report = ValidationReport::new();
    for t in h.transition_ticks() {
        let next = t.next();
        let alive_next: BTreeSet<ObjectTypeId> = objs
            .iter()
            .filter_map(|e| e.track.get(next).and_then(|v| v.object_type()).cloned())
            .collect();
        let view_next = u.restricted(&alive_next);
        for h1 in &objs {
            for h2 in &objs {
                if h1.id == h2.id {
                    continue;
                }
                let ot = |e: &ElementEvolution, at: Tick| {
                    e.track.get(at).and_then(|v| v.object_type()).cloned()
                };
                let (Some(a), Some(b)) = (ot(h1, t), ot(h2, t)) else {
                    continue;
                };
                if !u.parent_of(&a, &b) {
                    continue;
                }
                let Some(b2) = ot(h2, next) else {
                    continue;
                };
                let a2 = ot(h1, next);
                let axiom_fails = a2
                    .as_ref()
                    .is_some_and(|a2| u.type_related(a2, &b2) && !u.parent_of(a2, &b2));
                if axiom_fails {
                    report.push(
                        Violation::new(
                            Axiom::MonotonousParents,
                            vec![
                                h1.id.to_string(),
                                h2.id.to_string(),
                                format!("{a} parent of {b} at {t}"),
                                format!("{} not parent of {b2}", a2.as_ref().expect("some")),
                            ],
                        )
                        .at(next),
                    );
                }
                let lemma_fails =
                    a2.as_ref().is_some_and(|a2| u.type_related(a2, &b2)) && view_next.is_root(&b2);
                if lemma_fails {
                    let axiom = if axiom_fails {
                        Axiom::MonotonousParents
                    } else {
                        Axiom::InternalInconsistency
                    };
                    report.push(
                        Violation::new(
                            axiom,
                            vec![
                                h1.id.to_string(),
                                h2.id.to_string(),
                                format!("{b2} promoted to root while related ancestor lives"),
                            ],
                        )
                        .at(next),
                    );
                }
            }
        }
    }
    report
}

/// An instance moving between ticks must be carried by some object-type
/// evolution related to its types before and after.
pub fn check_guided_evolution(h: &History) -> ValidationReport {
    let u = h.universe();
    let objs = h.object_evolutions();
    let related =
        |x: &ObjectTypeId, ys: &BTreeSet<ObjectTypeId>| ys.iter().any(|y| u.type_related(x, y));
    let mut report = ValidationReport::new();
    for t in h.transition_ticks() {
        let next = t.next();
        for g in h.evolutions() {
            let (Some(now), Some(then)) = (
                g.track.get(t).and_then(|v| v.typing()),
                g.track.get(next).and_then(|v| v.typing()),
            ) else {
                continue;
            };
            let guided = objs.iter().any(|e| {
                match (
                    e.track.get(t).and_then(|v| v.object_type()),
                    e.track.get(next).and_then(|v| v.object_type()),
                ) {
                    (Some(a), Some(b)) => related(a, &now.types) && related(b, &then.types),
                    _ => false,
                }
            });
            if !guided {
                report.push(
                    Violation::new(
                        Axiom::GuidedEvolution,
                        vec![g.id.to_string(), now.to_string(), then.to_string()],
                    )
                    .at(next),
                );
            }
        }
    }
    report
}

/// Each constraint holds over every interval on which it has been constant.
/// Reports the first failing tick per constant stretch and definition.
pub fn check_constraints_hold(h: &History) -> ValidationReport {
    let mut report = ValidationReport::new();
    let last = h.last_breakpoint();
    for c in h.evolutions() {
        for (start, end, v) in c.track.runs() {
            let Some(def) = v.constraint() else {
                continue;
            };
            let end = end.unwrap_or_else(|| last.unwrap_or(start).max(start));
            for d in def.distinct_defs() {
                let owners: Vec<String> = def
                    .owners
                    .iter()
                    .filter(|(_, x)| *x == d)
                    .map(|(o, _)| o.to_string())
                    .collect();
                let ast = match d.ast() {
                    Ok(ast) => ast,
                    Err(e) => {
                        report.push(
                            Violation::new(
                                Axiom::ConstraintsHold,
                                vec![c.id.to_string(), d.text().to_owned(), e.to_string()],
                            )
                            .at(start),
                        );
                        continue;
                    }
                };
                for t in (start.0..=end.0).map(Tick) {
                    // On [start, t] the restricted history agrees with `h`,
                    // so evaluating on `h` directly is equivalent.
                    let interval = TickRange::between(start, t).expect("start <= t");
                    let verdict = eval_constraint(h, interval, ast);
                    let failure = match verdict {
                        Ok(true) => None,
                        Ok(false) => Some(format!("owners {}", owners.join(", "))),
                        Err(e) => Some(e.to_string()),
                    };
                    if let Some(why) = failure {
                        report.push(
                            Violation::new(
                                Axiom::ConstraintsHold,
                                vec![c.id.to_string(), d.text().to_owned(), why],
                            )
                            .at(t),
                        );
                        break;
                    }
                }
            }
        }
    }
    report
}

/// Every check the kernel knows, sorted by tick then axiom.
pub fn validate(h: &History) -> ValidationReport {
    let u = h.universe();
    let adapter = h.adapter();
    let mut report = check_isu(u);
    for t in h.breakpoints() {
        report.extend(check_version(&derive_version(h, t), u, adapter));
    }
    report.extend(check_separation(h));
    report.extend(check_monotonous_ancestors(h));
    report.extend(check_guided_evolution(h));
    report.extend(check_constraints_hold(h));

    // Derived properties: consequences when axioms already failed, engine
    // faults when they all passed.
    let derived = check_strong_typing(h);
    let axioms_clean =
        !report.has_errors() && !derived.errors().any(|v| v.axiom == Axiom::ExclRootPop);
    for v in derived {
        match v.axiom {
            Axiom::StrongTyping | Axiom::PopDist => {
                if axioms_clean {
                    let mut v = v;
                    v.witnesses.insert(0, v.axiom.name());
                    v.axiom = Axiom::InternalInconsistency;
                    report.push(v);
                }
            }
            _ => report.push(v),
        }
    }
    report.normalized()
}

pub fn is_amh(h: &History) -> bool {
    !validate(h).has_errors()
}

/// A primitive change to one element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Edit {
    Create {
        class: ElementClass,
        id: ElementId,
        version: ElementVersion,
    },
    Set {
        id: ElementId,
        version: ElementVersion,
    },
    Terminate {
        id: ElementId,
    },
}

impl Edit {
    pub fn create(id: impl Into<ElementId>, version: impl Into<ElementVersion>) -> Self {
        let version = version.into();
        Edit::Create {
            class: version.class(),
            id: id.into(),
            version,
        }
    }

    pub fn set(id: impl Into<ElementId>, version: impl Into<ElementVersion>) -> Self {
        Edit::Set {
            id: id.into(),
            version: version.into(),
        }
    }

    pub fn terminate(id: impl Into<ElementId>) -> Self {
        Edit::Terminate { id: id.into() }
    }

    pub fn id(&self) -> &ElementId {
        match self {
            Edit::Create { id, .. } | Edit::Set { id, .. } | Edit::Terminate { id } => id,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransactionBody {
    pub edits: Vec<Edit>,
}

impl TransactionBody {
    pub fn new(edits: Vec<Edit>) -> Self {
        Self { edits }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventOccurrence {
    pub tick: Tick,
    pub task: TransactionBody,
}

/// At most one event per tick.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EventLog {
    events: BTreeMap<Tick, TransactionBody>,
}

impl EventLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_occurrences(occs: impl IntoIterator<Item = EventOccurrence>) -> Result<Self> {
        let mut log = Self::new();
        for o in occs {
            log.push(o.tick, o.task)?;
        }
        Ok(log)
    }

    pub fn push(&mut self, tick: Tick, task: TransactionBody) -> Result<()> {
        if self.events.contains_key(&tick) {
            return Err(KernelError::DuplicateEvent(tick));
        }
        self.events.insert(tick, task);
        Ok(())
    }

    pub fn get(&self, t: Tick) -> Option<&TransactionBody> {
        self.events.get(&t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Tick, &TransactionBody)> + '_ {
        self.events.iter().map(|(t, b)| (*t, b))
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// Apply `body` at `t`; its edits take effect at `t + 1`. The input must be
/// frozen at `t`. Returns the extended history, or `RejectedEvent` when a
/// well-formed history would become ill-formed.
pub fn apply_event(h: &History, t: Tick, body: &TransactionBody) -> Result<History> {
    if h.prefix(t) != *h {
        return Err(KernelError::PreconditionViolated(format!(
            "history changes after {t}"
        )));
    }
    if t < h.horizon {
        return Err(KernelError::PreconditionViolated(format!(
            "{t} is before the horizon {}",
            h.horizon
        )));
    }
    let next = t.next();
    let mut out = h.clone();
    for edit in &body.edits {
        match edit {
            Edit::Create { class, id, version } => match out.evolutions.get_mut(id) {
                Some(e) if e.track.defined_at(next) => {
                    return Err(KernelError::DuplicateElement(id.to_string()))
                }
                Some(e) if e.class != *class => {
                    return Err(KernelError::DuplicateElement(format!(
                        "{id} was a {} element",
                        e.class
                    )))
                }
                Some(e) => e.track.set_from(next, version.clone()),
                None => {
                    out.evolutions.insert(
                        id.clone(),
                        ElementEvolution::new(
                            id.clone(),
                            *class,
                            TimedMap::starting(next, version.clone()),
                        ),
                    );
                }
            },
            Edit::Set { id, version } => match out.evolutions.get_mut(id) {
                Some(e) if e.track.defined_at(next) => e.track.set_from(next, version.clone()),
                _ => return Err(KernelError::UnknownElement(id.to_string())),
            },
            Edit::Terminate { id } => {
                let Some(e) = out
                    .evolutions
                    .get_mut(id)
                    .filter(|e| e.track.defined_at(next))
                else {
                    return Err(KernelError::UnknownElement(id.to_string()));
                };
                e.track.clear_from(next);
                if e.track.is_empty() {
                    out.evolutions.remove(id);
                }
            }
        }
    }
    out.horizon = next;

    debug_assert!(out.prefix(t) == h.prefix(t), "past changed");
    debug_assert!(out.prefix(next) == out, "not frozen at t+1");

    let report = validate(&out);
    if report.has_errors() && is_amh(h) {
        return Err(KernelError::RejectedEvent(report));
    }
    Ok(out)
}

/// Apply every event of `log` in tick order.
pub fn replay(h0: &History, log: &EventLog) -> Result<History> {
    let mut h = h0.clone();
    for (t, body) in log.iter() {
        h = apply_event(&h, t, body)?;
    }
    Ok(h)
}

/// Why `log` does not explain `h`; empty when it does.
pub fn behaviour_mismatches(log: &EventLog, h: &History) -> Vec<String> {
    let mut out = Vec::new();
    for (t, body) in log.iter() {
        match apply_event(&h.prefix(t), t, body) {
            Ok(after) if after == h.prefix(t.next()) => {}
            Ok(_) => out.push(format!("event at {t} does not produce the recorded state")),
            Err(e) => out.push(format!("event at {t} fails: {e}")),
        }
    }
    if let Some(first) = h.first_tick() {
        for b in h.breakpoints() {
            if b > first {
                let t = b.prev().expect("b > first");
                if log.get(t).is_none() {
                    out.push(format!("change after {t} has no event"));
                }
            }
        }
    }
    out
}

/// Every event is reflected in `h` and every change of `h` has an event.
pub fn behaves(log: &EventLog, h: &History) -> bool {
    behaviour_mismatches(log, h).is_empty()
}

/// Behaves, and well-formed at every stage.
pub fn is_eis(log: &EventLog, h: &History) -> bool {
    behaves(log, h) && h.breakpoints().into_iter().all(|t| is_amh(&h.prefix(t)))
}

/// Edits adding `add` to every typing alive at `t + 1` that contains `from`.
pub fn retype_edits(h: &History, t: Tick, from: &ObjectTypeId, add: &ObjectTypeId) -> Vec<Edit> {
    let next = t.next();
    h.evolutions()
        .filter_map(|e| {
            let g = e.track.get(next)?.typing()?;
            if !g.types.contains(from) || g.types.contains(add) {
                return None;
            }
            let mut g = g.clone();
            g.types.insert(add.clone());
            Some(Edit::set(e.id.clone(), g))
        })
        .collect()
}
