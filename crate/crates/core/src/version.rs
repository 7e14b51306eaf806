//! Application model versions: the state of a history at one tick, and the
//! axioms every such state must satisfy.
//!
//! Root-sensitive checks run on the hierarchy restricted to the types alive
//! at the tick, so a subtype alive without its supertype counts as a root.

use std::collections::{BTreeMap, BTreeSet};

use crate::amu::{
    depends_of, effective_owners, Concretisation, ConstraintDef, Dependency, InstanceTyping,
    InstanceValue, OwnedDefinition, TaskDef, TechniqueAdapter,
};
use crate::constraints::ImplicationVerdict;
use crate::error::Result;
use crate::history::{ElementId, ElementVersion, History};
use crate::isu::{HierarchyView, InformationStructureUniverse, ObjectTypeId};
use crate::report::{Axiom, ValidationReport, Violation};
use crate::timeline::Tick;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AppModelVersion {
    pub tick: Tick,
    pub otypes: BTreeSet<ObjectTypeId>,
    pub constraints: BTreeMap<ElementId, OwnedDefinition<ConstraintDef>>,
    pub tasks: BTreeMap<ElementId, OwnedDefinition<TaskDef>>,
    pub typings: BTreeMap<ElementId, InstanceTyping>,
    pub domains: BTreeMap<ElementId, Concretisation>,
}

impl AppModelVersion {
    pub fn pop(&self, x: &ObjectTypeId) -> BTreeSet<InstanceValue> {
        self.typings
            .values()
            .filter(|g| g.types.contains(x))
            .map(|g| g.value.clone())
            .collect()
    }

    pub fn typing_refs(&self) -> Vec<&InstanceTyping> {
        self.typings.values().collect()
    }

    pub fn structure<'a>(&'a self, u: &'a InformationStructureUniverse) -> HierarchyView<'a> {
        u.restricted(&self.otypes)
    }

    /// Domains assigned to `label` at this tick.
    pub fn domains_of(&self, label: &ObjectTypeId) -> BTreeSet<crate::amu::ConcreteDomain> {
        self.domains
            .values()
            .filter(|c| &c.label == label)
            .map(|c| c.domain)
            .collect()
    }
}

/// Collect every element's value at `t` by class.
pub fn derive_version(h: &History, t: Tick) -> AppModelVersion {
    let mut v = AppModelVersion {
        tick: t,
        ..Default::default()
    };
    for (id, version) in h.versions_at(t) {
        match version {
            ElementVersion::ObjectType(x) => {
                v.otypes.insert(x.clone());
            }
            ElementVersion::Constraint(c) => {
                v.constraints.insert(id.clone(), c.clone());
            }
            ElementVersion::Task(m) => {
                v.tasks.insert(id.clone(), m.clone());
            }
            ElementVersion::Typing(g) => {
                v.typings.insert(id.clone(), g.clone());
            }
            ElementVersion::Concretisation(c) => {
                v.domains.insert(id.clone(), c.clone());
            }
        }
    }
    v
}

pub fn pop_at(h: &History, t: Tick, x: &ObjectTypeId) -> Result<BTreeSet<InstanceValue>> {
    h.universe().require(x)?;
    Ok(h.typings_at(t)
        .into_iter()
        .filter(|g| g.types.contains(x))
        .map(|g| g.value.clone())
        .collect())
}

/// Union of populations over all ticks. Each run of a typing is attained at
/// some tick, so scanning runs is enough.
pub fn pop_infinity(h: &History, x: &ObjectTypeId) -> Result<BTreeSet<InstanceValue>> {
    h.universe().require(x)?;
    Ok(h.evolutions()
        .flat_map(|e| e.track.values())
        .filter_map(ElementVersion::typing)
        .filter(|g| g.types.contains(x))
        .map(|g| g.value.clone())
        .collect())
}

fn all_pop_infinity(h: &History) -> BTreeMap<&ObjectTypeId, BTreeSet<&InstanceValue>> {
    let mut out: BTreeMap<&ObjectTypeId, BTreeSet<&InstanceValue>> = BTreeMap::new();
    for g in h
        .evolutions()
        .flat_map(|e| e.track.values())
        .filter_map(ElementVersion::typing)
    {
        for x in &g.types {
            out.entry(x).or_default().insert(&g.value);
        }
    }
    out
}

fn names<'a>(xs: impl IntoIterator<Item = &'a ObjectTypeId>) -> Vec<String> {
    xs.into_iter().map(ToString::to_string).collect()
}

/// The version axioms, in order.
pub fn check_amv(
    v: &AppModelVersion,
    u: &InformationStructureUniverse,
    adapter: &dyn TechniqueAdapter,
) -> ValidationReport {
    let t = v.tick;
    let view = v.structure(u);
    let mut report = ValidationReport::new();
    let mut warnings = Vec::new();
    let mut push = |axiom: Axiom, witnesses: Vec<String>| {
        report.push(Violation::new(axiom, witnesses).at(t));
    };

    for g in v.typings.values() {
        let value = g.value.to_string();
        let dead: Vec<_> = g.types.iter().filter(|x| !v.otypes.contains(*x)).collect();
        if !dead.is_empty() {
            push(
                Axiom::ActTypesLive,
                [vec![value.clone()], names(dead)].concat(),
            );
        }
        for x in &g.types {
            for y in g.types.range(x..).skip(1) {
                if !u.type_related(x, y) {
                    push(
                        Axiom::ActTypeRel,
                        vec![value.clone(), x.to_string(), y.to_string()],
                    );
                }
            }
        }
        for w in view
            .check_weak_inheritance(|x| g.types.contains(x))
            .into_iter()
        {
            push(
                Axiom::FoundedActivity,
                [vec![value.clone()], w.witnesses].concat(),
            );
        }
        let roots: Vec<_> = g
            .types
            .iter()
            .filter(|x| view.contains(x) && view.is_root(x))
            .collect();
        if roots.len() > 1 {
            push(
                Axiom::UniqueRoot,
                [vec![value.clone()], names(roots)].concat(),
            );
        }
    }

    for w in view.check_weak_inheritance(|x| v.otypes.contains(x)) {
        push(Axiom::LiveFoundation, w.witnesses);
    }

    for x in &v.otypes {
        if u.is_label(x) && v.domains_of(x).is_empty() {
            push(Axiom::LabDom, vec![x.to_string(), "no domain".into()]);
        }
        let doms = v.domains_of(x);
        if doms.len() > 1 {
            let listed: Vec<String> = doms.iter().map(ToString::to_string).collect();
            push(Axiom::LabDom, [vec![x.to_string()], listed].concat());
        }
    }
    for (id, c) in &v.domains {
        if !v.otypes.contains(&c.label) || !u.is_label(&c.label) {
            push(
                Axiom::LabDom,
                vec![
                    id.to_string(),
                    format!("{} is not an alive label type", c.label),
                ],
            );
        }
    }

    for g in v.typings.values().filter(|g| g.value.is_atomic()) {
        for x in g.types.iter().filter(|x| u.is_label(x)) {
            for d in v.domains_of(x) {
                if !d.contains(&g.value) {
                    push(
                        Axiom::LabTyping,
                        vec![g.value.to_string(), x.to_string(), d.to_string()],
                    );
                }
            }
        }
    }

    let constraint_defs = v.constraints.iter().map(|(id, c)| {
        let as_tasks = OwnedDefinition {
            owners: c
                .owners
                .iter()
                .map(|(o, d)| (o.clone(), TaskDef::from(d.clone())))
                .collect(),
        };
        (id, as_tasks, true)
    });
    let task_defs = v.tasks.iter().map(|(id, m)| (id, m.clone(), false));
    for (id, def, is_constraint) in constraint_defs.chain(task_defs) {
        if def.owners.is_empty() {
            push(Axiom::LifeDef, vec![id.to_string(), "no owner".into()]);
        }
        let dead: Vec<_> = def
            .owners
            .keys()
            .filter(|o| !v.otypes.contains(*o))
            .collect();
        if !dead.is_empty() {
            push(Axiom::LifeDef, [vec![id.to_string()], names(dead)].concat());
        }
        let eff = effective_owners(adapter, &view, &def);
        let owners: Vec<_> = eff.owners.keys().collect();
        for (i, x) in owners.iter().enumerate() {
            for y in &owners[i + 1..] {
                if !u.type_related(x, y) {
                    push(
                        Axiom::TypeRelDef,
                        vec![id.to_string(), x.to_string(), y.to_string()],
                    );
                }
            }
        }
        for w in view.check_strong_inheritance(|x| eff.owners.contains_key(x)) {
            push(
                Axiom::DefInheritance,
                [vec![id.to_string()], w.witnesses].concat(),
            );
        }
        for d in def.distinct_defs() {
            if is_constraint && d.body().is_err() {
                // unparseable constraints are reported where they are evaluated
                continue;
            }
            match depends_of(d, u) {
                Err(e) => push(Axiom::DanglingTypes, vec![id.to_string(), e.to_string()]),
                Ok(deps) => {
                    for dep in deps {
                        let live = match &dep {
                            Dependency::ObjectType(x) => v.otypes.contains(x),
                            Dependency::Domain(l, dom) => {
                                v.domains_of(l).iter().any(|a| dom.is_subdomain_of(*a))
                            }
                        };
                        if !live {
                            push(Axiom::DanglingTypes, vec![id.to_string(), dep.to_string()]);
                        }
                    }
                }
            }
        }
    }

    for (id, c) in &v.constraints {
        let eff = effective_owners(adapter, &view, c);
        for (x, dx) in &eff.owners {
            for (y, dy) in &eff.owners {
                if !view.parent_of(x, y) {
                    continue;
                }
                let (Ok(ay), Ok(ax)) = (dy.ast(), dx.ast()) else {
                    continue;
                };
                match adapter.constr_implies(ay, ax) {
                    ImplicationVerdict::Implied(_) => {}
                    ImplicationVerdict::NotImplied(w) => push(
                        Axiom::AMVStrength,
                        vec![id.to_string(), y.to_string(), x.to_string(), w],
                    ),
                    ImplicationVerdict::Unknown => warnings.push(
                        Violation::new(
                            Axiom::AMVStrength,
                            vec![
                                id.to_string(),
                                y.to_string(),
                                x.to_string(),
                                "implication undecided".into(),
                            ],
                        )
                        .at(t)
                        .warning(),
                    ),
                }
            }
        }
    }
    report.extend(warnings.into_iter().collect());
    report
}

/// Schema and population predicates of the technique, plus the version axioms.
pub fn check_version(
    v: &AppModelVersion,
    u: &InformationStructureUniverse,
    adapter: &dyn TechniqueAdapter,
) -> ValidationReport {
    let mut report = ValidationReport::new();
    for d in adapter.schema_defects(u, &v.otypes) {
        report.push(Violation::new(Axiom::IsSch, vec![d]).at(v.tick));
    }
    for d in adapter.pop_defects(u, &v.otypes, &v.typing_refs()) {
        report.push(Violation::new(Axiom::IsPop, vec![d]).at(v.tick));
    }
    report.extend(check_amv(v, u, adapter));
    report
}

pub fn is_am(
    v: &AppModelVersion,
    u: &InformationStructureUniverse,
    adapter: &dyn TechniqueAdapter,
) -> bool {
    !check_version(v, u, adapter).has_errors()
}

/// Types that are roots of the universe or of the version at some tick.
pub fn historical_roots(h: &History) -> BTreeSet<ObjectTypeId> {
    let u = h.universe();
    let mut roots: BTreeSet<ObjectTypeId> = u
        .otypes()
        .filter(|x| u.view().is_root(x))
        .cloned()
        .collect();
    for t in h.breakpoints() {
        let v = derive_version(h, t);
        let view = v.structure(u);
        roots.extend(v.otypes.iter().filter(|x| view.is_root(x)).cloned());
    }
    roots
}

/// Exclusive root populations, then the strong typing theorem and the
/// population distribution lemma that follow from the axioms.
pub fn check_strong_typing(h: &History) -> ValidationReport {
    let u = h.universe();
    let pops = all_pop_infinity(h);
    let empty = BTreeSet::new();
    let pop = |x: &ObjectTypeId| pops.get(x).unwrap_or(&empty);
    let mut report = ValidationReport::new();

    let overlap = |x: &ObjectTypeId, y: &ObjectTypeId| -> Vec<String> {
        pop(x).intersection(pop(y)).map(|v| v.to_string()).collect()
    };

    let roots: Vec<ObjectTypeId> = historical_roots(h).into_iter().collect();
    for (i, x) in roots.iter().enumerate() {
        for y in &roots[i + 1..] {
            if u.type_related(x, y) {
                continue;
            }
            let shared = overlap(x, y);
            if !shared.is_empty() {
                report.push(Violation::new(
                    Axiom::ExclRootPop,
                    [vec![x.to_string(), y.to_string()], shared].concat(),
                ));
            }
        }
    }

    if report.is_empty() {
        let all: Vec<&ObjectTypeId> = u.otypes().collect();
        for (i, x) in all.iter().enumerate() {
            for y in &all[i + 1..] {
                if u.type_related(x, y) {
                    continue;
                }
                let shared = overlap(x, y);
                if !shared.is_empty() {
                    report.push(Violation::new(
                        Axiom::StrongTyping,
                        [vec![x.to_string(), y.to_string()], shared].concat(),
                    ));
                }
            }
        }
    }

    for t in h.breakpoints() {
        let v = derive_version(h, t);
        let view = v.structure(u);
        for x in &v.otypes {
            let roots = view.roots_of(x);
            for val in v.pop(x) {
                let covered = roots.iter().any(|r| {
                    v.typings
                        .values()
                        .any(|g| g.value == val && g.types.contains(*r))
                });
                if !covered {
                    report.push(
                        Violation::new(Axiom::PopDist, vec![x.to_string(), val.to_string()]).at(t),
                    );
                }
            }
        }
    }
    report
}
