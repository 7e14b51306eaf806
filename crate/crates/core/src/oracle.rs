//! Brute-force reference implementations and seeded generators.
//!
//! Everything here recomputes from the raw relations and raw runs, with no
//! indexes and none of the kernel's hierarchy views, so that agreement with
//! the kernel is evidence rather than tautology.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amu::{InstanceTyping, InstanceValue};
use crate::constraints::{ConstraintAst, RoleRef};
use crate::error::{KernelError, Result};
use crate::history::{is_amh, Edit, ElementEvolution, ElementVersion, History, TransactionBody};
use crate::isu::{check_isu, InformationStructureUniverse, ObjectTypeId};
use crate::report::{Axiom, ValidationReport, Violation};
use crate::timeline::{Tick, TickRange};

pub const MAX_OTYPES: usize = 8;
pub const MAX_INSTANCES: usize = 6;
pub const MAX_TICKS: u64 = 6;
pub const MAX_TRIES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallUniverseSpec {
    pub max_otypes: usize,
    pub max_instances: usize,
    pub max_ticks: u64,
    pub seed: u64,
}

impl SmallUniverseSpec {
    /// Largest bounds with the given seed.
    pub fn seeded(seed: u64) -> Self {
        Self {
            max_otypes: MAX_OTYPES,
            max_instances: MAX_INSTANCES,
            max_ticks: MAX_TICKS,
            seed,
        }
    }

    fn check(&self) -> Result<()> {
        if self.max_otypes == 0 || self.max_otypes > MAX_OTYPES {
            return Err(KernelError::BoundsExceeded(format!(
                "max_otypes = {}",
                self.max_otypes
            )));
        }
        if self.max_instances > MAX_INSTANCES {
            return Err(KernelError::BoundsExceeded(format!(
                "max_instances = {}",
                self.max_instances
            )));
        }
        if self.max_ticks == 0 || self.max_ticks > MAX_TICKS {
            return Err(KernelError::BoundsExceeded(format!(
                "max_ticks = {}",
                self.max_ticks
            )));
        }
        Ok(())
    }
}

/// Naive hierarchy over the raw pairs, optionally restricted to `alive`.
struct Naive<'a> {
    u: &'a InformationStructureUniverse,
    members: Vec<&'a ObjectTypeId>,
}

impl<'a> Naive<'a> {
    fn new(u: &'a InformationStructureUniverse, alive: Option<&BTreeSet<ObjectTypeId>>) -> Self {
        let members = u
            .otypes()
            .filter(|x| alive.is_none_or(|a| a.contains(*x)))
            .collect();
        Self { u, members }
    }

    fn parent(&self, x: &ObjectTypeId, y: &ObjectTypeId) -> bool {
        self.u.parent_pairs().contains(&(x.clone(), y.clone()))
    }

    fn rel(&self, x: &ObjectTypeId, y: &ObjectTypeId) -> bool {
        self.u.type_rel_pairs().contains(&(x.clone(), y.clone()))
    }

    fn is_root(&self, x: &ObjectTypeId) -> bool {
        !self.members.iter().any(|z| self.parent(z, x))
    }

    fn root_of(&self, x: &ObjectTypeId, y: &ObjectTypeId) -> bool {
        self.is_root(x) && (x == y || self.parent(x, y))
    }

    fn roots_of(&self, y: &ObjectTypeId) -> Vec<&'a ObjectTypeId> {
        self.members
            .iter()
            .copied()
            .filter(|x| self.root_of(x, y))
            .collect()
    }
}

fn naive_versions(h: &History, t: Tick) -> impl Iterator<Item = &ElementVersion> + '_ {
    h.evolutions().flat_map(move |e| {
        e.track
            .runs()
            .filter(move |(a, b, _)| *a <= t && b.is_none_or(|b| t <= b))
            .map(|(_, _, v)| v)
    })
}

fn naive_alive(h: &History, t: Tick) -> BTreeSet<ObjectTypeId> {
    naive_versions(h, t)
        .filter_map(ElementVersion::object_type)
        .cloned()
        .collect()
}

fn naive_typings(h: &History, t: Tick) -> Vec<&InstanceTyping> {
    naive_versions(h, t)
        .filter_map(ElementVersion::typing)
        .collect()
}

fn naive_pop<'h>(typings: &[&'h InstanceTyping], x: &ObjectTypeId) -> BTreeSet<&'h InstanceValue> {
    typings
        .iter()
        .filter(|g| g.types.contains(x))
        .map(|g| &g.value)
        .collect()
}

/// Last tick at which some run starts or the tick after some run ends.
fn naive_last_change(h: &History) -> Option<Tick> {
    h.evolutions()
        .flat_map(|e| {
            e.track
                .runs()
                .map(|(a, b, _)| b.map_or(a, Tick::next))
                .collect::<Vec<_>>()
        })
        .max()
}

fn naive_first(h: &History) -> Option<Tick> {
    h.evolutions()
        .flat_map(|e| e.track.runs().map(|(a, _, _)| a).collect::<Vec<_>>())
        .min()
}

/// Ticks from the first defined one up to the last change; after that the
/// history is constant.
fn naive_ticks(h: &History) -> Vec<Tick> {
    match (naive_first(h), naive_last_change(h)) {
        (Some(a), Some(b)) => (a.0..=b.0.max(a.0)).map(Tick).collect(),
        _ => Vec::new(),
    }
}

/// Evaluate the derived lemmas and theorems by quantifier enumeration: the
/// two root lemmas on the universe, the per-tick population lemmas on every
/// tick, and exclusive population over all ticks.
pub fn oracle_check_lemmas(h: &History) -> ValidationReport {
    let u = h.universe();
    let mut report = ValidationReport::new();
    let all = Naive::new(u, None);
    for x in &all.members {
        for y in &all.members {
            let via_root = all
                .members
                .iter()
                .any(|z| all.rel(x, z) && all.root_of(z, y));
            if all.rel(x, y) != via_root {
                report.push(Violation::new(
                    Axiom::CommonRoots,
                    vec![x.to_string(), y.to_string()],
                ));
            }
            let via_roots = all.members.iter().any(|z1| {
                all.members
                    .iter()
                    .any(|z2| all.rel(z1, z2) && all.root_of(z1, x) && all.root_of(z2, y))
            });
            if all.rel(x, y) != via_roots {
                report.push(Violation::new(
                    Axiom::TypeRelPropagation,
                    vec![x.to_string(), y.to_string()],
                ));
            }
        }
    }

    let ticks = naive_ticks(h);
    let mut pop_inf: BTreeMap<&ObjectTypeId, BTreeSet<&InstanceValue>> = BTreeMap::new();
    for &t in &ticks {
        let alive = naive_alive(h, t);
        let view = Naive::new(u, Some(&alive));
        let typings = naive_typings(h, t);
        for g in &typings {
            let roots: Vec<_> = g
                .types
                .iter()
                .filter(|x| view.members.contains(x) && view.is_root(x))
                .collect();
            if roots.len() != 1 {
                let mut w = vec![g.value.to_string()];
                w.extend(roots.iter().map(|x| x.to_string()));
                report.push(Violation::new(Axiom::RootActive, w).at(t));
            }
        }
        for x in &view.members {
            let covered: BTreeSet<_> = view
                .roots_of(x)
                .into_iter()
                .flat_map(|r| naive_pop(&typings, r))
                .collect();
            for v in naive_pop(&typings, x) {
                if !covered.contains(v) {
                    report.push(
                        Violation::new(Axiom::PopDist, vec![x.to_string(), v.to_string()]).at(t),
                    );
                }
            }
        }
        for x in &all.members {
            pop_inf.entry(x).or_default().extend(naive_pop(&typings, x));
        }
    }
    let empty = BTreeSet::new();
    for x in &all.members {
        for y in &all.members {
            if x < y && !all.rel(x, y) {
                let (px, py) = (
                    pop_inf.get(x).unwrap_or(&empty),
                    pop_inf.get(y).unwrap_or(&empty),
                );
                for v in px.intersection(py) {
                    report.push(Violation::new(
                        Axiom::StrongTyping,
                        vec![x.to_string(), y.to_string(), v.to_string()],
                    ));
                }
            }
        }
    }
    report.normalized()
}

/// Direct evaluation of a constraint: rebuild every population from the raw
/// runs at every tick. Unresolvable references make the constraint false.
pub fn oracle_eval_constraint(h: &History, interval: TickRange, ast: &ConstraintAst) -> bool {
    let u = h.universe();
    let resolvable = ast.role_refs().iter().all(|r| {
        u.decls()
            .any(|(_, d)| d.roles.get(&r.role) == Some(&r.otype))
    }) && ast.plain_types().iter().all(|x| u.contains(x));
    if !resolvable {
        return false;
    }
    let end = interval
        .end
        .unwrap_or_else(|| naive_last_change(h).map_or(interval.start, |t| t.max(interval.start)));
    let ticks: Vec<Tick> = (interval.start.0..=end.0).map(Tick).collect();
    let per_tick = ticks
        .iter()
        .all(|&t| holds_at(h, &naive_typings(h, t), ast));
    per_tick && temporal_holds(h, &ticks, ast)
}

/// Tuples of fact types that give role `r.role` to player `r.otype`, whose
/// role `r.role` is filled by `v`.
fn filled_by<'h>(
    h: &History,
    typings: &[&'h InstanceTyping],
    r: &RoleRef,
    v: &InstanceValue,
) -> BTreeSet<&'h InstanceValue> {
    let u = h.universe();
    let mut out = BTreeSet::new();
    for (f, d) in u.decls() {
        if d.roles.get(&r.role) != Some(&r.otype) {
            continue;
        }
        for w in naive_pop(typings, f) {
            if let InstanceValue::Tuple(m) = w {
                if m.get(&r.role) == Some(v) {
                    out.insert(w);
                }
            }
        }
    }
    out
}

fn holds_at(h: &History, typings: &[&InstanceTyping], ast: &ConstraintAst) -> bool {
    match ast {
        ConstraintAst::Total(refs) => refs.iter().all(|r| {
            naive_pop(typings, &r.otype)
                .into_iter()
                .all(|v| refs.iter().any(|q| !filled_by(h, typings, q, v).is_empty()))
        }),
        ConstraintAst::Unique(refs) => refs.iter().all(|r| {
            let candidates: BTreeSet<&InstanceValue> = typings
                .iter()
                .filter_map(|g| match &g.value {
                    InstanceValue::Tuple(m) => m.get(&r.role),
                    _ => None,
                })
                .collect();
            candidates
                .into_iter()
                .all(|v| filled_by(h, typings, r, v).len() <= 1)
        }),
        ConstraintAst::And(cs) => cs.iter().all(|c| holds_at(h, typings, c)),
        ConstraintAst::BeforeEquals { .. } => true,
    }
}

fn temporal_holds(h: &History, ticks: &[Tick], ast: &ConstraintAst) -> bool {
    match ast {
        ConstraintAst::And(cs) => cs.iter().all(|c| temporal_holds(h, ticks, c)),
        ConstraintAst::BeforeEquals {
            earlier,
            later,
            target,
        } => {
            let pops: Vec<(Tick, Vec<&InstanceTyping>)> =
                ticks.iter().map(|&t| (t, naive_typings(h, t))).collect();
            let first_in = |x: &ObjectTypeId, v: &InstanceValue| {
                pops.iter()
                    .find(|(_, gs)| gs.iter().any(|g| &g.value == v && g.types.contains(x)))
                    .map(|(t, _)| *t)
            };
            let values: BTreeSet<&InstanceValue> = pops
                .iter()
                .flat_map(|(_, gs)| gs.iter().map(|g| &g.value))
                .collect();
            values.into_iter().all(|v| {
                let entered_first = match (first_in(earlier, v), first_in(later, v)) {
                    (Some(te), Some(tl)) => te < tl,
                    (Some(_), None) => true,
                    _ => false,
                };
                let in_target = first_in(target, v).is_some();
                entered_first == in_target
            })
        }
        _ => true,
    }
}

fn otype(i: usize) -> ObjectTypeId {
    ObjectTypeId::new(format!("T{i}"))
}

/// Random DAG for `parent_of`, random extra relatedness, then edges added
/// until type relatedness is inherited and founded.
pub fn generate_universe(rng: &mut impl Rng, n: usize) -> Result<InformationStructureUniverse> {
    let mut b = InformationStructureUniverse::builder();
    for i in 0..n {
        b = b.entity(otype(i));
    }
    let mut parent: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..n {
        for i in 0..j {
            if rng.gen_bool(0.25) {
                parent.insert((i, j));
            }
        }
    }
    loop {
        let extra: Vec<_> = parent
            .iter()
            .flat_map(|&(i, j)| {
                parent
                    .iter()
                    .filter(move |&&(j2, _)| j2 == j)
                    .map(move |&(_, k)| (i, k))
            })
            .filter(|p| !parent.contains(p))
            .collect();
        if extra.is_empty() {
            break;
        }
        parent.extend(extra);
    }
    let mut rel: BTreeSet<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
    for &(i, j) in &parent {
        rel.insert((i, j));
        rel.insert((j, i));
    }
    for i in 0..n {
        for j in 0..i {
            if rng.gen_bool(0.15) {
                rel.insert((i, j));
                rel.insert((j, i));
            }
        }
    }
    loop {
        let mut added = BTreeSet::new();
        for &(x, y) in &rel {
            for &(p, z) in &parent {
                if p == y && !rel.contains(&(x, z)) {
                    added.insert((x, z));
                    added.insert((z, x));
                }
            }
            let parents: Vec<usize> = parent.iter().filter(|p| p.1 == y).map(|p| p.0).collect();
            if !parents.is_empty() && !parents.iter().any(|&z| rel.contains(&(x, z))) {
                let z = parents[0];
                added.insert((x, z));
                added.insert((z, x));
            }
        }
        if added.is_empty() {
            break;
        }
        rel.extend(added);
    }
    for (i, j) in &parent {
        b = b.parent(otype(*i).as_str(), otype(*j).as_str());
    }
    for (i, j) in &rel {
        b = b.related(otype(*i).as_str(), otype(*j).as_str());
    }
    b.build()
}

/// A rooted, related, upward-closed type set over `alive` with root `r`.
fn grow_typing(
    rng: &mut impl Rng,
    u: &InformationStructureUniverse,
    alive: &BTreeSet<ObjectTypeId>,
    r: &ObjectTypeId,
) -> BTreeSet<ObjectTypeId> {
    let mut set = BTreeSet::from([r.clone()]);
    let mut candidates: Vec<&ObjectTypeId> = alive.iter().collect();
    candidates.shuffle(rng);
    for y in candidates {
        if set.contains(y) || !rng.gen_bool(0.5) {
            continue;
        }
        let founded = set.iter().any(|x| u.parent_of(x, y));
        let related = set.iter().all(|x| u.type_related(x, y));
        if founded && related {
            set.insert(y.clone());
        }
    }
    set
}

fn candidate_history(spec: &SmallUniverseSpec, rng: &mut impl Rng) -> Result<History> {
    let n = rng.gen_range(1..=spec.max_otypes);
    let u = generate_universe(rng, n)?;
    if !check_isu(&u).is_empty() {
        return Err(KernelError::GenerationExhausted(0));
    }
    let last = rng.gen_range(1..=spec.max_ticks);
    let mut h = History::new(u.clone());
    let mut life: BTreeMap<ObjectTypeId, (u64, Option<u64>)> = BTreeMap::new();
    for x in u.otypes() {
        let from = if rng.gen_bool(0.7) {
            1
        } else {
            rng.gen_range(1..=last)
        };
        let to = rng.gen_bool(0.2).then(|| rng.gen_range(from..=last));
        life.insert(x.clone(), (from, to));
        h.insert(ElementEvolution::from_runs(
            format!("ot:{x}"),
            [(from, to, x.clone())],
        )?)?;
    }
    let alive_at = |t: u64| -> BTreeSet<ObjectTypeId> {
        life.iter()
            .filter(|(_, (a, b))| *a <= t && b.is_none_or(|b| t <= b))
            .map(|(x, _)| x.clone())
            .collect()
    };
    let instances = rng.gen_range(0..=spec.max_instances);
    for k in 0..instances {
        let from = rng.gen_range(1..=last);
        let alive = alive_at(from);
        let view = u.restricted(&alive);
        let roots: Vec<&ObjectTypeId> = alive.iter().filter(|x| view.is_root(x)).collect();
        let Some(r) = roots.choose(rng) else {
            continue;
        };
        let mut runs = Vec::new();
        let split = (from < last && rng.gen_bool(0.4)).then(|| rng.gen_range(from..last));
        let value = InstanceValue::surrogate(format!("v{k}"));
        match split {
            Some(s) => {
                runs.push((
                    from,
                    Some(s),
                    InstanceTyping {
                        value: value.clone(),
                        types: grow_typing(rng, &u, &alive, r),
                    },
                ));
                let alive2 = alive_at(s + 1);
                if alive2.contains(*r) && u.restricted(&alive2).is_root(r) {
                    runs.push((
                        s + 1,
                        None,
                        InstanceTyping {
                            value,
                            types: grow_typing(rng, &u, &alive2, r),
                        },
                    ));
                }
            }
            None => {
                let to = rng.gen_bool(0.3).then(|| rng.gen_range(from..=last));
                runs.push((
                    from,
                    to,
                    InstanceTyping {
                        value,
                        types: grow_typing(rng, &u, &alive, r),
                    },
                ));
            }
        }
        h.insert(ElementEvolution::from_runs(format!("g{k}"), runs)?)?;
    }
    Ok(h)
}

/// Generate-then-reject until the history passes `is_amh`.
pub fn generate_history(spec: &SmallUniverseSpec) -> Result<History> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..MAX_TRIES {
        let Ok(h) = candidate_history(spec, &mut rng) else {
            continue;
        };
        if is_amh(&h) {
            return Ok(h);
        }
    }
    Err(KernelError::GenerationExhausted(MAX_TRIES))
}

/// A universe with three entity types and two binary fact types.
fn constraint_universe() -> InformationStructureUniverse {
    InformationStructureUniverse::builder()
        .entity("A")
        .entity("B")
        .entity("C")
        .fact_type("F", [("p", "A"), ("q", "B")])
        .fact_type("G", [("p", "A"), ("r", "C")])
        .build()
        .expect("fixed universe")
}

fn random_refs(rng: &mut impl Rng) -> BTreeSet<RoleRef> {
    let all = [("A", "p"), ("B", "q"), ("C", "r")];
    let mut refs: BTreeSet<RoleRef> = all
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(|(x, r)| RoleRef::new(*x, *r))
        .collect();
    if refs.is_empty() {
        let (x, r) = all[rng.gen_range(0..all.len())];
        refs.insert(RoleRef::new(x, r));
    }
    refs
}

fn random_atom(rng: &mut impl Rng) -> ConstraintAst {
    match rng.gen_range(0..5) {
        0 | 1 => ConstraintAst::Total(random_refs(rng)),
        2 | 3 => ConstraintAst::Unique(random_refs(rng)),
        _ => {
            let mut names = ["A", "B", "C"];
            names.shuffle(rng);
            ConstraintAst::BeforeEquals {
                earlier: names[0].into(),
                later: names[1].into(),
                target: names[2].into(),
            }
        }
    }
}

/// A random, not necessarily well-formed, history over the fixed constraint
/// universe, with a random constraint and interval.
pub fn random_constraint_case(seed: u64) -> (History, TickRange, ConstraintAst) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = constraint_universe();
    let mut h = History::new(u);
    let last = rng.gen_range(1..=MAX_TICKS);
    let atoms = ["a1", "a2", "b1", "c1"];
    let kinds: [(&str, &[&str]); 3] = [("A", &["a1", "a2"]), ("B", &["b1"]), ("C", &["c1"])];
    let mut k = 0;
    let mut push = |h: &mut History, rng: &mut ChaCha8Rng, g: InstanceTyping| {
        let from = rng.gen_range(1..=last);
        let to = rng.gen_bool(0.5).then(|| rng.gen_range(from..=last));
        h.insert(ElementEvolution::from_runs(format!("g{k}"), [(from, to, g)]).expect("one run"))
            .expect("fresh id");
        k += 1;
    };
    for (x, vals) in kinds {
        for v in vals {
            if rng.gen_bool(0.7) {
                let mut types = vec![x];
                if rng.gen_bool(0.2) {
                    types.push(["A", "B", "C"].choose(&mut rng).expect("nonempty"));
                }
                push(
                    &mut h,
                    &mut rng,
                    InstanceTyping::new(InstanceValue::surrogate(*v), types),
                );
            }
        }
    }
    for _ in 0..rng.gen_range(0..=4) {
        let (f, role) = if rng.gen_bool(0.5) {
            ("F", "q")
        } else {
            ("G", "r")
        };
        let p = InstanceValue::surrogate(*atoms[..2].choose(&mut rng).expect("nonempty"));
        let o = InstanceValue::surrogate(*atoms.choose(&mut rng).expect("nonempty"));
        let tuple = InstanceValue::tuple([("p", p), (role, o)]);
        push(&mut h, &mut rng, InstanceTyping::new(tuple, [f]));
    }
    let ast = if rng.gen_bool(0.3) {
        ConstraintAst::And(
            (0..rng.gen_range(2..=3))
                .map(|_| random_atom(&mut rng))
                .collect(),
        )
    } else {
        random_atom(&mut rng)
    };
    let start = Tick(rng.gen_range(1..=last));
    let interval = if rng.gen_bool(0.5) {
        TickRange::from(start)
    } else {
        TickRange::between(start, Tick(rng.gen_range(start.0..=last + 1))).expect("ordered")
    };
    (h, interval, ast)
}

/// A random transaction at `t` over the elements of `h`: retypings,
/// terminations and fresh typings drawn from the universe's types.
pub fn random_transaction(h: &History, t: Tick, rng: &mut impl Rng) -> TransactionBody {
    let u = h.universe();
    let types: Vec<&ObjectTypeId> = u.otypes().collect();
    let live: Vec<_> = h
        .evolutions()
        .filter(|e| e.track.defined_at(t.next()))
        .collect();
    let mut edits = Vec::new();
    let mut touched = BTreeSet::new();
    for _ in 0..rng.gen_range(0..=3) {
        let pick_types = |rng: &mut dyn rand::RngCore| -> Vec<ObjectTypeId> {
            let n = rng.gen_range(1..=2.min(types.len().max(1)));
            (0..n)
                .filter_map(|_| {
                    types
                        .get(rng.gen_range(0..types.len().max(1)))
                        .map(|x| (*x).clone())
                })
                .collect()
        };
        match rng.gen_range(0..4) {
            0 | 1 if !live.is_empty() => {
                let e = live[rng.gen_range(0..live.len())];
                if !touched.insert(e.id.clone()) {
                    continue;
                }
                match e.track.get(t.next()) {
                    Some(ElementVersion::Typing(g)) if !types.is_empty() => {
                        let g = InstanceTyping::new(g.value.clone(), pick_types(rng));
                        edits.push(Edit::set(e.id.clone(), g));
                    }
                    _ => edits.push(Edit::terminate(e.id.clone())),
                }
            }
            2 if !live.is_empty() => {
                let e = live[rng.gen_range(0..live.len())];
                if touched.insert(e.id.clone()) {
                    edits.push(Edit::terminate(e.id.clone()));
                }
            }
            _ if !types.is_empty() => {
                let id = format!("new-{}-{}", t.0, edits.len());
                let v = InstanceValue::surrogate(format!("n{}", rng.gen_range(0..4)));
                edits.push(Edit::create(
                    id.as_str(),
                    InstanceTyping::new(v, pick_types(rng)),
                ));
            }
            _ => {}
        }
    }
    TransactionBody::new(edits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::eval_constraint;
    use crate::fixtures;

    #[test]
    fn broker_lemmas_hold() {
        assert!(oracle_check_lemmas(&fixtures::broker()).is_empty());
    }

    #[test]
    fn unfounded_relatedness_breaks_common_roots() {
        let u = InformationStructureUniverse::builder()
            .entity("A")
            .entity("B")
            .entity("C")
            .parent("A", "B")
            .related("A", "B")
            .related("B", "C")
            .build()
            .unwrap();
        let r = oracle_check_lemmas(&History::new(u));
        assert!(r.violated_axioms().contains(&Axiom::CommonRoots), "{r}");
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = SmallUniverseSpec::seeded(1);
        let a = generate_history(&spec).unwrap();
        let b = generate_history(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.universe(), b.universe());
        assert!(is_amh(&a));
    }

    #[test]
    fn single_type_spec() {
        let spec = SmallUniverseSpec {
            max_otypes: 1,
            ..SmallUniverseSpec::seeded(5)
        };
        assert_eq!(generate_history(&spec).unwrap().universe().len(), 1);
    }

    #[test]
    fn bounds_are_enforced() {
        let spec = SmallUniverseSpec {
            max_otypes: 9,
            ..SmallUniverseSpec::seeded(0)
        };
        assert!(matches!(
            generate_history(&spec),
            Err(KernelError::BoundsExceeded(_))
        ));
    }

    #[test]
    fn empty_history_total_holds() {
        let h = History::new(constraint_universe());
        let ast = ConstraintAst::total([RoleRef::new("A", "p")]);
        assert!(oracle_eval_constraint(&h, TickRange::from(Tick(1)), &ast));
    }

    #[test]
    fn airplane_c1_agrees() {
        let h = fixtures::airplane();
        let ast = crate::constraints::parse_constraint(fixtures::C1).unwrap();
        let range = TickRange::from(Tick(1));
        assert_eq!(
            oracle_eval_constraint(&h, range, &ast),
            eval_constraint(&h, range, &ast).unwrap()
        );
    }

    #[test]
    fn kernel_agrees_on_random_cases() {
        for seed in 0..100 {
            let (h, range, ast) = random_constraint_case(seed);
            assert_eq!(
                eval_constraint(&h, range, &ast).unwrap(),
                oracle_eval_constraint(&h, range, &ast),
                "seed {seed}: {ast} over {range}"
            );
        }
    }
}
