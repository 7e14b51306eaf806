//! Object types, type relatedness and the identification hierarchy.
//!
//! `x parent_of y` reads "x identifies the instances of y"; roots are types
//! without a parent. The universe stores `parent_of` transitively closed and
//! `type_rel` reflexive and symmetric when built through
//! [`UniverseBuilder::build`]. [`UniverseBuilder::build_raw`] skips closure so
//! that broken universes can be checked.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{KernelError, Result};
use crate::report::{Axiom, ValidationReport, Violation};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectTypeId(String);

impl ObjectTypeId {
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ObjectTypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ObjectTypeId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

impl From<String> for ObjectTypeId {
    fn from(s: String) -> Self {
        Self(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectKind {
    Label,
    NonLabel,
}

/// Structural facts about one object type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectTypeDecl {
    pub kind: ObjectKind,
    /// Role name to player; non-empty for fact types.
    pub roles: BTreeMap<String, ObjectTypeId>,
    /// Specialisation parent (ER modelling).
    pub supertype: Option<ObjectTypeId>,
    /// Element type of a power type.
    pub power_of: Option<ObjectTypeId>,
}

impl ObjectTypeDecl {
    pub fn of_kind(kind: ObjectKind) -> Self {
        Self {
            kind,
            roles: BTreeMap::new(),
            supertype: None,
            power_of: None,
        }
    }
}

/// Modelling technique a universe was written in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Technique {
    /// Relations given explicitly, no derivation.
    #[default]
    Explicit,
    /// Entity-relationship with specialisation; `type_rel` follows from tops.
    Er,
}

type Pair = (ObjectTypeId, ObjectTypeId);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InformationStructureUniverse {
    otypes: BTreeMap<ObjectTypeId, ObjectTypeDecl>,
    type_rel: BTreeSet<Pair>,
    parent_of: BTreeSet<Pair>,
    technique: Technique,
}

impl InformationStructureUniverse {
    pub fn builder() -> UniverseBuilder {
        UniverseBuilder::default()
    }

    pub fn technique(&self) -> Technique {
        self.technique
    }

    pub fn contains(&self, x: &ObjectTypeId) -> bool {
        self.otypes.contains_key(x)
    }

    pub fn require(&self, x: &ObjectTypeId) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(KernelError::UnknownObjectType(x.to_string()))
        }
    }

    pub fn otypes(&self) -> impl Iterator<Item = &ObjectTypeId> + '_ {
        self.otypes.keys()
    }

    pub fn len(&self) -> usize {
        self.otypes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.otypes.is_empty()
    }

    pub fn decl(&self, x: &ObjectTypeId) -> Option<&ObjectTypeDecl> {
        self.otypes.get(x)
    }

    pub fn decls(&self) -> impl Iterator<Item = (&ObjectTypeId, &ObjectTypeDecl)> + '_ {
        self.otypes.iter()
    }

    pub fn is_label(&self, x: &ObjectTypeId) -> bool {
        self.otypes
            .get(x)
            .is_some_and(|d| d.kind == ObjectKind::Label)
    }

    pub fn type_rel_pairs(&self) -> &BTreeSet<Pair> {
        &self.type_rel
    }

    pub fn parent_pairs(&self) -> &BTreeSet<Pair> {
        &self.parent_of
    }

    pub fn type_related(&self, x: &ObjectTypeId, y: &ObjectTypeId) -> bool {
        self.type_rel.contains(&(x.clone(), y.clone()))
    }

    pub fn parent_of(&self, x: &ObjectTypeId, y: &ObjectTypeId) -> bool {
        self.parent_of.contains(&(x.clone(), y.clone()))
    }

    /// Fact types in which `player` plays `role`.
    pub fn fact_types_with_role(&self, player: &ObjectTypeId, role: &str) -> Vec<&ObjectTypeId> {
        self.otypes
            .iter()
            .filter(|(_, d)| d.roles.get(role) == Some(player))
            .map(|(f, _)| f)
            .collect()
    }

    /// The whole hierarchy.
    pub fn view(&self) -> HierarchyView<'_> {
        HierarchyView {
            universe: self,
            alive: None,
        }
    }

    /// The hierarchy restricted to `alive` types.
    pub fn restricted<'a>(&'a self, alive: &'a BTreeSet<ObjectTypeId>) -> HierarchyView<'a> {
        HierarchyView {
            universe: self,
            alive: Some(alive),
        }
    }

    pub fn is_root(&self, x: &ObjectTypeId) -> Result<bool> {
        self.require(x)?;
        Ok(self.view().is_root(x))
    }

    pub fn roots_of(&self, y: &ObjectTypeId) -> Result<BTreeSet<ObjectTypeId>> {
        self.require(y)?;
        Ok(self.view().roots_of(y).into_iter().cloned().collect())
    }

    /// Tops of `x` in the closed hierarchy: roots that are `x` or an ancestor.
    pub fn tops_of(&self, x: &ObjectTypeId) -> Result<BTreeSet<ObjectTypeId>> {
        self.roots_of(x)
    }

    /// `type_rel` implied by unique tops: x ∼ y iff top(x) = top(y).
    pub fn top_derived_type_rel(&self) -> Result<BTreeSet<Pair>> {
        let mut top = BTreeMap::new();
        for x in self.otypes() {
            let tops = self.tops_of(x)?;
            if tops.len() != 1 {
                return Err(KernelError::NonUniqueTop {
                    otype: x.to_string(),
                    candidates: tops.iter().map(ToString::to_string).collect(),
                });
            }
            top.insert(x.clone(), tops.into_iter().next().expect("one top"));
        }
        let mut rel = BTreeSet::new();
        for (x, tx) in &top {
            for (y, ty) in &top {
                if tx == ty {
                    rel.insert((x.clone(), y.clone()));
                }
            }
        }
        Ok(rel)
    }
}

/// The identification hierarchy, optionally restricted to a set of alive
/// types. Version-level root checks run on the restricted view.
#[derive(Clone, Copy)]
pub struct HierarchyView<'a> {
    universe: &'a InformationStructureUniverse,
    alive: Option<&'a BTreeSet<ObjectTypeId>>,
}

impl<'a> HierarchyView<'a> {
    pub fn universe(&self) -> &'a InformationStructureUniverse {
        self.universe
    }

    pub fn contains(&self, x: &ObjectTypeId) -> bool {
        self.universe.contains(x) && self.alive.is_none_or(|a| a.contains(x))
    }

    pub fn members(&self) -> Vec<&'a ObjectTypeId> {
        match self.alive {
            None => self.universe.otypes().collect(),
            Some(alive) => self
                .universe
                .otypes()
                .filter(|x| alive.contains(*x))
                .collect(),
        }
    }

    pub fn parent_of(&self, x: &ObjectTypeId, y: &ObjectTypeId) -> bool {
        self.contains(x) && self.contains(y) && self.universe.parent_of(x, y)
    }

    pub fn type_related(&self, x: &ObjectTypeId, y: &ObjectTypeId) -> bool {
        self.contains(x) && self.contains(y) && self.universe.type_related(x, y)
    }

    pub fn ancestors(&self, y: &ObjectTypeId) -> Vec<&'a ObjectTypeId> {
        self.members()
            .into_iter()
            .filter(|x| self.parent_of(x, y))
            .collect()
    }

    pub fn is_root(&self, x: &ObjectTypeId) -> bool {
        self.ancestors(x).is_empty()
    }

    /// `x RootOf y`: x is a root and either is y or a parent of y.
    pub fn root_of(&self, x: &ObjectTypeId, y: &ObjectTypeId) -> bool {
        self.contains(x) && (x == y || self.parent_of(x, y)) && self.is_root(x)
    }

    pub fn roots_of(&self, y: &ObjectTypeId) -> Vec<&'a ObjectTypeId> {
        self.members()
            .into_iter()
            .filter(|x| self.root_of(x, y))
            .collect()
    }

    /// Pairs `(x, y)` with `p(x) ∧ x parent_of y ∧ ¬p(y)`.
    pub fn check_strong_inheritance(&self, p: impl Fn(&ObjectTypeId) -> bool) -> ValidationReport {
        let members = self.members();
        let mut report = ValidationReport::new();
        for x in &members {
            if !p(x) {
                continue;
            }
            for y in &members {
                if self.parent_of(x, y) && !p(y) {
                    report.push(Violation::new(
                        Axiom::StrongInheritance,
                        vec![x.to_string(), y.to_string()],
                    ));
                }
            }
        }
        report
    }

    /// Types `y` with `p(y)`, not a root, and no parent satisfying `p`.
    pub fn check_weak_inheritance(&self, p: impl Fn(&ObjectTypeId) -> bool) -> ValidationReport {
        let mut report = ValidationReport::new();
        for y in self.members() {
            if !p(y) {
                continue;
            }
            let ancestors = self.ancestors(y);
            if !ancestors.is_empty() && !ancestors.iter().any(|x| p(x)) {
                report.push(Violation::new(Axiom::WeakInheritance, vec![y.to_string()]));
            }
        }
        report
    }

    /// x ∼ y ⟺ ∃z[x ∼ z ∧ z RootOf y], over all pairs.
    pub fn common_roots_holds(&self) -> bool {
        let members = self.members();
        members.iter().all(|x| {
            members.iter().all(|y| {
                let via_root = self.roots_of(y).iter().any(|z| self.type_related(x, z));
                self.type_related(x, y) == via_root
            })
        })
    }

    /// ∃z1 ∼ z2[z1 RootOf x ∧ z2 RootOf y] ⟺ x ∼ y, over all pairs.
    pub fn type_rel_propagation_holds(&self) -> bool {
        let members = self.members();
        let roots: BTreeMap<&ObjectTypeId, Vec<&ObjectTypeId>> =
            members.iter().map(|x| (*x, self.roots_of(x))).collect();
        members.iter().all(|x| {
            members.iter().all(|y| {
                let via_roots = roots[x]
                    .iter()
                    .any(|z1| roots[y].iter().any(|z2| self.type_related(z1, z2)));
                via_roots == self.type_related(x, y)
            })
        })
    }
}

/// Check the universe axioms and, for ER universes, agreement between the
/// stored `type_rel` and the one implied by tops.
pub fn check_isu(u: &InformationStructureUniverse) -> ValidationReport {
    let mut report = ValidationReport::new();
    let otypes: Vec<&ObjectTypeId> = u.otypes().collect();
    let pair = |a: &ObjectTypeId, b: &ObjectTypeId| vec![a.to_string(), b.to_string()];

    for x in &otypes {
        if !u.type_related(x, x) {
            report.push(Violation::new(Axiom::ReflexTypeRel, vec![x.to_string()]));
        }
        if u.parent_of(x, x) {
            report.push(Violation::new(Axiom::ReflexParentOf, vec![x.to_string()]));
        }
    }
    for (x, y) in u.type_rel_pairs() {
        if !u.type_related(y, x) {
            report.push(Violation::new(Axiom::SymTypeRel, pair(x, y)));
        }
    }
    for (x, y) in u.parent_pairs() {
        for (y2, z) in u.parent_pairs() {
            if y == y2 && !u.parent_of(x, z) {
                report.push(Violation::new(
                    Axiom::TransParentOf,
                    vec![x.to_string(), y.to_string(), z.to_string()],
                ));
            }
        }
    }
    // Acyclicity of the closed relation is covered by irreflexivity; a cycle
    // in an unclosed relation still breaks transitivity or irreflexivity.
    for (x, y) in u.type_rel_pairs() {
        for z in &otypes {
            if u.parent_of(y, z) && !u.type_related(x, z) {
                report.push(Violation::new(
                    Axiom::TypeRelInheritance,
                    vec![x.to_string(), y.to_string(), z.to_string()],
                ));
            }
        }
    }
    for (x, y) in u.type_rel_pairs() {
        let parents: Vec<_> = otypes.iter().filter(|z| u.parent_of(z, y)).collect();
        if !parents.is_empty() && !parents.iter().any(|z| u.type_related(x, z)) {
            report.push(Violation::new(Axiom::FoundedTypeRel, pair(x, y)));
        }
    }
    for (x, y) in u.type_rel_pairs().iter().chain(u.parent_pairs()) {
        if !u.contains(x) || !u.contains(y) {
            report.push(Violation::new(Axiom::TechniqueAgreement, pair(x, y)));
        }
    }
    if u.technique() == Technique::Er {
        match u.top_derived_type_rel() {
            Err(e) => report.push(Violation::new(
                Axiom::TechniqueAgreement,
                vec![e.to_string()],
            )),
            Ok(derived) => {
                for (x, y) in derived.symmetric_difference(u.type_rel_pairs()) {
                    report.push(Violation::new(Axiom::TechniqueAgreement, pair(x, y)));
                }
            }
        }
    }
    report
}

/// Incremental construction of a universe.
#[derive(Clone, Debug, Default)]
pub struct UniverseBuilder {
    otypes: BTreeMap<ObjectTypeId, ObjectTypeDecl>,
    type_rel: BTreeSet<Pair>,
    parent_of: BTreeSet<Pair>,
    technique: Technique,
    duplicate: Option<String>,
}

impl UniverseBuilder {
    pub fn technique(mut self, technique: Technique) -> Self {
        self.technique = technique;
        self
    }

    pub fn declare(mut self, name: impl Into<ObjectTypeId>, decl: ObjectTypeDecl) -> Self {
        let name = name.into();
        if self.otypes.contains_key(&name) {
            self.duplicate.get_or_insert_with(|| name.to_string());
        }
        self.otypes.insert(name, decl);
        self
    }

    pub fn entity(self, name: impl Into<ObjectTypeId>) -> Self {
        self.declare(name, ObjectTypeDecl::of_kind(ObjectKind::NonLabel))
    }

    pub fn label(self, name: impl Into<ObjectTypeId>) -> Self {
        self.declare(name, ObjectTypeDecl::of_kind(ObjectKind::Label))
    }

    pub fn fact_type<'r>(
        self,
        name: impl Into<ObjectTypeId>,
        roles: impl IntoIterator<Item = (&'r str, &'r str)>,
    ) -> Self {
        let mut decl = ObjectTypeDecl::of_kind(ObjectKind::NonLabel);
        decl.roles = roles
            .into_iter()
            .map(|(r, p)| (r.to_owned(), ObjectTypeId::from(p)))
            .collect();
        self.declare(name, decl)
    }

    /// `sub` specialises `sup`; in ER universes `sup parent_of sub`.
    pub fn subtype(mut self, sub: &str, sup: &str) -> Self {
        if let Some(d) = self.otypes.get_mut(&ObjectTypeId::from(sub)) {
            d.supertype = Some(sup.into());
        }
        self
    }

    pub fn power_of(mut self, set_type: &str, element: &str) -> Self {
        if let Some(d) = self.otypes.get_mut(&ObjectTypeId::from(set_type)) {
            d.power_of = Some(element.into());
        }
        self
    }

    pub fn related(mut self, x: &str, y: &str) -> Self {
        self.type_rel.insert((x.into(), y.into()));
        self
    }

    pub fn parent(mut self, x: &str, y: &str) -> Self {
        self.parent_of.insert((x.into(), y.into()));
        self
    }

    /// Relations exactly as given, plus `supertype` edges; no closure.
    pub fn build_raw(self) -> Result<InformationStructureUniverse> {
        if let Some(d) = self.duplicate {
            return Err(KernelError::DuplicateElement(d));
        }
        let mut parent_of = self.parent_of;
        for (name, d) in &self.otypes {
            if let Some(sup) = &d.supertype {
                parent_of.insert((sup.clone(), name.clone()));
            }
        }
        let u = InformationStructureUniverse {
            otypes: self.otypes,
            type_rel: self.type_rel,
            parent_of,
            technique: self.technique,
        };
        for (name, d) in &u.otypes {
            for p in d.roles.values().chain(&d.supertype).chain(&d.power_of) {
                if !u.contains(p) {
                    return Err(KernelError::UnknownObjectType(format!(
                        "{p} (referenced by {name})"
                    )));
                }
            }
        }
        for (x, y) in u.type_rel.iter().chain(&u.parent_of) {
            u.require(x)?;
            u.require(y)?;
        }
        Ok(u)
    }

    /// Close `parent_of` transitively and `type_rel` reflexively and
    /// symmetrically. ER universes with no explicit `type_rel` derive it from
    /// tops.
    pub fn build(self) -> Result<InformationStructureUniverse> {
        let explicit_rel = !self.type_rel.is_empty();
        let mut u = self.build_raw()?;
        u.parent_of = transitive_closure(&u.parent_of);
        if u.technique == Technique::Er && !explicit_rel {
            if let Ok(derived) = u.top_derived_type_rel() {
                u.type_rel = derived;
                return Ok(u);
            }
        }
        let mut rel = u.type_rel.clone();
        for x in u.otypes.keys() {
            rel.insert((x.clone(), x.clone()));
        }
        for (x, y) in &u.type_rel {
            rel.insert((y.clone(), x.clone()));
        }
        u.type_rel = rel;
        Ok(u)
    }
}

pub(crate) fn transitive_closure(rel: &BTreeSet<Pair>) -> BTreeSet<Pair> {
    let mut closed = rel.clone();
    loop {
        let mut added = Vec::new();
        for (x, y) in &closed {
            for (y2, z) in closed.range((y.clone(), ObjectTypeId::new(""))..) {
                if y2 != y {
                    break;
                }
                if !closed.contains(&(x.clone(), z.clone())) {
                    added.push((x.clone(), z.clone()));
                }
            }
        }
        if added.is_empty() {
            return closed;
        }
        closed.extend(added);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn id(s: &str) -> ObjectTypeId {
        ObjectTypeId::from(s)
    }

    fn set(items: &[&str]) -> BTreeSet<ObjectTypeId> {
        items.iter().map(|s| id(s)).collect()
    }

    #[test]
    fn broker_universe_is_valid() {
        let u = fixtures::broker_universe();
        assert!(check_isu(&u).is_empty(), "{}", check_isu(&u));
        assert!(u.view().common_roots_holds());
        assert!(u.view().type_rel_propagation_holds());
    }

    #[test]
    fn broker_roots() {
        let u = fixtures::broker_universe();
        assert!(u.is_root(&id("Boat")).unwrap());
        assert!(!u.is_root(&id("Product")).unwrap());
        assert_eq!(
            u.roots_of(&id("Real estate")).unwrap(),
            set(&["Boat", "House"])
        );
        assert_eq!(u.roots_of(&id("Product")).unwrap(), set(&["Boat", "House"]));
        assert_eq!(u.roots_of(&id("Boat")).unwrap(), set(&["Boat"]));
        assert!(u.type_related(&id("Real estate"), &id("Boat")));
        assert!(matches!(
            u.is_root(&id("Yacht")),
            Err(KernelError::UnknownObjectType(_))
        ));
    }

    #[test]
    fn singleton_is_root() {
        let u = InformationStructureUniverse::builder()
            .entity("x")
            .build()
            .unwrap();
        assert!(u.is_root(&id("x")).unwrap());
        assert!(check_isu(&u).is_empty());
    }

    #[test]
    fn broken_symmetry_and_reflexivity() {
        let u = InformationStructureUniverse::builder()
            .entity("x")
            .entity("y")
            .related("x", "x")
            .related("y", "y")
            .related("x", "y")
            .build_raw()
            .unwrap();
        let r = check_isu(&u);
        assert_eq!(r.violated_axioms(), [Axiom::SymTypeRel].into());
        assert_eq!(r.violations()[0].witnesses, vec!["x", "y"]);

        let u = InformationStructureUniverse::builder()
            .entity("x")
            .related("x", "x")
            .parent("x", "x")
            .build_raw()
            .unwrap();
        assert!(check_isu(&u)
            .violated_axioms()
            .contains(&Axiom::ReflexParentOf));
    }

    #[test]
    fn strong_inheritance_examples() {
        let u = fixtures::broker_universe();
        let v = u.view();
        let closed = set(&["Boat", "Product", "Real estate"]);
        assert!(v
            .check_strong_inheritance(|x| closed.contains(x))
            .is_empty());
        let boat = set(&["Boat"]);
        let r = v.check_strong_inheritance(|x| boat.contains(x));
        assert!(r
            .violations()
            .iter()
            .any(|v| v.witnesses == vec!["Boat", "Product"]));
        assert!(v.check_strong_inheritance(|_| true).is_empty());
    }

    #[test]
    fn weak_inheritance_examples() {
        let u = fixtures::broker_universe();
        let v = u.view();
        let p = set(&["Product", "Boat"]);
        assert!(v.check_weak_inheritance(|x| p.contains(x)).is_empty());
        let re = set(&["Real estate"]);
        let r = v.check_weak_inheritance(|x| re.contains(x));
        assert_eq!(r.len(), 1);
        assert_eq!(r.violations()[0].witnesses, vec!["Real estate"]);
        assert!(v.check_weak_inheritance(|_| false).is_empty());
    }

    #[test]
    fn identity_relation_universe() {
        let u = InformationStructureUniverse::builder()
            .entity("LP")
            .entity("Song")
            .build()
            .unwrap();
        assert_eq!(u.type_rel_pairs().len(), 2);
        assert!(u.view().common_roots_holds());
    }

    #[test]
    fn restricted_view_promotes_roots() {
        let u = InformationStructureUniverse::builder()
            .technique(Technique::Er)
            .entity("Medium")
            .entity("LP")
            .subtype("LP", "Medium")
            .build()
            .unwrap();
        assert!(!u.view().is_root(&id("LP")));
        let alive = set(&["LP"]);
        assert!(u.restricted(&alive).is_root(&id("LP")));
    }

    #[test]
    fn er_build_derives_type_rel() {
        let u = InformationStructureUniverse::builder()
            .technique(Technique::Er)
            .entity("Medium")
            .entity("LP")
            .entity("CD")
            .entity("Song")
            .subtype("LP", "Medium")
            .subtype("CD", "Medium")
            .build()
            .unwrap();
        assert!(u.type_related(&id("LP"), &id("CD")));
        assert!(!u.type_related(&id("LP"), &id("Song")));
        assert!(check_isu(&u).is_empty(), "{}", check_isu(&u));
    }

    #[test]
    fn er_disagreement_is_reported() {
        let u = InformationStructureUniverse::builder()
            .technique(Technique::Er)
            .entity("a")
            .entity("b")
            .related("a", "b")
            .build()
            .unwrap();
        assert!(check_isu(&u)
            .violated_axioms()
            .contains(&Axiom::TechniqueAgreement));
    }

    #[test]
    fn closure_is_transitive() {
        let rel: BTreeSet<Pair> = [(id("a"), id("b")), (id("b"), id("c")), (id("c"), id("d"))]
            .into_iter()
            .collect();
        let c = transitive_closure(&rel);
        assert!(c.contains(&(id("a"), id("d"))));
        assert_eq!(c.len(), 6);
    }
}
