//! Domains, instances, owned definitions and modelling-technique adapters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constraints::{self, ConstraintAst, ImplicationVerdict, ParseError};
use crate::error::{KernelError, Result};
use crate::isu::{
    HierarchyView, InformationStructureUniverse, ObjectKind, ObjectTypeId, Technique,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConcreteDomain {
    String,
    /// Non-negative integers.
    Natno,
    Integer,
}

impl ConcreteDomain {
    pub fn contains(self, v: &InstanceValue) -> bool {
        match (self, v) {
            (ConcreteDomain::String, InstanceValue::Str(_)) => true,
            (ConcreteDomain::Natno, InstanceValue::Int(n)) => *n >= 0,
            (ConcreteDomain::Integer, InstanceValue::Int(_)) => true,
            _ => false,
        }
    }

    /// Every member of `self` is a member of `other`.
    pub fn is_subdomain_of(self, other: ConcreteDomain) -> bool {
        self == other || (self == ConcreteDomain::Natno && other == ConcreteDomain::Integer)
    }

    pub fn name(self) -> &'static str {
        match self {
            ConcreteDomain::String => "String",
            ConcreteDomain::Natno => "Natno",
            ConcreteDomain::Integer => "Integer",
        }
    }
}

impl fmt::Display for ConcreteDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConcreteDomain {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "String" => Ok(ConcreteDomain::String),
            "Natno" => Ok(ConcreteDomain::Natno),
            "Integer" => Ok(ConcreteDomain::Integer),
            other => Err(KernelError::Document(format!("unknown domain `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InstanceValue {
    Str(String),
    Int(i64),
    /// Abstract identity with no concrete representation.
    Surrogate(String),
    /// Role name to filler.
    Tuple(BTreeMap<String, InstanceValue>),
    Set(BTreeSet<InstanceValue>),
}

impl InstanceValue {
    pub fn surrogate(id: impl Into<String>) -> Self {
        InstanceValue::Surrogate(id.into())
    }

    pub fn str(s: impl Into<String>) -> Self {
        InstanceValue::Str(s.into())
    }

    pub fn tuple<'a>(fields: impl IntoIterator<Item = (&'a str, InstanceValue)>) -> Self {
        InstanceValue::Tuple(fields.into_iter().map(|(k, v)| (k.to_owned(), v)).collect())
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, InstanceValue::Str(_) | InstanceValue::Int(_))
    }
}

impl fmt::Display for InstanceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceValue::Str(s) => write!(f, "{s:?}"),
            InstanceValue::Int(n) => write!(f, "{n}"),
            InstanceValue::Surrogate(s) => f.write_str(s),
            InstanceValue::Tuple(m) => {
                f.write_str("<")?;
                for (i, (k, v)) in m.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k}: {v}")?;
                }
                f.write_str(">")
            }
            InstanceValue::Set(s) => {
                f.write_str("{")?;
                for (i, v) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// A value together with the object types it is an instance of.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InstanceTyping {
    pub value: InstanceValue,
    pub types: BTreeSet<ObjectTypeId>,
}

impl InstanceTyping {
    pub fn new<I, T>(value: InstanceValue, types: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<ObjectTypeId>,
    {
        Self {
            value,
            types: types.into_iter().map(Into::into).collect(),
        }
    }
}

impl fmt::Display for InstanceTyping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let types: Vec<&str> = self.types.iter().map(ObjectTypeId::as_str).collect();
        write!(f, "<{}, {{{}}}>", self.value, types.join(", "))
    }
}

/// One label type assigned one concrete domain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Concretisation {
    pub label: ObjectTypeId,
    pub domain: ConcreteDomain,
}

/// A constraint in surface syntax with its parse result. Equality is on the
/// text.
#[derive(Clone, Debug)]
pub struct ConstraintDef {
    text: String,
    parsed: std::result::Result<ConstraintAst, ParseError>,
}

impl ConstraintDef {
    /// Keep the text even if it does not parse; the error surfaces at
    /// validation.
    pub fn new(text: impl Into<String>) -> Self {
        let text = text.into().trim().to_owned();
        let parsed = constraints::parse_constraint(&text);
        Self { text, parsed }
    }

    pub fn parse(text: impl Into<String>) -> Result<Self> {
        let def = Self::new(text);
        def.parsed.clone()?;
        Ok(def)
    }

    pub fn from_ast(ast: ConstraintAst) -> Self {
        Self {
            text: ast.to_string(),
            parsed: Ok(ast),
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn ast(&self) -> std::result::Result<&ConstraintAst, &ParseError> {
        self.parsed.as_ref()
    }
}

impl PartialEq for ConstraintDef {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for ConstraintDef {}

impl std::hash::Hash for ConstraintDef {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.text.hash(state);
    }
}

impl fmt::Display for ConstraintDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Int(i64),
    Str(String),
}

impl Literal {
    pub fn domain(&self) -> ConcreteDomain {
        match self {
            Literal::Int(n) if *n >= 0 => ConcreteDomain::Natno,
            Literal::Int(_) => ConcreteDomain::Integer,
            Literal::Str(_) => ConcreteDomain::String,
        }
    }
}

/// `WHEN ADD T:x DO [IF G:x THEN] ADD S:x has F of L:lit`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionRule {
    pub trigger: ObjectTypeId,
    pub var: String,
    pub guard: Option<ObjectTypeId>,
    pub subject: ObjectTypeId,
    pub fact: ObjectTypeId,
    pub object: ObjectTypeId,
    pub literal: Literal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TaskBody {
    Empty,
    Constraint(ConstraintAst),
    Action(ActionRule),
}

/// A method body. Every [`ConstraintDef`] embeds as a task.
#[derive(Clone, Debug)]
pub struct TaskDef {
    text: String,
    parsed: std::result::Result<TaskBody, ParseError>,
}

impl TaskDef {
    pub fn new(text: impl Into<String>) -> Self {
        let text = text.into().trim().to_owned();
        let parsed = constraints::parse_task(&text);
        Self { text, parsed }
    }

    pub fn parse(text: impl Into<String>) -> Result<Self> {
        let def = Self::new(text);
        def.parsed.clone()?;
        Ok(def)
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn body(&self) -> std::result::Result<&TaskBody, &ParseError> {
        self.parsed.as_ref()
    }

    pub fn is_constraint(&self) -> bool {
        matches!(self.parsed, Ok(TaskBody::Constraint(_)))
    }
}

impl From<ConstraintDef> for TaskDef {
    fn from(c: ConstraintDef) -> Self {
        Self {
            text: c.text,
            parsed: c.parsed.map(TaskBody::Constraint),
        }
    }
}

impl PartialEq for TaskDef {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for TaskDef {}

impl fmt::Display for TaskDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Owner object type to definition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OwnedDefinition<D> {
    pub owners: BTreeMap<ObjectTypeId, D>,
}

impl<D: Clone> OwnedDefinition<D> {
    pub fn new<I, T>(owners: I) -> Self
    where
        I: IntoIterator<Item = (T, D)>,
        T: Into<ObjectTypeId>,
    {
        Self {
            owners: owners.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    /// Same definition for every owner.
    pub fn uniform<T: Into<ObjectTypeId>>(owners: impl IntoIterator<Item = T>, def: D) -> Self {
        Self::new(owners.into_iter().map(|o| (o, def.clone())))
    }

    pub fn owner_set(&self) -> BTreeSet<&ObjectTypeId> {
        self.owners.keys().collect()
    }
}

impl<D> OwnedDefinition<D> {
    /// Distinct definitions, in owner order.
    pub fn distinct_defs(&self) -> Vec<&D>
    where
        D: PartialEq,
    {
        let mut out: Vec<&D> = Vec::new();
        for d in self.owners.values() {
            if !out.contains(&d) {
                out.push(d);
            }
        }
        out
    }
}

/// Something a definition refers to.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dependency {
    ObjectType(ObjectTypeId),
    Domain(ObjectTypeId, ConcreteDomain),
}

impl fmt::Display for Dependency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dependency::ObjectType(x) => write!(f, "{x}"),
            Dependency::Domain(l, d) => write!(f, "{l}->{d}"),
        }
    }
}

/// Object types and domain assignments referenced by a definition. Role
/// references `T.r` pull in the fact types giving role `r` to `T`.
pub fn depends_of(def: &TaskDef, u: &InformationStructureUniverse) -> Result<BTreeSet<Dependency>> {
    let body = def.body().map_err(|e| KernelError::Parse(e.clone()))?;
    let mut out = BTreeSet::new();
    match body {
        TaskBody::Empty => {}
        TaskBody::Constraint(ast) => {
            for r in ast.role_refs() {
                out.insert(Dependency::ObjectType(r.otype.clone()));
                for f in constraints::resolve_role(u, r)? {
                    out.insert(Dependency::ObjectType(f.clone()));
                }
            }
            for x in ast.plain_types() {
                u.require(x)?;
                out.insert(Dependency::ObjectType(x.clone()));
            }
        }
        TaskBody::Action(rule) => {
            for x in [&rule.trigger, &rule.subject, &rule.fact, &rule.object]
                .into_iter()
                .chain(&rule.guard)
            {
                u.require(x)?;
                out.insert(Dependency::ObjectType(x.clone()));
            }
            out.insert(Dependency::Domain(
                rule.object.clone(),
                rule.literal.domain(),
            ));
        }
    }
    Ok(out)
}

/// Constraint dependencies, via the task embedding.
pub fn constraint_depends_of(
    def: &ConstraintDef,
    u: &InformationStructureUniverse,
) -> Result<BTreeSet<Dependency>> {
    depends_of(&TaskDef::from(def.clone()), u)
}

/// Technique-dependent parts of the theory.
pub trait TechniqueAdapter: Sync {
    fn technique(&self) -> Technique;

    /// Reasons `otypes` is not a schema; empty when it is.
    fn schema_defects(
        &self,
        u: &InformationStructureUniverse,
        otypes: &BTreeSet<ObjectTypeId>,
    ) -> Vec<String>;

    fn is_schema(&self, u: &InformationStructureUniverse, otypes: &BTreeSet<ObjectTypeId>) -> bool {
        self.schema_defects(u, otypes).is_empty()
    }

    /// Reasons the typings are not a population of `otypes`.
    fn pop_defects(
        &self,
        u: &InformationStructureUniverse,
        otypes: &BTreeSet<ObjectTypeId>,
        typings: &[&InstanceTyping],
    ) -> Vec<String> {
        structural_pop_defects(u, otypes, typings)
    }

    fn is_pop(
        &self,
        u: &InformationStructureUniverse,
        otypes: &BTreeSet<ObjectTypeId>,
        typings: &[&InstanceTyping],
    ) -> bool {
        self.pop_defects(u, otypes, typings).is_empty()
    }

    /// `type_rel` implied by the technique, if it implies one.
    fn derive_type_rel(
        &self,
        u: &InformationStructureUniverse,
    ) -> Option<Result<BTreeSet<(ObjectTypeId, ObjectTypeId)>>>;

    fn constr_implies(&self, d1: &ConstraintAst, d2: &ConstraintAst) -> ImplicationVerdict {
        constraints::constr_implies(d1, d2)
    }

    /// Whether subtypes without their own definition take the nearest
    /// ancestor's.
    fn inherits_definitions(&self) -> bool;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ErAdapter;

#[derive(Clone, Copy, Debug, Default)]
pub struct ExplicitAdapter;

pub fn adapter_for(technique: Technique) -> &'static dyn TechniqueAdapter {
    match technique {
        Technique::Er => &ErAdapter,
        Technique::Explicit => &ExplicitAdapter,
    }
}

impl TechniqueAdapter for ErAdapter {
    fn technique(&self) -> Technique {
        Technique::Er
    }

    fn schema_defects(
        &self,
        u: &InformationStructureUniverse,
        otypes: &BTreeSet<ObjectTypeId>,
    ) -> Vec<String> {
        structural_schema_defects(u, otypes)
    }

    fn derive_type_rel(
        &self,
        u: &InformationStructureUniverse,
    ) -> Option<Result<BTreeSet<(ObjectTypeId, ObjectTypeId)>>> {
        Some(u.top_derived_type_rel())
    }

    fn inherits_definitions(&self) -> bool {
        true
    }
}

impl TechniqueAdapter for ExplicitAdapter {
    fn technique(&self) -> Technique {
        Technique::Explicit
    }

    fn schema_defects(
        &self,
        u: &InformationStructureUniverse,
        otypes: &BTreeSet<ObjectTypeId>,
    ) -> Vec<String> {
        structural_schema_defects(u, otypes)
    }

    fn derive_type_rel(
        &self,
        _u: &InformationStructureUniverse,
    ) -> Option<Result<BTreeSet<(ObjectTypeId, ObjectTypeId)>>> {
        None
    }

    fn inherits_definitions(&self) -> bool {
        false
    }
}

/// The unique root above `x` in the specialisation hierarchy.
pub fn er_top(u: &InformationStructureUniverse, x: &ObjectTypeId) -> Result<ObjectTypeId> {
    let tops = u.tops_of(x)?;
    if tops.len() == 1 {
        Ok(tops.into_iter().next().expect("one top"))
    } else {
        Err(KernelError::NonUniqueTop {
            otype: x.to_string(),
            candidates: tops.iter().map(ToString::to_string).collect(),
        })
    }
}

pub fn er_type_related(
    u: &InformationStructureUniverse,
    x: &ObjectTypeId,
    y: &ObjectTypeId,
) -> Result<bool> {
    Ok(er_top(u, x)? == er_top(u, y)?)
}

pub fn er_is_schema(u: &InformationStructureUniverse, otypes: &BTreeSet<ObjectTypeId>) -> bool {
    ErAdapter.is_schema(u, otypes)
}

pub fn check_is_pop(
    adapter: &dyn TechniqueAdapter,
    u: &InformationStructureUniverse,
    otypes: &BTreeSet<ObjectTypeId>,
    typings: &[&InstanceTyping],
) -> bool {
    adapter.is_pop(u, otypes, typings)
}

/// Role players and power-type elements must be present.
fn structural_schema_defects(
    u: &InformationStructureUniverse,
    otypes: &BTreeSet<ObjectTypeId>,
) -> Vec<String> {
    let mut defects = Vec::new();
    for x in otypes {
        let Some(decl) = u.decl(x) else {
            defects.push(format!("{x} is not in the universe"));
            continue;
        };
        for (role, player) in &decl.roles {
            if !otypes.contains(player) {
                defects.push(format!("{x}.{role} refers to absent {player}"));
            }
        }
        if let Some(elem) = &decl.power_of {
            if !otypes.contains(elem) {
                defects.push(format!("{x} is a power type of absent {elem}"));
            }
        }
    }
    defects
}

fn structural_pop_defects(
    u: &InformationStructureUniverse,
    _otypes: &BTreeSet<ObjectTypeId>,
    typings: &[&InstanceTyping],
) -> Vec<String> {
    let mut pop: BTreeMap<&ObjectTypeId, BTreeSet<&InstanceValue>> = BTreeMap::new();
    for g in typings {
        for x in &g.types {
            pop.entry(x).or_default().insert(&g.value);
        }
    }
    let in_pop = |x: &ObjectTypeId, v: &InstanceValue| pop.get(x).is_some_and(|p| p.contains(v));

    let mut defects = Vec::new();
    for g in typings {
        if g.types.is_empty() {
            defects.push(format!("{} has no types", g.value));
            continue;
        }
        let decls: Vec<_> = g
            .types
            .iter()
            .filter_map(|x| u.decl(x).map(|d| (x, d)))
            .collect();
        let any_label = decls.iter().any(|(_, d)| d.kind == ObjectKind::Label);
        let all_label = decls.iter().all(|(_, d)| d.kind == ObjectKind::Label);
        let roled: Vec<_> = decls.iter().filter(|(_, d)| !d.roles.is_empty()).collect();
        match &g.value {
            v if v.is_atomic() => {
                if !all_label {
                    defects.push(format!("atomic {v} typed by a non-label type"));
                }
            }
            _ if any_label => {
                defects.push(format!("non-atomic {} typed by a label type", g.value));
            }
            InstanceValue::Surrogate(s) => {
                if let Some((f, _)) = roled.first() {
                    defects.push(format!("surrogate {s} populates fact type {f}"));
                }
            }
            InstanceValue::Tuple(fields) => {
                if roled.is_empty() {
                    defects.push(format!("tuple {} has no fact type", g.value));
                }
                let declared: BTreeSet<&String> =
                    roled.iter().flat_map(|(_, d)| d.roles.keys()).collect();
                let given: BTreeSet<&String> = fields.keys().collect();
                if declared != given {
                    defects.push(format!(
                        "tuple {} fills roles {:?}, expected {:?}",
                        g.value, given, declared
                    ));
                }
                for (f, d) in &roled {
                    for (role, player) in &d.roles {
                        if let Some(v) = fields.get(role) {
                            if !in_pop(player, v) {
                                defects.push(format!(
                                    "{f}.{role} filled by {v}, which is not a {player}"
                                ));
                            }
                        }
                    }
                }
            }
            InstanceValue::Set(elems) => {
                let powers: Vec<_> = decls
                    .iter()
                    .filter_map(|(_, d)| d.power_of.as_ref())
                    .collect();
                if powers.is_empty() {
                    defects.push(format!("set {} typed without a power type", g.value));
                }
                for elem_type in powers {
                    for e in elems {
                        if !in_pop(elem_type, e) {
                            defects
                                .push(format!("element {e} of {} is not a {elem_type}", g.value));
                        }
                    }
                }
            }
            _ => unreachable!("atomic values handled above"),
        }
    }
    defects
}

/// Owner map after technique completion. ER passes a definition down to
/// alive descendants that lack their own, taking the nearest owning ancestor.
pub fn effective_owners<D: Clone>(
    adapter: &dyn TechniqueAdapter,
    view: &HierarchyView<'_>,
    def: &OwnedDefinition<D>,
) -> OwnedDefinition<D> {
    if !adapter.inherits_definitions() {
        return def.clone();
    }
    let mut owners = def.owners.clone();
    for y in view.members() {
        if owners.contains_key(y) {
            continue;
        }
        let owning: Vec<&ObjectTypeId> = view
            .ancestors(y)
            .into_iter()
            .filter(|x| def.owners.contains_key(*x))
            .collect();
        // the nearest owning ancestor has no owning ancestor below it
        let nearest = owning
            .iter()
            .find(|x| !owning.iter().any(|z| view.parent_of(x, z)));
        if let Some(x) = nearest {
            owners.insert(y.clone(), def.owners[*x].clone());
        }
    }
    OwnedDefinition { owners }
}
