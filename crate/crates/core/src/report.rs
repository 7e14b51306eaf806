//! Machine-readable validation reports.
//!
//! A report is a flat list of [`Violation`]s. Each names the axiom that
//! failed, the tick where it failed (when the axiom is tick-local), and the
//! witnesses that falsify it. Warnings do not make a history ill-formed.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::timeline::Tick;

/// Every well-formedness rule the kernel checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    // information structure universe
    ReflexTypeRel,
    SymTypeRel,
    TransParentOf,
    ReflexParentOf,
    ParentIndSch,
    TypeRelInheritance,
    FoundedTypeRel,
    TechniqueAgreement,
    // standalone proof schemas
    StrongInheritance,
    WeakInheritance,
    // technique predicates
    IsSch,
    IsPop,
    // application model versions
    ActTypesLive,
    ActTypeRel,
    FoundedActivity,
    UniqueRoot,
    LiveFoundation,
    LabDom,
    LabTyping,
    LifeDef,
    TypeRelDef,
    DefInheritance,
    DanglingTypes,
    AMVStrength,
    ExclRootPop,
    PopDist,
    StrongTyping,
    // derived properties the oracle enumerates
    CommonRoots,
    TypeRelPropagation,
    RootActive,
    // evolution well-formedness
    Separation,
    MonotonousParents,
    GuidedEvolution,
    ConstraintsHold,
    /// A derived property failed although the axioms it follows from passed.
    InternalInconsistency,
}

impl Axiom {
    /// Short code grouping the axiom with its family.
    pub fn code(self) -> &'static str {
        use Axiom::*;
        match self {
            ReflexTypeRel => "ISU1",
            SymTypeRel => "ISU2",
            TransParentOf => "ISU3",
            ReflexParentOf => "ISU4",
            ParentIndSch => "ISU5",
            TypeRelInheritance => "ISU6",
            FoundedTypeRel => "ISU7",
            TechniqueAgreement => "ISU-T",
            StrongInheritance => "SCH-S",
            WeakInheritance => "SCH-W",
            IsSch => "AM-SCH",
            IsPop => "AM-POP",
            ActTypesLive => "AMV1",
            ActTypeRel => "AMV2",
            FoundedActivity => "AMV3",
            UniqueRoot => "AMV4",
            LiveFoundation => "AMV5",
            LabDom => "AMV6",
            LabTyping => "AMV7",
            LifeDef => "AMV8",
            TypeRelDef => "AMV9",
            DefInheritance => "AMV10",
            DanglingTypes => "AMV11",
            AMVStrength => "AMV12",
            ExclRootPop => "AMV13",
            PopDist => "LEM-POP",
            StrongTyping => "THM-ST",
            CommonRoots => "LEM-CR",
            TypeRelPropagation => "THM-TRP",
            RootActive => "LEM-RA",
            Separation => "EW1",
            MonotonousParents => "EW2",
            GuidedEvolution => "EW3",
            ConstraintsHold => "EW4",
            InternalInconsistency => "INT",
        }
    }

    pub fn name(self) -> String {
        format!("{self:?}")
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Violation {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tick: Option<Tick>,
    pub axiom: Axiom,
    pub witnesses: Vec<String>,
    pub severity: Severity,
}

impl Violation {
    pub fn new(axiom: Axiom, witnesses: Vec<String>) -> Self {
        Self {
            tick: None,
            axiom,
            witnesses,
            severity: Severity::Error,
        }
    }

    pub fn at(mut self, tick: Tick) -> Self {
        self.tick = Some(tick);
        self
    }

    pub fn warning(mut self) -> Self {
        self.severity = Severity::Warning;
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev} {} {}", self.axiom.code(), self.axiom)?;
        if let Some(t) = self.tick {
            write!(f, " at {t}")?;
        }
        if !self.witnesses.is_empty() {
            write!(f, ": {}", self.witnesses.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    /// True when there is nothing at all to report, warnings included.
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.violations.iter().any(Violation::is_error)
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.is_error())
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| !v.is_error())
    }

    pub fn of(&self, axiom: Axiom) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.axiom == axiom)
    }

    /// Axioms with at least one error-severity entry.
    pub fn violated_axioms(&self) -> BTreeSet<Axiom> {
        self.errors().map(|v| v.axiom).collect()
    }

    /// Re-tag every entry; used when a generic schema check is applied as a
    /// specific axiom.
    pub fn relabel(mut self, axiom: Axiom, tick: Option<Tick>) -> Self {
        for v in &mut self.violations {
            v.axiom = axiom;
            if tick.is_some() {
                v.tick = tick;
            }
        }
        self
    }

    /// Sort by tick (tick-less entries first), then axiom, and drop duplicates.
    pub fn normalized(mut self) -> Self {
        self.violations.sort();
        self.violations.dedup();
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .violations
            .iter()
            .map(|v| {
                let mut obj = serde_json::json!({
                    "axiom": v.axiom.name(),
                    "code": v.axiom.code(),
                    "witnesses": v.witnesses,
                    "severity": v.severity,
                });
                if let Some(t) = v.tick {
                    obj["tick"] = serde_json::json!(t.value());
                }
                obj
            })
            .collect();
        serde_json::Value::Array(entries)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromIterator<Violation> for ValidationReport {
    fn from_iter<I: IntoIterator<Item = Violation>>(iter: I) -> Self {
        Self {
            violations: iter.into_iter().collect(),
        }
    }
}

impl IntoIterator for ValidationReport {
    type Item = Violation;
    type IntoIter = std::vec::IntoIter<Violation>;

    fn into_iter(self) -> Self::IntoIter {
        self.violations.into_iter()
    }
}
