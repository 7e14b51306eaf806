//! Evolving application model kernel: timelines, information structure
//! universes, application model versions, constraint evaluation and the
//! history checks that tie them together.

pub mod amu;
pub mod constraints;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod history;
pub mod isu;
pub mod oracle;
pub mod report;
pub mod timeline;
pub mod version;

pub use amu::{
    adapter_for, ConcreteDomain, Concretisation, ConstraintDef, InstanceTyping, InstanceValue,
    OwnedDefinition, TaskDef, TechniqueAdapter,
};
pub use constraints::{
    constr_implies, eval_constraint, ConstraintAst, ImplicationVerdict, ParseError, RoleRef,
};
pub use error::{KernelError, Result};
pub use history::{
    apply_event, is_amh, replay, validate, Edit, ElementClass, ElementEvolution, ElementId,
    ElementVersion, EventLog, History, TransactionBody,
};
pub use isu::{InformationStructureUniverse, ObjectKind, ObjectTypeId, Technique};
pub use report::{Axiom, Severity, ValidationReport, Violation};
pub use timeline::{Tick, TickRange, TimedMap};
pub use version::{derive_version, AppModelVersion};
