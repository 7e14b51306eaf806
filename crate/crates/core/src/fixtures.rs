//! Worked example histories used by tests, benches and the CLI fixtures.
//!
//! * `rental_store_table`: a record store whose recordings move from records
//!   to media at tick 4.
//! * `store`: a three-state store that introduces media and CDs and then
//!   drops LPs, with the two events that drive it.
//! * `broker`: a multiple-rooted hierarchy (boats and houses as products and
//!   real estate).
//! * `airplane`: owned constraints over a registered/unregistered split.
//! * Mutants that each break exactly one evolution rule.

use crate::amu::{
    ConcreteDomain, Concretisation, ConstraintDef, InstanceTyping, InstanceValue, OwnedDefinition,
    TaskDef,
};
use crate::history::{
    Edit, ElementClass, ElementEvolution, ElementVersion, EventLog, History, TransactionBody,
};
use crate::isu::{InformationStructureUniverse, ObjectTypeId, Technique};
use crate::timeline::{Tick, TimedMap};

type Run<V> = (u64, Option<u64>, V);

fn sur(s: &str) -> InstanceValue {
    InstanceValue::surrogate(s)
}

fn tuple(fields: &[(&str, InstanceValue)]) -> InstanceValue {
    InstanceValue::tuple(fields.iter().cloned())
}

fn typed(value: InstanceValue, types: &[&str]) -> InstanceTyping {
    InstanceTyping::new(value, types.iter().copied())
}

fn add<V: Into<ElementVersion>>(h: &mut History, id: &str, runs: Vec<Run<V>>) {
    let ev = ElementEvolution::from_runs(id, runs).expect("fixture runs are ordered");
    h.insert(ev).expect("fixture ids are unique");
}

fn object(h: &mut History, id: &str, runs: &[Run<&str>]) {
    let runs = runs
        .iter()
        .map(|(a, b, x)| (*a, *b, ObjectTypeId::from(*x)))
        .collect();
    add(h, id, runs);
}

/// Object type evolution `ot:<name>` alive from `from`.
fn alive(h: &mut History, name: &str, from: u64, to: Option<u64>) {
    object(h, &format!("ot:{name}"), &[(from, to, name)]);
}

fn domain(h: &mut History, label: &str, domain: ConcreteDomain, from: u64, to: Option<u64>) {
    let c = Concretisation {
        label: label.into(),
        domain,
    };
    add(h, &format!("dom:{label}"), vec![(from, to, c)]);
}

fn constraint(h: &mut History, id: &str, from: u64, def: OwnedDefinition<ConstraintDef>) {
    let track = TimedMap::starting(Tick(from), ElementVersion::Constraint(def));
    h.insert(ElementEvolution::new(id, ElementClass::Constraint, track))
        .expect("fixture ids are unique");
}

pub fn broker_universe() -> InformationStructureUniverse {
    InformationStructureUniverse::builder()
        .entity("Product")
        .entity("Boat")
        .entity("House")
        .entity("Real estate")
        .parent("Boat", "Product")
        .parent("House", "Product")
        .parent("Product", "Real estate")
        .related("Product", "Boat")
        .related("Product", "House")
        .related("Product", "Real estate")
        .related("Real estate", "Boat")
        .related("Real estate", "House")
        .build()
        .expect("broker universe")
}

pub fn broker_typings() -> Vec<InstanceTyping> {
    vec![
        typed(sur("h1"), &["House", "Product", "Real estate"]),
        typed(sur("b1"), &["Boat", "Product"]),
        typed(sur("b2"), &["Boat", "Product", "Real estate"]),
    ]
}

pub fn w1_typing() -> InstanceTyping {
    typed(sur("w1"), &["House", "Boat", "Product", "Real estate"])
}

pub fn broker() -> History {
    let mut h = History::new(broker_universe());
    for x in ["Product", "Boat", "House", "Real estate"] {
        alive(&mut h, x, 1, None);
    }
    for g in broker_typings() {
        let id = format!("g:{}", g.value);
        add(&mut h, &id, vec![(1, None, g)]);
    }
    h
}

pub fn broker_with_w1() -> History {
    let mut h = broker();
    add(&mut h, "g:w1", vec![(1, None, w1_typing())]);
    h
}

pub fn rental_store_table_universe() -> InformationStructureUniverse {
    InformationStructureUniverse::builder()
        .technique(Technique::Er)
        .entity("Medium")
        .entity("Record")
        .entity("Song")
        .fact_type(
            "Recording-on-Record",
            [("song", "Song"), ("record", "Record")],
        )
        .fact_type(
            "Recording-on-Medium",
            [("song", "Song"), ("medium", "Medium")],
        )
        .subtype("Record", "Medium")
        .build()
        .expect("table universe")
}

/// Five ticks; the step to media happens at tick 4.
pub fn rental_store_table() -> History {
    let mut h = History::new(rental_store_table_universe());
    object(&mut h, "h1", &[(1, None, "Record")]);
    object(
        &mut h,
        "h2",
        &[
            (1, Some(3), "Recording-on-Record"),
            (4, None, "Recording-on-Medium"),
        ],
    );
    object(&mut h, "h3", &[(4, None, "Medium")]);
    object(&mut h, "h-song", &[(1, None, "Song")]);
    add(
        &mut h,
        "g1",
        vec![
            (1, Some(3), typed(sur("i1"), &["Record"])),
            (4, None, typed(sur("i1"), &["Record", "Medium"])),
        ],
    );
    add(
        &mut h,
        "g2",
        vec![
            (
                1,
                Some(2),
                typed(
                    tuple(&[("song", sur("s1")), ("record", sur("i1"))]),
                    &["Recording-on-Record"],
                ),
            ),
            (
                3,
                Some(3),
                typed(
                    tuple(&[("song", sur("s2")), ("record", sur("i1"))]),
                    &["Recording-on-Record"],
                ),
            ),
            (
                4,
                None,
                typed(
                    tuple(&[("song", sur("s2")), ("medium", sur("i1"))]),
                    &["Recording-on-Medium"],
                ),
            ),
        ],
    );
    add(&mut h, "g-s1", vec![(1, None, typed(sur("s1"), &["Song"]))]);
    add(&mut h, "g-s2", vec![(1, None, typed(sur("s2"), &["Song"]))]);
    h
}

pub fn rental_store_table_events() -> EventLog {
    let mut log = EventLog::new();
    log.push(
        Tick(2),
        TransactionBody::new(vec![Edit::set(
            "g2",
            typed(
                tuple(&[("song", sur("s2")), ("record", sur("i1"))]),
                &["Recording-on-Record"],
            ),
        )]),
    )
    .expect("one event per tick");
    log.push(
        Tick(3),
        TransactionBody::new(vec![
            Edit::create("h3", ObjectTypeId::from("Medium")),
            Edit::set("h2", ObjectTypeId::from("Recording-on-Medium")),
            Edit::set("g1", typed(sur("i1"), &["Record", "Medium"])),
            Edit::set(
                "g2",
                typed(
                    tuple(&[("song", sur("s2")), ("medium", sur("i1"))]),
                    &["Recording-on-Medium"],
                ),
            ),
        ]),
    )
    .expect("one event per tick");
    log
}

pub fn store_universe() -> InformationStructureUniverse {
    InformationStructureUniverse::builder()
        .technique(Technique::Er)
        .entity("Medium")
        .entity("LP")
        .entity("CD")
        .entity("Song")
        .label("Frequency")
        .label("Title")
        .label("Artist")
        .label("Author")
        .label("Times")
        .label("Quality")
        .fact_type("Recording", [("song", "Song"), ("lp", "LP")])
        .fact_type(
            "Recording-on-Medium",
            [("song", "Song"), ("medium", "Medium")],
        )
        .fact_type(
            "Recording-on-CD",
            [("song", "Song"), ("cd", "CD"), ("quality", "Quality")],
        )
        .fact_type(
            "Lending-frequency",
            [("lp", "LP"), ("frequency", "Frequency")],
        )
        .subtype("LP", "Medium")
        .subtype("CD", "Medium")
        .build()
        .expect("store universe")
}

pub const INIT_FREQ_V1: &str = "WHEN ADD LP:x DO ADD LP:x has Lending-frequency of Frequency:0";
pub const INIT_FREQ_V2: &str =
    "WHEN ADD Medium:x DO IF LP:x THEN ADD LP:x has Lending-frequency of Frequency:0";

pub fn init_freq_v1() -> TaskDef {
    TaskDef::parse(INIT_FREQ_V1).expect("fixture task parses")
}

pub fn init_freq_v2() -> TaskDef {
    TaskDef::parse(INIT_FREQ_V2).expect("fixture task parses")
}

fn lp_recording(song: &str) -> InstanceTyping {
    typed(
        tuple(&[("song", sur(song)), ("lp", sur("i1"))]),
        &["Recording"],
    )
}

fn medium_recording(song: &str) -> InstanceTyping {
    typed(
        tuple(&[("song", sur(song)), ("medium", sur("i1"))]),
        &["Recording-on-Medium"],
    )
}

fn cd_recording() -> InstanceTyping {
    typed(
        tuple(&[
            ("song", sur("s1")),
            ("cd", sur("c1")),
            ("quality", InstanceValue::str("high")),
        ]),
        &["Recording-on-CD"],
    )
}

fn lending_frequency() -> InstanceTyping {
    typed(
        tuple(&[("lp", sur("i1")), ("frequency", InstanceValue::Int(0))]),
        &["Lending-frequency"],
    )
}

/// The three-state store: LPs only (tick 1), media with LPs and CDs
/// (tick 2), CDs only (tick 3 on).
pub fn store() -> History {
    let mut h = History::new(store_universe());
    alive(&mut h, "LP", 1, Some(2));
    alive(&mut h, "Medium", 2, None);
    alive(&mut h, "CD", 2, None);
    for x in ["Song", "Title", "Artist", "Author", "Times"] {
        alive(&mut h, x, 1, None);
    }
    alive(&mut h, "Frequency", 1, Some(2));
    alive(&mut h, "Lending-frequency", 1, Some(2));
    alive(&mut h, "Quality", 3, None);
    object(
        &mut h,
        "ot:Recording",
        &[
            (1, Some(1), "Recording"),
            (2, Some(2), "Recording-on-Medium"),
            (3, None, "Recording-on-CD"),
        ],
    );
    domain(&mut h, "Frequency", ConcreteDomain::Natno, 1, Some(2));
    for x in ["Title", "Artist", "Author"] {
        domain(&mut h, x, ConcreteDomain::String, 1, None);
    }
    domain(&mut h, "Times", ConcreteDomain::Natno, 1, None);
    domain(&mut h, "Quality", ConcreteDomain::String, 3, None);

    let track = TimedMap::from_runs([
        (
            Tick(1),
            Some(Tick(1)),
            ElementVersion::Task(OwnedDefinition::uniform(["LP"], init_freq_v1())),
        ),
        (
            Tick(2),
            Some(Tick(2)),
            ElementVersion::Task(OwnedDefinition::uniform(["Medium"], init_freq_v2())),
        ),
    ])
    .expect("ordered runs");
    h.insert(ElementEvolution::new(
        "task:Init-freq",
        ElementClass::Task,
        track,
    ))
    .expect("unique id");

    add(
        &mut h,
        "g:i1",
        vec![
            (1, Some(1), typed(sur("i1"), &["LP"])),
            (2, Some(2), typed(sur("i1"), &["LP", "Medium"])),
        ],
    );
    add(&mut h, "g:s1", vec![(1, None, typed(sur("s1"), &["Song"]))]);
    add(&mut h, "g:s2", vec![(1, None, typed(sur("s2"), &["Song"]))]);
    for (id, song) in [("g:r1", "s1"), ("g:r2", "s2")] {
        add(
            &mut h,
            id,
            vec![
                (1, Some(1), lp_recording(song)),
                (2, Some(2), medium_recording(song)),
            ],
        );
    }
    add(
        &mut h,
        "g:freq0",
        vec![(1, Some(2), typed(InstanceValue::Int(0), &["Frequency"]))],
    );
    add(&mut h, "g:lf1", vec![(1, Some(2), lending_frequency())]);
    add(
        &mut h,
        "g:c1",
        vec![(3, None, typed(sur("c1"), &["CD", "Medium"]))],
    );
    add(
        &mut h,
        "g:high",
        vec![(3, None, typed(InstanceValue::str("high"), &["Quality"]))],
    );
    add(&mut h, "g:r3", vec![(3, None, cd_recording())]);
    h
}

/// E1 at tick 1: introduce media and CDs. E2 at tick 2: retire LPs.
pub fn store_events() -> EventLog {
    let e1 = TransactionBody::new(vec![
        Edit::create("ot:Medium", ObjectTypeId::from("Medium")),
        Edit::create("ot:CD", ObjectTypeId::from("CD")),
        Edit::set("ot:Recording", ObjectTypeId::from("Recording-on-Medium")),
        Edit::set(
            "task:Init-freq",
            ElementVersion::Task(OwnedDefinition::uniform(["Medium"], init_freq_v2())),
        ),
        Edit::set("g:i1", typed(sur("i1"), &["LP", "Medium"])),
        Edit::set("g:r1", medium_recording("s1")),
        Edit::set("g:r2", medium_recording("s2")),
    ]);
    let mut e2: Vec<Edit> = [
        "ot:LP",
        "ot:Lending-frequency",
        "ot:Frequency",
        "dom:Frequency",
        "task:Init-freq",
        "g:i1",
        "g:lf1",
        "g:freq0",
        "g:r1",
        "g:r2",
    ]
    .into_iter()
    .map(Edit::terminate)
    .collect();
    e2.extend([
        Edit::set("ot:Recording", ObjectTypeId::from("Recording-on-CD")),
        Edit::create("ot:Quality", ObjectTypeId::from("Quality")),
        Edit::create(
            "dom:Quality",
            Concretisation {
                label: "Quality".into(),
                domain: ConcreteDomain::String,
            },
        ),
        Edit::create("g:c1", typed(sur("c1"), &["CD", "Medium"])),
        Edit::create("g:high", typed(InstanceValue::str("high"), &["Quality"])),
        Edit::create("g:r3", cd_recording()),
    ]);
    let mut log = EventLog::new();
    log.push(Tick(1), e1).expect("one event per tick");
    log.push(Tick(2), TransactionBody::new(e2))
        .expect("one event per tick");
    log
}

pub fn airplane_universe() -> InformationStructureUniverse {
    InformationStructureUniverse::builder()
        .technique(Technique::Er)
        .entity("Airplane")
        .entity("Registered-airplane")
        .entity("Unregistered-airplane")
        .entity("Manufacturer")
        .entity("Owner")
        .label("Age")
        .label("Admission-code")
        .fact_type(
            "Construction",
            [("builds", "Manufacturer"), ("build-by", "Airplane")],
        )
        .fact_type("Aging", [("has-as", "Airplane"), ("of-age", "Age")])
        .fact_type(
            "Admission",
            [
                ("given-to", "Admission-code"),
                ("receives", "Registered-airplane"),
            ],
        )
        .fact_type(
            "Ownership",
            [("owned-by", "Registered-airplane"), ("owns", "Owner")],
        )
        .subtype("Registered-airplane", "Airplane")
        .subtype("Unregistered-airplane", "Airplane")
        .build()
        .expect("airplane universe")
}

pub const C1: &str = "TOTAL { Manufacturer.builds }";
pub const C2: &str = "UNIQUE { Airplane.has-as }";
pub const C3: &str = "TOTAL { Admission-code.given-to }";
pub const C4_AIRPLANE: &str = "TOTAL { Airplane.build-by, Airplane.has-as }";
pub const C4_UNREGISTERED: &str = "TOTAL { Airplane.build-by } AND TOTAL { Airplane.has-as }";
pub const C5: &str = "(Unregistered-airplane BEFORE Registered-airplane) EQUALS Airplane";

fn def(text: &str) -> ConstraintDef {
    ConstraintDef::parse(text).expect("fixture constraint parses")
}

/// Owner maps of the five airplane constraints.
pub fn airplane_constraints() -> Vec<(&'static str, OwnedDefinition<ConstraintDef>)> {
    vec![
        ("C1", OwnedDefinition::uniform(["Manufacturer"], def(C1))),
        ("C2", OwnedDefinition::uniform(["Airplane"], def(C2))),
        ("C3", OwnedDefinition::uniform(["Admission-code"], def(C3))),
        (
            "C4",
            OwnedDefinition::new([
                ("Airplane", def(C4_AIRPLANE)),
                ("Registered-airplane", def(C4_AIRPLANE)),
                ("Unregistered-airplane", def(C4_UNREGISTERED)),
            ]),
        ),
        (
            "C5",
            OwnedDefinition::uniform(
                ["Airplane", "Registered-airplane", "Unregistered-airplane"],
                def(C5),
            ),
        ),
    ]
}

/// Two airplanes from one manufacturer; `a1` is registered at tick 3 and
/// receives admission code AC-1.
pub fn airplane() -> History {
    let mut h = History::new(airplane_universe());
    for x in [
        "Airplane",
        "Registered-airplane",
        "Unregistered-airplane",
        "Manufacturer",
        "Owner",
        "Age",
        "Admission-code",
        "Construction",
        "Aging",
        "Admission",
        "Ownership",
    ] {
        alive(&mut h, x, 1, None);
    }
    domain(&mut h, "Age", ConcreteDomain::Natno, 1, None);
    domain(&mut h, "Admission-code", ConcreteDomain::String, 1, None);
    for (id, c) in airplane_constraints() {
        constraint(&mut h, id, 1, c);
    }

    add(
        &mut h,
        "g:m1",
        vec![(1, None, typed(sur("m1"), &["Manufacturer"]))],
    );
    add(
        &mut h,
        "g:a1",
        vec![
            (
                1,
                Some(2),
                typed(sur("a1"), &["Airplane", "Unregistered-airplane"]),
            ),
            (
                3,
                None,
                typed(sur("a1"), &["Airplane", "Registered-airplane"]),
            ),
        ],
    );
    add(
        &mut h,
        "g:a2",
        vec![(
            2,
            None,
            typed(sur("a2"), &["Airplane", "Unregistered-airplane"]),
        )],
    );
    for (id, plane, from) in [("g:built-a1", "a1", 1), ("g:built-a2", "a2", 2)] {
        add(
            &mut h,
            id,
            vec![(
                from,
                None,
                typed(
                    tuple(&[("builds", sur("m1")), ("build-by", sur(plane))]),
                    &["Construction"],
                ),
            )],
        );
    }
    let age = |n: i64| InstanceValue::Int(n);
    let aging = |plane: &str, n: i64| {
        typed(
            tuple(&[("has-as", sur(plane)), ("of-age", age(n))]),
            &["Aging"],
        )
    };
    add(&mut h, "g:age0", vec![(2, None, typed(age(0), &["Age"]))]);
    add(&mut h, "g:age1", vec![(1, None, typed(age(1), &["Age"]))]);
    add(&mut h, "g:age2", vec![(3, None, typed(age(2), &["Age"]))]);
    add(
        &mut h,
        "g:aging-a1",
        vec![(1, Some(2), aging("a1", 1)), (3, None, aging("a1", 2))],
    );
    add(&mut h, "g:aging-a2", vec![(2, None, aging("a2", 0))]);
    let code = InstanceValue::str("AC-1");
    add(
        &mut h,
        "g:ac1",
        vec![(3, None, typed(code.clone(), &["Admission-code"]))],
    );
    add(
        &mut h,
        "g:admission-a1",
        vec![(
            3,
            None,
            typed(
                tuple(&[("given-to", code), ("receives", sur("a1"))]),
                &["Admission"],
            ),
        )],
    );
    add(
        &mut h,
        "g:o1",
        vec![(3, None, typed(sur("o1"), &["Owner"]))],
    );
    add(
        &mut h,
        "g:owned-a1",
        vec![(
            3,
            None,
            typed(
                tuple(&[("owned-by", sur("a1")), ("owns", sur("o1"))]),
                &["Ownership"],
            ),
        )],
    );
    h
}

/// A second admission code from tick 3 that is given to no airplane.
pub fn airplane_orphan_code() -> History {
    let mut h = airplane();
    add(
        &mut h,
        "g:ac2",
        vec![(
            3,
            None,
            typed(InstanceValue::str("AC-2"), &["Admission-code"]),
        )],
    );
    h
}

/// A parent relation reversed in one step while the types stay related.
pub fn reversal_mutant() -> History {
    let mut b = InformationStructureUniverse::builder()
        .entity("Medium")
        .entity("CD")
        .entity("Medium2")
        .entity("CD2")
        .parent("Medium", "CD")
        .parent("CD2", "Medium2");
    for x in ["Medium", "CD", "Medium2", "CD2"] {
        for y in ["Medium", "CD", "Medium2", "CD2"] {
            b = b.related(x, y);
        }
    }
    let mut h = History::new(b.build().expect("reversal universe"));
    object(
        &mut h,
        "h-medium",
        &[(1, Some(1), "Medium"), (2, None, "Medium2")],
    );
    object(&mut h, "h-cd", &[(1, Some(1), "CD"), (2, None, "CD2")]);
    h
}

/// Instance left on `A` while the evolution that carried `A` jumps to an
/// unrelated type; a fresh evolution revives `A` at tick 2.
pub fn guided_mutant() -> History {
    let u = InformationStructureUniverse::builder()
        .entity("A")
        .entity("C")
        .build()
        .expect("guided universe");
    let mut h = History::new(u);
    object(&mut h, "h-a", &[(1, Some(1), "A"), (2, None, "C")]);
    object(&mut h, "h-a2", &[(2, None, "A")]);
    add(&mut h, "g", vec![(1, None, typed(sur("v"), &["A"]))]);
    h
}

/// Element `x` is an object type at tick 1 and an instance typing at tick 2.
pub fn separation_mutant() -> History {
    let u = InformationStructureUniverse::builder()
        .entity("A")
        .build()
        .expect("separation universe");
    let mut h = History::new(u);
    object(&mut h, "h-a", &[(1, None, "A")]);
    let runs: Vec<Run<ElementVersion>> = vec![
        (1, Some(1), ObjectTypeId::from("A").into()),
        (2, None, typed(sur("v"), &["A"]).into()),
    ];
    add(&mut h, "x", runs);
    h
}
