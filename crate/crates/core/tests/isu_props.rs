use std::collections::BTreeSet;

use evokernel::isu::{check_isu, InformationStructureUniverse, ObjectTypeId, Technique};
use evokernel::Axiom;
use proptest::prelude::*;

fn name(i: usize) -> String {
    format!("T{i}")
}

type Pairs = BTreeSet<(usize, usize)>;

fn raw_relations() -> impl Strategy<Value = (usize, Pairs, Pairs)> {
    (1usize..=5).prop_flat_map(|n| {
        let pairs = prop::collection::btree_set((0..n, 0..n), 0..(n * n));
        (Just(n), pairs.clone(), pairs)
    })
}

fn raw_universe(n: usize, parent: &Pairs, rel: &Pairs) -> InformationStructureUniverse {
    let mut b = InformationStructureUniverse::builder();
    for i in 0..n {
        b = b.entity(name(i));
    }
    for (x, y) in parent {
        b = b.parent(&name(*x), &name(*y));
    }
    for (x, y) in rel {
        b = b.related(&name(*x), &name(*y));
    }
    b.build_raw().expect("all names declared")
}

/// Violations by direct quantifier enumeration over index pairs.
fn naive_isu(n: usize, p: &Pairs, r: &Pairs) -> BTreeSet<(Axiom, Vec<String>)> {
    let mut out = BTreeSet::new();
    let w = |xs: &[usize]| xs.iter().map(|i| name(*i)).collect::<Vec<_>>();
    for x in 0..n {
        if !r.contains(&(x, x)) {
            out.insert((Axiom::ReflexTypeRel, w(&[x])));
        }
        if p.contains(&(x, x)) {
            out.insert((Axiom::ReflexParentOf, w(&[x])));
        }
        for y in 0..n {
            if r.contains(&(x, y)) && !r.contains(&(y, x)) {
                out.insert((Axiom::SymTypeRel, w(&[x, y])));
            }
            for z in 0..n {
                if p.contains(&(x, y)) && p.contains(&(y, z)) && !p.contains(&(x, z)) {
                    out.insert((Axiom::TransParentOf, w(&[x, y, z])));
                }
                if r.contains(&(x, y)) && p.contains(&(y, z)) && !r.contains(&(x, z)) {
                    out.insert((Axiom::TypeRelInheritance, w(&[x, y, z])));
                }
            }
            let parents: Vec<usize> = (0..n).filter(|z| p.contains(&(*z, y))).collect();
            if r.contains(&(x, y))
                && !parents.is_empty()
                && !parents.iter().any(|z| r.contains(&(x, *z)))
            {
                out.insert((Axiom::FoundedTypeRel, w(&[x, y])));
            }
        }
    }
    out
}

/// Forest of supertypes: each type may specialise one earlier type.
fn er_universe() -> impl Strategy<Value = InformationStructureUniverse> {
    (1usize..=7)
        .prop_flat_map(|n| prop::collection::vec(prop::option::of(0usize..7), n))
        .prop_map(|sups| {
            let mut b = InformationStructureUniverse::builder().technique(Technique::Er);
            for i in 0..sups.len() {
                b = b.entity(name(i));
            }
            for (i, s) in sups.iter().enumerate() {
                if let Some(s) = s.filter(|s| *s < i) {
                    b = b.subtype(&name(i), &name(s));
                }
            }
            b.build().expect("forest universe")
        })
}

fn closed_universe() -> impl Strategy<Value = InformationStructureUniverse> {
    raw_relations().prop_map(|(n, p, r)| {
        let mut b = InformationStructureUniverse::builder();
        for i in 0..n {
            b = b.entity(name(i));
        }
        // acyclic: keep only forward edges
        for (x, y) in p.iter().filter(|(x, y)| x < y) {
            b = b.parent(&name(*x), &name(*y));
        }
        for (x, y) in &r {
            b = b.related(&name(*x), &name(*y));
        }
        b.build().expect("declared")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn check_isu_agrees_with_enumeration((n, p, r) in raw_relations()) {
        let u = raw_universe(n, &p, &r);
        let kernel: BTreeSet<(Axiom, Vec<String>)> =
            check_isu(&u).into_iter().map(|v| (v.axiom, v.witnesses)).collect();
        prop_assert_eq!(kernel, naive_isu(n, &p, &r));
    }

    #[test]
    fn valid_universes_have_roots_and_common_roots(u in closed_universe()) {
        prop_assume!(check_isu(&u).is_empty());
        let view = u.view();
        for y in u.otypes() {
            prop_assert!(!view.roots_of(y).is_empty());
        }
        prop_assert!(view.common_roots_holds());
        prop_assert!(view.type_rel_propagation_holds());
    }

    #[test]
    fn strong_inheritance_follows_root_of(u in closed_universe(), mask in 0u8..=255) {
        let members: Vec<ObjectTypeId> = u.otypes().cloned().collect();
        let p = |x: &ObjectTypeId| {
            members.iter().position(|m| m == x).is_some_and(|i| mask & (1 << i) != 0)
        };
        let view = u.view();
        prop_assume!(view.check_strong_inheritance(p).is_empty());
        for x in &members {
            for y in &members {
                if view.root_of(x, y) && p(x) {
                    prop_assert!(p(y), "{} RootOf {}", x, y);
                }
            }
        }
    }

    #[test]
    fn er_derived_relatedness_is_valid(u in er_universe()) {
        let r = check_isu(&u);
        prop_assert!(r.is_empty(), "{}", r);
    }
}
