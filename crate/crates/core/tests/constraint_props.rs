use std::collections::BTreeSet;

use evokernel::constraints::{
    constr_implies, eval_constraint, parse_constraint, ConstraintAst, ImplicationVerdict, RoleRef,
};
use evokernel::oracle::{oracle_eval_constraint, random_constraint_case};
use evokernel::{ElementEvolution, History, Tick, TickRange};
use proptest::prelude::*;

const REFS: [(&str, &str); 3] = [("A", "p"), ("B", "q"), ("C", "r")];

fn refs() -> impl Strategy<Value = BTreeSet<RoleRef>> {
    prop::sample::subsequence(REFS.to_vec(), 1..=3)
        .prop_map(|rs| rs.into_iter().map(|(x, r)| RoleRef::new(x, r)).collect())
}

/// BEFORE/EQUALS needs three distinct types.
fn before_equals() -> impl Strategy<Value = ConstraintAst> {
    Just(vec!["A", "B", "C"])
        .prop_shuffle()
        .prop_map(|xs| ConstraintAst::BeforeEquals {
            earlier: xs[0].into(),
            later: xs[1].into(),
            target: xs[2].into(),
        })
}

fn atom() -> impl Strategy<Value = ConstraintAst> {
    prop_oneof![
        2 => refs().prop_map(ConstraintAst::Total),
        2 => refs().prop_map(ConstraintAst::Unique),
        1 => before_equals(),
    ]
}

fn ast() -> impl Strategy<Value = ConstraintAst> {
    prop_oneof![
        3 => atom(),
        1 => prop::collection::vec(atom(), 2..=3).prop_map(ConstraintAst::And),
    ]
}

fn plain_ast() -> impl Strategy<Value = ConstraintAst> {
    let plain_atom = prop_oneof![
        refs().prop_map(ConstraintAst::Total),
        refs().prop_map(ConstraintAst::Unique),
    ];
    prop_oneof![
        3 => plain_atom.clone(),
        1 => prop::collection::vec(plain_atom, 2..=3).prop_map(ConstraintAst::And),
    ]
}

fn interval() -> impl Strategy<Value = TickRange> {
    (1u64..=6, prop::option::of(0u64..4)).prop_map(|(s, len)| match len {
        Some(l) => TickRange::between(Tick(s), Tick(s + l)).unwrap(),
        None => TickRange::from(Tick(s)),
    })
}

fn without(h: &History, skip: &str) -> History {
    let mut out = History::new(h.universe_arc().clone());
    for e in h.evolutions().filter(|e| e.id.as_str() != skip) {
        out.insert(ElementEvolution::clone(e)).unwrap();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn display_round_trips(a in ast()) {
        prop_assert_eq!(parse_constraint(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn kernel_agrees_with_oracle(seed in any::<u64>(), a in ast(), range in interval()) {
        let (h, _, _) = random_constraint_case(seed);
        prop_assert_eq!(eval_constraint(&h, range, &a).unwrap(), oracle_eval_constraint(&h, range, &a));
    }

    #[test]
    fn conjunction_splits(seed in any::<u64>(), a in ast(), b in ast(), range in interval()) {
        let (h, _, _) = random_constraint_case(seed);
        let both = ConstraintAst::And(vec![a.clone(), b.clone()]);
        let split = eval_constraint(&h, range, &a).unwrap() && eval_constraint(&h, range, &b).unwrap();
        prop_assert_eq!(eval_constraint(&h, range, &both).unwrap(), split);
    }

    #[test]
    fn implication_is_reflexive(a in ast()) {
        prop_assert!(constr_implies(&a, &a).is_implied());
    }

    #[test]
    fn implication_is_transitive(a in ast(), b in ast(), c in ast()) {
        if constr_implies(&a, &b).is_implied() && constr_implies(&b, &c).is_implied() {
            prop_assert!(constr_implies(&a, &c).is_implied(), "{} => {} => {}", a, b, c);
        }
    }

    #[test]
    fn total_survives_losing_an_instance(seed in any::<u64>(), rs in refs(), t in 1u64..=6) {
        let (h, _, _) = random_constraint_case(seed);
        let total = ConstraintAst::Total(rs.clone());
        let at = TickRange::at(Tick(t));
        prop_assume!(eval_constraint(&h, at, &total).unwrap());
        let owners: Vec<String> = h
            .evolutions()
            .filter(|e| {
                e.track.get(Tick(t)).and_then(|v| v.typing()).is_some_and(|g| {
                    rs.iter().any(|r| g.types.contains(&r.otype))
                })
            })
            .map(|e| e.id.to_string())
            .collect();
        for id in owners {
            prop_assert!(eval_constraint(&without(&h, &id), at, &total).unwrap(), "removing {}", id);
        }
    }
}

/// A weaker companion of `a`: drop conjuncts, widen Total, narrow Unique.
fn weaken(a: &ConstraintAst, pick: u64) -> ConstraintAst {
    match a {
        ConstraintAst::And(cs) => {
            let kept: Vec<_> = cs
                .iter()
                .enumerate()
                .filter(|(i, _)| pick & (1 << i) != 0)
                .map(|(i, c)| weaken(c, pick >> (i + 3)))
                .collect();
            match kept.len() {
                0 => weaken(&cs[0], pick >> 1),
                1 => kept.into_iter().next().unwrap(),
                _ => ConstraintAst::And(kept),
            }
        }
        ConstraintAst::Total(s) => {
            let mut wider = s.clone();
            for (x, r) in REFS {
                if pick & 1 == 1 && s.iter().any(|q| q.otype.as_str() == x) {
                    wider.insert(RoleRef::new(x, r));
                }
            }
            ConstraintAst::Total(wider)
        }
        ConstraintAst::Unique(s) => {
            let narrow: BTreeSet<_> = s
                .iter()
                .take(1 + (pick as usize % s.len()))
                .cloned()
                .collect();
            ConstraintAst::Unique(narrow)
        }
        other => other.clone(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn implied_verdicts_are_sound(a in plain_ast(), pick in any::<u64>(), b in plain_ast(), weak in any::<bool>()) {
        let b = if weak { weaken(&a, pick) } else { b };
        if let ImplicationVerdict::Implied(_) = constr_implies(&a, &b) {
            for seed in 0..1000 {
                let (h, range, _) = random_constraint_case(seed);
                if oracle_eval_constraint(&h, range, &a) {
                    prop_assert!(oracle_eval_constraint(&h, range, &b), "seed {}: {} but not {}", seed, a, b);
                }
            }
        }
    }

    #[test]
    fn not_implied_verdicts_have_counterexamples(a in plain_ast(), b in plain_ast()) {
        if constr_implies(&a, &b).is_not_implied() {
            prop_assert!(!constr_implies(&a, &b).is_implied());
        }
    }
}

#[test]
fn unique_does_not_imply_total() {
    let r = RoleRef::new("A", "p");
    let verdict = constr_implies(
        &ConstraintAst::unique([r.clone()]),
        &ConstraintAst::total([r]),
    );
    assert!(verdict.is_not_implied(), "{verdict:?}");
}
