use evokernel::amu::{constraint_depends_of, depends_of, Dependency, TaskBody};
use evokernel::constraints::{ConstraintAst, RoleRef};
use evokernel::fixtures;
use evokernel::{ConstraintDef, TaskDef};
use proptest::prelude::*;

const STORE_REFS: [(&str, &str); 4] = [
    ("LP", "lp"),
    ("Song", "song"),
    ("Medium", "medium"),
    ("Frequency", "frequency"),
];

fn store_constraint() -> impl Strategy<Value = ConstraintAst> {
    let refs = prop::sample::subsequence(STORE_REFS.to_vec(), 1..=3)
        .prop_map(|rs| rs.into_iter().map(|(x, r)| RoleRef::new(x, r)).collect());
    let atom = prop_oneof![
        refs.clone().prop_map(ConstraintAst::Total),
        refs.prop_map(ConstraintAst::Unique),
    ];
    prop::collection::vec(atom, 1..=3).prop_map(|mut cs| {
        if cs.len() == 1 {
            cs.pop().expect("one atom")
        } else {
            ConstraintAst::And(cs)
        }
    })
}

proptest! {
    #[test]
    fn constraints_embed_as_tasks(ast in store_constraint()) {
        let c = ConstraintDef::from_ast(ast.clone());
        let task = TaskDef::from(c.clone());
        prop_assert!(task.is_constraint());
        prop_assert_eq!(task.body().unwrap(), &TaskBody::Constraint(ast));
        prop_assert_eq!(task.text(), c.text());
        prop_assert_eq!(TaskDef::new(c.text()), task);
    }

    #[test]
    fn dependencies_are_syntax_directed(ast in store_constraint()) {
        let u = fixtures::store_universe();
        let c = ConstraintDef::from_ast(ast.clone());
        let once = constraint_depends_of(&c, &u).unwrap();
        let again = constraint_depends_of(&ConstraintDef::new(c.text()), &u).unwrap();
        prop_assert_eq!(&once, &again);
        let via_task = depends_of(&TaskDef::from(c), &u).unwrap();
        prop_assert_eq!(&once, &via_task);
        for r in ast.role_refs() {
            prop_assert!(once.contains(&Dependency::ObjectType(r.otype.clone())));
        }
    }
}
