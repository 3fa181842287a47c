use apg_core::fixtures;
use apg_core::testing::{check_mutation, mutations, random_graph, rng, MutationKind};
use apg_core::validate_graph;
use proptest::prelude::*;

#[test]
fn fixtures_are_valid() {
    for (name, g) in fixtures::all() {
        assert!(validate_graph(&g).is_empty(), "{name}");
    }
}

#[test]
fn every_fixture_mutation_is_localized() {
    for (name, g) in fixtures::all() {
        let ms = mutations(&g, 50);
        assert!(ms.len() >= 50, "{name}: only {} mutations", ms.len());
        for m in &ms {
            if let Err(e) = check_mutation(m) {
                panic!("{name}: {e}");
            }
        }
    }
}

#[test]
fn structural_mutation_kinds_are_covered() {
    let kinds: std::collections::BTreeSet<MutationKind> = fixtures::all()
        .iter()
        .flat_map(|(_, g)| mutations(g, 0))
        .map(|m| m.kind)
        .collect();
    assert_eq!(kinds.len(), 5, "{kinds:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_graph_mutations_are_localized(seed in any::<u64>()) {
        let g = random_graph(&mut rng(seed), 4, 8);
        for m in mutations(&g, 10) {
            let outcome = check_mutation(&m);
            prop_assert!(outcome.is_ok(), "{}", outcome.unwrap_err());
        }
    }
}
