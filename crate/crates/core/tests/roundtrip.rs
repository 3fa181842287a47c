use apg_core::adt::Value;
use apg_core::bridges::{
    export_rdf, export_relational, import_relational, read_tables, write_tables,
};
use apg_core::format::{read_graph, write_graph};
use apg_core::testing::{random_graph, rng};
use apg_core::Graph;
use proptest::prelude::*;

/// Leaves of a value: units, primitives and references.
fn leaf_count(v: &Value) -> usize {
    match v {
        Value::Pair(a, b) => leaf_count(a) + leaf_count(b),
        Value::Inl(x) | Value::Inr(x) => leaf_count(x),
        _ => 1,
    }
}

fn expected_triples(g: &Graph) -> usize {
    g.elements().map(|(_, el)| 1 + leaf_count(&el.value)).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn relational_round_trip(seed in any::<u64>()) {
        let g = random_graph(&mut rng(seed), 4, 8);
        let back = import_relational(&export_relational(&g), g.schema());
        prop_assert_eq!(back.unwrap(), g);
    }

    #[test]
    fn native_format_round_trip(seed in any::<u64>()) {
        let g = random_graph(&mut rng(seed), 4, 8);
        prop_assert_eq!(read_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn rdf_triple_count(seed in any::<u64>()) {
        let g = random_graph(&mut rng(seed), 4, 8);
        let text = export_rdf(&g);
        prop_assert_eq!(text.lines().count(), expected_triples(&g));
        let mut sorted: Vec<&str> = text.lines().collect();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), expected_triples(&g));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn csv_directory_round_trip(seed in any::<u64>()) {
        let g = random_graph(&mut rng(seed), 4, 8);
        let dir = tempfile::tempdir().unwrap();
        write_tables(dir.path(), &export_relational(&g), Some(g.schema())).unwrap();
        let (tables, schema) = read_tables(dir.path()).unwrap();
        let schema = schema.unwrap();
        prop_assert_eq!(&schema, g.schema());
        prop_assert_eq!(import_relational(&tables, &schema).unwrap(), g);
    }
}
