use std::sync::Arc;

use apg_core::adt::{Ident, Label, TypeExpr, Value};
use apg_core::migrate::{delta_migrate, enumerate_values, is_enumerable, SchemaMapping, Term};
use apg_core::morphism::{is_strict_isomorphism, Morphism};
use apg_core::testing::{random_graph, random_type, rng, TestRng};
use apg_core::{validate_graph, Graph};
use proptest::prelude::*;

fn enumerable_type(r: &mut TestRng, labels: &[Label]) -> TypeExpr {
    loop {
        let t = random_type(r, labels, 2);
        if is_enumerable(&t) {
            return t;
        }
    }
}

/// The identity mapping on `g`'s schema, extended with constant labels over
/// random enumerable types and with labels that point at existing ones.
fn extended(r: &mut TestRng, g: &Graph) -> SchemaMapping {
    let mut m = SchemaMapping::identity(g.schema());
    let labels: Vec<Label> = g.schema().labels().map(|(l, _)| l.clone()).collect();
    for k in 0..2 {
        let l = Label::atom(format!("opt{k}"));
        m.source.insert(l.clone(), TypeExpr::One);
        m.on_labels.insert(l.clone(), enumerable_type(r, &labels));
        m.on_terms.insert(l, Term::Unit);
    }
    for (k, target) in labels.iter().enumerate() {
        let l = Label::atom(format!("ref{k}"));
        m.source.insert(l.clone(), TypeExpr::Lbl(target.clone()));
        m.on_labels.insert(l.clone(), TypeExpr::Lbl(target.clone()));
        m.on_terms.insert(l, Term::var("x"));
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn identity_migration_is_an_isomorphism(seed in any::<u64>()) {
        let g = random_graph(&mut rng(seed), 4, 8);
        let out = delta_migrate(&SchemaMapping::identity(g.schema()), &g).unwrap();
        let on_labels = g.schema().labels().map(|(l, _)| (l.clone(), l.clone())).collect();
        let on_elements = g
            .elements()
            .map(|(e, el)| (e.clone(), Ident::enc(el.label.clone(), Value::Ref(e.clone()))))
            .collect();
        let f = Morphism::new(Arc::new(g.clone()), Arc::new(out), on_labels, on_elements);
        prop_assert!(is_strict_isomorphism(&f));
    }

    #[test]
    fn output_validates_and_counts_witnesses(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, 4, 8);
        let m = extended(&mut r, &g);
        let out = delta_migrate(&m, &g).unwrap();
        prop_assert!(validate_graph(&out).is_empty());
        prop_assert_eq!(out.schema(), &m.source);
        for (l, t) in &m.on_labels {
            let n = enumerate_values(t, &g).unwrap().len();
            prop_assert_eq!(out.elements_with_label(l).count(), n, "label {}", l);
        }
    }
}
