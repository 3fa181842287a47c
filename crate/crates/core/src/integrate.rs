//! Key-based matching and merging of two graphs over one schema.
//!
//! [`match_by_key`] joins the elements of two graphs on equal label and equal
//! key (the whole value by default, or the sub-value at a key path). The
//! matched pairs form a graph `G` with inclusions `G1 ← G → G2`, and
//! [`merge_by_key`] glues the two graphs along that span.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::adt::{render_path, ElementId, Ident, Label, Step, Value};
use crate::catops::{pushout, CatError, ConstructionResult};
use crate::graph::Graph;
use crate::morphism::Morphism;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrateError {
    #[error("graphs to be matched must have identical schemas")]
    SchemaMismatch,
    #[error("schema of label {0} refers to other labels, so its values cannot serve as keys")]
    LabelInSchema(Label),
    #[error(transparent)]
    Cat(#[from] CatError),
}

/// The matched graph and its two inclusions.
#[derive(Clone, Debug)]
pub struct Span {
    pub graph: Arc<Graph>,
    pub left: Morphism,
    pub right: Morphism,
}

fn key_of<'a>(v: &'a Value, key: Option<&[Step]>) -> Option<&'a Value> {
    match key {
        None => Some(v),
        Some(path) => v.at_path(path),
    }
}

/// One matched element `(e1,e2)` for every pair with equal labels and equal
/// keys. Elements whose value has no sub-value at the key path never match.
/// The matched element carries the value of `e1`.
pub fn match_by_key(g1: &Graph, g2: &Graph, key: Option<&[Step]>) -> Result<Span, IntegrateError> {
    if g1.schema() != g2.schema() {
        return Err(IntegrateError::SchemaMismatch);
    }
    if let Some((l, _)) = g1.schema().labels().find(|(_, t)| !t.is_label_free()) {
        return Err(IntegrateError::LabelInSchema(l.clone()));
    }

    let mut index: HashMap<(&Label, &Value), Vec<&ElementId>> = HashMap::new();
    for (e2, el) in g2.elements() {
        if let Some(k) = key_of(&el.value, key) {
            index.entry((&el.label, k)).or_default().push(e2);
        }
    }
    let mut b = Graph::builder(g1.schema().clone());
    let mut on_left = BTreeMap::new();
    let mut on_right = BTreeMap::new();
    for (e1, el) in g1.elements() {
        let Some(k) = key_of(&el.value, key) else {
            continue;
        };
        for e2 in index.get(&(&el.label, k)).into_iter().flatten() {
            let id = Ident::pair(e1.clone(), (*e2).clone());
            b.insert(id.clone(), el.label.clone(), el.value.clone());
            on_left.insert(id.clone(), e1.clone());
            on_right.insert(id, (*e2).clone());
        }
    }
    let g = Arc::new(b.build());
    let labels: BTreeMap<Label, Label> = g
        .schema()
        .labels()
        .map(|(l, _)| (l.clone(), l.clone()))
        .collect();
    let left = Morphism::new(g.clone(), Arc::new(g1.clone()), labels.clone(), on_left);
    let right = Morphism::new(g.clone(), Arc::new(g2.clone()), labels, on_right);
    Ok(Span {
        graph: g,
        left,
        right,
    })
}

/// The pushout of the matched span, with legs `k : G1 → P` and `m : G2 → P`.
pub fn merge_with_legs(
    g1: &Graph,
    g2: &Graph,
    key: Option<&[Step]>,
) -> Result<ConstructionResult, IntegrateError> {
    let span = match_by_key(g1, g2, key)?;
    Ok(pushout(&span.left, &span.right)?)
}

/// Merges two graphs, identifying elements with equal keys.
pub fn merge_by_key(g1: &Graph, g2: &Graph, key: Option<&[Step]>) -> Result<Graph, IntegrateError> {
    let merged = merge_with_legs(g1, g2, key)?;
    Ok(Arc::unwrap_or_clone(merged.graph))
}

/// Human-readable form of a key path, for diagnostics.
pub fn describe_key(key: Option<&[Step]>) -> String {
    match key {
        None => "whole value".to_string(),
        Some(p) => render_path(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adt::{parse_path, PrimRegistry, TypeExpr};
    use crate::fixtures;
    use crate::graph::{validate_graph, Schema};
    use crate::morphism::{check_morphism, check_upsilon_natural, compose};

    fn values(g: &Graph) -> Vec<String> {
        let mut v: Vec<String> = g.elements().map(|(_, el)| el.value.to_string()).collect();
        v.sort();
        v
    }

    #[test]
    fn plates_match_on_one_pair() {
        let span = match_by_key(&fixtures::plates1(), &fixtures::plates2(), None).unwrap();
        let ids: Vec<_> = span.graph.element_ids().map(|e| e.to_string()).collect();
        assert_eq!(ids, ["(p1,q1)"]);
        assert_eq!(
            span.graph.value_of(&Ident::pair("p1".into(), "q1".into())),
            Some(&Value::tuple([
                Value::string("US"),
                Value::string("CA"),
                Value::string("6TRJ244")
            ]))
        );
        for m in [&span.left, &span.right] {
            assert!(check_morphism(m).is_empty());
            assert_eq!(check_upsilon_natural(m), Ok(true));
        }
    }

    #[test]
    fn plates_merge_into_three() {
        let merged = merge_with_legs(&fixtures::plates1(), &fixtures::plates2(), None).unwrap();
        let g = &merged.graph;
        assert!(validate_graph(g).is_empty());
        assert_eq!(g.schema(), fixtures::plates1().schema());
        let plate = |a: &str, b: &str, c: &str| {
            Value::tuple([Value::string(a), Value::string(b), Value::string(c)])
        };
        let mut got: Vec<Value> = g.elements().map(|(_, el)| el.value.clone()).collect();
        got.sort();
        let mut want = vec![
            plate("US", "CA", "6TRJ244"),
            plate("MX", "BC", "AHD-41-02"),
            plate("MX", "SON", "VUK-17-75"),
        ];
        want.sort();
        assert_eq!(got, want);
        // The shared plate is one class containing both originals.
        let (k, m) = (merged.leg("k").unwrap(), merged.leg("m").unwrap());
        assert_eq!(k.element(&"p1".into()), m.element(&"q1".into()));
        assert_ne!(k.element(&"p2".into()), m.element(&"q2".into()));
    }

    #[test]
    fn span_square_commutes() {
        let (g1, g2) = (fixtures::plates1(), fixtures::plates2());
        let span = match_by_key(&g1, &g2, None).unwrap();
        let p = pushout(&span.left, &span.right).unwrap();
        let lhs = compose(p.leg("k").unwrap(), &span.left).unwrap();
        let rhs = compose(p.leg("m").unwrap(), &span.right).unwrap();
        let e = Ident::pair("p1".into(), "q1".into());
        assert_eq!(lhs.element(&e), rhs.element(&e));
        assert!(lhs.same_maps(&rhs));
    }

    #[test]
    fn disjoint_values_do_not_match() {
        let span = match_by_key(
            &fixtures::plates1(),
            &Graph::empty(fixtures::plates1().schema().clone()),
            None,
        )
        .unwrap();
        assert!(span.graph.is_empty());
    }

    #[test]
    fn self_match_and_self_merge() {
        let g = fixtures::plates1();
        let span = match_by_key(&g, &g, None).unwrap();
        assert_eq!(span.graph.len(), g.len());
        let merged = merge_by_key(&g, &g, None).unwrap();
        assert_eq!(values(&merged), values(&g));
    }

    #[test]
    fn duplicate_values_cross_match() {
        let s = fixtures::plates1().schema().clone();
        let v = fixtures::plates1().value_of(&"p1".into()).unwrap().clone();
        let g = Graph::builder(s)
            .element("a", "PlateNumber", v.clone())
            .element("b", "PlateNumber", v)
            .build();
        assert_eq!(match_by_key(&g, &g, None).unwrap().graph.len(), 4);
        assert_eq!(merge_by_key(&g, &g, None).unwrap().len(), 1);
    }

    #[test]
    fn merge_with_empty_keeps_values() {
        let g = fixtures::plates2();
        let empty = Graph::empty(g.schema().clone());
        assert_eq!(values(&merge_by_key(&g, &empty, None).unwrap()), values(&g));
    }

    #[test]
    fn country_key_merges_by_first_component() {
        let key = parse_path("fst").unwrap();
        let merged = merge_by_key(&fixtures::plates1(), &fixtures::plates2(), Some(&key)).unwrap();
        // US plates merge, and both MX plates glue to each other.
        assert_eq!(merged.len(), 2);
    }

    #[test]
    fn preconditions() {
        assert!(matches!(
            match_by_key(&fixtures::plates1(), &fixtures::names(), None),
            Err(IntegrateError::SchemaMismatch)
        ));
        assert!(matches!(
            match_by_key(&fixtures::edges(), &fixtures::edges(), None),
            Err(IntegrateError::LabelInSchema(_))
        ));
        let s = Schema::new(PrimRegistry::default()).with("X", TypeExpr::One);
        assert!(match_by_key(&Graph::empty(s.clone()), &Graph::empty(s), None).is_ok());
    }
}
