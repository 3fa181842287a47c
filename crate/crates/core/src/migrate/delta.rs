use std::collections::{BTreeMap, BTreeSet};

use crate::adt::{render_path, Ident, Label, Step, TypeExpr, Value};
use crate::graph::{validate_graph, Element, Graph};

use super::enumerate::{enumerate_values, is_enumerable};
use super::eval::eval_term;
use super::mapping::{typecheck_mapping, SchemaMapping};
use super::MigrateError;

/// Pulls a graph on the mapping's target back to its source.
///
/// For each source label `l` and each witness `w` of `M₁(l)` over `g`, the
/// result has an element `E:l=w` whose value is the term for `l` evaluated
/// at `w`, with every sub-value at a label position `l''` replaced by a
/// reference to the element that sub-value witnesses.
pub fn delta_migrate(m: &SchemaMapping, g: &Graph) -> Result<Graph, MigrateError> {
    let report = typecheck_mapping(m);
    if !report.is_empty() {
        return Err(MigrateError::IllTyped(report));
    }
    if let Some(t) = m.on_labels.values().find(|t| !is_enumerable(t)) {
        return Err(MigrateError::NotEnumerable(t.clone()));
    }
    if g.schema() != &m.target {
        return Err(MigrateError::TargetMismatch);
    }
    let report = validate_graph(g);
    if !report.is_empty() {
        return Err(MigrateError::InvalidInput(report));
    }

    let mut witnesses = BTreeMap::new();
    for (l, ty) in &m.on_labels {
        witnesses.insert(l.clone(), enumerate_values(ty, g)?);
    }
    let ids: BTreeSet<Ident> = witnesses
        .iter()
        .flat_map(|(l, ws)| ws.iter().map(|w| Ident::enc(l.clone(), w.clone())))
        .collect();

    let mut elements = BTreeMap::new();
    for (l, ws) in &witnesses {
        let s_type = m.source.sigma(l).expect("typechecked");
        let term = &m.on_terms[l];
        for w in ws {
            let id = Ident::enc(l.clone(), w.clone());
            let computed = eval_term(term, w, g).map_err(|source| MigrateError::Eval {
                element: id.clone(),
                source,
            })?;
            let mut path = Vec::new();
            let value = reindex(&computed, s_type, &ids, &mut path).map_err(|(path, detail)| {
                MigrateError::Reindex {
                    element: id.clone(),
                    path,
                    detail,
                }
            })?;
            elements.insert(
                id,
                Element {
                    label: l.clone(),
                    value,
                },
            );
        }
    }
    let out = Graph::new(m.source.clone(), elements);
    let report = validate_graph(&out);
    if !report.is_empty() {
        return Err(MigrateError::InvalidOutput(report));
    }
    Ok(out)
}

fn reindex(
    v: &Value,
    at: &TypeExpr,
    ids: &BTreeSet<Ident>,
    path: &mut Vec<Step>,
) -> Result<Value, (String, String)> {
    let here = |path: &[Step], detail: String| (render_path(path), detail);
    let descend = |step: Step, v: &Value, at: &TypeExpr, path: &mut Vec<Step>| {
        path.push(step);
        let r = reindex(v, at, ids, path);
        path.pop();
        r
    };
    Ok(match (at, v) {
        (TypeExpr::Lbl(l), w) => {
            let id = Ident::enc(l.clone(), w.clone());
            if !ids.contains(&id) {
                return Err(here(path, format!("no migrated element {id} to reference")));
            }
            Value::Ref(id)
        }
        (TypeExpr::Prod(a, b), Value::Pair(x, y)) => Value::pair(
            descend(Step::Fst, x, a, path)?,
            descend(Step::Snd, y, b, path)?,
        ),
        (TypeExpr::Sum(a, _), Value::Inl(x)) => Value::inl(descend(Step::Inl, x, a, path)?),
        (TypeExpr::Sum(_, b), Value::Inr(x)) => Value::inr(descend(Step::Inr, x, b, path)?),
        (TypeExpr::One, Value::Unit) | (TypeExpr::Prim(_), Value::Prim(..)) => v.clone(),
        _ => return Err(here(path, format!("value {v} does not fit type {at}"))),
    })
}

/// Number of elements `delta_migrate` creates for `l`.
pub fn migrated_count(m: &SchemaMapping, l: &Label, g: &Graph) -> Result<usize, MigrateError> {
    match m.on_labels.get(l) {
        Some(t) => Ok(enumerate_values(t, g)?.len()),
        None => Ok(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adt::PrimRegistry;
    use crate::fixtures;
    use crate::graph::Schema;
    use crate::migrate::{parse_term, Term};
    use crate::morphism::{is_strict_isomorphism, Morphism};
    use std::sync::Arc;

    fn example() -> SchemaMapping {
        let source = Schema::parse(
            PrimRegistry::default(),
            [(Label::atom("l"), "String * Nat * Integer")],
        )
        .unwrap();
        SchemaMapping {
            source,
            target: fixtures::mapping_target().schema().clone(),
            on_labels: [(Label::atom("l"), TypeExpr::lbl("l_prime"))].into(),
            on_terms: [(
                Label::atom("l"),
                parse_term("(snd phi x, (fst phi x, Integer 0))").unwrap(),
            )]
            .into(),
        }
    }

    #[test]
    fn example_migration() {
        let out = delta_migrate(&example(), &fixtures::mapping_target()).unwrap();
        assert_eq!(out.len(), 1);
        let id = Ident::enc(Label::atom("l"), Value::reference("e1"));
        assert_eq!(id.to_string(), "E:l=@e1");
        assert_eq!(
            out.value_of(&id),
            Some(&Value::tuple([
                Value::string("abc"),
                Value::nat(7),
                Value::integer(0)
            ]))
        );
        assert!(validate_graph(&out).is_empty());
    }

    #[test]
    fn empty_graph_migrates_to_empty_graph() {
        let m = example();
        let out = delta_migrate(&m, &Graph::empty(m.target.clone())).unwrap();
        assert!(out.is_empty());
        assert_eq!(out.schema(), &m.source);
    }

    #[test]
    fn identity_mapping_is_an_isomorphism() {
        for (name, g) in fixtures::all() {
            let m = SchemaMapping::identity(g.schema());
            let out = delta_migrate(&m, &g).unwrap();
            let on_labels = g
                .schema()
                .labels()
                .map(|(l, _)| (l.clone(), l.clone()))
                .collect();
            let on_elements = g
                .elements()
                .map(|(e, el)| {
                    (
                        e.clone(),
                        Ident::enc(el.label.clone(), Value::Ref(e.clone())),
                    )
                })
                .collect();
            let f = Morphism::new(Arc::new(g.clone()), Arc::new(out), on_labels, on_elements);
            assert!(is_strict_isomorphism(&f), "{name}");
        }
    }

    #[test]
    fn references_are_reindexed() {
        // Swap the endpoints of every edge: Trip -> User becomes User <- Trip.
        let g = fixtures::edges();
        let mut m = SchemaMapping::identity(g.schema());
        let (l, _) = g
            .schema()
            .labels()
            .find(|(_, t)| matches!(t, TypeExpr::Prod(..)))
            .unwrap();
        let (l, TypeExpr::Prod(a, b)) = (l.clone(), g.sigma(l).unwrap().clone()) else {
            unreachable!()
        };
        m.source.insert(l.clone(), TypeExpr::prod(*b, *a));
        m.on_terms
            .insert(l.clone(), parse_term("(snd phi x, fst phi x)").unwrap());
        let out = delta_migrate(&m, &g).unwrap();
        assert_eq!(
            out.elements_with_label(&l).count(),
            g.elements_with_label(&l).count()
        );
        for (_, v) in out.elements_with_label(&l) {
            let Value::Pair(x, _) = v else { panic!() };
            let Value::Ref(Ident::Enc(_, w)) = &**x else {
                panic!("{v}")
            };
            assert!(matches!(**w, Value::Ref(_)));
        }
    }

    #[test]
    fn sum_witnesses_count() {
        let g = fixtures::edges();
        let source = g.schema().clone().with("opt", TypeExpr::One);
        let mut m = SchemaMapping::identity(g.schema());
        m.source = source;
        m.on_labels.insert(
            Label::atom("opt"),
            TypeExpr::sum(TypeExpr::One, TypeExpr::lbl("User")),
        );
        m.on_terms.insert(Label::atom("opt"), Term::Unit);
        let out = delta_migrate(&m, &g).unwrap();
        assert_eq!(out.elements_with_label(&Label::atom("opt")).count(), 3);
        assert_eq!(migrated_count(&m, &Label::atom("opt"), &g).unwrap(), 3);
    }

    #[test]
    fn preconditions() {
        let mut m = example();
        m.on_labels.insert(Label::atom("l"), TypeExpr::prim("Nat"));
        assert!(matches!(
            delta_migrate(&m, &fixtures::mapping_target()),
            Err(MigrateError::IllTyped(_))
        ));
        assert!(matches!(
            delta_migrate(&example(), &fixtures::edges()),
            Err(MigrateError::TargetMismatch)
        ));
        let bad = Graph::builder(example().target)
            .element("e1", "l_prime", Value::Unit)
            .build();
        assert!(matches!(
            delta_migrate(&example(), &bad),
            Err(MigrateError::InvalidInput(_))
        ));
    }

    #[test]
    fn reindex_reports_the_path() {
        let ids = BTreeSet::new();
        let t = TypeExpr::prod(TypeExpr::One, TypeExpr::lbl("a"));
        let err = reindex(
            &Value::pair(Value::Unit, Value::Unit),
            &t,
            &ids,
            &mut Vec::new(),
        )
        .unwrap_err();
        assert_eq!(err.0, render_path(&[Step::Snd]));
    }
}
