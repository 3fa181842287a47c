use crate::adt::{TypeExpr, Value};
use crate::graph::Graph;

use super::MigrateError;

/// Every value of `t` over the elements of `g`, for `t` built from `0`, `1`,
/// `+`, `×` and labels. Label references list the elements of that label in
/// the order of their rendered ids; products are enumerated
/// lexicographically; sums list left injections first.
pub fn enumerate_values(t: &TypeExpr, g: &Graph) -> Result<Vec<Value>, MigrateError> {
    Ok(match t {
        TypeExpr::Zero => Vec::new(),
        TypeExpr::One => vec![Value::Unit],
        TypeExpr::Prim(p) => return Err(MigrateError::NotEnumerable(TypeExpr::prim(p))),
        TypeExpr::Lbl(l) => {
            let mut ids: Vec<_> = g.elements_with_label(l).map(|(e, _)| e).collect();
            ids.sort_by_cached_key(|e| e.to_string());
            ids.into_iter().map(|e| Value::Ref(e.clone())).collect()
        }
        TypeExpr::Sum(a, b) => {
            let mut out: Vec<Value> = enumerate_values(a, g)?
                .into_iter()
                .map(Value::inl)
                .collect();
            out.extend(enumerate_values(b, g)?.into_iter().map(Value::inr));
            out
        }
        TypeExpr::Prod(a, b) => {
            let (xs, ys) = (enumerate_values(a, g)?, enumerate_values(b, g)?);
            let mut out = Vec::with_capacity(xs.len() * ys.len());
            for x in &xs {
                for y in &ys {
                    out.push(Value::pair(x.clone(), y.clone()));
                }
            }
            out
        }
    })
}

/// True for types built only from `0`, `1`, `+`, `×` and labels.
pub fn is_enumerable(t: &TypeExpr) -> bool {
    t.prims().is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn label_lists_its_elements() {
        let g = fixtures::mapping_target();
        assert_eq!(
            enumerate_values(&TypeExpr::lbl("l_prime"), &g).unwrap(),
            vec![Value::reference("e1")]
        );
    }

    #[test]
    fn optional_user() {
        let g = fixtures::edges();
        let t = TypeExpr::sum(TypeExpr::One, TypeExpr::lbl("User"));
        assert_eq!(
            enumerate_values(&t, &g).unwrap(),
            vec![
                Value::inl(Value::Unit),
                Value::inr(Value::reference("u1")),
                Value::inr(Value::reference("u2"))
            ]
        );
    }

    #[test]
    fn small_types() {
        let g = Graph::default();
        assert_eq!(
            enumerate_values(&TypeExpr::prod(TypeExpr::One, TypeExpr::One), &g).unwrap(),
            vec![Value::pair(Value::Unit, Value::Unit)]
        );
        assert!(enumerate_values(&TypeExpr::Zero, &g).unwrap().is_empty());
        assert!(matches!(
            enumerate_values(&TypeExpr::prim("Nat"), &g),
            Err(MigrateError::NotEnumerable(_))
        ));
    }

    #[test]
    fn product_count() {
        let g = fixtures::edges();
        let t = TypeExpr::prod(
            TypeExpr::lbl("User"),
            TypeExpr::sum(TypeExpr::lbl("Trip"), TypeExpr::One),
        );
        assert_eq!(enumerate_values(&t, &g).unwrap().len(), 2 * 2);
    }
}
