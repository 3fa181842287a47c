//! Structural-recursion transports of types and values along label and
//! element maps.
//!
//! `transport_type` replaces each label reference `l` by `f(l)` and leaves
//! `0`, `1` and primitives alone. `transport_value` does the same to values,
//! replacing each element reference `e` by `g(e)`; the type it is walked
//! against only decides where references may sit.

use super::ident::{ElementId, Label};
use super::types::TypeExpr;
use super::value::Value;
use super::AdtError;

pub fn transport_type<F>(t: &TypeExpr, f: &F) -> Result<TypeExpr, AdtError>
where
    F: Fn(&Label) -> Option<TypeExpr>,
{
    Ok(match t {
        TypeExpr::Zero => TypeExpr::Zero,
        TypeExpr::One => TypeExpr::One,
        TypeExpr::Prim(p) => TypeExpr::Prim(p.clone()),
        TypeExpr::Lbl(l) => f(l).ok_or_else(|| AdtError::LabelOutsideDomain(l.clone()))?,
        TypeExpr::Sum(a, b) => TypeExpr::sum(transport_type(a, f)?, transport_type(b, f)?),
        TypeExpr::Prod(a, b) => TypeExpr::prod(transport_type(a, f)?, transport_type(b, f)?),
    })
}

/// Transports `v`, which must inhabit `at`, replacing references through `g`.
pub fn transport_value<G>(v: &Value, at: &TypeExpr, g: &G) -> Result<Value, AdtError>
where
    G: Fn(&ElementId) -> Option<Value>,
{
    Ok(match (at, v) {
        (TypeExpr::One, Value::Unit) => Value::Unit,
        (TypeExpr::Prim(p), Value::Prim(q, lit)) if p == q => Value::Prim(q.clone(), lit.clone()),
        (TypeExpr::Lbl(_), Value::Ref(e)) => {
            g(e).ok_or_else(|| AdtError::RefOutsideDomain(e.clone()))?
        }
        (TypeExpr::Sum(a, _), Value::Inl(x)) => Value::inl(transport_value(x, a, g)?),
        (TypeExpr::Sum(_, b), Value::Inr(x)) => Value::inr(transport_value(x, b, g)?),
        (TypeExpr::Prod(a, b), Value::Pair(x, y)) => {
            Value::pair(transport_value(x, a, g)?, transport_value(y, b, g)?)
        }
        _ => {
            return Err(AdtError::ShapeMismatch {
                value: v.to_string(),
                ty: at.to_string(),
            })
        }
    })
}

/// Replaces references without consulting a type.
pub fn rename_refs<G>(v: &Value, g: &G) -> Result<Value, AdtError>
where
    G: Fn(&ElementId) -> Option<Value>,
{
    Ok(match v {
        Value::Unit | Value::Prim(..) => v.clone(),
        Value::Ref(e) => g(e).ok_or_else(|| AdtError::RefOutsideDomain(e.clone()))?,
        Value::Inl(x) => Value::inl(rename_refs(x, g)?),
        Value::Inr(x) => Value::inr(rename_refs(x, g)?),
        Value::Pair(x, y) => Value::pair(rename_refs(x, g)?, rename_refs(y, g)?),
    })
}
