//! Checking annotation-free values against an expected type.

use std::fmt;

use super::ident::{ElementId, Label};
use super::types::TypeExpr;
use super::value::{render_path, Literal, PrimRegistry, Step, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum MismatchKind {
    /// The value's constructor does not fit the type.
    Shape(Value),
    /// A reference to an element carrying a different label.
    WrongLabel(Label),
    /// A reference to an element that does not exist.
    Dangling(ElementId),
    WrongPrim(String),
    UnknownPrim(String),
    LiteralDomain(Literal),
    /// Nothing inhabits `0`.
    Uninhabited,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub path: Vec<Step>,
    pub expected: TypeExpr,
    pub kind: MismatchKind,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = render_path(&self.path);
        let at = if at.is_empty() {
            "<root>".to_string()
        } else {
            at
        };
        write!(f, "at {at}: expected {}, ", self.expected)?;
        match &self.kind {
            MismatchKind::Shape(v) => write!(f, "found value {v}"),
            MismatchKind::WrongLabel(l) => write!(f, "found element labelled {l}"),
            MismatchKind::Dangling(e) => write!(f, "found dangling reference to {e}"),
            MismatchKind::WrongPrim(p) => write!(f, "found primitive of type {p}"),
            MismatchKind::UnknownPrim(p) => write!(f, "found unknown primitive type {p}"),
            MismatchKind::LiteralDomain(l) => {
                write!(f, "found out-of-domain literal {}", l.render())
            }
            MismatchKind::Uninhabited => write!(f, "but the type is uninhabited"),
        }
    }
}

/// Checks that `v` inhabits `expected`. References are resolved through
/// `label_of`, which returns `None` for elements that do not exist.
pub fn check_value<'a, F>(
    v: &Value,
    expected: &TypeExpr,
    registry: &PrimRegistry,
    label_of: F,
) -> Result<(), Mismatch>
where
    F: Fn(&ElementId) -> Option<&'a Label>,
{
    let mut path = Vec::new();
    check_at(v, expected, registry, &label_of, &mut path)
}

fn check_at<'a, F>(
    v: &Value,
    expected: &TypeExpr,
    registry: &PrimRegistry,
    label_of: &F,
    path: &mut Vec<Step>,
) -> Result<(), Mismatch>
where
    F: Fn(&ElementId) -> Option<&'a Label>,
{
    let fail = |path: &Vec<Step>, kind| {
        Err(Mismatch {
            path: path.clone(),
            expected: expected.clone(),
            kind,
        })
    };
    match (expected, v) {
        (TypeExpr::Zero, _) => fail(path, MismatchKind::Uninhabited),
        (TypeExpr::One, Value::Unit) => Ok(()),
        (TypeExpr::Prod(a, b), Value::Pair(x, y)) => {
            path.push(Step::Fst);
            check_at(x, a, registry, label_of, path)?;
            path.pop();
            path.push(Step::Snd);
            check_at(y, b, registry, label_of, path)?;
            path.pop();
            Ok(())
        }
        (TypeExpr::Sum(a, _), Value::Inl(x)) => {
            path.push(Step::Inl);
            check_at(x, a, registry, label_of, path)?;
            path.pop();
            Ok(())
        }
        (TypeExpr::Sum(_, b), Value::Inr(x)) => {
            path.push(Step::Inr);
            check_at(x, b, registry, label_of, path)?;
            path.pop();
            Ok(())
        }
        (TypeExpr::Prim(p), Value::Prim(q, lit)) => {
            if p != q {
                return fail(path, MismatchKind::WrongPrim(q.clone()));
            }
            match registry.kind(p) {
                None => fail(path, MismatchKind::UnknownPrim(p.clone())),
                Some(kind) if !kind.admits(lit) => {
                    fail(path, MismatchKind::LiteralDomain(lit.clone()))
                }
                Some(_) => Ok(()),
            }
        }
        (TypeExpr::Lbl(l), Value::Ref(e)) => match label_of(e) {
            None => fail(path, MismatchKind::Dangling(e.clone())),
            Some(found) if found != l => fail(path, MismatchKind::WrongLabel(found.clone())),
            Some(_) => Ok(()),
        },
        _ => fail(path, MismatchKind::Shape(v.clone())),
    }
}
