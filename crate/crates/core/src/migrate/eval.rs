use thiserror::Error;

use crate::adt::Value;
use crate::graph::Graph;

use super::term::{Term, MAPPING_VAR};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("`{term}` expected {expected}, got {found}")]
    Shape {
        term: String,
        expected: &'static str,
        found: String,
    },
    #[error("phi of {0}, which is not an element of the graph")]
    MissingElement(String),
}

/// Evaluates a mapping term with `x` bound to `binding`, de-referencing
/// elements through `g`.
pub fn eval_term(t: &Term, binding: &Value, g: &Graph) -> Result<Value, EvalError> {
    let mut env = vec![(MAPPING_VAR.to_string(), binding.clone())];
    eval(t, &mut env, g)
}

/// Call-by-value evaluation in an environment (innermost binding last).
pub fn eval_in(t: &Term, env: &[(String, Value)], g: &Graph) -> Result<Value, EvalError> {
    let mut env = env.to_vec();
    eval(t, &mut env, g)
}

fn shape(t: &Term, expected: &'static str, found: &Value) -> EvalError {
    EvalError::Shape {
        term: t.to_string(),
        expected,
        found: found.to_string(),
    }
}

fn eval(t: &Term, env: &mut Vec<(String, Value)>, g: &Graph) -> Result<Value, EvalError> {
    Ok(match t {
        Term::Var(x) => env
            .iter()
            .rev()
            .find(|(n, _)| n == x)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| EvalError::Unbound(x.clone()))?,
        Term::Unit => Value::Unit,
        Term::Lit(p, lit) => Value::Prim(p.clone(), lit.clone()),
        Term::Pair(a, b) => Value::pair(eval(a, env, g)?, eval(b, env, g)?),
        Term::Inl(x) => Value::inl(eval(x, env, g)?),
        Term::Inr(x) => Value::inr(eval(x, env, g)?),
        Term::Fst(p) | Term::Snd(p) => match eval(p, env, g)? {
            Value::Pair(a, b) => *if matches!(t, Term::Fst(_)) { a } else { b },
            other => return Err(shape(t, "a pair", &other)),
        },
        Term::Phi(x) => match eval(x, env, g)? {
            Value::Ref(e) => g
                .value_of(&e)
                .cloned()
                .ok_or_else(|| EvalError::MissingElement(e.to_string()))?,
            other => return Err(shape(t, "an element reference", &other)),
        },
        Term::Case {
            scrutinee,
            left_binder,
            left,
            right_binder,
            right,
        } => {
            let (binder, body, v) = match eval(scrutinee, env, g)? {
                Value::Inl(v) => (left_binder, left, *v),
                Value::Inr(v) => (right_binder, right, *v),
                other => return Err(shape(t, "an injection", &other)),
            };
            env.push((binder.clone(), v));
            let out = eval(body, env, g);
            env.pop();
            out?
        }
    })
}
