use thiserror::Error;

use crate::adt::TypeExpr;
use crate::graph::Schema;

use super::term::Term;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("in `{term}`: {message}")]
pub struct TypeError {
    pub term: String,
    pub message: String,
}

fn err(t: &Term, message: impl Into<String>) -> TypeError {
    TypeError {
        term: t.to_string(),
        message: message.into(),
    }
}

/// Typing context: variables in scope (innermost last) over a schema, which
/// gives `phi` its meaning. A variable without a type is the binder of the
/// branch a `case` on an explicit injection never takes.
#[derive(Clone, Debug)]
pub struct Context<'s> {
    schema: &'s Schema,
    vars: Vec<(String, Option<TypeExpr>)>,
}

impl<'s> Context<'s> {
    pub fn new(schema: &'s Schema) -> Self {
        Context {
            schema,
            vars: Vec::new(),
        }
    }

    pub fn with(mut self, name: &str, t: TypeExpr) -> Self {
        self.vars.push((name.to_string(), Some(t)));
        self
    }

    /// Brings `name` into scope without a type, shadowing outer bindings.
    pub fn hiding(mut self, name: &str) -> Self {
        self.vars.push((name.to_string(), None));
        self
    }

    fn lookup(&self, name: &str) -> Option<&Option<TypeExpr>> {
        self.vars
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    fn under<R>(&mut self, name: &str, t: Option<TypeExpr>, f: impl FnOnce(&mut Self) -> R) -> R {
        self.vars.push((name.to_string(), t));
        let r = f(self);
        self.vars.pop();
        r
    }
}

/// Synthesizes the type of `t`. Injections need an expected type and cannot
/// be inferred on their own.
pub fn infer_type(t: &Term, ctx: &mut Context<'_>) -> Result<TypeExpr, TypeError> {
    match t {
        Term::Var(x) => match ctx.lookup(x) {
            Some(Some(ty)) => Ok(ty.clone()),
            Some(None) => Err(err(
                t,
                format!("the type of {x} is not determined by the scrutinee"),
            )),
            None => Err(err(t, format!("unbound variable {x}"))),
        },
        Term::Unit => Ok(TypeExpr::One),
        Term::Pair(a, b) => Ok(TypeExpr::prod(infer_type(a, ctx)?, infer_type(b, ctx)?)),
        Term::Inl(_) | Term::Inr(_) => Err(err(
            t,
            "cannot infer the type of an injection here; add context",
        )),
        Term::Fst(p) | Term::Snd(p) => match infer_type(p, ctx)? {
            TypeExpr::Prod(a, b) => Ok(if matches!(t, Term::Fst(_)) { *a } else { *b }),
            other => Err(err(t, format!("expected a product, found {other}"))),
        },
        Term::Phi(e) => match infer_type(e, ctx)? {
            TypeExpr::Lbl(l) => ctx
                .schema
                .sigma(&l)
                .cloned()
                .ok_or_else(|| err(t, format!("label {l} is not in the schema"))),
            other => Err(err(
                t,
                format!("phi needs an element of some label, found {other}"),
            )),
        },
        Term::Lit(p, lit) => match ctx.schema.registry().kind(p) {
            Some(kind) if kind.admits(lit) => Ok(TypeExpr::prim(p)),
            Some(kind) => Err(err(
                t,
                format!("literal {} is not a {}", lit.render(), kind.as_str()),
            )),
            None => Err(err(t, format!("unknown primitive type {p}"))),
        },
        Term::Case {
            scrutinee,
            left_binder,
            left,
            right_binder,
            right,
        } => {
            let (a, b) = scrutinee_branches(t, scrutinee, ctx)?;
            let from_left = ctx.under(left_binder, a.clone(), |c| infer_type(left, c));
            match from_left {
                Ok(ty) => {
                    ctx.under(right_binder, b, |c| check_type(right, &ty, c))?;
                    Ok(ty)
                }
                Err(left_err) => {
                    let ty = ctx
                        .under(right_binder, b, |c| infer_type(right, c))
                        .map_err(|_| left_err)?;
                    ctx.under(left_binder, a, |c| check_type(left, &ty, c))?;
                    Ok(ty)
                }
            }
        }
    }
}

/// Binder types for the two branches of a `case`. On an explicit injection
/// only the taken branch's binder gets a type.
fn scrutinee_branches(
    t: &Term,
    s: &Term,
    ctx: &mut Context<'_>,
) -> Result<(Option<TypeExpr>, Option<TypeExpr>), TypeError> {
    match s {
        Term::Inl(v) => return Ok((Some(infer_type(v, ctx)?), None)),
        Term::Inr(v) => return Ok((None, Some(infer_type(v, ctx)?))),
        _ => {}
    }
    match infer_type(s, ctx)? {
        TypeExpr::Sum(a, b) => Ok((Some(*a), Some(*b))),
        other => Err(err(t, format!("case needs a sum, found {other}"))),
    }
}

/// Checks `t` against `expected`.
pub fn check_type(t: &Term, expected: &TypeExpr, ctx: &mut Context<'_>) -> Result<(), TypeError> {
    match (t, expected) {
        (Term::Pair(a, b), TypeExpr::Prod(ta, tb)) => {
            check_type(a, ta, ctx)?;
            check_type(b, tb, ctx)
        }
        (Term::Pair(..), _) => Err(err(t, format!("a pair cannot have type {expected}"))),
        (Term::Inl(x), TypeExpr::Sum(ta, _)) => check_type(x, ta, ctx),
        (Term::Inr(x), TypeExpr::Sum(_, tb)) => check_type(x, tb, ctx),
        (Term::Inl(_) | Term::Inr(_), _) => {
            Err(err(t, format!("an injection cannot have type {expected}")))
        }
        // The discarded component only needs some type.
        (Term::Fst(p), _) if matches!(**p, Term::Pair(..)) => {
            let Term::Pair(a, b) = &**p else {
                unreachable!()
            };
            infer_type(b, ctx)?;
            check_type(a, expected, ctx)
        }
        (Term::Snd(p), _) if matches!(**p, Term::Pair(..)) => {
            let Term::Pair(a, b) = &**p else {
                unreachable!()
            };
            infer_type(a, ctx)?;
            check_type(b, expected, ctx)
        }
        (
            Term::Case {
                scrutinee,
                left_binder,
                left,
                right_binder,
                right,
            },
            _,
        ) => {
            let (a, b) = scrutinee_branches(t, scrutinee, ctx)?;
            ctx.under(left_binder, a, |c| check_type(left, expected, c))?;
            ctx.under(right_binder, b, |c| check_type(right, expected, c))
        }
        _ => {
            let found = infer_type(t, ctx)?;
            if &found == expected {
                Ok(())
            } else {
                Err(err(t, format!("expected {expected}, found {found}")))
            }
        }
    }
}
