use std::collections::BTreeSet;
use std::fmt;

use crate::adt::Literal;

/// A term of the mapping language. Rendering produces the concrete syntax
/// accepted by [`parse_term`](super::parse_term).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Unit,
    Pair(Box<Term>, Box<Term>),
    Inl(Box<Term>),
    Inr(Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    /// `case s of { inl a -> l ; inr b -> r }`
    Case {
        scrutinee: Box<Term>,
        left_binder: String,
        left: Box<Term>,
        right_binder: String,
        right: Box<Term>,
    },
    /// De-reference an element to its value.
    Phi(Box<Term>),
    Lit(String, Literal),
}

/// The free variable of a mapping term.
pub const MAPPING_VAR: &str = "x";

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn inl(t: Term) -> Term {
        Term::Inl(Box::new(t))
    }

    pub fn inr(t: Term) -> Term {
        Term::Inr(Box::new(t))
    }

    pub fn fst(t: Term) -> Term {
        Term::Fst(Box::new(t))
    }

    pub fn snd(t: Term) -> Term {
        Term::Snd(Box::new(t))
    }

    pub fn phi(t: Term) -> Term {
        Term::Phi(Box::new(t))
    }

    pub fn case(scrutinee: Term, a: &str, left: Term, b: &str, right: Term) -> Term {
        Term::Case {
            scrutinee: Box::new(scrutinee),
            left_binder: a.to_string(),
            left: Box::new(left),
            right_binder: b.to_string(),
            right: Box::new(right),
        }
    }

    pub fn lit(prim: &str, lit: Literal) -> Term {
        Term::Lit(prim.to_string(), lit)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Unit | Term::Lit(..) => 1,
            Term::Pair(a, b) => 1 + a.size() + b.size(),
            Term::Inl(t) | Term::Inr(t) | Term::Fst(t) | Term::Snd(t) | Term::Phi(t) => {
                1 + t.size()
            }
            Term::Case {
                scrutinee,
                left,
                right,
                ..
            } => 1 + scrutinee.size() + left.size() + right.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Unit | Term::Lit(..) => 1,
            Term::Pair(a, b) => 1 + a.depth().max(b.depth()),
            Term::Inl(t) | Term::Inr(t) | Term::Fst(t) | Term::Snd(t) | Term::Phi(t) => {
                1 + t.depth()
            }
            Term::Case {
                scrutinee,
                left,
                right,
                ..
            } => 1 + scrutinee.depth().max(left.depth()).max(right.depth()),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            Term::Unit | Term::Lit(..) => {}
            Term::Pair(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Inl(t) | Term::Inr(t) | Term::Fst(t) | Term::Snd(t) | Term::Phi(t) => {
                t.collect_free(bound, out)
            }
            Term::Case {
                scrutinee,
                left_binder,
                left,
                right_binder,
                right,
            } => {
                scrutinee.collect_free(bound, out);
                for (x, body) in [(left_binder, left), (right_binder, right)] {
                    bound.push(x.clone());
                    body.collect_free(bound, out);
                    bound.pop();
                }
            }
        }
    }

    fn all_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Unit | Term::Lit(..) => {}
            Term::Pair(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Term::Inl(t) | Term::Inr(t) | Term::Fst(t) | Term::Snd(t) | Term::Phi(t) => {
                t.all_vars(out)
            }
            Term::Case {
                scrutinee,
                left_binder,
                left,
                right_binder,
                right,
            } => {
                out.insert(left_binder.clone());
                out.insert(right_binder.clone());
                scrutinee.all_vars(out);
                left.all_vars(out);
                right.all_vars(out);
            }
        }
    }

    /// Capture-avoiding substitution `self[x ↦ v]`. Binders that would
    /// capture a free variable of `v` are renamed to fresh names.
    pub fn subst(&self, x: &str, v: &Term) -> Term {
        let fv = v.free_vars();
        self.subst_with(x, v, &fv)
    }

    fn subst_with(&self, x: &str, v: &Term, fv: &BTreeSet<String>) -> Term {
        match self {
            Term::Var(y) if y == x => v.clone(),
            Term::Var(_) | Term::Unit | Term::Lit(..) => self.clone(),
            Term::Pair(a, b) => Term::pair(a.subst_with(x, v, fv), b.subst_with(x, v, fv)),
            Term::Inl(t) => Term::inl(t.subst_with(x, v, fv)),
            Term::Inr(t) => Term::inr(t.subst_with(x, v, fv)),
            Term::Fst(t) => Term::fst(t.subst_with(x, v, fv)),
            Term::Snd(t) => Term::snd(t.subst_with(x, v, fv)),
            Term::Phi(t) => Term::phi(t.subst_with(x, v, fv)),
            Term::Case {
                scrutinee,
                left_binder,
                left,
                right_binder,
                right,
            } => {
                let scrutinee = scrutinee.subst_with(x, v, fv);
                let (a, left) = subst_under(left_binder, left, x, v, fv);
                let (b, right) = subst_under(right_binder, right, x, v, fv);
                Term::Case {
                    scrutinee: Box::new(scrutinee),
                    left_binder: a,
                    left: Box::new(left),
                    right_binder: b,
                    right: Box::new(right),
                }
            }
        }
    }
}

fn subst_under(
    binder: &str,
    body: &Term,
    x: &str,
    v: &Term,
    fv: &BTreeSet<String>,
) -> (String, Term) {
    if binder == x {
        return (binder.to_string(), body.clone());
    }
    if !fv.contains(binder) || !body.free_vars().contains(x) {
        return (binder.to_string(), body.subst_with(x, v, fv));
    }
    let mut avoid = fv.clone();
    body.all_vars(&mut avoid);
    avoid.insert(x.to_string());
    let fresh = fresh_name(binder, &avoid);
    let renamed = body.subst(binder, &Term::Var(fresh.clone()));
    (fresh.clone(), renamed.subst_with(x, v, fv))
}

fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded supply")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Unit => f.write_str("()"),
            Term::Pair(a, b) => write!(f, "({a}, {b})"),
            Term::Inl(t) => write!(f, "inl {t}"),
            Term::Inr(t) => write!(f, "inr {t}"),
            Term::Fst(t) => write!(f, "fst {t}"),
            Term::Snd(t) => write!(f, "snd {t}"),
            Term::Phi(t) => write!(f, "phi {t}"),
            Term::Case {
                scrutinee,
                left_binder,
                left,
                right_binder,
                right,
            } => {
                write!(f, "case {scrutinee} of {{ inl {left_binder} -> {left} ; inr {right_binder} -> {right} }}")
            }
            Term::Lit(p, lit) => write!(f, "{p} {}", lit.render()),
        }
    }
}
