use super::term::Term;

/// Result of normalization together with the number of contractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub term: Term,
    pub steps: usize,
}

/// Rewrites `t` to normal form with the product and coproduct β-rules:
///
/// ```text
/// fst (a, b) → a      case inl v of { inl a -> l ; inr b -> r } → l[a ↦ v]
/// snd (a, b) → b      case inr v of { inl a -> l ; inr b -> r } → r[b ↦ v]
/// ```
///
/// The η-equalities are not used as rewrites.
pub fn normalize_term(t: &Term) -> Term {
    normalize_with_stats(t).term
}

pub fn normalize_with_stats(t: &Term) -> Normalized {
    let mut steps = 0;
    let term = norm(t, &mut steps);
    Normalized { term, steps }
}

fn norm(t: &Term, steps: &mut usize) -> Term {
    match t {
        Term::Var(_) | Term::Unit | Term::Lit(..) => t.clone(),
        Term::Pair(a, b) => Term::pair(norm(a, steps), norm(b, steps)),
        Term::Inl(x) => Term::inl(norm(x, steps)),
        Term::Inr(x) => Term::inr(norm(x, steps)),
        Term::Phi(x) => Term::phi(norm(x, steps)),
        Term::Fst(p) => match norm(p, steps) {
            Term::Pair(a, _) => {
                *steps += 1;
                *a
            }
            p => Term::fst(p),
        },
        Term::Snd(p) => match norm(p, steps) {
            Term::Pair(_, b) => {
                *steps += 1;
                *b
            }
            p => Term::snd(p),
        },
        Term::Case {
            scrutinee,
            left_binder,
            left,
            right_binder,
            right,
        } => match norm(scrutinee, steps) {
            // The substituted term is normal, but substitution can create
            // new redexes in the branch, so the result is normalized again.
            Term::Inl(v) => {
                *steps += 1;
                norm(&left.subst(left_binder, &v), steps)
            }
            Term::Inr(v) => {
                *steps += 1;
                norm(&right.subst(right_binder, &v), steps)
            }
            s => Term::Case {
                scrutinee: Box::new(s),
                left_binder: left_binder.clone(),
                left: Box::new(norm(left, steps)),
                right_binder: right_binder.clone(),
                right: Box::new(norm(right, steps)),
            },
        },
    }
}

/// True when no β-redex occurs anywhere in `t`.
pub fn is_normal(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Unit | Term::Lit(..) => true,
        Term::Fst(p) | Term::Snd(p) if matches!(**p, Term::Pair(..)) => false,
        Term::Case { scrutinee, .. } if matches!(**scrutinee, Term::Inl(_) | Term::Inr(_)) => false,
        Term::Pair(a, b) => is_normal(a) && is_normal(b),
        Term::Inl(x) | Term::Inr(x) | Term::Phi(x) | Term::Fst(x) | Term::Snd(x) => is_normal(x),
        Term::Case {
            scrutinee,
            left,
            right,
            ..
        } => is_normal(scrutinee) && is_normal(left) && is_normal(right),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::migrate::parse_term;

    fn n(text: &str) -> String {
        normalize_term(&parse_term(text).unwrap()).to_string()
    }

    #[test]
    fn projection_of_pair() {
        assert_eq!(n("fst (x, Integer 0)"), "x");
        assert_eq!(n("snd (x, Integer 0)"), "Integer 0");
    }

    #[test]
    fn case_of_injection() {
        assert_eq!(
            n("case inl () of { inl a -> Integer 1 ; inr b -> Integer 2 }"),
            "Integer 1"
        );
        assert_eq!(
            n("case inr x of { inl a -> a ; inr b -> (b, b) }"),
            "(x, x)"
        );
    }

    #[test]
    fn normal_forms_are_fixed() {
        assert_eq!(n("x"), "x");
        let t = parse_term("case x of { inl a -> fst a ; inr b -> snd phi b }").unwrap();
        let r = normalize_with_stats(&t);
        assert_eq!(r.term, t);
        assert_eq!(r.steps, 0);
        assert!(is_normal(&t));
    }

    #[test]
    fn substitution_exposes_new_redexes() {
        let t = parse_term("case inl (x, ()) of { inl a -> fst a ; inr b -> x }").unwrap();
        let r = normalize_with_stats(&t);
        assert_eq!(r.term.to_string(), "x");
        assert_eq!(r.steps, 2);
    }

    #[test]
    fn reduction_under_binders_avoids_capture() {
        // The inner case binds `a`; substituting the outer `a := y` must not be captured.
        let t = parse_term("case inl y of { inl a -> case x of { inl y -> (a, y) ; inr c -> (a, a) } ; inr b -> b }")
            .unwrap();
        let out = normalize_term(&t);
        let Term::Case {
            left_binder, left, ..
        } = &out
        else {
            panic!("{out}")
        };
        assert_ne!(left_binder, "y");
        assert_eq!(**left, Term::pair(Term::var("y"), Term::var(left_binder)));
    }

    #[test]
    fn detects_redexes() {
        assert!(!is_normal(&parse_term("(x, fst (x, x))").unwrap()));
        assert!(!is_normal(
            &parse_term("case inr x of { inl a -> a ; inr b -> b }").unwrap()
        ));
    }
}
