use crate::adt::{AdtError, Cursor, Literal, PrimKind, PrimRegistry};

use super::term::Term;

const KEYWORDS: [&str; 7] = ["fst", "snd", "inl", "inr", "phi", "case", "of"];

/// Parses a term using the default primitive types for literals.
pub fn parse_term(text: &str) -> Result<Term, AdtError> {
    parse_term_with(text, &PrimRegistry::default())
}

/// Parses a term; `registry` decides which words start a literal.
///
/// ```text
/// term := NAME | '()' | '(' term ',' term ')' | '(' term ')'
///       | ('fst' | 'snd' | 'inl' | 'inr' | 'phi') term
///       | 'case' term 'of' '{' 'inl' NAME '->' term ';' 'inr' NAME '->' term '}'
///       | PRIM literal
/// ```
pub fn parse_term_with(text: &str, registry: &PrimRegistry) -> Result<Term, AdtError> {
    let mut p = Parser {
        cur: Cursor::new(text),
        registry,
    };
    let t = p.term()?;
    p.cur.skip_ws();
    p.cur.expect_end()?;
    Ok(t)
}

struct Parser<'a, 'r> {
    cur: Cursor<'a>,
    registry: &'r PrimRegistry,
}

fn is_word_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

impl Parser<'_, '_> {
    fn word(&mut self) -> Option<String> {
        self.cur.skip_ws();
        if !self.cur.peek().is_some_and(is_word_start) {
            return None;
        }
        Some(
            self.cur
                .take_while(|c| c.is_ascii_alphanumeric() || c == '_')
                .to_string(),
        )
    }

    fn keyword(&mut self, kw: &str) -> Result<(), AdtError> {
        let pos = self.cur.pos();
        match self.word() {
            Some(w) if w == kw => Ok(()),
            _ => Err(AdtError::Syntax {
                pos,
                message: format!("expected '{kw}'"),
            }),
        }
    }

    fn punct(&mut self, s: &str) -> Result<(), AdtError> {
        self.cur.skip_ws();
        for c in s.chars() {
            self.cur.expect(c)?;
        }
        Ok(())
    }

    fn binder(&mut self) -> Result<String, AdtError> {
        let pos = self.cur.pos();
        match self.word() {
            Some(w) if !KEYWORDS.contains(&w.as_str()) && !self.registry.contains(&w) => Ok(w),
            _ => Err(AdtError::Syntax {
                pos,
                message: "expected a variable name".into(),
            }),
        }
    }

    fn term(&mut self) -> Result<Term, AdtError> {
        self.cur.skip_ws();
        let pos = self.cur.pos();
        match self.cur.peek() {
            Some('(') => {
                self.cur.bump();
                self.cur.skip_ws();
                if self.cur.peek() == Some(')') {
                    self.cur.bump();
                    return Ok(Term::Unit);
                }
                let a = self.term()?;
                self.cur.skip_ws();
                if self.cur.peek() == Some(')') {
                    self.cur.bump();
                    return Ok(a);
                }
                self.punct(",")?;
                let b = self.term()?;
                self.punct(")")?;
                Ok(Term::pair(a, b))
            }
            Some(c) if is_word_start(c) => {
                let w = self.word().expect("word start");
                Ok(match w.as_str() {
                    "fst" => Term::fst(self.term()?),
                    "snd" => Term::snd(self.term()?),
                    "inl" => Term::inl(self.term()?),
                    "inr" => Term::inr(self.term()?),
                    "phi" => Term::phi(self.term()?),
                    "case" => {
                        let s = self.term()?;
                        self.keyword("of")?;
                        self.punct("{")?;
                        self.keyword("inl")?;
                        let a = self.binder()?;
                        self.punct("->")?;
                        let l = self.term()?;
                        self.punct(";")?;
                        self.keyword("inr")?;
                        let b = self.binder()?;
                        self.punct("->")?;
                        let r = self.term()?;
                        self.punct("}")?;
                        Term::case(s, &a, l, &b, r)
                    }
                    "of" => {
                        return Err(AdtError::Syntax {
                            pos,
                            message: "unexpected 'of'".into(),
                        })
                    }
                    _ => match self.registry.kind(&w) {
                        Some(kind) => Term::Lit(w.clone(), self.literal(kind)?),
                        None => Term::Var(w),
                    },
                })
            }
            Some(c) => Err(AdtError::Syntax {
                pos,
                message: format!("unexpected '{c}'"),
            }),
            None => Err(AdtError::Syntax {
                pos,
                message: "unexpected end of term".into(),
            }),
        }
    }

    fn literal(&mut self, kind: PrimKind) -> Result<Literal, AdtError> {
        self.cur.skip_ws();
        let pos = self.cur.pos();
        let lit = self.cur.literal()?;
        let lit = match (kind, lit) {
            (PrimKind::Double, Literal::Int(n)) => Literal::Double(n as f64),
            (_, lit) => lit,
        };
        if kind.admits(&lit) {
            Ok(lit)
        } else {
            Err(AdtError::Syntax {
                pos,
                message: format!("literal {} is not a {}", lit.render(), kind.as_str()),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_mapping_term() {
        let t = parse_term("(snd phi x, (fst phi x, Integer 0))").unwrap();
        let px = || Term::phi(Term::var("x"));
        assert_eq!(
            t,
            Term::pair(
                Term::snd(px()),
                Term::pair(Term::fst(px()), Term::lit("Integer", Literal::Int(0)))
            )
        );
    }

    #[test]
    fn variable() {
        assert_eq!(parse_term("x").unwrap(), Term::var("x"));
    }

    #[test]
    fn sum_swap() {
        let t = parse_term("case x of { inl a -> inr a ; inr b -> inl b }").unwrap();
        assert_eq!(
            t,
            Term::case(
                Term::var("x"),
                "a",
                Term::inr(Term::var("a")),
                "b",
                Term::inl(Term::var("b"))
            )
        );
    }

    #[test]
    fn rendering_round_trips() {
        for text in [
            "(snd phi x, (fst phi x, Integer 0))",
            "case inl () of { inl a -> Integer 1 ; inr b -> Integer 2 }",
            "(String \"a \\\" b\", (Double 1.5, (Boolean true, Nat 3)))",
            "fst snd (x, (x, ()))",
        ] {
            let t = parse_term(text).unwrap();
            assert_eq!(parse_term(&t.to_string()).unwrap(), t, "{text}");
        }
    }

    #[test]
    fn grouping_parentheses() {
        assert_eq!(parse_term("fst (x)").unwrap(), Term::fst(Term::var("x")));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_term("(x, ") {
            Err(AdtError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_term("case x of { inl a -> a }").is_err());
        assert!(parse_term("Nat -1").is_err());
        assert!(parse_term("x y").is_err());
    }
}
