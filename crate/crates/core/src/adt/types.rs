//! Type expressions and their concrete syntax.
//!
//! ```text
//! type := prod ('+' type)?
//! prod := atom ('*' prod)?
//! atom := '0' | '1' | IDENT | '`' id '`' | '(' type ')'
//! ```
//!
//! Both operators associate to the right and `*` binds tighter than `+`.
//! An IDENT resolves to a label when the schema has one of that name, and to a
//! primitive otherwise. Labels whose rendering is not an IDENT (structured
//! ids, the empty label) are written between backticks.

use std::collections::BTreeSet;
use std::fmt;

use super::ident::{Cursor, Label};
use super::value::PrimRegistry;
use super::AdtError;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeExpr {
    Zero,
    One,
    Sum(Box<TypeExpr>, Box<TypeExpr>),
    Prod(Box<TypeExpr>, Box<TypeExpr>),
    Prim(String),
    Lbl(Label),
}

impl TypeExpr {
    pub fn sum(a: TypeExpr, b: TypeExpr) -> TypeExpr {
        TypeExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: TypeExpr, b: TypeExpr) -> TypeExpr {
        TypeExpr::Prod(Box::new(a), Box::new(b))
    }

    pub fn prim(name: &str) -> TypeExpr {
        TypeExpr::Prim(name.to_string())
    }

    pub fn lbl(l: impl Into<Label>) -> TypeExpr {
        TypeExpr::Lbl(l.into())
    }

    /// Right-nested product of the given factors; the empty product is `1`.
    pub fn product_of(items: impl IntoIterator<Item = TypeExpr>) -> TypeExpr {
        let mut items: Vec<TypeExpr> = items.into_iter().collect();
        let mut acc = items.pop().unwrap_or(TypeExpr::One);
        while let Some(t) = items.pop() {
            acc = TypeExpr::prod(t, acc);
        }
        acc
    }

    /// Labels mentioned anywhere in the type, in order of first occurrence.
    pub fn labels(&self) -> Vec<&Label> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels<'a>(&'a self, out: &mut Vec<&'a Label>) {
        match self {
            TypeExpr::Zero | TypeExpr::One | TypeExpr::Prim(_) => {}
            TypeExpr::Sum(a, b) | TypeExpr::Prod(a, b) => {
                a.collect_labels(out);
                b.collect_labels(out);
            }
            TypeExpr::Lbl(l) => {
                if !out.contains(&l) {
                    out.push(l)
                }
            }
        }
    }

    pub fn prims(&self) -> Vec<&str> {
        match self {
            TypeExpr::Prim(p) => vec![p.as_str()],
            TypeExpr::Sum(a, b) | TypeExpr::Prod(a, b) => {
                let mut v = a.prims();
                v.extend(b.prims());
                v
            }
            _ => Vec::new(),
        }
    }

    pub fn is_label_free(&self) -> bool {
        match self {
            TypeExpr::Lbl(_) => false,
            TypeExpr::Sum(a, b) | TypeExpr::Prod(a, b) => a.is_label_free() && b.is_label_free(),
            _ => true,
        }
    }

    /// Number of constructors in the tree.
    pub fn size(&self) -> usize {
        match self {
            TypeExpr::Sum(a, b) | TypeExpr::Prod(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a type expression. `labels` is the set of schema label names that
/// plain identifiers may refer to.
pub fn parse_type(
    text: &str,
    labels: &BTreeSet<Label>,
    registry: &PrimRegistry,
) -> Result<TypeExpr, AdtError> {
    let mut p = TypeParser {
        cur: Cursor::new(text),
        labels,
        registry,
    };
    let t = p.sum()?;
    p.cur.skip_ws();
    p.cur.expect_end()?;
    Ok(t)
}

struct TypeParser<'a> {
    cur: Cursor<'a>,
    labels: &'a BTreeSet<Label>,
    registry: &'a PrimRegistry,
}

impl TypeParser<'_> {
    fn sum(&mut self) -> Result<TypeExpr, AdtError> {
        let left = self.prod()?;
        self.cur.skip_ws();
        if self.cur.peek() == Some('+') {
            self.cur.bump();
            let right = self.sum()?;
            return Ok(TypeExpr::sum(left, right));
        }
        Ok(left)
    }

    fn prod(&mut self) -> Result<TypeExpr, AdtError> {
        let left = self.atom()?;
        self.cur.skip_ws();
        if self.cur.peek() == Some('*') {
            self.cur.bump();
            let right = self.prod()?;
            return Ok(TypeExpr::prod(left, right));
        }
        Ok(left)
    }

    fn atom(&mut self) -> Result<TypeExpr, AdtError> {
        self.cur.skip_ws();
        match self.cur.peek() {
            Some('0') => {
                self.cur.bump();
                Ok(TypeExpr::Zero)
            }
            Some('1') => {
                self.cur.bump();
                Ok(TypeExpr::One)
            }
            Some('(') => {
                self.cur.bump();
                let t = self.sum()?;
                self.cur.skip_ws();
                self.cur.expect(')')?;
                Ok(t)
            }
            Some('`') => {
                self.cur.bump();
                let start = self.cur.pos();
                let id = self.cur.ident()?;
                self.cur.expect('`')?;
                if !self.labels.contains(&id) {
                    return Err(AdtError::UnknownIdent {
                        pos: start,
                        name: id.to_string(),
                    });
                }
                Ok(TypeExpr::Lbl(id))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.cur.pos();
                let mut name = String::new();
                while let Some(c) = self
                    .cur
                    .peek()
                    .filter(|c| c.is_ascii_alphanumeric() || *c == '_')
                {
                    name.push(c);
                    self.cur.bump();
                }
                let as_label = Label::Atom(name.clone());
                if self.labels.contains(&as_label) {
                    Ok(TypeExpr::Lbl(as_label))
                } else if self.registry.contains(&name) {
                    Ok(TypeExpr::Prim(name))
                } else {
                    Err(AdtError::UnknownIdent { pos: start, name })
                }
            }
            Some(c) => Err(self.cur.error(format!("unexpected '{c}'"))),
            None => Err(self.cur.error("unexpected end of input")),
        }
    }
}

/// Renders with the fewest parentheses that still parse back to the same tree.
pub fn render_type(t: &TypeExpr) -> String {
    t.to_string()
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Zero => f.write_str("0"),
            TypeExpr::One => f.write_str("1"),
            TypeExpr::Prim(p) => f.write_str(p),
            TypeExpr::Lbl(Label::Atom(name)) if is_ident(name) => f.write_str(name),
            TypeExpr::Lbl(l) => write!(f, "`{l}`"),
            TypeExpr::Sum(a, b) => {
                // a sum on the left needs parentheses; on the right it is the default nesting
                if matches!(**a, TypeExpr::Sum(..)) {
                    write!(f, "({a}) + {b}")
                } else {
                    write!(f, "{a} + {b}")
                }
            }
            TypeExpr::Prod(a, b) => {
                let left = match **a {
                    TypeExpr::Sum(..) | TypeExpr::Prod(..) => format!("({a})"),
                    _ => a.to_string(),
                };
                let right = match **b {
                    TypeExpr::Sum(..) => format!("({b})"),
                    _ => b.to_string(),
                };
                write!(f, "{left} * {right}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(names: &[&str]) -> BTreeSet<Label> {
        names.iter().map(|n| Label::atom(*n)).collect()
    }

    #[test]
    fn knows_schema() {
        let t = parse_type(
            "Person * Person",
            &labels(&["Person"]),
            &PrimRegistry::default(),
        )
        .unwrap();
        assert_eq!(
            t,
            TypeExpr::prod(TypeExpr::lbl("Person"), TypeExpr::lbl("Person"))
        );
    }

    #[test]
    fn unit_atom() {
        assert_eq!(
            parse_type("1", &labels(&[]), &PrimRegistry::default()).unwrap(),
            TypeExpr::One
        );
    }

    #[test]
    fn trip_schema_is_right_nested() {
        let t = parse_type(
            "User*User*(1+PlaceEvent)*(1+PlaceEvent)",
            &labels(&["User", "PlaceEvent"]),
            &PrimRegistry::default(),
        )
        .unwrap();
        let opt = TypeExpr::sum(TypeExpr::One, TypeExpr::lbl("PlaceEvent"));
        let expected = TypeExpr::product_of([
            TypeExpr::lbl("User"),
            TypeExpr::lbl("User"),
            opt.clone(),
            opt,
        ]);
        assert_eq!(t, expected);
        assert_eq!(
            t.to_string(),
            "User * User * (1 + PlaceEvent) * (1 + PlaceEvent)"
        );
    }

    #[test]
    fn render_examples() {
        assert_eq!(
            render_type(&TypeExpr::prod(
                TypeExpr::lbl("Person"),
                TypeExpr::prim("String")
            )),
            "Person * String"
        );
        assert_eq!(render_type(&TypeExpr::Zero), "0");
        assert_eq!(
            render_type(&TypeExpr::sum(TypeExpr::One, TypeExpr::lbl("PlaceEvent"))),
            "1 + PlaceEvent"
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let reg = PrimRegistry::default();
        let t = parse_type("1 + 1 * 0", &labels(&[]), &reg).unwrap();
        assert_eq!(
            t,
            TypeExpr::sum(TypeExpr::One, TypeExpr::prod(TypeExpr::One, TypeExpr::Zero))
        );
        let left_nested =
            TypeExpr::prod(TypeExpr::prod(TypeExpr::One, TypeExpr::One), TypeExpr::One);
        assert_eq!(left_nested.to_string(), "(1 * 1) * 1");
        assert_eq!(
            parse_type("(1 * 1) * 1", &labels(&[]), &reg).unwrap(),
            left_nested
        );
    }

    #[test]
    fn structured_labels_use_backticks() {
        let l = Label::pair("Person".into(), "Org".into());
        let t = TypeExpr::prod(TypeExpr::Lbl(l.clone()), TypeExpr::Lbl(Label::atom("")));
        let text = t.to_string();
        assert_eq!(text, "`(Person,Org)` * `\"\"`");
        let set: BTreeSet<Label> = [l, Label::atom("")].into_iter().collect();
        assert_eq!(
            parse_type(&text, &set, &PrimRegistry::default()).unwrap(),
            t
        );
    }

    #[test]
    fn label_shadows_primitive() {
        let t = parse_type("String", &labels(&["String"]), &PrimRegistry::default()).unwrap();
        assert_eq!(t, TypeExpr::lbl("String"));
    }

    #[test]
    fn errors() {
        let reg = PrimRegistry::default();
        match parse_type("Person * Nope", &labels(&["Person"]), &reg) {
            Err(AdtError::UnknownIdent { pos, name }) => {
                assert_eq!(pos, 9);
                assert_eq!(name, "Nope");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_type("1 +", &labels(&[]), &reg),
            Err(AdtError::Syntax { .. })
        ));
        assert!(matches!(
            parse_type("(1", &labels(&[]), &reg),
            Err(AdtError::Syntax { .. })
        ));
        assert!(matches!(
            parse_type("1 1", &labels(&[]), &reg),
            Err(AdtError::Syntax { .. })
        ));
    }
}
