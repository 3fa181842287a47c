//! Primitive registry, literals and annotation-free values.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::ident::Ident;
use super::AdtError;

/// Value domain of a primitive type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimKind {
    Text,
    Nat,
    Integer,
    Double,
    Boolean,
}

impl PrimKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PrimKind::Text => "text",
            PrimKind::Nat => "nat",
            PrimKind::Integer => "integer",
            PrimKind::Double => "double",
            PrimKind::Boolean => "boolean",
        }
    }

    pub fn from_str_opt(s: &str) -> Option<Self> {
        Some(match s {
            "text" => PrimKind::Text,
            "nat" => PrimKind::Nat,
            "integer" => PrimKind::Integer,
            "double" => PrimKind::Double,
            "boolean" => PrimKind::Boolean,
            _ => return None,
        })
    }

    /// Whether `lit` lies in this domain.
    pub fn admits(self, lit: &Literal) -> bool {
        matches!(
            (self, lit),
            (PrimKind::Text, Literal::Text(_))
                | (PrimKind::Integer, Literal::Int(_))
                | (PrimKind::Double, Literal::Double(_))
                | (PrimKind::Boolean, Literal::Bool(_))
        ) || matches!((self, lit), (PrimKind::Nat, Literal::Int(n)) if *n >= 0)
    }
}

/// Names that cannot be used for primitive types because the value and term
/// syntaxes give them a meaning of their own.
const RESERVED: &[&str] = &["inl", "inr", "fst", "snd", "phi", "case", "of", "x"];

/// The set of primitive types and their value domains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimRegistry {
    prims: BTreeMap<String, PrimKind>,
}

impl Default for PrimRegistry {
    fn default() -> Self {
        let prims = [
            ("String", PrimKind::Text),
            ("Nat", PrimKind::Nat),
            ("Integer", PrimKind::Integer),
            ("Double", PrimKind::Double),
            ("Boolean", PrimKind::Boolean),
        ]
        .into_iter()
        .map(|(n, k)| (n.to_string(), k))
        .collect();
        PrimRegistry { prims }
    }
}

impl PrimRegistry {
    pub fn empty() -> Self {
        PrimRegistry {
            prims: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, name: &str, kind: PrimKind) -> Result<(), AdtError> {
        if !super::types::is_ident(name) || RESERVED.contains(&name) {
            return Err(AdtError::BadPrimName(name.to_string()));
        }
        if self.prims.contains_key(name) {
            return Err(AdtError::DuplicatePrim(name.to_string()));
        }
        self.prims.insert(name.to_string(), kind);
        Ok(())
    }

    pub fn kind(&self, name: &str) -> Option<PrimKind> {
        self.prims.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.prims.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, PrimKind)> {
        self.prims.iter().map(|(n, k)| (n.as_str(), *k))
    }

    pub fn is_default(&self) -> bool {
        *self == PrimRegistry::default()
    }

    /// Union of two registries; a name bound to different domains is an error.
    pub fn merged(&self, other: &PrimRegistry) -> Result<PrimRegistry, AdtError> {
        let mut out = self.clone();
        for (name, kind) in other.iter() {
            match out.prims.get(name) {
                Some(k) if *k != kind => return Err(AdtError::DuplicatePrim(name.to_string())),
                Some(_) => {}
                None => {
                    out.prims.insert(name.to_string(), kind);
                }
            }
        }
        Ok(out)
    }
}

/// A primitive literal. Nat and Integer share the `Int` representation; the
/// primitive name carried next to the literal tells them apart.
#[derive(Clone, Debug)]
pub enum Literal {
    Text(String),
    Int(i64),
    Double(f64),
    Bool(bool),
}

impl Literal {
    fn rank(&self) -> u8 {
        match self {
            Literal::Text(_) => 0,
            Literal::Int(_) => 1,
            Literal::Double(_) => 2,
            Literal::Bool(_) => 3,
        }
    }

    /// Self-delimiting text form: JSON string, integer, float with `.` or `e`, or bool.
    pub fn render(&self) -> String {
        match self {
            Literal::Text(s) => serde_json::Value::String(s.clone()).to_string(),
            Literal::Int(n) => n.to_string(),
            Literal::Double(d) => format!("{d:?}"),
            Literal::Bool(b) => b.to_string(),
        }
    }
}

// Doubles compare bit-exactly so that Eq, Ord and Hash agree.
impl PartialEq for Literal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Literal {}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Literal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Literal::Text(a), Literal::Text(b)) => a.cmp(b),
            (Literal::Int(a), Literal::Int(b)) => a.cmp(b),
            (Literal::Double(a), Literal::Double(b)) => a.total_cmp(b),
            (Literal::Bool(a), Literal::Bool(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl Hash for Literal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank().hash(state);
        match self {
            Literal::Text(s) => s.hash(state),
            Literal::Int(n) => n.hash(state),
            Literal::Double(d) => d.to_bits().hash(state),
            Literal::Bool(b) => b.hash(state),
        }
    }
}

/// A value term. Injections carry no type annotation; the expected type is
/// supplied when a value is checked.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Unit,
    Inl(Box<Value>),
    Inr(Box<Value>),
    Pair(Box<Value>, Box<Value>),
    Prim(String, Literal),
    Ref(Ident),
}

impl Value {
    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Box::new(a), Box::new(b))
    }

    pub fn inl(v: Value) -> Value {
        Value::Inl(Box::new(v))
    }

    pub fn inr(v: Value) -> Value {
        Value::Inr(Box::new(v))
    }

    pub fn reference(id: impl Into<Ident>) -> Value {
        Value::Ref(id.into())
    }

    pub fn string(s: &str) -> Value {
        Value::Prim("String".into(), Literal::Text(s.into()))
    }

    pub fn nat(n: i64) -> Value {
        Value::Prim("Nat".into(), Literal::Int(n))
    }

    pub fn integer(n: i64) -> Value {
        Value::Prim("Integer".into(), Literal::Int(n))
    }

    pub fn double(d: f64) -> Value {
        Value::Prim("Double".into(), Literal::Double(d))
    }

    pub fn boolean(b: bool) -> Value {
        Value::Prim("Boolean".into(), Literal::Bool(b))
    }

    /// Right-nested tuple: `tuple([a, b, c]) = (a, (b, c))`.
    pub fn tuple(items: impl IntoIterator<Item = Value>) -> Value {
        let mut items: Vec<Value> = items.into_iter().collect();
        let mut acc = items.pop().unwrap_or(Value::Unit);
        while let Some(v) = items.pop() {
            acc = Value::pair(v, acc);
        }
        acc
    }

    /// Every element reference in the value, left to right.
    pub fn refs(&self) -> Vec<&Ident> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs<'a>(&'a self, out: &mut Vec<&'a Ident>) {
        match self {
            Value::Unit | Value::Prim(..) => {}
            Value::Inl(v) | Value::Inr(v) => v.collect_refs(out),
            Value::Pair(a, b) => {
                a.collect_refs(out);
                b.collect_refs(out);
            }
            Value::Ref(e) => out.push(e),
        }
    }

    /// Number of leaves (unit, primitive, reference).
    pub fn leaf_count(&self) -> usize {
        match self {
            Value::Unit | Value::Prim(..) | Value::Ref(_) => 1,
            Value::Inl(v) | Value::Inr(v) => v.leaf_count(),
            Value::Pair(a, b) => a.leaf_count() + b.leaf_count(),
        }
    }

    /// Follow an access path; `None` when the value has a different shape.
    pub fn at_path(&self, path: &[Step]) -> Option<&Value> {
        let mut cur = self;
        for step in path {
            cur = match (step, cur) {
                (Step::Fst, Value::Pair(a, _)) => a,
                (Step::Snd, Value::Pair(_, b)) => b,
                (Step::Inl, Value::Inl(v)) => v,
                (Step::Inr, Value::Inr(v)) => v,
                _ => return None,
            };
        }
        Some(cur)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => f.write_str("()"),
            Value::Inl(v) => write!(f, "inl({v})"),
            Value::Inr(v) => write!(f, "inr({v})"),
            Value::Pair(a, b) => write!(f, "({a},{b})"),
            Value::Prim(name, lit) => write!(f, "{name}({})", lit.render()),
            Value::Ref(e) => write!(f, "@{e}"),
        }
    }
}

/// One step of an access path into a value or type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Fst,
    Snd,
    Inl,
    Inr,
}

impl Step {
    pub fn as_str(self) -> &'static str {
        match self {
            Step::Fst => "fst",
            Step::Snd => "snd",
            Step::Inl => "inl",
            Step::Inr => "inr",
        }
    }

    pub fn parse(s: &str) -> Option<Step> {
        Some(match s {
            "fst" => Step::Fst,
            "snd" => Step::Snd,
            "inl" => Step::Inl,
            "inr" => Step::Inr,
            _ => return None,
        })
    }
}

/// Renders a path as `.fst.snd`; the root path renders empty.
pub fn render_path(path: &[Step]) -> String {
    path.iter().map(|s| format!(".{}", s.as_str())).collect()
}

/// Parses `fst.snd` (or `.fst.snd`); the empty string is the root path.
pub fn parse_path(text: &str) -> Result<Vec<Step>, AdtError> {
    let text = text.trim().trim_start_matches('.');
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split('.')
        .map(|s| Step::parse(s).ok_or_else(|| AdtError::BadPath(text.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nat_domain_rejects_negative() {
        assert!(PrimKind::Nat.admits(&Literal::Int(0)));
        assert!(!PrimKind::Nat.admits(&Literal::Int(-1)));
        assert!(PrimKind::Integer.admits(&Literal::Int(-1)));
        assert!(!PrimKind::Double.admits(&Literal::Int(1)));
    }

    #[test]
    fn default_registry_has_exactly_five() {
        let r = PrimRegistry::default();
        let names: Vec<_> = r.iter().map(|(n, _)| n).collect();
        assert_eq!(names, ["Boolean", "Double", "Integer", "Nat", "String"]);
    }

    #[test]
    fn reserved_and_duplicate_prim_names() {
        let mut r = PrimRegistry::default();
        assert!(r.insert("inl", PrimKind::Text).is_err());
        assert!(r.insert("String", PrimKind::Text).is_err());
        assert!(r.insert("Latitude", PrimKind::Double).is_ok());
    }

    #[test]
    fn double_equality_is_bitwise() {
        assert_eq!(Literal::Double(37.78), Literal::Double(37.78));
        assert_ne!(Literal::Double(0.0), Literal::Double(-0.0));
    }

    #[test]
    fn tuple_is_right_nested() {
        let v = Value::tuple([
            Value::string("US"),
            Value::string("CA"),
            Value::string("6TRJ244"),
        ]);
        assert_eq!(
            v,
            Value::pair(
                Value::string("US"),
                Value::pair(Value::string("CA"), Value::string("6TRJ244"))
            )
        );
        assert_eq!(
            v.to_string(),
            r#"(String("US"),(String("CA"),String("6TRJ244")))"#
        );
    }

    #[test]
    fn path_round_trip() {
        let p = parse_path("snd.snd.fst.inr").unwrap();
        assert_eq!(render_path(&p), ".snd.snd.fst.inr");
        assert!(parse_path("").unwrap().is_empty());
        assert!(parse_path("fst.bogus").is_err());
    }
}
