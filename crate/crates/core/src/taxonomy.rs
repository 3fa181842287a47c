//! Shape-based classification of schema labels as vertices, edges,
//! properties, aliases, tags and hyperelements.
//!
//! Rules are tried in a fixed order and the first match wins:
//!
//! | kind            | shape of `σ(l)`                                        |
//! |-----------------|--------------------------------------------------------|
//! | Vertex          | `1`                                                    |
//! | DataTypeAlias   | no labels, once aliases are unfolded                   |
//! | Tag(k)          | a single label of kind `k`                             |
//! | Edge            | `v₁ * v₂` with both vertices                           |
//! | HigherOrderEdge | `e * v` with `e` an edge or higher-order edge          |
//! | VertexProperty  | `v * t` with `v` a vertex                              |
//! | EdgeProperty    | `e * t` with `e` an edge or higher-order edge          |
//! | MetaProperty    | `p * t` with `p` a property                            |
//! | Hyperelement    | anything else, including labels on reference cycles    |
//!
//! In the property rules, strict mode requires `t` to be a primitive type.
//! Generalized mode accepts any `t` that is label-free after unfolding
//! aliases, which makes e.g. `Place * UnixTimeSeconds` a vertex property.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::adt::{Label, TypeExpr};
use crate::graph::Schema;

/// Environment variable selecting the mode: `1` strict, `0` generalized.
pub const STRICT_ENV: &str = "APG_STRICT_TAXONOMY";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Classification {
    Vertex,
    Edge,
    HigherOrderEdge,
    VertexProperty,
    EdgeProperty,
    MetaProperty,
    DataTypeAlias,
    Tag(Box<Classification>),
    Hyperelement,
}

impl Classification {
    pub fn is_property(&self) -> bool {
        matches!(
            self,
            Classification::VertexProperty
                | Classification::EdgeProperty
                | Classification::MetaProperty
        )
    }

    fn is_edge_like(&self) -> bool {
        matches!(self, Classification::Edge | Classification::HigherOrderEdge)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Vertex => f.write_str("Vertex"),
            Classification::Edge => f.write_str("Edge"),
            Classification::HigherOrderEdge => f.write_str("HigherOrderEdge"),
            Classification::VertexProperty => f.write_str("VertexProperty"),
            Classification::EdgeProperty => f.write_str("EdgeProperty"),
            Classification::MetaProperty => f.write_str("MetaProperty"),
            Classification::DataTypeAlias => f.write_str("DataTypeAlias"),
            Classification::Tag(k) => write!(f, "Tag({k})"),
            Classification::Hyperelement => f.write_str("Hyperelement"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Strict,
    Generalized,
}

impl Mode {
    /// Reads [`STRICT_ENV`]; unset or unrecognized values give strict mode.
    pub fn from_env() -> Mode {
        match std::env::var(STRICT_ENV).as_deref() {
            Ok("0") => Mode::Generalized,
            _ => Mode::Strict,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TaxonomyError {
    #[error("label {0} is not in the schema")]
    UnknownLabel(Label),
}

pub fn classify_label(s: &Schema, l: &Label) -> Result<Classification, TaxonomyError> {
    classify_label_with(s, l, Mode::Strict)
}

pub fn classify_label_with(
    s: &Schema,
    l: &Label,
    mode: Mode,
) -> Result<Classification, TaxonomyError> {
    if !s.contains(l) {
        return Err(TaxonomyError::UnknownLabel(l.clone()));
    }
    Ok(Classifier::new(s, mode).kind(l))
}

pub fn classify_graph(s: &Schema) -> BTreeMap<Label, Classification> {
    classify_graph_with(s, Mode::Strict)
}

pub fn classify_graph_with(s: &Schema, mode: Mode) -> BTreeMap<Label, Classification> {
    let mut c = Classifier::new(s, mode);
    s.labels().map(|(l, _)| (l.clone(), c.kind(l))).collect()
}

struct Classifier<'s> {
    schema: &'s Schema,
    mode: Mode,
    aliases: BTreeSet<Label>,
    cyclic: BTreeSet<Label>,
    memo: BTreeMap<Label, Classification>,
}

impl<'s> Classifier<'s> {
    fn new(schema: &'s Schema, mode: Mode) -> Self {
        Classifier {
            schema,
            mode,
            aliases: aliases(schema),
            cyclic: cyclic(schema),
            memo: BTreeMap::new(),
        }
    }

    /// Label-free once aliases are unfolded.
    fn unfolds_label_free(&self, t: &TypeExpr) -> bool {
        t.labels().into_iter().all(|l| self.aliases.contains(l))
    }

    fn property_payload(&self, t: &TypeExpr) -> bool {
        match self.mode {
            Mode::Strict => matches!(t, TypeExpr::Prim(_)),
            Mode::Generalized => self.unfolds_label_free(t),
        }
    }

    fn kind(&mut self, l: &Label) -> Classification {
        if let Some(k) = self.memo.get(l) {
            return k.clone();
        }
        let k = self.compute(l);
        self.memo.insert(l.clone(), k.clone());
        k
    }

    fn compute(&mut self, l: &Label) -> Classification {
        use Classification::*;
        let Some(t) = self.schema.sigma(l) else {
            return Hyperelement;
        };
        if *t == TypeExpr::One {
            return Vertex;
        }
        if self.aliases.contains(l) {
            return DataTypeAlias;
        }
        // Every rule below looks at the kinds of referenced labels, which is
        // only well founded off reference cycles.
        if self.cyclic.contains(l) {
            return Hyperelement;
        }
        match t {
            TypeExpr::Lbl(l1) => Tag(Box::new(self.kind(l1))),
            TypeExpr::Prod(a, b) => {
                let TypeExpr::Lbl(l1) = &**a else {
                    return Hyperelement;
                };
                let k1 = self.kind(l1);
                let k2 = match &**b {
                    TypeExpr::Lbl(l2) => Some(self.kind(l2)),
                    _ => None,
                };
                if k1 == Vertex && k2 == Some(Vertex) {
                    Edge
                } else if k1.is_edge_like() && k2 == Some(Vertex) {
                    HigherOrderEdge
                } else if !self.property_payload(b) {
                    Hyperelement
                } else if k1 == Vertex {
                    VertexProperty
                } else if k1.is_edge_like() {
                    EdgeProperty
                } else if k1.is_property() {
                    MetaProperty
                } else {
                    Hyperelement
                }
            }
            _ => Hyperelement,
        }
    }
}

/// Least set of labels whose type is not `1` and mentions only labels
/// already in the set.
fn aliases(s: &Schema) -> BTreeSet<Label> {
    let mut out = BTreeSet::new();
    loop {
        let before = out.len();
        for (l, t) in s.labels() {
            if *t != TypeExpr::One && t.labels().into_iter().all(|l2| out.contains(l2)) {
                out.insert(l.clone());
            }
        }
        if out.len() == before {
            return out;
        }
    }
}

/// Labels that can reach themselves through label references.
fn cyclic(s: &Schema) -> BTreeSet<Label> {
    let deps: BTreeMap<&Label, Vec<&Label>> = s.labels().map(|(l, t)| (l, t.labels())).collect();
    let mut out = BTreeSet::new();
    for &start in deps.keys() {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<&Label> = deps[start].clone();
        while let Some(l) = stack.pop() {
            if l == start {
                out.insert(start.clone());
                break;
            }
            if seen.insert(l) {
                stack.extend(deps.get(l).into_iter().flatten());
            }
        }
    }
    out
}
