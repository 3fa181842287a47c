//! Schemas and graphs.
//!
//! A [`Graph`] pairs a [`Schema`] (the type of every label) with a finite set
//! of elements, each carrying a label and a value. A graph is well formed when
//! every element's value inhabits the schema type of its label; see
//! [`validate_graph`].

mod validate;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::adt::{parse_type, AdtError, ElementId, Label, PrimRegistry, TypeExpr, Value};

pub use validate::{
    check_primary_key, check_unique_property, validate_graph, Finding, Subject, ValidationReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("label {0} is not in the schema")]
    UnknownLabel(Label),
    #[error("schema of label {label} is {ty}, not a product")]
    NotAProduct { label: Label, ty: TypeExpr },
}

/// Label of otherwise unlabelled vertices.
pub const UNLABELED: &str = "";

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Schema {
    labels: BTreeMap<Label, TypeExpr>,
    registry: PrimRegistry,
}

impl Schema {
    pub fn new(registry: PrimRegistry) -> Self {
        Schema {
            labels: BTreeMap::new(),
            registry,
        }
    }

    /// Builds a schema from `(label, type text)` pairs. Identifiers in the
    /// type texts may refer to any label in the list.
    pub fn parse<'a, I>(registry: PrimRegistry, entries: I) -> Result<Self, (Label, AdtError)>
    where
        I: IntoIterator<Item = (Label, &'a str)>,
    {
        let entries: Vec<(Label, &str)> = entries.into_iter().collect();
        let names: BTreeSet<Label> = entries.iter().map(|(l, _)| l.clone()).collect();
        let mut schema = Schema::new(registry);
        for (label, text) in entries {
            let t = parse_type(text, &names, &schema.registry).map_err(|e| (label.clone(), e))?;
            schema.labels.insert(label, t);
        }
        Ok(schema)
    }

    pub fn with(mut self, label: impl Into<Label>, t: TypeExpr) -> Self {
        self.insert(label, t);
        self
    }

    pub fn insert(&mut self, label: impl Into<Label>, t: TypeExpr) {
        self.labels.insert(label.into(), t);
    }

    pub fn sigma(&self, label: &Label) -> Option<&TypeExpr> {
        self.labels.get(label)
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.labels.contains_key(label)
    }

    pub fn labels(&self) -> impl Iterator<Item = (&Label, &TypeExpr)> {
        self.labels.iter()
    }

    pub fn label_set(&self) -> BTreeSet<Label> {
        self.labels.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn registry(&self) -> &PrimRegistry {
        &self.registry
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    pub label: Label,
    pub value: Value,
}

/// An algebraic property graph. Construction does not validate; call
/// [`validate_graph`] (or [`GraphBuilder::build_validated`]).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    schema: Schema,
    elements: BTreeMap<ElementId, Element>,
}

impl Graph {
    pub fn new(schema: Schema, elements: BTreeMap<ElementId, Element>) -> Self {
        Graph { schema, elements }
    }

    pub fn empty(schema: Schema) -> Self {
        Graph {
            schema,
            elements: BTreeMap::new(),
        }
    }

    pub fn builder(schema: Schema) -> GraphBuilder {
        GraphBuilder {
            graph: Graph::empty(schema),
        }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn sigma(&self, label: &Label) -> Option<&TypeExpr> {
        self.schema.sigma(label)
    }

    pub fn elements(&self) -> impl Iterator<Item = (&ElementId, &Element)> {
        self.elements.iter()
    }

    pub fn element_ids(&self) -> impl Iterator<Item = &ElementId> {
        self.elements.keys()
    }

    pub fn element(&self, id: &ElementId) -> Option<&Element> {
        self.elements.get(id)
    }

    pub fn contains(&self, id: &ElementId) -> bool {
        self.elements.contains_key(id)
    }

    pub fn label_of(&self, id: &ElementId) -> Option<&Label> {
        self.elements.get(id).map(|e| &e.label)
    }

    pub fn value_of(&self, id: &ElementId) -> Option<&Value> {
        self.elements.get(id).map(|e| &e.value)
    }

    /// Elements carrying `label`, in id order.
    pub fn elements_with_label<'a>(
        &'a self,
        label: &'a Label,
    ) -> impl Iterator<Item = (&'a ElementId, &'a Value)> + 'a {
        self.elements
            .iter()
            .filter(move |(_, e)| &e.label == label)
            .map(|(id, e)| (id, &e.value))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn into_parts(self) -> (Schema, BTreeMap<ElementId, Element>) {
        (self.schema, self.elements)
    }
}

/// Single-owner builder; [`GraphBuilder::build`] freezes the graph.
#[derive(Debug)]
pub struct GraphBuilder {
    graph: Graph,
}

impl GraphBuilder {
    pub fn element(
        mut self,
        id: impl Into<ElementId>,
        label: impl Into<Label>,
        value: Value,
    ) -> Self {
        self.insert(id, label, value);
        self
    }

    pub fn insert(&mut self, id: impl Into<ElementId>, label: impl Into<Label>, value: Value) {
        self.graph.elements.insert(
            id.into(),
            Element {
                label: label.into(),
                value,
            },
        );
    }

    pub fn build(self) -> Graph {
        self.graph
    }

    pub fn build_validated(self) -> Result<Graph, ValidationReport> {
        let report = validate_graph(&self.graph);
        if report.is_empty() {
            Ok(self.graph)
        } else {
            Err(report)
        }
    }
}
