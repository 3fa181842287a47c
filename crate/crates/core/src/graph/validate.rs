use std::collections::HashMap;
use std::fmt;

use super::{Graph, GraphError};
use crate::adt::{check_value, render_path, ElementId, Label, Step, TypeExpr, Value};

/// What a finding is about.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Subject {
    Label(Label),
    Element(ElementId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub subject: Subject,
    /// Position inside the element's value, when the finding is about a value.
    pub path: Vec<Step>,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.subject {
            Subject::Label(l) => write!(f, "label {l}")?,
            Subject::Element(e) => write!(f, "element {e}")?,
        }
        if !self.path.is_empty() {
            write!(f, " {}", render_path(&self.path))?;
        }
        write!(f, ": {}", self.message)
    }
}

/// Findings of a validation pass; empty exactly when the subject is valid.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.findings.len()
    }

    pub fn push(&mut self, subject: Subject, path: Vec<Step>, message: impl Into<String>) {
        self.findings.push(Finding {
            subject,
            path,
            message: message.into(),
        });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.findings.extend(other.findings);
    }

    pub fn about_element(&self, id: &ElementId) -> impl Iterator<Item = &Finding> {
        let subject = Subject::Element(id.clone());
        self.findings.iter().filter(move |f| f.subject == subject)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for finding in &self.findings {
            writeln!(f, "{finding}")?;
        }
        Ok(())
    }
}

/// Checks the schema and the conformance of every element.
pub fn validate_graph(g: &Graph) -> ValidationReport {
    let mut report = ValidationReport::default();
    let schema = g.schema();
    let registry = schema.registry();

    for (label, t) in schema.labels() {
        let subject = || Subject::Label(label.clone());
        if let Some(name) = label.as_atom() {
            if registry.contains(name) {
                report.push(
                    subject(),
                    vec![],
                    format!("label shadows primitive type {name}"),
                );
            }
        }
        for l in t.labels() {
            if !schema.contains(l) {
                report.push(
                    subject(),
                    vec![],
                    format!("schema refers to unknown label {l}"),
                );
            }
        }
        for p in t.prims() {
            if !registry.contains(p) {
                report.push(
                    subject(),
                    vec![],
                    format!("schema refers to unknown primitive type {p}"),
                );
            }
        }
    }

    for (id, el) in g.elements() {
        let Some(t) = schema.sigma(&el.label) else {
            report.push(
                Subject::Element(id.clone()),
                vec![],
                format!("label {} is not in the schema", el.label),
            );
            continue;
        };
        if let Err(m) = check_value(&el.value, t, registry, |e| g.label_of(e)) {
            report.push(Subject::Element(id.clone()), m.path.clone(), m.to_string());
        }
    }
    report
}

/// Pairs of distinct elements of `label` whose values coincide. An empty
/// result means the uniqueness constraint holds.
pub fn check_unique_property(
    g: &Graph,
    label: &Label,
) -> Result<Vec<(ElementId, ElementId)>, GraphError> {
    if !g.schema().contains(label) {
        return Err(GraphError::UnknownLabel(label.clone()));
    }
    Ok(colliding_pairs(g.elements_with_label(label)))
}

/// Pairs of distinct elements of `label` sharing a first component. The
/// label's schema must be a product.
pub fn check_primary_key(
    g: &Graph,
    label: &Label,
) -> Result<Vec<(ElementId, ElementId)>, GraphError> {
    match g.sigma(label) {
        None => Err(GraphError::UnknownLabel(label.clone())),
        Some(TypeExpr::Prod(..)) => Ok(colliding_pairs(g.elements_with_label(label).filter_map(
            |(id, v)| match v {
                Value::Pair(k, _) => Some((id, k.as_ref())),
                _ => None,
            },
        ))),
        Some(t) => Err(GraphError::NotAProduct {
            label: label.clone(),
            ty: t.clone(),
        }),
    }
}

fn colliding_pairs<'a>(
    items: impl Iterator<Item = (&'a ElementId, &'a Value)>,
) -> Vec<(ElementId, ElementId)> {
    let mut seen: HashMap<&Value, Vec<&ElementId>> = HashMap::new();
    let mut out = Vec::new();
    for (id, key) in items {
        let bucket = seen.entry(key).or_default();
        out.extend(bucket.iter().map(|prev| ((*prev).clone(), id.clone())));
        bucket.push(id);
    }
    out.sort();
    out
}
