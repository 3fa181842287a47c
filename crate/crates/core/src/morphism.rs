//! Morphisms between graphs.
//!
//! A morphism is a label map and an element map that commute with the
//! labelling: `on_labels(λ₁(e)) = λ₂(on_elements(e))`. Nothing more is
//! required of a plain morphism; values may change arbitrarily. The
//! stronger conditions used by integration and migration are separate
//! predicates: [`check_sigma_preserving`] (schemas are carried along the
//! label map) and [`check_upsilon_natural`] (values are carried along both
//! maps).

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::adt::{transport_type, transport_value, ElementId, Label, TypeExpr, Value};
use crate::format::MorphismMaps;
use crate::graph::{Graph, Subject, ValidationReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MorphismError {
    #[error(
        "morphisms are not composable: the target of the first is not the source of the second"
    )]
    NotComposable,
    #[error("morphisms do not share a source graph")]
    DifferentSources,
    #[error("morphisms do not share a target graph")]
    DifferentTargets,
    #[error("morphisms are not parallel")]
    NotParallel,
    #[error("morphism does not preserve schemas")]
    NotSigmaPreserving,
    #[error("morphism is not a valid morphism:\n{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Morphism {
    pub source: Arc<Graph>,
    pub target: Arc<Graph>,
    pub on_labels: BTreeMap<Label, Label>,
    pub on_elements: BTreeMap<ElementId, ElementId>,
}

fn same_graph(a: &Arc<Graph>, b: &Arc<Graph>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Morphism {
    pub fn new(
        source: Arc<Graph>,
        target: Arc<Graph>,
        on_labels: BTreeMap<Label, Label>,
        on_elements: BTreeMap<ElementId, ElementId>,
    ) -> Self {
        Morphism {
            source,
            target,
            on_labels,
            on_elements,
        }
    }

    pub fn from_maps(source: Arc<Graph>, target: Arc<Graph>, maps: MorphismMaps) -> Self {
        Morphism::new(source, target, maps.on_labels, maps.on_elements)
    }

    pub fn identity(g: Arc<Graph>) -> Self {
        let on_labels = g
            .schema()
            .labels()
            .map(|(l, _)| (l.clone(), l.clone()))
            .collect();
        let on_elements = g.element_ids().map(|e| (e.clone(), e.clone())).collect();
        Morphism {
            source: g.clone(),
            target: g,
            on_labels,
            on_elements,
        }
    }

    pub fn maps(&self) -> MorphismMaps {
        MorphismMaps {
            on_labels: self.on_labels.clone(),
            on_elements: self.on_elements.clone(),
        }
    }

    pub fn label(&self, l: &Label) -> Option<&Label> {
        self.on_labels.get(l)
    }

    pub fn element(&self, e: &ElementId) -> Option<&ElementId> {
        self.on_elements.get(e)
    }

    /// True when both morphisms have the same label and element maps,
    /// regardless of their endpoints.
    pub fn same_maps(&self, other: &Morphism) -> bool {
        self.on_labels == other.on_labels && self.on_elements == other.on_elements
    }

    pub fn is_bijective(&self) -> bool {
        let labels: BTreeSet<&Label> = self.on_labels.values().collect();
        let elements: BTreeSet<&ElementId> = self.on_elements.values().collect();
        self.on_labels.len() == self.source.schema().len()
            && self.on_elements.len() == self.source.len()
            && labels.len() == self.on_labels.len()
            && elements.len() == self.on_elements.len()
            && labels.len() == self.target.schema().len()
            && elements.len() == self.target.len()
    }

    /// The inverse maps, if the morphism is bijective.
    pub fn inverse(&self) -> Option<Morphism> {
        if !self.is_bijective() {
            return None;
        }
        Some(Morphism {
            source: self.target.clone(),
            target: self.source.clone(),
            on_labels: self
                .on_labels
                .iter()
                .map(|(a, b)| (b.clone(), a.clone()))
                .collect(),
            on_elements: self
                .on_elements
                .iter()
                .map(|(a, b)| (b.clone(), a.clone()))
                .collect(),
        })
    }
}

/// Empty exactly when `h` is total on its source, lands in its target and
/// commutes with the labelling.
pub fn check_morphism(h: &Morphism) -> ValidationReport {
    let mut report = ValidationReport::default();
    let (src, tgt) = (&h.source, &h.target);
    for (l, _) in src.schema().labels() {
        match h.on_labels.get(l) {
            None => report.push(
                Subject::Label(l.clone()),
                vec![],
                "label map is undefined here",
            ),
            Some(l2) if !tgt.schema().contains(l2) => report.push(
                Subject::Label(l.clone()),
                vec![],
                format!("image {l2} is not a target label"),
            ),
            Some(_) => {}
        }
    }
    for l in h.on_labels.keys().filter(|l| !src.schema().contains(l)) {
        report.push(
            Subject::Label(l.clone()),
            vec![],
            "label map is defined outside the source schema",
        );
    }
    for (e, el) in src.elements() {
        let subject = || Subject::Element(e.clone());
        let Some(e2) = h.on_elements.get(e) else {
            report.push(subject(), vec![], "element map is undefined here");
            continue;
        };
        let Some(l2) = tgt.label_of(e2) else {
            report.push(
                subject(),
                vec![],
                format!("image {e2} is not a target element"),
            );
            continue;
        };
        if let Some(hl) = h.on_labels.get(&el.label) {
            if hl != l2 {
                report.push(
                    subject(),
                    vec![],
                    format!(
                        "not natural: label {} maps to {hl}, but image {e2} is labelled {l2}",
                        el.label
                    ),
                );
            }
        }
    }
    for e in h.on_elements.keys().filter(|e| !src.contains(e)) {
        report.push(
            Subject::Element(e.clone()),
            vec![],
            "element map is defined outside the source graph",
        );
    }
    report
}

/// `h ∘ g`: first `g`, then `h`.
pub fn compose(h: &Morphism, g: &Morphism) -> Result<Morphism, MorphismError> {
    if !same_graph(&g.target, &h.source) {
        return Err(MorphismError::NotComposable);
    }
    let on_labels = g
        .on_labels
        .iter()
        .filter_map(|(a, b)| h.on_labels.get(b).map(|c| (a.clone(), c.clone())))
        .collect();
    let on_elements = g
        .on_elements
        .iter()
        .filter_map(|(a, b)| h.on_elements.get(b).map(|c| (a.clone(), c.clone())))
        .collect();
    Ok(Morphism {
        source: g.source.clone(),
        target: h.target.clone(),
        on_labels,
        on_elements,
    })
}

fn label_image(h: &Morphism) -> impl Fn(&Label) -> Option<TypeExpr> + '_ {
    move |l| h.on_labels.get(l).map(|l2| TypeExpr::Lbl(l2.clone()))
}

fn element_image(h: &Morphism) -> impl Fn(&ElementId) -> Option<Value> + '_ {
    move |e| h.on_elements.get(e).map(|e2| Value::Ref(e2.clone()))
}

/// True when every source schema, transported along the label map, is the
/// schema of the image label.
pub fn check_sigma_preserving(h: &Morphism) -> bool {
    h.source.schema().labels().all(|(l, t)| {
        let Some(l2) = h.on_labels.get(l) else {
            return false;
        };
        match (transport_type(t, &label_image(h)), h.target.sigma(l2)) {
            (Ok(moved), Some(t2)) => &moved == t2,
            _ => false,
        }
    })
}

/// True when every source value, transported along both maps, is the value
/// of the image element. Only meaningful for schema-preserving morphisms.
pub fn check_upsilon_natural(h: &Morphism) -> Result<bool, MorphismError> {
    if !check_sigma_preserving(h) {
        return Err(MorphismError::NotSigmaPreserving);
    }
    let g = element_image(h);
    Ok(h.source.elements().all(|(e, el)| {
        let (Some(e2), Some(t)) = (h.on_elements.get(e), h.source.sigma(&el.label)) else {
            return false;
        };
        match transport_value(&el.value, t, &g) {
            Ok(moved) => h.target.value_of(e2) == Some(&moved),
            Err(_) => false,
        }
    }))
}

/// An invertible morphism: bijective on labels and elements and natural on
/// the labelling. Schemas and values may still differ.
pub fn is_isomorphism(h: &Morphism) -> bool {
    h.is_bijective() && check_morphism(h).is_empty()
}

/// An isomorphism that also carries schemas and values across exactly: the
/// two graphs are the same up to renaming of labels and elements.
pub fn is_strict_isomorphism(h: &Morphism) -> bool {
    is_isomorphism(h) && check_upsilon_natural(h) == Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adt::PrimRegistry;
    use crate::fixtures;
    use crate::graph::Schema;

    fn swap_names() -> Morphism {
        let g = Arc::new(fixtures::names());
        let mut h = Morphism::identity(g);
        h.on_elements.insert("n1".into(), "n2".into());
        h.on_elements.insert("n2".into(), "n1".into());
        h
    }

    #[test]
    fn identity_is_a_morphism() {
        let id = Morphism::identity(Arc::new(fixtures::edges()));
        assert!(check_morphism(&id).is_empty());
        assert!(check_sigma_preserving(&id));
        assert_eq!(check_upsilon_natural(&id), Ok(true));
        assert!(is_strict_isomorphism(&id));
    }

    #[test]
    fn swapping_names_is_natural_on_labels_only() {
        let h = swap_names();
        assert!(check_morphism(&h).is_empty());
        assert!(check_sigma_preserving(&h));
        assert_eq!(check_upsilon_natural(&h), Ok(false));
    }

    #[test]
    fn trip_to_user_is_not_natural() {
        let mut h = Morphism::identity(Arc::new(fixtures::edges()));
        h.on_elements.insert("t1".into(), "u1".into());
        let report = check_morphism(&h);
        assert_eq!(report.len(), 1);
        assert_eq!(report.findings[0].subject, Subject::Element("t1".into()));
    }

    #[test]
    fn partial_maps_are_reported() {
        let mut h = Morphism::identity(Arc::new(fixtures::edges()));
        h.on_elements.remove(&ElementId::atom("d1"));
        h.on_labels.insert("ghost".into(), "User".into());
        assert_eq!(check_morphism(&h).len(), 2);
    }

    #[test]
    fn identity_laws() {
        let h = swap_names();
        let id = Morphism::identity(h.source.clone());
        assert_eq!(compose(&id, &h).unwrap(), h);
        assert_eq!(compose(&h, &id).unwrap(), h);
        let twice = compose(&h, &h).unwrap();
        assert!(twice.same_maps(&id));
    }

    #[test]
    fn endpoints_must_match() {
        let a = Morphism::identity(Arc::new(fixtures::edges()));
        let b = Morphism::identity(Arc::new(fixtures::names()));
        assert_eq!(compose(&a, &b), Err(MorphismError::NotComposable));
    }

    #[test]
    fn nat_to_string_is_not_sigma_preserving() {
        let reg = PrimRegistry::default();
        let src = Graph::empty(Schema::new(reg.clone()).with("l", TypeExpr::prim("Nat")));
        let tgt = Graph::empty(Schema::new(reg).with("l", TypeExpr::prim("String")));
        let h = Morphism::new(
            Arc::new(src),
            Arc::new(tgt),
            [("l".into(), "l".into())].into(),
            BTreeMap::new(),
        );
        assert!(check_morphism(&h).is_empty());
        assert!(!check_sigma_preserving(&h));
        assert_eq!(
            check_upsilon_natural(&h),
            Err(MorphismError::NotSigmaPreserving)
        );
    }

    #[test]
    fn inverse_of_swap_is_swap() {
        let h = swap_names();
        assert!(h.inverse().unwrap().same_maps(&h));
    }
}
