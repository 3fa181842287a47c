//! Limits and colimits of graphs.
//!
//! Every construction returns a [`ConstructionResult`]: the new graph and its
//! named legs (projections, injections, inclusion, quotient map). Element and
//! label ids of the results are structured: products use pairs `(a,b)`,
//! coproducts tag with `L:`/`R:`, and quotients name each class `C:r` after
//! its least member `r`.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::adt::{
    transport_type, transport_value, AdtError, ElementId, Ident, Label, PrimRegistry, TypeExpr,
    Value,
};
use crate::graph::{Element, Graph, Schema};
use crate::morphism::{compose, Morphism, MorphismError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatError {
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error("primitive registries conflict: {0}")]
    Registry(AdtError),
    #[error("graph does not conform to its schema: {0}")]
    Transport(AdtError),
    #[error("coequalizer needs source and target to share labels and schemas")]
    SchemaMismatch,
    #[error("coequalizer needs identity label maps, but label {0} is sent to {1}")]
    NonIdentityLabelMap(Label, Label),
    #[error(
        "pushout needs both legs to agree on labels, but {label} is sent to {left} and {right}"
    )]
    LabelMapsDisagree {
        label: Label,
        left: Label,
        right: Label,
    },
    #[error("elements {0} and {1} would be identified but carry different labels")]
    IncompatibleLabels(ElementId, ElementId),
}

/// A constructed graph with its structure maps.
#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub graph: Arc<Graph>,
    pub legs: Vec<(&'static str, Morphism)>,
}

impl ConstructionResult {
    /// The leg with the given name (`proj1`, `inj2`, `eq`, `coeq`, `k`, ...).
    pub fn leg(&self, name: &str) -> Option<&Morphism> {
        self.legs.iter().find(|(n, _)| *n == name).map(|(_, m)| m)
    }

    fn expect_leg(&self, name: &str) -> &Morphism {
        self.leg(name).expect("construction defines this leg")
    }
}

/// Id of the single label and single element of the terminal graph.
pub const TOP: &str = "⊤";

/// No labels, no elements.
pub fn initial_graph() -> Graph {
    Graph::empty(Schema::new(PrimRegistry::default()))
}

/// One label of type `1` and one element carrying `()`.
pub fn terminal_graph() -> Graph {
    Graph::builder(Schema::new(PrimRegistry::default()).with(TOP, TypeExpr::One))
        .element(TOP, TOP, Value::Unit)
        .build()
}

/// The empty morphism out of the initial graph.
pub fn from_initial(g: Arc<Graph>) -> Morphism {
    Morphism::new(
        Arc::new(initial_graph()),
        g,
        BTreeMap::new(),
        BTreeMap::new(),
    )
}

/// The constant morphism into the terminal graph.
pub fn to_terminal(g: Arc<Graph>) -> Morphism {
    let top = Ident::atom(TOP);
    let on_labels = g
        .schema()
        .labels()
        .map(|(l, _)| (l.clone(), top.clone()))
        .collect();
    let on_elements = g.element_ids().map(|e| (e.clone(), top.clone())).collect();
    Morphism::new(g, Arc::new(terminal_graph()), on_labels, on_elements)
}

/// Tags one side of a disjoint union.
type Tag = fn(Ident) -> Ident;

fn merged_registry(a: &Graph, b: &Graph) -> Result<PrimRegistry, CatError> {
    a.schema()
        .registry()
        .merged(b.schema().registry())
        .map_err(CatError::Registry)
}

fn relabel(t: &TypeExpr, f: impl Fn(&Label) -> Label) -> Result<TypeExpr, CatError> {
    transport_type(t, &|l: &Label| Some(TypeExpr::Lbl(f(l)))).map_err(CatError::Transport)
}

fn rename(
    v: &Value,
    at: &TypeExpr,
    g: impl Fn(&ElementId) -> ElementId,
) -> Result<Value, CatError> {
    transport_value(v, at, &|e: &ElementId| Some(Value::Ref(g(e)))).map_err(CatError::Transport)
}

fn sigma_of<'a>(g: &'a Graph, el: &Element) -> Result<&'a TypeExpr, CatError> {
    g.sigma(&el.label)
        .ok_or_else(|| CatError::Transport(AdtError::LabelOutsideDomain(el.label.clone())))
}

// ---- product ----------------------------------------------------------------

/// Labels and elements are pairs; a label pair's type is the product of both
/// schemas, each with its references paired with the other coordinate.
pub fn product(g1: &Graph, g2: &Graph) -> Result<ConstructionResult, CatError> {
    let mut schema = Schema::new(merged_registry(g1, g2)?);
    for (l1, t1) in g1.schema().labels() {
        for (l2, t2) in g2.schema().labels() {
            let left = relabel(t1, |l| Ident::pair(l.clone(), l2.clone()))?;
            let right = relabel(t2, |l| Ident::pair(l1.clone(), l.clone()))?;
            schema.insert(
                Ident::pair(l1.clone(), l2.clone()),
                TypeExpr::prod(left, right),
            );
        }
    }
    let mut b = Graph::builder(schema);
    for (e1, el1) in g1.elements() {
        let t1 = sigma_of(g1, el1)?;
        for (e2, el2) in g2.elements() {
            let t2 = sigma_of(g2, el2)?;
            let left = rename(&el1.value, t1, |e| Ident::pair(e.clone(), e2.clone()))?;
            let right = rename(&el2.value, t2, |e| Ident::pair(e1.clone(), e.clone()))?;
            b.insert(
                Ident::pair(e1.clone(), e2.clone()),
                Ident::pair(el1.label.clone(), el2.label.clone()),
                Value::pair(left, right),
            );
        }
    }
    let p = Arc::new(b.build());
    let (a1, a2) = (Arc::new(g1.clone()), Arc::new(g2.clone()));
    let proj = |pick: fn(&Ident) -> &Ident, target: Arc<Graph>| {
        let on_labels = p
            .schema()
            .labels()
            .map(|(l, _)| (l.clone(), pick(l).clone()))
            .collect();
        let on_elements = p
            .element_ids()
            .map(|e| (e.clone(), pick(e).clone()))
            .collect();
        Morphism::new(p.clone(), target, on_labels, on_elements)
    };
    let proj1 = proj(first, a1);
    let proj2 = proj(second, a2);
    Ok(ConstructionResult {
        graph: p,
        legs: vec![("proj1", proj1), ("proj2", proj2)],
    })
}

fn first(id: &Ident) -> &Ident {
    match id {
        Ident::Pair(a, _) => a,
        other => other,
    }
}

fn second(id: &Ident) -> &Ident {
    match id {
        Ident::Pair(_, b) => b,
        other => other,
    }
}

/// The pairing `⟨f, g⟩ : G → G1 × G2` of two morphisms out of `G`.
pub fn pair(f: &Morphism, g: &Morphism) -> Result<Morphism, CatError> {
    if !(Arc::ptr_eq(&f.source, &g.source) || f.source == g.source) {
        return Err(MorphismError::DifferentSources.into());
    }
    let prod = product(&f.target, &g.target)?;
    let mut on_labels = BTreeMap::new();
    for (l, a) in &f.on_labels {
        if let Some(b) = g.on_labels.get(l) {
            on_labels.insert(l.clone(), Ident::pair(a.clone(), b.clone()));
        }
    }
    let mut on_elements = BTreeMap::new();
    for (e, a) in &f.on_elements {
        if let Some(b) = g.on_elements.get(e) {
            on_elements.insert(e.clone(), Ident::pair(a.clone(), b.clone()));
        }
    }
    Ok(Morphism::new(
        f.source.clone(),
        prod.graph,
        on_labels,
        on_elements,
    ))
}

// ---- coproduct --------------------------------------------------------------

/// Disjoint union; labels and elements of the two sides are tagged `L:` and
/// `R:`.
pub fn coproduct(g1: &Graph, g2: &Graph) -> Result<ConstructionResult, CatError> {
    let mut schema = Schema::new(merged_registry(g1, g2)?);
    let mut sides: Vec<(&Graph, Tag)> = vec![(g1, Ident::left), (g2, Ident::right)];
    for (g, tag) in &sides {
        for (l, t) in g.schema().labels() {
            schema.insert(tag(l.clone()), relabel(t, |x| tag(x.clone()))?);
        }
    }
    let mut b = Graph::builder(schema);
    for (g, tag) in &sides {
        for (e, el) in g.elements() {
            let v = rename(&el.value, sigma_of(g, el)?, |x| tag(x.clone()))?;
            b.insert(tag(e.clone()), tag(el.label.clone()), v);
        }
    }
    let c = Arc::new(b.build());
    let legs = sides
        .drain(..)
        .zip(["inj1", "inj2"])
        .map(|((g, tag), name)| (name, tagging(Arc::new(g.clone()), c.clone(), tag, tag)))
        .collect();
    Ok(ConstructionResult { graph: c, legs })
}

fn tagging(source: Arc<Graph>, target: Arc<Graph>, on_label: Tag, on_element: Tag) -> Morphism {
    let on_labels = source
        .schema()
        .labels()
        .map(|(l, _)| (l.clone(), on_label(l.clone())))
        .collect();
    let on_elements = source
        .element_ids()
        .map(|e| (e.clone(), on_element(e.clone())))
        .collect();
    Morphism::new(source, target, on_labels, on_elements)
}

/// Disjoint union of two graphs over one shared schema. Elements are tagged
/// `L:` and `R:`, labels are kept. This is the coproduct among
/// schema-preserving morphisms and the first step of [`pushout`].
pub fn coproduct_over_schema(g1: &Graph, g2: &Graph) -> Result<ConstructionResult, CatError> {
    if g1.schema() != g2.schema() {
        return Err(CatError::SchemaMismatch);
    }
    let mut sides: Vec<(&Graph, Tag)> = vec![(g1, Ident::left), (g2, Ident::right)];
    let mut b = Graph::builder(g1.schema().clone());
    for (g, tag) in &sides {
        for (e, el) in g.elements() {
            let v = rename(&el.value, sigma_of(g, el)?, |x| tag(x.clone()))?;
            b.insert(tag(e.clone()), el.label.clone(), v);
        }
    }
    let c = Arc::new(b.build());
    let legs = sides
        .drain(..)
        .zip(["inj1", "inj2"])
        .map(|((g, tag), name)| (name, tagging(Arc::new(g.clone()), c.clone(), |l| l, tag)))
        .collect();
    Ok(ConstructionResult { graph: c, legs })
}

/// The case analysis `[f, g] : G1 + G2 → G` of two morphisms into `G`.
pub fn case_analysis(f: &Morphism, g: &Morphism) -> Result<Morphism, CatError> {
    if !(Arc::ptr_eq(&f.target, &g.target) || f.target == g.target) {
        return Err(MorphismError::DifferentTargets.into());
    }
    let sum = coproduct(&f.source, &g.source)?;
    let mut on_labels = BTreeMap::new();
    let mut on_elements = BTreeMap::new();
    for (h, tag) in [(f, Ident::left as Tag), (g, Ident::right)] {
        on_labels.extend(h.on_labels.iter().map(|(a, b)| (tag(a.clone()), b.clone())));
        on_elements.extend(
            h.on_elements
                .iter()
                .map(|(a, b)| (tag(a.clone()), b.clone())),
        );
    }
    Ok(Morphism::new(
        sum.graph,
        f.target.clone(),
        on_labels,
        on_elements,
    ))
}

// ---- equalizer --------------------------------------------------------------

fn parallel(h: &Morphism, j: &Morphism) -> Result<(), CatError> {
    let same = |a: &Arc<Graph>, b: &Arc<Graph>| Arc::ptr_eq(a, b) || a == b;
    if same(&h.source, &j.source) && same(&h.target, &j.target) {
        Ok(())
    } else {
        Err(MorphismError::NotParallel.into())
    }
}

/// The largest subgraph on which `h` and `j` agree. References to labels the
/// two maps disagree on become `1`; references to agreeing labels become
/// optional (`1 + l`), present exactly when the referenced element survives.
pub fn equalizer(h: &Morphism, j: &Morphism) -> Result<ConstructionResult, CatError> {
    parallel(h, j)?;
    let g = &h.source;
    let agree_l =
        |l: &Label| h.on_labels.contains_key(l) && h.on_labels.get(l) == j.on_labels.get(l);
    let agree_e = |e: &ElementId| {
        h.on_elements.contains_key(e) && h.on_elements.get(e) == j.on_elements.get(e)
    };

    let f = |l: &Label| {
        Some(if agree_l(l) {
            TypeExpr::sum(TypeExpr::One, TypeExpr::Lbl(l.clone()))
        } else {
            TypeExpr::One
        })
    };
    let mut schema = Schema::new(g.schema().registry().clone());
    for (l, t) in g.schema().labels().filter(|(l, _)| agree_l(l)) {
        schema.insert(
            l.clone(),
            transport_type(t, &f).map_err(CatError::Transport)?,
        );
    }

    let wrap = |e: &ElementId| {
        let l = g.label_of(e)?;
        Some(if !agree_l(l) {
            Value::Unit
        } else if agree_e(e) {
            Value::inr(Value::Ref(e.clone()))
        } else {
            Value::inl(Value::Unit)
        })
    };
    let mut b = Graph::builder(schema);
    for (e, el) in g
        .elements()
        .filter(|(e, el)| agree_e(e) && agree_l(&el.label))
    {
        let v = transport_value(&el.value, sigma_of(g, el)?, &wrap).map_err(CatError::Transport)?;
        b.insert(e.clone(), el.label.clone(), v);
    }
    let eq_graph = Arc::new(b.build());
    let on_labels = eq_graph
        .schema()
        .labels()
        .map(|(l, _)| (l.clone(), l.clone()))
        .collect();
    let on_elements = eq_graph
        .element_ids()
        .map(|e| (e.clone(), e.clone()))
        .collect();
    let eq = Morphism::new(eq_graph.clone(), g.clone(), on_labels, on_elements);
    Ok(ConstructionResult {
        graph: eq_graph,
        legs: vec![("eq", eq)],
    })
}

// ---- coequalizer and pushout ------------------------------------------------

/// Union-find over element ids. Each class is named after its least member.
struct Classes {
    index: BTreeMap<ElementId, usize>,
    ids: Vec<ElementId>,
    parent: Vec<usize>,
}

impl Classes {
    fn new<'a>(ids: impl Iterator<Item = &'a ElementId>) -> Self {
        let ids: Vec<ElementId> = ids.cloned().collect();
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let parent = (0..ids.len()).collect();
        Classes { index, ids, parent }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    /// Ids are stored in ascending order, so keeping the smaller root keeps
    /// the least member as representative.
    fn union(&mut self, a: &ElementId, b: &ElementId) {
        let (Some(&a), Some(&b)) = (self.index.get(a), self.index.get(b)) else {
            return;
        };
        let (ra, rb) = (self.find(a), self.find(b));
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
    }

    fn representative(&mut self, e: &ElementId) -> Option<&ElementId> {
        let i = *self.index.get(e)?;
        let r = self.find(i);
        Some(&self.ids[r])
    }
}

/// Quotients the elements of `g` by the equivalence generated by `pairs`,
/// keeping the schema. Returns the quotient and the class map `[·]`.
fn quotient(
    g: &Arc<Graph>,
    pairs: &[(ElementId, ElementId)],
) -> Result<ConstructionResult, CatError> {
    let mut classes = Classes::new(g.element_ids());
    for (a, b) in pairs {
        classes.union(a, b);
    }
    let mut class_of = BTreeMap::new();
    for e in g.element_ids() {
        let rep = classes.representative(e).expect("known element").clone();
        if g.label_of(e) != g.label_of(&rep) {
            return Err(CatError::IncompatibleLabels(rep, e.clone()));
        }
        class_of.insert(e.clone(), Ident::class(rep));
    }
    let mut b = Graph::builder(g.schema().clone());
    for (e, el) in g.elements() {
        if classes.representative(e) == Some(e) {
            let v = transport_value(&el.value, sigma_of(g, el)?, &|x: &ElementId| {
                class_of.get(x).map(|c| Value::Ref(c.clone()))
            })
            .map_err(CatError::Transport)?;
            b.insert(class_of[e].clone(), el.label.clone(), v);
        }
    }
    let q = Arc::new(b.build());
    let on_labels = g
        .schema()
        .labels()
        .map(|(l, _)| (l.clone(), l.clone()))
        .collect();
    let coeq = Morphism::new(g.clone(), q.clone(), on_labels, class_of);
    Ok(ConstructionResult {
        graph: q,
        legs: vec![("coeq", coeq)],
    })
}

/// Glues together the elements `h(e)` and `j(e)` for every source element
/// `e`. Both maps must be the identity on labels, and source and target must
/// share their labels and schemas.
pub fn coequalizer(h: &Morphism, j: &Morphism) -> Result<ConstructionResult, CatError> {
    parallel(h, j)?;
    if h.source.schema() != h.target.schema() {
        return Err(CatError::SchemaMismatch);
    }
    for m in [h, j] {
        for (a, b) in &m.on_labels {
            if a != b {
                return Err(CatError::NonIdentityLabelMap(a.clone(), b.clone()));
            }
        }
    }
    let pairs: Vec<_> = h
        .source
        .element_ids()
        .filter_map(|e| Some((h.on_elements.get(e)?.clone(), j.on_elements.get(e)?.clone())))
        .collect();
    quotient(&h.target, &pairs)
}

/// Merges `G1` and `G2` along the span `G1 ← G → G2`: their disjoint union
/// over the shared schema, with `f(e)` and `g(e)` glued for every `e` in `G`.
/// Legs `k : G1 → P` and `m : G2 → P` satisfy `k ∘ f = m ∘ g`.
///
/// `G1` and `G2` must share a schema and `f`, `g` must agree on labels; the
/// source graph may have any schema.
pub fn pushout(f: &Morphism, g: &Morphism) -> Result<ConstructionResult, CatError> {
    if !(Arc::ptr_eq(&f.source, &g.source) || f.source == g.source) {
        return Err(MorphismError::DifferentSources.into());
    }
    for (l, a) in &f.on_labels {
        if let Some(b) = g.on_labels.get(l) {
            if a != b {
                return Err(CatError::LabelMapsDisagree {
                    label: l.clone(),
                    left: a.clone(),
                    right: b.clone(),
                });
            }
        }
    }
    let sum = coproduct_over_schema(&f.target, &g.target)?;
    let pairs: Vec<_> = f
        .source
        .element_ids()
        .filter_map(|e| {
            Some((
                Ident::left(f.on_elements.get(e)?.clone()),
                Ident::right(g.on_elements.get(e)?.clone()),
            ))
        })
        .collect();
    let q = quotient(&sum.graph, &pairs)?;
    let coeq = q.expect_leg("coeq");
    let k = compose(coeq, sum.expect_leg("inj1"))?;
    let m = compose(coeq, sum.expect_leg("inj2"))?;
    Ok(ConstructionResult {
        graph: q.graph.clone(),
        legs: vec![("k", k), ("m", m)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::validate_graph;
    use crate::morphism::{check_morphism, check_sigma_preserving, is_isomorphism};

    fn arc(g: Graph) -> Arc<Graph> {
        Arc::new(g)
    }

    fn single(label: &str, id: &str) -> Graph {
        Graph::builder(Schema::new(PrimRegistry::default()).with(label, TypeExpr::One))
            .element(id, label, Value::Unit)
            .build()
    }

    fn assert_sound(r: &ConstructionResult) {
        let report = validate_graph(&r.graph);
        assert!(report.is_empty(), "{report}");
        for (name, leg) in &r.legs {
            let report = check_morphism(leg);
            assert!(report.is_empty(), "{name}: {report}");
        }
    }

    #[test]
    fn product_of_two_vertices() {
        let r = product(&single("Person", "v1"), &single("Org", "w1")).unwrap();
        assert_sound(&r);
        let l = Ident::pair("Person".into(), "Org".into());
        assert_eq!(
            r.graph.sigma(&l),
            Some(&TypeExpr::prod(TypeExpr::One, TypeExpr::One))
        );
        let e = Ident::pair("v1".into(), "w1".into());
        assert_eq!(
            r.graph.value_of(&e),
            Some(&Value::pair(Value::Unit, Value::Unit))
        );
        assert_eq!(r.graph.len(), 1);
    }

    #[test]
    fn product_counts_and_schemas() {
        let (b, a) = (fixtures::edges(), fixtures::vertices());
        let r = product(&b, &a).unwrap();
        assert_sound(&r);
        assert_eq!(r.graph.len(), 5 * 3);
        assert_eq!(r.graph.schema().len(), 4 * 3);
        let l = Ident::pair("driver".into(), "User".into());
        assert_eq!(
            r.graph.sigma(&l).unwrap().to_string(),
            "(`(Trip,User)` * `(User,User)`) * 1"
        );
    }

    #[test]
    fn product_with_terminal_is_an_isomorphism() {
        let g = fixtures::edges();
        let r = product(&g, &terminal_graph()).unwrap();
        assert!(is_isomorphism(r.leg("proj1").unwrap()));
    }

    #[test]
    fn pair_commutes_with_projections() {
        let g = arc(fixtures::names());
        let id = Morphism::identity(g.clone());
        let diag = pair(&id, &id).unwrap();
        assert!(check_morphism(&diag).is_empty());
        let r = product(&g, &g).unwrap();
        assert_eq!(compose(r.leg("proj1").unwrap(), &diag).unwrap(), id);
        assert_eq!(compose(r.leg("proj2").unwrap(), &diag).unwrap(), id);
    }

    #[test]
    fn pair_of_terminal_maps() {
        let g = arc(fixtures::edges());
        let t = to_terminal(g.clone());
        let p = pair(&t, &t).unwrap();
        assert_eq!(p.on_elements.len(), 5);
        assert!(p.on_elements.values().all(|e| e.to_string() == "(⊤,⊤)"));
        assert_eq!(p.target.len(), 1);
    }

    #[test]
    fn coproduct_of_plates() {
        let r = coproduct(&fixtures::plates1(), &fixtures::plates2()).unwrap();
        assert_sound(&r);
        assert_eq!(r.graph.schema().len(), 2);
        assert_eq!(r.graph.len(), 4);
        assert!(r
            .graph
            .schema()
            .contains(&Ident::left("PlateNumber".into())));
        for (_, leg) in &r.legs {
            assert!(check_sigma_preserving(leg));
        }
    }

    #[test]
    fn coproduct_transports_refs() {
        let r = coproduct(&fixtures::edges(), &fixtures::names()).unwrap();
        assert_sound(&r);
        let d1 = Ident::left("d1".into());
        assert_eq!(r.graph.value_of(&d1).unwrap().to_string(), "(@L:t1,@L:u1)");
    }

    #[test]
    fn coproduct_with_initial_is_an_isomorphism() {
        let r = coproduct(&fixtures::trips(), &initial_graph()).unwrap();
        assert!(crate::morphism::is_strict_isomorphism(
            r.leg("inj1").unwrap()
        ));
    }

    #[test]
    fn case_analysis_laws() {
        let g = arc(fixtures::edges());
        let id = Morphism::identity(g.clone());
        let fold = case_analysis(&id, &id).unwrap();
        assert!(check_morphism(&fold).is_empty());
        let sum = coproduct(&g, &g).unwrap();
        assert_eq!(compose(&fold, sum.leg("inj1").unwrap()).unwrap(), id);
        assert_eq!(compose(&fold, sum.leg("inj2").unwrap()).unwrap(), id);
        let eta = case_analysis(sum.leg("inj1").unwrap(), sum.leg("inj2").unwrap()).unwrap();
        assert!(eta.same_maps(&Morphism::identity(sum.graph.clone())));
    }

    fn swap_names() -> Morphism {
        let mut h = Morphism::identity(arc(fixtures::names()));
        h.on_elements.insert("n1".into(), "n2".into());
        h.on_elements.insert("n2".into(), "n1".into());
        h
    }

    #[test]
    fn equalizer_of_identities() {
        let id = Morphism::identity(arc(fixtures::names()));
        let r = equalizer(&id, &id).unwrap();
        assert_sound(&r);
        assert_eq!(r.graph.len(), 3);
        assert_eq!(
            r.graph.sigma(&"name".into()).unwrap().to_string(),
            "(1 + User) * String"
        );
        assert_eq!(
            r.graph.value_of(&"n1".into()),
            Some(&Value::pair(
                Value::inr(Value::reference("u1")),
                Value::string("Arthur Dent")
            ))
        );
    }

    #[test]
    fn equalizer_of_swap_and_identity() {
        let h = swap_names();
        let j = Morphism::identity(h.source.clone());
        let r = equalizer(&h, &j).unwrap();
        assert_sound(&r);
        let ids: Vec<_> = r.graph.element_ids().map(|e| e.to_string()).collect();
        assert_eq!(ids, ["u1"]);
        assert_eq!(r.graph.schema().len(), 2);
        let eq = r.leg("eq").unwrap();
        assert!(compose(&h, eq)
            .unwrap()
            .same_maps(&compose(&j, eq).unwrap()));
    }

    #[test]
    fn equalizer_collapses_disagreeing_labels() {
        // Two labels A, B with B referring to A; h and j disagree on A.
        let s = Schema::new(PrimRegistry::default())
            .with("A", TypeExpr::One)
            .with("A2", TypeExpr::One)
            .with("B", TypeExpr::lbl("A"));
        let g = arc(Graph::builder(s)
            .element("a", "A", Value::Unit)
            .element("b", "B", Value::reference("a"))
            .build());
        let h = Morphism::identity(g.clone());
        let mut j = h.clone();
        j.on_labels.insert("A".into(), "A2".into());
        j.on_elements.insert("a".into(), "b".into());
        // j is not a valid morphism, but the construction only reads the maps.
        let r = equalizer(&h, &j).unwrap();
        assert_eq!(r.graph.sigma(&"B".into()), Some(&TypeExpr::One));
        assert_eq!(r.graph.value_of(&"b".into()), Some(&Value::Unit));
        assert!(validate_graph(&r.graph).is_empty());
    }

    #[test]
    fn coequalizer_of_swap() {
        let s = Schema::new(PrimRegistry::default()).with("V", TypeExpr::One);
        let g = arc(Graph::builder(s)
            .element("a", "V", Value::Unit)
            .element("b", "V", Value::Unit)
            .build());
        let h = Morphism::identity(g.clone());
        let mut j = h.clone();
        j.on_elements.insert("a".into(), "b".into());
        j.on_elements.insert("b".into(), "a".into());
        let r = coequalizer(&h, &j).unwrap();
        assert_sound(&r);
        let ids: Vec<_> = r.graph.element_ids().map(|e| e.to_string()).collect();
        assert_eq!(ids, ["C:a"]);
        let coeq = r.leg("coeq").unwrap();
        assert_eq!(compose(coeq, &h).unwrap(), compose(coeq, &j).unwrap());
    }

    #[test]
    fn coequalizer_of_equal_maps_is_trivial() {
        let h = Morphism::identity(arc(fixtures::trips()));
        let r = coequalizer(&h, &h).unwrap();
        assert_sound(&r);
        assert!(crate::morphism::is_strict_isomorphism(
            r.leg("coeq").unwrap()
        ));
    }

    #[test]
    fn coequalizer_preconditions() {
        let h = swap_names();
        let mut j = h.clone();
        j.on_labels.insert("User".into(), "name".into());
        assert!(matches!(
            coequalizer(&h, &j),
            Err(CatError::NonIdentityLabelMap(..))
        ));
        let mut k = h.clone();
        k.on_elements.insert("u1".into(), "n1".into());
        assert!(matches!(
            coequalizer(&h, &k),
            Err(CatError::IncompatibleLabels(..))
        ));
        let other = Morphism::identity(arc(fixtures::edges()));
        assert!(matches!(
            coequalizer(&h, &other),
            Err(CatError::Morphism(MorphismError::NotParallel))
        ));
    }

    fn plate_span() -> (Morphism, Morphism) {
        let (g1, g2) = (arc(fixtures::plates1()), arc(fixtures::plates2()));
        let m = Graph::builder(g1.schema().clone())
            .element(
                Ident::pair("p1".into(), "q1".into()),
                "PlateNumber",
                g1.value_of(&"p1".into()).unwrap().clone(),
            )
            .build();
        let m = arc(m);
        let labels: BTreeMap<Label, Label> = [("PlateNumber".into(), "PlateNumber".into())].into();
        let e = Ident::pair("p1".into(), "q1".into());
        let f = Morphism::new(
            m.clone(),
            g1,
            labels.clone(),
            [(e.clone(), "p1".into())].into(),
        );
        let g = Morphism::new(m, g2, labels, [(e, "q1".into())].into());
        (f, g)
    }

    #[test]
    fn pushout_of_plates() {
        let (f, g) = plate_span();
        let r = pushout(&f, &g).unwrap();
        assert_sound(&r);
        let ids: Vec<_> = r.graph.element_ids().map(|e| e.to_string()).collect();
        assert_eq!(ids, ["C:L:p1", "C:L:p2", "C:R:q2"]);
        let (k, m) = (r.leg("k").unwrap(), r.leg("m").unwrap());
        assert_eq!(
            compose(k, &f).unwrap().on_elements,
            compose(m, &g).unwrap().on_elements
        );
        assert!(check_sigma_preserving(k) && check_sigma_preserving(m));
    }

    #[test]
    fn pushout_over_initial_is_the_disjoint_union() {
        let (g1, g2) = (arc(fixtures::plates1()), arc(fixtures::plates2()));
        let r = pushout(&from_initial(g1.clone()), &from_initial(g2.clone())).unwrap();
        let sum = coproduct_over_schema(&g1, &g2).unwrap();
        let renamed = sum
            .graph
            .element_ids()
            .map(|e| Ident::class(e.clone()))
            .collect::<Vec<_>>();
        assert_eq!(r.graph.element_ids().cloned().collect::<Vec<_>>(), renamed);
    }

    #[test]
    fn pushout_of_identities() {
        let g = arc(fixtures::edges());
        let id = Morphism::identity(g.clone());
        let r = pushout(&id, &id).unwrap();
        assert!(crate::morphism::is_strict_isomorphism(r.leg("k").unwrap()));
    }

    #[test]
    fn terminal_maps() {
        let g = arc(fixtures::edges());
        let t = to_terminal(g.clone());
        assert!(check_morphism(&t).is_empty());
        assert_eq!(t.on_elements.len(), 5);
        let h = Morphism::identity(g);
        assert_eq!(compose(&to_terminal(h.target.clone()), &h).unwrap(), t);
        assert!(check_morphism(&from_initial(arc(fixtures::trips()))).is_empty());
    }
}
