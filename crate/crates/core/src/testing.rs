//! Seeded generators for property tests: small random graphs, morphisms of
//! the shapes the categorical constructions expect, well-typed mapping
//! terms, and single-point mutations of valid graphs.
//!
//! Everything here is deterministic in the seed. The conformance check used
//! to vet mutants is written independently of [`crate::adt::check_value`]
//! so that the validator can be tested against it.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adt::{Ident, Label, Literal, PrimKind, PrimRegistry, Step, TypeExpr, Value};
use crate::catops::{
    case_analysis, coequalizer, coproduct, equalizer, pair, product, pushout, CatError,
    ConstructionResult,
};
use crate::graph::{validate_graph, Subject};
use crate::graph::{Element, Graph, Schema};
use crate::migrate::{
    check_type, eval_term, infer_type, is_normal, normalize_with_stats, Context, Term, MAPPING_VAR,
};
use crate::morphism::Morphism;
use crate::morphism::{check_morphism, compose, MorphismError};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const LABELS: [&str; 6] = ["A", "B", "C", "D", "x y", "Ω"];
const PRIMS: [&str; 5] = ["String", "Nat", "Integer", "Double", "Boolean"];
const TEXTS: [&str; 7] = ["", "a", "a b", "q\"uote", "ünï", "comma,semi;", "new\nline"];
const DOUBLES: [f64; 6] = [0.0, -0.0, -1.5, 3.25, 1e10, 0.1];

// ---- types and values -------------------------------------------------------

pub fn random_literal(rng: &mut TestRng, kind: PrimKind) -> Literal {
    match kind {
        PrimKind::Text => Literal::Text(TEXTS.choose(rng).unwrap().to_string()),
        PrimKind::Nat => Literal::Int(rng.gen_range(0..100)),
        PrimKind::Integer => Literal::Int(rng.gen_range(-50..50)),
        PrimKind::Double => Literal::Double(*DOUBLES.choose(rng).unwrap()),
        PrimKind::Boolean => Literal::Bool(rng.gen()),
    }
}

fn random_prim(rng: &mut TestRng) -> TypeExpr {
    TypeExpr::prim(PRIMS.choose(rng).unwrap())
}

/// A type of the given nesting depth over `labels`; `0` appears rarely.
pub fn random_type(rng: &mut TestRng, labels: &[Label], depth: usize) -> TypeExpr {
    if depth == 0 || rng.gen_bool(0.4) {
        return match rng.gen_range(0..40) {
            0 => TypeExpr::Zero,
            1..=10 => TypeExpr::One,
            11..=24 => random_prim(rng),
            _ => match labels.choose(rng) {
                Some(l) => TypeExpr::Lbl(l.clone()),
                None => TypeExpr::One,
            },
        };
    }
    let (a, b) = (
        random_type(rng, labels, depth - 1),
        random_type(rng, labels, depth - 1),
    );
    if rng.gen_bool(0.5) {
        TypeExpr::sum(a, b)
    } else {
        TypeExpr::prod(a, b)
    }
}

/// A label-free type without `0`.
pub fn random_plain_type(rng: &mut TestRng, depth: usize) -> TypeExpr {
    if depth == 0 || rng.gen_bool(0.4) {
        return if rng.gen_bool(0.3) {
            TypeExpr::One
        } else {
            random_prim(rng)
        };
    }
    let (a, b) = (
        random_plain_type(rng, depth - 1),
        random_plain_type(rng, depth - 1),
    );
    if rng.gen_bool(0.5) {
        TypeExpr::sum(a, b)
    } else {
        TypeExpr::prod(a, b)
    }
}

/// A value of `t` whose references point into `pool`, or `None` when `t`
/// has no such value.
pub fn random_value(
    rng: &mut TestRng,
    t: &TypeExpr,
    pool: &BTreeMap<Label, Vec<Ident>>,
    registry: &PrimRegistry,
) -> Option<Value> {
    Some(match t {
        TypeExpr::Zero => return None,
        TypeExpr::One => Value::Unit,
        TypeExpr::Prim(p) => Value::Prim(p.clone(), random_literal(rng, registry.kind(p)?)),
        TypeExpr::Lbl(l) => Value::Ref(pool.get(l)?.choose(rng)?.clone()),
        TypeExpr::Prod(a, b) => Value::pair(
            random_value(rng, a, pool, registry)?,
            random_value(rng, b, pool, registry)?,
        ),
        TypeExpr::Sum(a, b) => {
            let left_first = rng.gen_bool(0.5);
            let try_side = |rng: &mut TestRng, left: bool| {
                if left {
                    random_value(rng, a, pool, registry).map(Value::inl)
                } else {
                    random_value(rng, b, pool, registry).map(Value::inr)
                }
            };
            match try_side(rng, left_first) {
                Some(v) => v,
                None => try_side(rng, !left_first)?,
            }
        }
    })
}

// ---- graphs -----------------------------------------------------------------

pub fn random_schema(rng: &mut TestRng, max_labels: usize) -> Schema {
    let mut names = LABELS.to_vec();
    names.shuffle(rng);
    // the empty schema stays possible but rare
    let max = max_labels.min(names.len());
    let n = if max == 0 || rng.gen_bool(0.05) {
        0
    } else {
        rng.gen_range(1..=max)
    };
    let labels: Vec<Label> = names[..n].iter().map(|n| Label::atom(*n)).collect();
    let mut s = Schema::new(PrimRegistry::default());
    for l in &labels {
        s.insert(l.clone(), random_type(rng, &labels, 2));
    }
    s
}

fn random_id(rng: &mut TestRng, i: usize) -> Ident {
    match rng.gen_range(0..8) {
        0 => Ident::pair(Ident::atom(format!("p{i}")), Ident::atom("q")),
        1 => Ident::left(Ident::atom(format!("e{i}"))),
        2 => Ident::atom(format!("id {i}")),
        _ => Ident::atom(format!("e{i}")),
    }
}

/// A valid graph on `schema` with at most `max_elements` elements.
/// Elements whose label cannot be inhabited by the others are dropped.
pub fn random_graph_on(rng: &mut TestRng, schema: Schema, max_elements: usize) -> Graph {
    let labels: Vec<Label> = schema.labels().map(|(l, _)| l.clone()).collect();
    let n = match (labels.is_empty(), max_elements) {
        (true, _) | (_, 0) => 0,
        _ if rng.gen_bool(0.05) => 0,
        _ => rng.gen_range(1..=max_elements),
    };
    let mut alive: Vec<(Ident, Label)> = (0..n)
        .map(|i| (random_id(rng, i), labels.choose(rng).unwrap().clone()))
        .collect();
    loop {
        let mut pool: BTreeMap<Label, Vec<Ident>> = BTreeMap::new();
        for (id, l) in &alive {
            pool.entry(l.clone()).or_default().push(id.clone());
        }
        let mut elements = BTreeMap::new();
        let mut survivors = Vec::new();
        for (id, l) in &alive {
            let t = schema.sigma(l).expect("label from schema");
            if let Some(v) = random_value(rng, t, &pool, schema.registry()) {
                elements.insert(
                    id.clone(),
                    Element {
                        label: l.clone(),
                        value: v,
                    },
                );
                survivors.push((id.clone(), l.clone()));
            }
        }
        if survivors.len() == alive.len() {
            return Graph::new(schema, elements);
        }
        alive = survivors;
    }
}

pub fn random_graph(rng: &mut TestRng, max_labels: usize, max_elements: usize) -> Graph {
    let s = random_schema(rng, max_labels);
    random_graph_on(rng, s, max_elements)
}

// ---- morphisms --------------------------------------------------------------

fn by_label(g: &Graph) -> BTreeMap<Label, Vec<Ident>> {
    let mut out: BTreeMap<Label, Vec<Ident>> = BTreeMap::new();
    for (id, el) in g.elements() {
        out.entry(el.label.clone()).or_default().push(id.clone());
    }
    out
}

/// A label map that can be extended to elements: labels with elements go to
/// labels with elements.
fn random_label_map(rng: &mut TestRng, src: &Graph, tgt: &Graph) -> Option<BTreeMap<Label, Label>> {
    let inhabited = by_label(tgt);
    let all: Vec<Label> = tgt.schema().labels().map(|(l, _)| l.clone()).collect();
    let full: Vec<Label> = inhabited.keys().cloned().collect();
    let used = by_label(src);
    let mut out = BTreeMap::new();
    for (l, _) in src.schema().labels() {
        let candidates = if used.contains_key(l) { &full } else { &all };
        out.insert(l.clone(), candidates.choose(rng)?.clone());
    }
    Some(out)
}

/// Extends a label map to a morphism by sending each element to a random
/// element of the image label.
pub fn random_morphism_over(
    rng: &mut TestRng,
    src: &Arc<Graph>,
    tgt: &Arc<Graph>,
    on_labels: BTreeMap<Label, Label>,
) -> Option<Morphism> {
    let inhabited = by_label(tgt);
    let mut on_elements = BTreeMap::new();
    for (e, el) in src.elements() {
        let image = inhabited.get(on_labels.get(&el.label)?)?.choose(rng)?;
        on_elements.insert(e.clone(), image.clone());
    }
    Some(Morphism::new(
        src.clone(),
        tgt.clone(),
        on_labels,
        on_elements,
    ))
}

/// A random morphism commuting with the labelling, if one exists.
pub fn random_morphism(rng: &mut TestRng, src: &Arc<Graph>, tgt: &Arc<Graph>) -> Option<Morphism> {
    let on_labels = random_label_map(rng, src, tgt)?;
    random_morphism_over(rng, src, tgt, on_labels)
}

fn retry<T>(rng: &mut TestRng, mut f: impl FnMut(&mut TestRng) -> Option<T>) -> T {
    for _ in 0..1000 {
        if let Some(t) = f(rng) {
            return t;
        }
    }
    panic!("generator found no instance in 1000 attempts")
}

fn arc_graph(rng: &mut TestRng, max_labels: usize, max_elements: usize) -> Arc<Graph> {
    Arc::new(random_graph(rng, max_labels, max_elements))
}

/// Two morphisms `X → G1` and `X → G2` out of a common source.
pub fn random_cone(
    rng: &mut TestRng,
    max_labels: usize,
    max_elements: usize,
) -> (Morphism, Morphism) {
    retry(rng, |rng| {
        let (x, g1, g2) = (
            arc_graph(rng, max_labels, max_elements),
            arc_graph(rng, max_labels, max_elements),
            arc_graph(rng, max_labels, max_elements),
        );
        Some((
            random_morphism(rng, &x, &g1)?,
            random_morphism(rng, &x, &g2)?,
        ))
    })
}

/// Two morphisms `G1 → G` and `G2 → G` into a common target.
pub fn random_cocone(
    rng: &mut TestRng,
    max_labels: usize,
    max_elements: usize,
) -> (Morphism, Morphism) {
    retry(rng, |rng| {
        let (g1, g2, g) = (
            arc_graph(rng, max_labels, max_elements),
            arc_graph(rng, max_labels, max_elements),
            arc_graph(rng, max_labels, max_elements),
        );
        Some((
            random_morphism(rng, &g1, &g)?,
            random_morphism(rng, &g2, &g)?,
        ))
    })
}

/// A parallel pair `h, j : G → G'` that agrees on a random part of `G`.
pub fn random_parallel_pair(
    rng: &mut TestRng,
    max_labels: usize,
    max_elements: usize,
) -> (Morphism, Morphism) {
    retry(rng, |rng| {
        let (g, t) = (
            arc_graph(rng, max_labels, max_elements),
            arc_graph(rng, max_labels, max_elements),
        );
        let h = random_morphism(rng, &g, &t)?;
        let mut on_labels = random_label_map(rng, &g, &t)?;
        for (l, hl) in &h.on_labels {
            if rng.gen_bool(0.6) {
                on_labels.insert(l.clone(), hl.clone());
            }
        }
        let inhabited = by_label(&t);
        let mut on_elements = BTreeMap::new();
        for (e, el) in g.elements() {
            let jl = &on_labels[&el.label];
            let image = if jl == &h.on_labels[&el.label] && rng.gen_bool(0.6) {
                h.on_elements[e].clone()
            } else {
                inhabited.get(jl)?.choose(rng)?.clone()
            };
            on_elements.insert(e.clone(), image);
        }
        Some((
            h.clone(),
            Morphism::new(g.clone(), t.clone(), on_labels, on_elements),
        ))
    })
}

fn identity_labels(s: &Schema) -> BTreeMap<Label, Label> {
    s.labels().map(|(l, _)| (l.clone(), l.clone())).collect()
}

/// A parallel pair between two graphs on one schema, both the identity on
/// labels, as the coequalizer requires.
pub fn random_coequalizer_pair(
    rng: &mut TestRng,
    max_labels: usize,
    max_elements: usize,
) -> (Morphism, Morphism) {
    retry(rng, |rng| {
        let s = random_schema(rng, max_labels);
        let t = Arc::new(random_graph_on(rng, s.clone(), max_elements));
        let g = Arc::new(random_graph_on(rng, s.clone(), max_elements));
        let h = random_morphism_over(rng, &g, &t, identity_labels(&s))?;
        let j = random_morphism_over(rng, &g, &t, identity_labels(&s))?;
        Some((h, j))
    })
}

/// A span `G1 ← G → G2` with `G1`, `G2` on one schema and both legs sending
/// labels the same way, as the pushout requires.
pub fn random_span(
    rng: &mut TestRng,
    max_labels: usize,
    max_elements: usize,
) -> (Morphism, Morphism) {
    retry(rng, |rng| {
        let s = random_schema(rng, max_labels);
        let g1 = Arc::new(random_graph_on(rng, s.clone(), max_elements));
        let g2 = Arc::new(random_graph_on(rng, s.clone(), max_elements));
        let g = arc_graph(rng, max_labels, max_elements);
        // labels with elements must land where both sides have elements
        let (in1, in2) = (by_label(&g1), by_label(&g2));
        let both: Vec<Label> = in1
            .keys()
            .filter(|l| in2.contains_key(*l))
            .cloned()
            .collect();
        let all: Vec<Label> = s.labels().map(|(l, _)| l.clone()).collect();
        let used = by_label(&g);
        let mut on_labels = BTreeMap::new();
        for (l, _) in g.schema().labels() {
            let candidates = if used.contains_key(l) { &both } else { &all };
            on_labels.insert(l.clone(), candidates.choose(rng)?.clone());
        }
        let f = random_morphism_over(rng, &g, &g1, on_labels.clone())?;
        let k = random_morphism_over(rng, &g, &g2, on_labels)?;
        Some((f, k))
    })
}

/// Composable morphisms `A → B → C → D`.
pub fn random_chain(
    rng: &mut TestRng,
    max_labels: usize,
    max_elements: usize,
) -> (Morphism, Morphism, Morphism) {
    retry(rng, |rng| {
        let gs: Vec<Arc<Graph>> = (0..4)
            .map(|_| arc_graph(rng, max_labels, max_elements))
            .collect();
        Some((
            random_morphism(rng, &gs[0], &gs[1])?,
            random_morphism(rng, &gs[1], &gs[2])?,
            random_morphism(rng, &gs[2], &gs[3])?,
        ))
    })
}

// ---- terms ------------------------------------------------------------------

/// A mapping term together with what is needed to check and run it: the
/// graph `phi` reads, the type of `x` with a value for it, and the type the
/// term was generated at.
#[derive(Clone, Debug)]
pub struct TermCase {
    pub graph: Arc<Graph>,
    pub var_type: TypeExpr,
    pub binding: Value,
    pub term: Term,
    pub ty: TypeExpr,
}

const BINDERS: [&str; 4] = ["a", "b", "y", "x"];

type Ctx = Vec<(String, Option<TypeExpr>)>;

struct TermGen<'g> {
    graph: &'g Graph,
}

impl TermGen<'_> {
    fn visible(ctx: &[(String, Option<TypeExpr>)]) -> Vec<(String, TypeExpr)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (n, t) in ctx.iter().rev() {
            if seen.insert(n.clone()) {
                if let Some(t) = t {
                    out.push((n.clone(), t.clone()));
                }
            }
        }
        out
    }

    fn infers(&self, ctx: &[(String, Option<TypeExpr>)], t: &Term) -> bool {
        let mut c = Context::new(self.graph.schema());
        for (n, ty) in ctx {
            c = match ty {
                Some(ty) => c.with(n, ty.clone()),
                None => c.hiding(n),
            };
        }
        infer_type(t, &mut c).is_ok()
    }

    /// A term of type `ty` that also infers, for positions outside any
    /// checking context.
    fn inferable(
        &self,
        rng: &mut TestRng,
        ctx: &mut Ctx,
        ty: &TypeExpr,
        budget: usize,
    ) -> Option<Term> {
        (0..4).find_map(|_| {
            self.term(rng, ctx, ty, budget)
                .filter(|t| self.infers(ctx, t))
        })
    }

    /// Chains of `fst`, `snd` and `phi` from a variable down to `ty`.
    fn eliminations(
        &self,
        from: Term,
        at: &TypeExpr,
        ty: &TypeExpr,
        budget: usize,
        out: &mut Vec<Term>,
    ) {
        if at == ty {
            out.push(from.clone());
        }
        if budget <= 1 {
            return;
        }
        match at {
            TypeExpr::Prod(a, b) => {
                self.eliminations(Term::fst(from.clone()), a, ty, budget - 1, out);
                self.eliminations(Term::snd(from), b, ty, budget - 1, out);
            }
            TypeExpr::Lbl(l) => {
                if let Some(t) = self.graph.sigma(l) {
                    self.eliminations(Term::phi(from), t, ty, budget - 1, out);
                }
            }
            _ => {}
        }
    }

    fn neutral(
        &self,
        rng: &mut TestRng,
        ctx: &[(String, Option<TypeExpr>)],
        ty: &TypeExpr,
        budget: usize,
    ) -> Option<Term> {
        let mut found = Vec::new();
        for (n, t) in Self::visible(ctx) {
            self.eliminations(Term::Var(n), &t, ty, budget, &mut found);
        }
        found.choose(rng).cloned()
    }

    fn sum_types(&self, ctx: &[(String, Option<TypeExpr>)], budget: usize) -> Vec<TypeExpr> {
        fn walk(g: &Graph, t: &TypeExpr, budget: usize, out: &mut Vec<TypeExpr>) {
            if budget == 0 {
                return;
            }
            match t {
                TypeExpr::Sum(..) => out.push(t.clone()),
                TypeExpr::Prod(a, b) => {
                    walk(g, a, budget - 1, out);
                    walk(g, b, budget - 1, out);
                }
                TypeExpr::Lbl(l) => {
                    if let Some(s) = g.sigma(l) {
                        walk(g, s, budget - 1, out);
                    }
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        for (_, t) in Self::visible(ctx) {
            walk(self.graph, &t, budget, &mut out);
        }
        out
    }

    fn term(&self, rng: &mut TestRng, ctx: &mut Ctx, ty: &TypeExpr, budget: usize) -> Option<Term> {
        if budget == 0 {
            return None;
        }
        let mut options: Vec<u8> = (0..6).collect();
        options.shuffle(rng);
        for option in options {
            let made = match option {
                0 => self.neutral(rng, ctx, ty, budget),
                1 => self.intro(rng, ctx, ty, budget),
                2 | 3 if budget > 2 => {
                    let other = random_plain_type(rng, 1);
                    let kept = self.term(rng, ctx, ty, budget - 2);
                    let dropped = self.inferable(rng, ctx, &other, budget - 2);
                    match (kept, dropped) {
                        (Some(k), Some(d)) if option == 2 => Some(Term::fst(Term::pair(k, d))),
                        (Some(k), Some(d)) => Some(Term::snd(Term::pair(d, k))),
                        _ => None,
                    }
                }
                4 | 5 if budget > 2 => self.case(rng, ctx, ty, budget, option == 4),
                _ => None,
            };
            if made.is_some() {
                return made;
            }
        }
        None
    }

    fn intro(
        &self,
        rng: &mut TestRng,
        ctx: &mut Ctx,
        ty: &TypeExpr,
        budget: usize,
    ) -> Option<Term> {
        match ty {
            TypeExpr::One => Some(Term::Unit),
            TypeExpr::Prim(p) => {
                let kind = self.graph.schema().registry().kind(p)?;
                Some(Term::Lit(p.clone(), random_literal(rng, kind)))
            }
            TypeExpr::Prod(a, b) if budget > 1 => Some(Term::pair(
                self.term(rng, ctx, a, budget - 1)?,
                self.term(rng, ctx, b, budget - 1)?,
            )),
            TypeExpr::Sum(a, b) if budget > 1 => {
                if rng.gen_bool(0.5) {
                    self.term(rng, ctx, a, budget - 1).map(Term::inl)
                } else {
                    self.term(rng, ctx, b, budget - 1).map(Term::inr)
                }
            }
            _ => None,
        }
    }

    /// A `case`, either on an injection (a redex) or on a sum reachable
    /// from the variables in scope.
    fn case(
        &self,
        rng: &mut TestRng,
        ctx: &mut Ctx,
        ty: &TypeExpr,
        budget: usize,
        redex: bool,
    ) -> Option<Term> {
        let (scrutinee, a, b) = if redex {
            // only the taken branch's binder has a type
            let payload_type = random_plain_type(rng, 1);
            let payload = self.inferable(rng, ctx, &payload_type, budget - 2)?;
            if rng.gen_bool(0.5) {
                (Term::inl(payload), Some(payload_type), None)
            } else {
                (Term::inr(payload), None, Some(payload_type))
            }
        } else {
            let sum = self.sum_types(ctx, budget - 1).choose(rng)?.clone();
            let TypeExpr::Sum(a, b) = &sum else {
                unreachable!("sum type")
            };
            (
                self.neutral(rng, ctx, &sum, budget - 1)?,
                Some((**a).clone()),
                Some((**b).clone()),
            )
        };
        let (x, y) = (*BINDERS.choose(rng).unwrap(), *BINDERS.choose(rng).unwrap());
        ctx.push((x.to_string(), a));
        let left = self.term(rng, ctx, ty, budget - 1);
        ctx.pop();
        ctx.push((y.to_string(), b));
        let right = self.term(rng, ctx, ty, budget - 1);
        ctx.pop();
        Some(Term::case(scrutinee, x, left?, y, right?))
    }
}

/// A well-typed term of depth at most `max_depth` in the free variable `x`.
pub fn random_term_case(rng: &mut TestRng, max_depth: usize) -> TermCase {
    retry(rng, |rng| {
        let graph = Arc::new(random_graph(rng, 4, 8));
        let pool = by_label(&graph);
        let (var_type, binding) = match pool.iter().collect::<Vec<_>>().choose(rng) {
            Some((l, ids)) if rng.gen_bool(0.6) => (
                TypeExpr::Lbl((*l).clone()),
                Value::Ref(ids.choose(rng)?.clone()),
            ),
            _ => {
                let t = random_plain_type(rng, 2);
                let v = random_value(rng, &t, &pool, graph.schema().registry())?;
                (t, v)
            }
        };
        let ty = match &var_type {
            TypeExpr::Lbl(l) if rng.gen_bool(0.5) => graph.sigma(l)?.clone(),
            t if rng.gen_bool(0.2) => t.clone(),
            _ => random_plain_type(rng, 2),
        };
        let gen = TermGen { graph: &graph };
        let mut ctx = vec![(MAPPING_VAR.to_string(), Some(var_type.clone()))];
        let term = gen.term(rng, &mut ctx, &ty, max_depth)?;
        if term.depth() > max_depth {
            return None;
        }
        Some(TermCase {
            graph: graph.clone(),
            var_type,
            binding,
            term,
            ty,
        })
    })
}

// ---- conformance oracle and mutations ---------------------------------------

fn literal_fits(kind: PrimKind, lit: &Literal) -> bool {
    match (kind, lit) {
        (PrimKind::Text, Literal::Text(_)) => true,
        (PrimKind::Nat, Literal::Int(n)) => *n >= 0,
        (PrimKind::Integer, Literal::Int(_)) => true,
        (PrimKind::Double, Literal::Double(_)) => true,
        (PrimKind::Boolean, Literal::Bool(_)) => true,
        _ => false,
    }
}

/// Whether `v` inhabits `t` in `g`, checked directly from the definitions.
pub fn oracle_conforms(v: &Value, t: &TypeExpr, g: &Graph) -> bool {
    match (t, v) {
        (TypeExpr::One, Value::Unit) => true,
        (TypeExpr::Prim(p), Value::Prim(q, lit)) => {
            p == q
                && g.schema()
                    .registry()
                    .kind(p)
                    .is_some_and(|k| literal_fits(k, lit))
        }
        (TypeExpr::Lbl(l), Value::Ref(e)) => g.label_of(e) == Some(l),
        (TypeExpr::Sum(a, _), Value::Inl(x)) => oracle_conforms(x, a, g),
        (TypeExpr::Sum(_, b), Value::Inr(x)) => oracle_conforms(x, b, g),
        (TypeExpr::Prod(a, b), Value::Pair(x, y)) => {
            oracle_conforms(x, a, g) && oracle_conforms(y, b, g)
        }
        _ => false,
    }
}

/// Whether the element `id` of `g` has a known label and a conforming value.
pub fn oracle_element_ok(g: &Graph, id: &Ident) -> bool {
    let Some(el) = g.element(id) else {
        return false;
    };
    match g.sigma(&el.label) {
        Some(t) => oracle_conforms(&el.value, t, g),
        None => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MutationKind {
    Relabel,
    RetargetRef,
    SwapPair,
    FlipInjection,
    ChangePrimType,
}

/// A graph that differs from a valid one at a single place in one element.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub kind: MutationKind,
    pub element: Ident,
    pub path: Vec<Step>,
    pub description: String,
    pub graph: Graph,
}

fn positions(v: &Value) -> Vec<(Vec<Step>, &Value)> {
    fn walk<'a>(v: &'a Value, path: &mut Vec<Step>, out: &mut Vec<(Vec<Step>, &'a Value)>) {
        out.push((path.clone(), v));
        let under =
            |step, x: &'a Value, path: &mut Vec<Step>, out: &mut Vec<(Vec<Step>, &'a Value)>| {
                path.push(step);
                walk(x, path, out);
                path.pop();
            };
        match v {
            Value::Pair(a, b) => {
                under(Step::Fst, a, path, out);
                under(Step::Snd, b, path, out);
            }
            Value::Inl(x) => under(Step::Inl, x, path, out),
            Value::Inr(x) => under(Step::Inr, x, path, out),
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk(v, &mut Vec::new(), &mut out);
    out
}

fn replace_at(v: &Value, path: &[Step], new: Value) -> Value {
    let Some((step, rest)) = path.split_first() else {
        return new;
    };
    match (step, v) {
        (Step::Fst, Value::Pair(a, b)) => Value::pair(replace_at(a, rest, new), (**b).clone()),
        (Step::Snd, Value::Pair(a, b)) => Value::pair((**a).clone(), replace_at(b, rest, new)),
        (Step::Inl, Value::Inl(x)) => Value::inl(replace_at(x, rest, new)),
        (Step::Inr, Value::Inr(x)) => Value::inr(replace_at(x, rest, new)),
        _ => panic!("path does not fit the value"),
    }
}

fn with_element(g: &Graph, id: &Ident, label: Label, value: Value) -> Graph {
    let (schema, mut elements) = g.clone().into_parts();
    elements.insert(id.clone(), Element { label, value });
    Graph::new(schema, elements)
}

/// Single mutations of `g`, each of which makes the mutated element itself
/// nonconforming according to [`oracle_conforms`]. Structural mutations come
/// first; relabelings to fresh labels are added until there are at least
/// `min` of them.
pub fn mutations(g: &Graph, min: usize) -> Vec<Mutation> {
    let mut out = Vec::new();
    let labels: Vec<Label> = g.schema().labels().map(|(l, _)| l.clone()).collect();
    let prims: Vec<String> = g
        .schema()
        .registry()
        .iter()
        .map(|(n, _)| n.to_string())
        .collect();
    let keep = |out: &mut Vec<Mutation>,
                kind,
                id: &Ident,
                path: Vec<Step>,
                description: String,
                graph: Graph| {
        if !oracle_element_ok(&graph, id) {
            out.push(Mutation {
                kind,
                element: id.clone(),
                path,
                description,
                graph,
            });
        }
    };
    let mut ghost = 0;
    for (id, el) in g.elements() {
        for l in labels.iter().filter(|l| **l != el.label) {
            let m = with_element(g, id, l.clone(), el.value.clone());
            keep(
                &mut out,
                MutationKind::Relabel,
                id,
                vec![],
                format!("relabel {id} to {l}"),
                m,
            );
        }
        for (path, node) in positions(&el.value) {
            let mut variants: Vec<(MutationKind, Value, String)> = Vec::new();
            match node {
                Value::Ref(target) => {
                    variants.push((
                        MutationKind::RetargetRef,
                        Value::Ref(Ident::atom(format!("ghost{ghost}"))),
                        format!("retarget {target} to missing ghost{ghost}"),
                    ));
                    ghost += 1;
                    for (other, oel) in g.elements() {
                        if g.label_of(target) != Some(&oel.label) {
                            variants.push((
                                MutationKind::RetargetRef,
                                Value::Ref(other.clone()),
                                format!("retarget {target} to {other}"),
                            ));
                        }
                    }
                }
                Value::Pair(a, b) if a != b => {
                    variants.push((
                        MutationKind::SwapPair,
                        Value::Pair(b.clone(), a.clone()),
                        "swap pair".into(),
                    ));
                }
                Value::Inl(x) => variants.push((
                    MutationKind::FlipInjection,
                    Value::Inr(x.clone()),
                    "flip inl to inr".into(),
                )),
                Value::Inr(x) => variants.push((
                    MutationKind::FlipInjection,
                    Value::Inl(x.clone()),
                    "flip inr to inl".into(),
                )),
                Value::Prim(p, lit) => {
                    for q in prims
                        .iter()
                        .filter(|q| *q != p)
                        .chain(std::iter::once(&"Unregistered".to_string()))
                    {
                        variants.push((
                            MutationKind::ChangePrimType,
                            Value::Prim(q.clone(), lit.clone()),
                            format!("change primitive type {p} to {q}"),
                        ));
                    }
                }
                _ => {}
            }
            for (kind, new, what) in variants {
                let v = replace_at(&el.value, &path, new);
                let m = with_element(g, id, el.label.clone(), v);
                let description = format!("{id} {}: {what}", crate::adt::render_path(&path));
                keep(&mut out, kind, id, path.clone(), description, m);
            }
        }
    }
    let ids: Vec<&Ident> = g.element_ids().collect();
    let mut k = 0;
    while out.len() < min && !ids.is_empty() {
        let id = ids[k % ids.len()];
        let el = g.element(id).expect("listed element");
        let fresh = Label::atom(format!("__mut{k}"));
        let m = with_element(g, id, fresh.clone(), el.value.clone());
        keep(
            &mut out,
            MutationKind::Relabel,
            id,
            vec![],
            format!("relabel {id} to {fresh}"),
            m,
        );
        k += 1;
    }
    out
}

// ---- law and property checks ------------------------------------------------

fn sound(what: &str, r: &ConstructionResult) -> Result<(), String> {
    let report = validate_graph(&r.graph);
    if !report.is_empty() {
        return Err(format!("{what} graph is invalid: {report}"));
    }
    for (name, leg) in &r.legs {
        let report = check_morphism(leg);
        if !report.is_empty() {
            return Err(format!("{what} leg {name} is not a morphism: {report}"));
        }
    }
    Ok(())
}

fn leg<'r>(what: &str, r: &'r ConstructionResult, name: &str) -> Result<&'r Morphism, String> {
    r.leg(name)
        .ok_or_else(|| format!("{what} has no leg {name}"))
}

fn same(what: &str, a: Result<Morphism, MorphismError>, b: &Morphism) -> Result<(), String> {
    let a = a.map_err(|e| format!("{what}: {e}"))?;
    if !check_morphism(&a).is_empty() {
        return Err(format!("{what}: composite is not a morphism"));
    }
    if a.same_maps(b) {
        Ok(())
    } else {
        Err(format!("{what}: maps differ"))
    }
}

fn counts(what: &str, g: &Graph, labels: usize, elements: usize) -> Result<(), String> {
    if g.schema().len() == labels && g.len() == elements {
        Ok(())
    } else {
        Err(format!(
            "{what}: expected {labels} labels and {elements} elements, found {} and {}",
            g.schema().len(),
            g.len()
        ))
    }
}

/// One round of the universal-property laws on fresh random graphs of at
/// most `max_labels` labels and `max_elements` elements: counting laws for
/// `+` and `×`, the commuting triangles of pairing and case analysis, the
/// (co)equalizer and pushout squares, and the category laws.
pub fn check_laws(rng: &mut TestRng, max_labels: usize, max_elements: usize) -> Result<(), String> {
    let cat = |what: &'static str| move |e: CatError| format!("{what}: {e}");

    let (g1, g2) = (
        random_graph(rng, max_labels, max_elements),
        random_graph(rng, max_labels, max_elements),
    );
    let sum = coproduct(&g1, &g2).map_err(cat("coproduct"))?;
    sound("coproduct", &sum)?;
    counts(
        "coproduct",
        &sum.graph,
        g1.schema().len() + g2.schema().len(),
        g1.len() + g2.len(),
    )?;
    let prod = product(&g1, &g2).map_err(cat("product"))?;
    sound("product", &prod)?;
    counts(
        "product",
        &prod.graph,
        g1.schema().len() * g2.schema().len(),
        g1.len() * g2.len(),
    )?;

    let (f, g) = random_cone(rng, max_labels, max_elements);
    let prod = product(&f.target, &g.target).map_err(cat("product"))?;
    let u = pair(&f, &g).map_err(cat("pair"))?;
    if !check_morphism(&u).is_empty() {
        return Err("pair is not a morphism".into());
    }
    same(
        "proj1 . pair",
        compose(leg("product", &prod, "proj1")?, &u),
        &f,
    )?;
    same(
        "proj2 . pair",
        compose(leg("product", &prod, "proj2")?, &u),
        &g,
    )?;

    let (f, g) = random_cocone(rng, max_labels, max_elements);
    let sum = coproduct(&f.source, &g.source).map_err(cat("coproduct"))?;
    let c = case_analysis(&f, &g).map_err(cat("case"))?;
    if !check_morphism(&c).is_empty() {
        return Err("case is not a morphism".into());
    }
    same(
        "case . inj1",
        compose(&c, leg("coproduct", &sum, "inj1")?),
        &f,
    )?;
    same(
        "case . inj2",
        compose(&c, leg("coproduct", &sum, "inj2")?),
        &g,
    )?;

    let (h, j) = random_parallel_pair(rng, max_labels, max_elements);
    let eq = equalizer(&h, &j).map_err(cat("equalizer"))?;
    sound("equalizer", &eq)?;
    let e = leg("equalizer", &eq, "eq")?;
    same(
        "h . eq = j . eq",
        compose(&h, e),
        &compose(&j, e).map_err(|e| e.to_string())?,
    )?;

    let (h, j) = random_coequalizer_pair(rng, max_labels, max_elements);
    let co = coequalizer(&h, &j).map_err(cat("coequalizer"))?;
    sound("coequalizer", &co)?;
    if co.graph.schema() != h.target.schema() {
        return Err("coequalizer changed the schema".into());
    }
    let q = leg("coequalizer", &co, "coeq")?;
    same(
        "coeq . h = coeq . j",
        compose(q, &h),
        &compose(q, &j).map_err(|e| e.to_string())?,
    )?;

    let (f, g) = random_span(rng, max_labels, max_elements);
    let po = pushout(&f, &g).map_err(cat("pushout"))?;
    sound("pushout", &po)?;
    let (k, m) = (leg("pushout", &po, "k")?, leg("pushout", &po, "m")?);
    same(
        "k . f = m . g",
        compose(k, &f),
        &compose(m, &g).map_err(|e| e.to_string())?,
    )?;

    let (f, g, h) = random_chain(rng, max_labels, max_elements);
    same(
        "f . id",
        compose(&f, &Morphism::identity(f.source.clone())),
        &f,
    )?;
    same(
        "id . f",
        compose(&Morphism::identity(f.target.clone()), &f),
        &f,
    )?;
    let hg = compose(&h, &g).map_err(|e| e.to_string())?;
    let gf = compose(&g, &f).map_err(|e| e.to_string())?;
    same(
        "(h . g) . f = h . (g . f)",
        compose(&hg, &f),
        &compose(&h, &gf).map_err(|e| e.to_string())?,
    )?;
    Ok(())
}

/// Normalizes the term of `c` and checks the step bound `10 · size²`, that
/// no redex is left, that the result has the same type, and that both
/// evaluate to the same value.
pub fn check_term_case(c: &TermCase) -> Result<(), String> {
    let shown = || format!("{} : {}", c.term, c.ty);
    let n = normalize_with_stats(&c.term);
    let bound = 10 * c.term.size() * c.term.size();
    if n.steps > bound {
        return Err(format!(
            "{}: {} steps exceed the bound {bound}",
            shown(),
            n.steps
        ));
    }
    if !is_normal(&n.term) {
        return Err(format!("{}: result {} still has a redex", shown(), n.term));
    }
    let mut ctx = Context::new(c.graph.schema()).with(MAPPING_VAR, c.var_type.clone());
    check_type(&n.term, &c.ty, &mut ctx)
        .map_err(|e| format!("{}: result {} does not retype: {e}", shown(), n.term))?;
    let before =
        eval_term(&c.term, &c.binding, &c.graph).map_err(|e| format!("{}: {e}", shown()))?;
    let after =
        eval_term(&n.term, &c.binding, &c.graph).map_err(|e| format!("{}: {e}", shown()))?;
    if before != after {
        return Err(format!(
            "{}: evaluates to {before} before and {after} after normalizing",
            shown()
        ));
    }
    Ok(())
}

/// Checks that validation rejects the mutant with a finding on the mutated
/// element, and for a change inside the value, at or below the changed
/// position.
pub fn check_mutation(m: &Mutation) -> Result<(), String> {
    let report = validate_graph(&m.graph);
    let localized = report.findings.iter().any(|f| {
        f.subject == Subject::Element(m.element.clone())
            && (m.kind == MutationKind::Relabel || f.path.starts_with(&m.path))
    });
    if localized {
        Ok(())
    } else if report.is_empty() {
        Err(format!("{}: accepted", m.description))
    } else {
        Err(format!(
            "{}: no finding at the mutated place: {report}",
            m.description
        ))
    }
}
