use std::fmt::Write;

use percent_encoding::utf8_percent_encode;

use crate::adt::{Ident, Literal, PrimKind, PrimRegistry, Step, Value};
use crate::graph::Graph;

use super::IRI_ESCAPE;

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

fn enc(id: &Ident) -> String {
    utf8_percent_encode(&id.to_string(), IRI_ESCAPE).to_string()
}

pub fn element_iri(id: &Ident) -> String {
    format!("<apg:e/{}>", enc(id))
}

pub fn label_iri(l: &Ident) -> String {
    format!("<apg:l/{}>", enc(l))
}

/// `<apg:p/LABEL/fst/snd>`; the root path is `<apg:p/LABEL>`.
pub fn predicate_iri(l: &Ident, path: &[Step]) -> String {
    let mut s = format!("<apg:p/{}", enc(l));
    for step in path {
        s.push('/');
        s.push_str(step.as_str());
    }
    s.push('>');
    s
}

fn literal(prim: &str, lit: &Literal, registry: &PrimRegistry) -> String {
    // JSON string escapes are a subset of the N-Triples ones.
    let lexical = match lit {
        Literal::Text(s) => s.clone(),
        Literal::Int(n) => n.to_string(),
        Literal::Double(d) if d.is_nan() => "NaN".into(),
        Literal::Double(d) if d.is_infinite() => if *d > 0.0 { "INF" } else { "-INF" }.into(),
        Literal::Double(d) => format!("{d:?}"),
        Literal::Bool(b) => b.to_string(),
    };
    let quoted = serde_json::Value::String(lexical).to_string();
    let standard = PrimRegistry::default().kind(prim);
    let datatype = match registry.kind(prim).filter(|k| standard == Some(*k)) {
        Some(PrimKind::Text) => format!("<{XSD}string>"),
        Some(PrimKind::Nat) => format!("<{XSD}nonNegativeInteger>"),
        Some(PrimKind::Integer) => format!("<{XSD}integer>"),
        Some(PrimKind::Double) => format!("<{XSD}double>"),
        Some(PrimKind::Boolean) => format!("<{XSD}boolean>"),
        None => format!("<apg:t/{}>", utf8_percent_encode(prim, IRI_ESCAPE)),
    };
    format!("{quoted}^^{datatype}")
}

/// Graphs-as-triples encoding as sorted N-Triples.
///
/// Each element contributes an `rdf:type` triple plus one triple per leaf of
/// its value. The predicate records the access path to the leaf; unit
/// leaves become `<apg:unit>`, so the chosen branch of a sum stays visible.
pub fn export_rdf(g: &Graph) -> String {
    let mut lines = Vec::new();
    for (id, el) in g.elements() {
        let subject = element_iri(id);
        lines.push(format!("{subject} <{RDF_TYPE}> {} .", label_iri(&el.label)));
        let mut path = Vec::new();
        leaves(&el.value, &mut path, &mut |path, leaf| {
            let object = match leaf {
                Value::Ref(e) => element_iri(e),
                Value::Prim(p, lit) => literal(p, lit, g.schema().registry()),
                _ => "<apg:unit>".to_string(),
            };
            lines.push(format!(
                "{subject} {} {object} .",
                predicate_iri(&el.label, path)
            ));
        });
    }
    lines.sort();
    let mut out = String::new();
    for line in lines {
        writeln!(out, "{line}").expect("write to string");
    }
    out
}

fn leaves(v: &Value, path: &mut Vec<Step>, emit: &mut dyn FnMut(&[Step], &Value)) {
    let go = |step, v: &Value, path: &mut Vec<Step>, emit: &mut dyn FnMut(&[Step], &Value)| {
        path.push(step);
        leaves(v, path, emit);
        path.pop();
    };
    match v {
        Value::Pair(a, b) => {
            go(Step::Fst, a, path, emit);
            go(Step::Snd, b, path, emit);
        }
        Value::Inl(x) => go(Step::Inl, x, path, emit),
        Value::Inr(x) => go(Step::Inr, x, path, emit),
        leaf => emit(path, leaf),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn driver_edge_triples() {
        let text = export_rdf(&fixtures::edges());
        let d1: Vec<_> = text
            .lines()
            .filter(|l| l.starts_with("<apg:e/d1>"))
            .collect();
        assert_eq!(
            d1,
            [
                "<apg:e/d1> <apg:p/driver/fst> <apg:e/t1> .",
                "<apg:e/d1> <apg:p/driver/snd> <apg:e/u1> .",
                "<apg:e/d1> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <apg:l/driver> .",
            ]
        );
    }

    #[test]
    fn vertex_has_type_and_unit_marker() {
        let text = export_rdf(&fixtures::vertices());
        let u1: Vec<_> = text
            .lines()
            .filter(|l| l.starts_with("<apg:e/u1>"))
            .collect();
        assert_eq!(
            u1,
            [
                "<apg:e/u1> <apg:p/User> <apg:unit> .",
                format!("<apg:e/u1> <{RDF_TYPE}> <apg:l/User> .").as_str()
            ]
        );
    }

    #[test]
    fn trips_triple_count() {
        // Hand count per label: User, Place: 1 + 1; UnixTimeSeconds: 1 + 1;
        // PlaceEvent: 1 + 2; Trip: 1 + 4 (both users and one leaf per option).
        let want = 3 * 2 + 3 * 2 + 4 * 2 + 4 * 3 + 2 * 5;
        assert_eq!(want, 42);
        assert_eq!(export_rdf(&fixtures::trips()).lines().count(), want);
    }

    #[test]
    fn literals_are_typed_and_escaped() {
        let text = export_rdf(&fixtures::names());
        assert!(text.contains(
            "<apg:e/n1> <apg:p/name/snd> \"Arthur Dent\"^^<http://www.w3.org/2001/XMLSchema#string> ."
        ));
        assert!(export_rdf(&fixtures::aliases())
            .contains("\"-122.42\"^^<http://www.w3.org/2001/XMLSchema#double>"));
        assert_eq!(
            element_iri(&Ident::pair("a b".into(), "c".into())),
            "<apg:e/%28%22a%20b%22%2Cc%29>"
        );
    }

    #[test]
    fn output_is_sorted_and_deterministic() {
        let text = export_rdf(&fixtures::trips());
        let mut lines: Vec<_> = text.lines().collect();
        let before = lines.clone();
        lines.sort();
        assert_eq!(lines, before);
        assert_eq!(export_rdf(&fixtures::trips()), text);
    }
}
