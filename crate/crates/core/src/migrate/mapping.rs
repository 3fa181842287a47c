use std::collections::BTreeMap;

use serde_json::{json, Map, Value as Json};

use crate::adt::{parse_type, transport_type, Label, TypeExpr};
use crate::format::{
    as_object, as_str, parse_ident, schema_from_json, schema_to_json, shape, syntax, FormatError,
};
use crate::graph::{Schema, Subject, ValidationReport};

use super::parse::parse_term_with;
use super::term::{Term, MAPPING_VAR};
use super::typecheck::{check_type, Context};

/// A schema mapping from `source` (S) to `target` (T): each S-label is sent
/// to a type over T and to a term with one free variable `x` of that type.
/// Data moves backwards, from T-graphs to S-graphs.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemaMapping {
    pub source: Schema,
    pub target: Schema,
    pub on_labels: BTreeMap<Label, TypeExpr>,
    pub on_terms: BTreeMap<Label, Term>,
}

impl SchemaMapping {
    /// Sends every label to itself and rebuilds each element with `phi x`.
    pub fn identity(schema: &Schema) -> Self {
        let labels: Vec<Label> = schema.labels().map(|(l, _)| l.clone()).collect();
        SchemaMapping {
            source: schema.clone(),
            target: schema.clone(),
            on_labels: labels
                .iter()
                .map(|l| (l.clone(), TypeExpr::Lbl(l.clone())))
                .collect(),
            on_terms: labels
                .into_iter()
                .map(|l| (l, Term::phi(Term::var(MAPPING_VAR))))
                .collect(),
        }
    }

    /// The type the term for `l` must have: `S(l)` with each label `l'`
    /// replaced by `M₁(l')`.
    pub fn expected_type(&self, l: &Label) -> Option<TypeExpr> {
        transport_type(self.source.sigma(l)?, &|l2: &Label| {
            self.on_labels.get(l2).cloned()
        })
        .ok()
    }
}

/// Checks that every source label has a type over the target and a term of
/// the transported type. Each finding names the offending source label.
pub fn typecheck_mapping(m: &SchemaMapping) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut note = |l: &Label, msg: String| report.push(Subject::Label(l.clone()), Vec::new(), msg);
    for l in m.on_labels.keys().chain(m.on_terms.keys()) {
        if !m.source.contains(l) {
            note(l, "is mapped but is not a source label".into());
        }
    }
    for (l, s_type) in m.source.labels() {
        let Some(ty) = m.on_labels.get(l) else {
            note(l, "has no target type".into());
            continue;
        };
        if let Some(bad) = ty.labels().into_iter().find(|l2| !m.target.contains(l2)) {
            note(
                l,
                format!("target type {ty} mentions {bad}, which is not a target label"),
            );
            continue;
        }
        if let Some(p) = ty
            .prims()
            .into_iter()
            .find(|p| !m.target.registry().contains(p))
        {
            note(l, format!("target type {ty} uses unknown primitive {p}"));
            continue;
        }
        let Some(term) = m.on_terms.get(l) else {
            note(l, "has no term".into());
            continue;
        };
        if let Some(v) = term.free_vars().into_iter().find(|v| v != MAPPING_VAR) {
            note(
                l,
                format!("term has free variable {v}; only {MAPPING_VAR} may be free"),
            );
            continue;
        }
        let expected = match transport_type(s_type, &|l2: &Label| m.on_labels.get(l2).cloned()) {
            Ok(t) => t,
            Err(e) => {
                note(l, e.to_string());
                continue;
            }
        };
        let mut ctx = Context::new(&m.target).with(MAPPING_VAR, ty.clone());
        if let Err(e) = check_type(term, &expected, &mut ctx) {
            note(l, format!("term does not have type {expected}: {e}"));
        }
    }
    report
}

pub fn mapping_to_json(m: &SchemaMapping) -> Json {
    let labels: Map<String, Json> = m
        .on_labels
        .iter()
        .map(|(l, t)| (l.to_string(), Json::String(t.to_string())))
        .collect();
    let terms: Map<String, Json> = m
        .on_terms
        .iter()
        .map(|(l, t)| (l.to_string(), Json::String(t.to_string())))
        .collect();
    json!({
        "source": schema_to_json(&m.source),
        "target": schema_to_json(&m.target),
        "onLabels": labels,
        "onTerms": terms,
    })
}

pub fn mapping_from_json(j: &Json) -> Result<SchemaMapping, FormatError> {
    let o = as_object(j, "mapping")?;
    let schema = |key: &str| match o.get(key) {
        Some(s) => schema_from_json(s),
        None => Err(shape("mapping", format!("missing \"{key}\""))),
    };
    let (source, target) = (schema("source")?, schema("target")?);
    let entries = |key: &str| -> Result<Vec<(Label, &str)>, FormatError> {
        let mut out = Vec::new();
        if let Some(m) = o.get(key) {
            for (k, v) in as_object(m, key)? {
                out.push((
                    parse_ident(k, "label")?,
                    as_str(v, &format!("{key} of {k}"))?,
                ));
            }
        }
        Ok(out)
    };
    let mut on_labels = BTreeMap::new();
    for (l, text) in entries("onLabels")? {
        let ty = parse_type(text, &target.label_set(), target.registry())
            .map_err(syntax(format!("target type of label {l}")))?;
        on_labels.insert(l, ty);
    }
    // Literals in terms may name primitives of either schema.
    let registry =
        target
            .registry()
            .merged(source.registry())
            .map_err(|e| FormatError::Syntax {
                context: "mapping primitives".into(),
                source: e,
            })?;
    let mut on_terms = BTreeMap::new();
    for (l, text) in entries("onTerms")? {
        let t = parse_term_with(text, &registry).map_err(syntax(format!("term of label {l}")))?;
        on_terms.insert(l, t);
    }
    Ok(SchemaMapping {
        source,
        target,
        on_labels,
        on_terms,
    })
}

pub fn read_mapping(text: &str) -> Result<SchemaMapping, FormatError> {
    let j: Json = serde_json::from_str(text)?;
    mapping_from_json(&j)
}

pub fn write_mapping(m: &SchemaMapping) -> String {
    let mut s = serde_json::to_string_pretty(&mapping_to_json(m)).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adt::PrimRegistry;
    use crate::migrate::parse_term;

    pub(crate) fn example() -> SchemaMapping {
        let source = Schema::parse(
            PrimRegistry::default(),
            [(Label::atom("l"), "String * Nat * Integer")],
        )
        .unwrap();
        let target = Schema::parse(
            PrimRegistry::default(),
            [(Label::atom("l_prime"), "Nat * String")],
        )
        .unwrap();
        SchemaMapping {
            source,
            target,
            on_labels: [(Label::atom("l"), TypeExpr::lbl("l_prime"))].into(),
            on_terms: [(
                Label::atom("l"),
                parse_term("(snd phi x, (fst phi x, Integer 0))").unwrap(),
            )]
            .into(),
        }
    }

    #[test]
    fn example_mapping_typechecks() {
        assert_eq!(typecheck_mapping(&example()), ValidationReport::default());
    }

    #[test]
    fn swapped_components_are_reported() {
        let mut m = example();
        m.on_terms.insert(
            Label::atom("l"),
            parse_term("(fst phi x, (snd phi x, Integer 0))").unwrap(),
        );
        let r = typecheck_mapping(&m);
        assert_eq!(r.len(), 1);
        assert!(
            r.findings[0].message.contains("expected String, found Nat"),
            "{r}"
        );
    }

    #[test]
    fn identity_on_label_free_schema() {
        let s = Schema::parse(
            PrimRegistry::default(),
            [(Label::atom("a"), "Nat"), (Label::atom("b"), "1 + String")],
        )
        .unwrap();
        assert!(typecheck_mapping(&SchemaMapping::identity(&s)).is_empty());
    }

    #[test]
    fn identity_on_labelled_schema() {
        let g = crate::fixtures::trips();
        assert!(typecheck_mapping(&SchemaMapping::identity(g.schema())).is_empty());
    }

    #[test]
    fn missing_and_extra_entries() {
        let mut m = example();
        m.on_terms.clear();
        m.on_labels.insert(Label::atom("ghost"), TypeExpr::One);
        let r = typecheck_mapping(&m);
        let msgs: Vec<_> = r.findings.iter().map(|f| f.to_string()).collect();
        assert_eq!(
            msgs,
            [
                "label ghost: is mapped but is not a source label",
                "label l: has no term"
            ]
        );
    }

    #[test]
    fn stray_free_variable() {
        let mut m = example();
        m.on_terms.insert(
            Label::atom("l"),
            parse_term("(y, (Nat 1, Integer 0))").unwrap(),
        );
        assert!(typecheck_mapping(&m).findings[0]
            .message
            .contains("free variable y"));
    }

    #[test]
    fn json_round_trip() {
        let m = example();
        let text = write_mapping(&m);
        assert_eq!(read_mapping(&text).unwrap(), m);
        assert!(text.contains("\"onTerms\""));
    }

    #[test]
    fn bad_documents() {
        assert!(read_mapping("{}").is_err());
        let bad = r#"{"source": {"l": "Nat"}, "target": {"m": "Nat"}, "onLabels": {"l": "nope"}}"#;
        assert!(matches!(read_mapping(bad), Err(FormatError::Syntax { .. })));
        let bad = r#"{"source": {"l": "Nat"}, "target": {"m": "Nat"}, "onTerms": {"l": "(x,"}}"#;
        assert!(matches!(read_mapping(bad), Err(FormatError::Syntax { .. })));
    }
}
