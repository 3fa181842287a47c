//! Native JSON documents: graphs ("APG-JSON") and morphism files.
//!
//! ```text
//! {"primitives": [...],
//!  "schema":   {"<label>": "<type-expr>"},
//!  "elements": {"<id>": {"label": "<label>", "value": V}}}
//! ```
//!
//! where `V` is one of `{"unit": {}}`, `{"pair": [V, V]}`, `{"inl": V}`,
//! `{"inr": V}`, `{"prim": {"type": "<prim>", "value": <literal>}}` or
//! `{"ref": "<id>"}`. Output uses sorted keys, so writing is canonical.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value as Json};
use thiserror::Error;

use crate::adt::{AdtError, ElementId, Ident, Label, Literal, PrimKind, PrimRegistry, Value};
use crate::graph::{Element, Graph, Schema};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("JSON error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{context}: {message}")]
    Shape { context: String, message: String },
    #[error("{context}: {source}")]
    Syntax { context: String, source: AdtError },
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

pub(crate) fn shape(context: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Shape {
        context: context.into(),
        message: message.into(),
    }
}

pub(crate) fn syntax(context: impl Into<String>) -> impl FnOnce(AdtError) -> FormatError {
    let context = context.into();
    move |source| FormatError::Syntax { context, source }
}

pub fn parse_ident(text: &str, context: &str) -> Result<Ident, FormatError> {
    Ident::parse(text).map_err(syntax(format!("{context} '{text}'")))
}

pub(crate) fn as_object<'a>(
    j: &'a Json,
    context: &str,
) -> Result<&'a Map<String, Json>, FormatError> {
    j.as_object()
        .ok_or_else(|| shape(context, "expected a JSON object"))
}

pub(crate) fn as_str<'a>(j: &'a Json, context: &str) -> Result<&'a str, FormatError> {
    j.as_str()
        .ok_or_else(|| shape(context, "expected a JSON string"))
}

// ---- primitives -------------------------------------------------------------

pub fn registry_to_json(reg: &PrimRegistry) -> Json {
    let defaults = PrimRegistry::default();
    Json::Array(
        reg.iter()
            .map(|(name, kind)| {
                if defaults.kind(name) == Some(kind) {
                    Json::String(name.to_string())
                } else {
                    json!({"name": name, "domain": kind.as_str()})
                }
            })
            .collect(),
    )
}

/// A missing `primitives` entry means the default registry.
pub fn registry_from_json(j: Option<&Json>) -> Result<PrimRegistry, FormatError> {
    let Some(j) = j else {
        return Ok(PrimRegistry::default());
    };
    let items = j
        .as_array()
        .ok_or_else(|| shape("primitives", "expected an array"))?;
    let defaults = PrimRegistry::default();
    let mut reg = PrimRegistry::empty();
    for item in items {
        let (name, kind) = match item {
            Json::String(name) => {
                let kind = defaults.kind(name).ok_or_else(|| {
                    shape(
                        "primitives",
                        format!("'{name}' is not a built-in primitive; give its domain"),
                    )
                })?;
                (name.as_str(), kind)
            }
            Json::Object(o) => {
                let name = as_str(o.get("name").unwrap_or(&Json::Null), "primitives.name")?;
                let domain = as_str(o.get("domain").unwrap_or(&Json::Null), "primitives.domain")?;
                let kind = PrimKind::from_str_opt(domain).ok_or_else(|| {
                    shape("primitives.domain", format!("unknown domain '{domain}'"))
                })?;
                (name, kind)
            }
            _ => return Err(shape("primitives", "expected a name or {name, domain}")),
        };
        reg.insert(name, kind).map_err(syntax("primitives"))?;
    }
    Ok(reg)
}

// ---- values -----------------------------------------------------------------

pub fn literal_to_json(lit: &Literal) -> Json {
    match lit {
        Literal::Text(s) => Json::String(s.clone()),
        Literal::Int(n) => json!(n),
        Literal::Double(d) => json!(d),
        Literal::Bool(b) => json!(b),
    }
}

/// Reads a literal of the given domain. Domain checks (such as `Nat >= 0`)
/// are left to validation.
pub fn literal_from_json(j: &Json, kind: PrimKind, context: &str) -> Result<Literal, FormatError> {
    let bad = || {
        shape(
            context,
            format!("literal {j} does not fit domain {}", kind.as_str()),
        )
    };
    Ok(match kind {
        PrimKind::Text => Literal::Text(j.as_str().ok_or_else(bad)?.to_string()),
        PrimKind::Nat | PrimKind::Integer => Literal::Int(j.as_i64().ok_or_else(bad)?),
        PrimKind::Double => Literal::Double(j.as_f64().ok_or_else(bad)?),
        PrimKind::Boolean => Literal::Bool(j.as_bool().ok_or_else(bad)?),
    })
}

pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Unit => json!({"unit": {}}),
        Value::Pair(a, b) => json!({"pair": [value_to_json(a), value_to_json(b)]}),
        Value::Inl(x) => json!({"inl": value_to_json(x)}),
        Value::Inr(x) => json!({"inr": value_to_json(x)}),
        Value::Prim(name, lit) => json!({"prim": {"type": name, "value": literal_to_json(lit)}}),
        Value::Ref(e) => json!({"ref": e.to_string()}),
    }
}

pub fn value_from_json(j: &Json, reg: &PrimRegistry, context: &str) -> Result<Value, FormatError> {
    let o = as_object(j, context)?;
    if o.len() != 1 {
        return Err(shape(context, "a value object has exactly one key"));
    }
    let (tag, body) = o.iter().next().expect("one entry");
    Ok(match tag.as_str() {
        "unit" => Value::Unit,
        "pair" => match body.as_array().map(Vec::as_slice) {
            Some([a, b]) => Value::pair(
                value_from_json(a, reg, context)?,
                value_from_json(b, reg, context)?,
            ),
            _ => return Err(shape(context, "pair takes a two-element array")),
        },
        "inl" => Value::inl(value_from_json(body, reg, context)?),
        "inr" => Value::inr(value_from_json(body, reg, context)?),
        "prim" => {
            let p = as_object(body, context)?;
            let name = as_str(p.get("type").unwrap_or(&Json::Null), context)?;
            let kind = reg
                .kind(name)
                .ok_or_else(|| shape(context, format!("unknown primitive type '{name}'")))?;
            let lit = literal_from_json(p.get("value").unwrap_or(&Json::Null), kind, context)?;
            Value::Prim(name.to_string(), lit)
        }
        "ref" => Value::Ref(parse_ident(as_str(body, context)?, "element reference")?),
        other => {
            return Err(shape(
                context,
                format!("unknown value constructor '{other}'"),
            ))
        }
    })
}

// ---- schemas and graphs -----------------------------------------------------

pub fn schema_to_json(s: &Schema) -> Json {
    let labels: Map<String, Json> = s
        .labels()
        .map(|(l, t)| (l.to_string(), Json::String(t.to_string())))
        .collect();
    json!({"primitives": registry_to_json(s.registry()), "schema": labels})
}

/// Accepts either `{"primitives": [...], "schema": {...}}` or a bare
/// `{"<label>": "<type-expr>"}` map over the default primitives.
pub fn schema_from_json(j: &Json) -> Result<Schema, FormatError> {
    let o = as_object(j, "schema")?;
    let full = o.get("schema").is_some_and(Json::is_object) || o.contains_key("primitives");
    let empty = Map::new();
    let (reg, labels) = if full {
        let labels = match o.get("schema") {
            Some(s) => as_object(s, "schema")?,
            None => &empty,
        };
        (registry_from_json(o.get("primitives"))?, labels)
    } else {
        (PrimRegistry::default(), o)
    };
    let mut entries = Vec::new();
    for (key, t) in labels {
        entries.push((
            parse_ident(key, "label")?,
            as_str(t, &format!("schema of {key}"))?,
        ));
    }
    Schema::parse(reg, entries).map_err(|(label, e)| FormatError::Syntax {
        context: format!("schema of label {label}"),
        source: e,
    })
}

pub fn graph_to_json(g: &Graph) -> Json {
    let mut doc = schema_to_json(g.schema());
    let elements: Map<String, Json> = g
        .elements()
        .map(|(id, el)| {
            (
                id.to_string(),
                json!({"label": el.label.to_string(), "value": value_to_json(&el.value)}),
            )
        })
        .collect();
    doc["elements"] = Json::Object(elements);
    doc
}

pub fn graph_from_json(j: &Json) -> Result<Graph, FormatError> {
    let o = as_object(j, "graph")?;
    if let Some(key) = o
        .keys()
        .find(|k| !["primitives", "schema", "elements"].contains(&k.as_str()))
    {
        return Err(shape("graph", format!("unexpected key \"{key}\"")));
    }
    let schema = match o.get("schema") {
        Some(_) => schema_from_json(j)?,
        None => Schema::new(registry_from_json(o.get("primitives"))?),
    };
    let mut elements = BTreeMap::new();
    if let Some(els) = o.get("elements") {
        for (key, body) in as_object(els, "elements")? {
            let context = format!("element {key}");
            let id = parse_ident(key, "element id")?;
            let b = as_object(body, &context)?;
            let label = parse_ident(
                as_str(b.get("label").unwrap_or(&Json::Null), &context)?,
                "label",
            )?;
            let value = value_from_json(
                b.get("value").unwrap_or(&Json::Null),
                schema.registry(),
                &context,
            )?;
            elements.insert(id, Element { label, value });
        }
    }
    Ok(Graph::new(schema, elements))
}

/// Parses an APG-JSON document without validating it.
pub fn read_graph(text: &str) -> Result<Graph, FormatError> {
    let j: Json = serde_json::from_str(text)?;
    graph_from_json(&j)
}

/// Canonical APG-JSON text (sorted keys, two-space indentation, trailing newline).
pub fn write_graph(g: &Graph) -> String {
    let mut s = serde_json::to_string_pretty(&graph_to_json(g)).expect("serializable");
    s.push('\n');
    s
}

// ---- morphism files ---------------------------------------------------------

/// The label and element maps of a morphism file
/// `{"onLabels": {...}, "onElements": {...}}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MorphismMaps {
    pub on_labels: BTreeMap<Label, Label>,
    pub on_elements: BTreeMap<ElementId, ElementId>,
}

pub fn morphism_maps_to_json(m: &MorphismMaps) -> Json {
    let labels: Map<String, Json> = m
        .on_labels
        .iter()
        .map(|(a, b)| (a.to_string(), Json::String(b.to_string())))
        .collect();
    let elements: Map<String, Json> = m
        .on_elements
        .iter()
        .map(|(a, b)| (a.to_string(), Json::String(b.to_string())))
        .collect();
    json!({"onLabels": labels, "onElements": elements})
}

pub fn morphism_maps_from_json(j: &Json) -> Result<MorphismMaps, FormatError> {
    let o = as_object(j, "morphism")?;
    let read = |key: &str| -> Result<BTreeMap<Ident, Ident>, FormatError> {
        let mut out = BTreeMap::new();
        if let Some(m) = o.get(key) {
            for (k, v) in as_object(m, key)? {
                out.insert(parse_ident(k, key)?, parse_ident(as_str(v, key)?, key)?);
            }
        }
        Ok(out)
    };
    Ok(MorphismMaps {
        on_labels: read("onLabels")?,
        on_elements: read("onElements")?,
    })
}

pub fn read_morphism_maps(text: &str) -> Result<MorphismMaps, FormatError> {
    let j: Json = serde_json::from_str(text)?;
    morphism_maps_from_json(&j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip_all_fixtures() {
        for (name, g) in fixtures::all() {
            let text = write_graph(&g);
            let back = read_graph(&text).unwrap();
            assert_eq!(back, g, "{name}");
            assert_eq!(write_graph(&back), text, "{name}");
        }
    }

    #[test]
    fn empty_document() {
        let g = read_graph("{}").unwrap();
        assert!(g.is_empty());
        assert!(g.schema().is_empty());
        let g = read_graph(r#"{"schema": {}, "elements": {}}"#).unwrap();
        assert!(g.is_empty());
        // a bare schema map is not a graph
        assert!(matches!(
            read_graph(r#"{"a": "Nat"}"#),
            Err(FormatError::Shape { .. })
        ));
    }

    #[test]
    fn value_encoding_matches_documented_shape() {
        let v = Value::pair(Value::reference("t1"), Value::inl(Value::Unit));
        assert_eq!(
            value_to_json(&v),
            json!({"pair": [{"ref": "t1"}, {"inl": {"unit": {}}}]})
        );
        let p = Value::double(37.78);
        assert_eq!(
            value_to_json(&p),
            json!({"prim": {"type": "Double", "value": 37.78}})
        );
    }

    #[test]
    fn json_errors_carry_position() {
        match read_graph("{\n  \"schema\": [") {
            Err(FormatError::Json { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn custom_primitives() {
        let text = r#"{"primitives": ["String", {"name": "Lat", "domain": "double"}],
                       "schema": {"P": "Lat * String"},
                       "elements": {"p": {"label": "P", "value": {"pair": [
                           {"prim": {"type": "Lat", "value": 1}}, {"prim": {"type": "String", "value": "x"}}]}}}}"#;
        let g = read_graph(text).unwrap();
        assert_eq!(g.schema().registry().kind("Lat"), Some(PrimKind::Double));
        assert_eq!(read_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn bare_schema_object() {
        let s = schema_from_json(&json!({"l": "String * Nat * Integer"})).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn unknown_constructor_is_rejected() {
        let err = value_from_json(&json!({"wat": 1}), &PrimRegistry::default(), "v").unwrap_err();
        assert!(err.to_string().contains("wat"));
    }
}
