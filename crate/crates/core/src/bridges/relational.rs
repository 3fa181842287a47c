use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use percent_encoding::utf8_percent_encode;
use serde_json::{json, Value as Json};

use crate::adt::{Cursor, Ident, Label, Step, TypeExpr, Value};
use crate::format::{as_object, as_str, parse_ident, schema_from_json, schema_to_json, shape};
use crate::graph::{validate_graph, Element, Graph, Schema};

use super::BridgeError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColumnKind {
    Id,
    /// Reference to an element of the given label.
    Fk(Label),
    /// Primitive literal of the named type.
    Prim(String),
    /// Which branch of a sum is taken: `l` or `r`.
    Discriminator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

/// One table. Every row has a cell per column; the first column is the id
/// and an empty cell means the branch holding it is not taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TableSet {
    pub tables: BTreeMap<Label, Table>,
}

fn path_name(path: &[Step]) -> String {
    path.iter()
        .map(|s| s.as_str())
        .collect::<Vec<_>>()
        .join(".")
}

fn leaf_name(path: &[Step]) -> String {
    if path.is_empty() {
        "$".into()
    } else {
        path_name(path)
    }
}

fn discriminator_name(path: &[Step]) -> String {
    format!("{}#", path_name(path))
}

/// Columns for a label of type `t`: `id`, then one column per primitive or
/// label leaf and one discriminator per sum, named by access path.
pub fn columns_for(t: &TypeExpr) -> Vec<Column> {
    let mut out = vec![Column {
        name: "id".into(),
        kind: ColumnKind::Id,
    }];
    flatten(t, &mut Vec::new(), &mut out);
    out
}

fn flatten(t: &TypeExpr, path: &mut Vec<Step>, out: &mut Vec<Column>) {
    let under = |step, t: &TypeExpr, path: &mut Vec<Step>, out: &mut Vec<Column>| {
        path.push(step);
        flatten(t, path, out);
        path.pop();
    };
    match t {
        TypeExpr::Zero | TypeExpr::One => {}
        TypeExpr::Prim(p) => out.push(Column {
            name: leaf_name(path),
            kind: ColumnKind::Prim(p.clone()),
        }),
        TypeExpr::Lbl(l) => out.push(Column {
            name: leaf_name(path),
            kind: ColumnKind::Fk(l.clone()),
        }),
        TypeExpr::Sum(a, b) => {
            out.push(Column {
                name: discriminator_name(path),
                kind: ColumnKind::Discriminator,
            });
            under(Step::Inl, a, path, out);
            under(Step::Inr, b, path, out);
        }
        TypeExpr::Prod(a, b) => {
            under(Step::Fst, a, path, out);
            under(Step::Snd, b, path, out);
        }
    }
}

/// Shreds `g` into one table per label using the wide encoding for sums.
pub fn export_relational(g: &Graph) -> TableSet {
    let mut tables = BTreeMap::new();
    for (l, t) in g.schema().labels() {
        let columns = columns_for(t);
        let index: BTreeMap<&str, usize> = columns
            .iter()
            .enumerate()
            .map(|(i, c)| (c.name.as_str(), i))
            .collect();
        let mut rows = Vec::new();
        for (id, v) in g.elements_with_label(l) {
            let mut row = vec![String::new(); columns.len()];
            row[0] = id.to_string();
            fill(v, t, &mut Vec::new(), &index, &mut row);
            rows.push(row);
        }
        tables.insert(l.clone(), Table { columns, rows });
    }
    TableSet { tables }
}

fn fill(
    v: &Value,
    t: &TypeExpr,
    path: &mut Vec<Step>,
    index: &BTreeMap<&str, usize>,
    row: &mut [String],
) {
    let mut set = |name: String, cell: String| {
        if let Some(&i) = index.get(name.as_str()) {
            row[i] = cell;
        }
    };
    match (t, v) {
        (TypeExpr::Prim(_), Value::Prim(_, lit)) => set(leaf_name(path), lit.render()),
        (TypeExpr::Lbl(_), Value::Ref(e)) => set(leaf_name(path), e.to_string()),
        (TypeExpr::Sum(a, b), Value::Inl(x) | Value::Inr(x)) => {
            let (tag, step, sub) = if matches!(v, Value::Inl(_)) {
                ("l", Step::Inl, a)
            } else {
                ("r", Step::Inr, b)
            };
            set(discriminator_name(path), tag.into());
            path.push(step);
            fill(x, sub, path, index, row);
            path.pop();
        }
        (TypeExpr::Prod(a, b), Value::Pair(x, y)) => {
            path.push(Step::Fst);
            fill(x, a, path, index, row);
            path.pop();
            path.push(Step::Snd);
            fill(y, b, path, index, row);
            path.pop();
        }
        // Unit and ill-typed values leave no cells; export assumes a valid graph.
        _ => {}
    }
}

/// Rebuilds a graph on `s` from tables produced by [`export_relational`].
/// A label without a table has no elements.
pub fn import_relational(ts: &TableSet, s: &Schema) -> Result<Graph, BridgeError> {
    if let Some(l) = ts.tables.keys().find(|l| !s.contains(l)) {
        return Err(BridgeError::UnknownTable(l.clone()));
    }
    let mut elements = BTreeMap::new();
    for (l, t) in s.labels() {
        let Some(table) = ts.tables.get(l) else {
            continue;
        };
        let columns = columns_for(t);
        if table.columns != columns {
            return Err(BridgeError::Columns {
                label: l.clone(),
                expected: columns.iter().map(|c| c.name.clone()).collect(),
                found: table.columns.iter().map(|c| c.name.clone()).collect(),
            });
        }
        let index: BTreeMap<&str, usize> = columns
            .iter()
            .enumerate()
            .map(|(i, c)| (c.name.as_str(), i))
            .collect();
        for (n, row) in table.rows.iter().enumerate() {
            let at = |column: &str, message: String| BridgeError::Cell {
                label: l.clone(),
                row: n + 1,
                column: column.to_string(),
                message,
            };
            if row.len() != columns.len() {
                return Err(at(
                    "id",
                    format!("row has {} cells, expected {}", row.len(), columns.len()),
                ));
            }
            let id = Ident::parse(&row[0]).map_err(|e| at("id", e.to_string()))?;
            let mut used = BTreeSet::from([0]);
            let value = rebuild(t, &mut Vec::new(), &index, row, &mut used, s)
                .map_err(|(column, message)| at(&column, message))?;
            if let Some(i) = (0..row.len()).find(|i| !used.contains(i) && !row[*i].is_empty()) {
                return Err(at(
                    &columns[i].name,
                    "cell is set on a branch that is not taken".into(),
                ));
            }
            if elements
                .insert(
                    id.clone(),
                    Element {
                        label: l.clone(),
                        value,
                    },
                )
                .is_some()
            {
                return Err(BridgeError::DuplicateId(id));
            }
        }
    }
    let g = Graph::new(s.clone(), elements);
    let report = validate_graph(&g);
    if !report.is_empty() {
        return Err(BridgeError::Invalid(report));
    }
    Ok(g)
}

fn take<'r>(
    name: String,
    index: &BTreeMap<&str, usize>,
    row: &'r [String],
    used: &mut BTreeSet<usize>,
) -> Result<(String, &'r str), (String, String)> {
    let i = index[name.as_str()];
    used.insert(i);
    if row[i].is_empty() {
        return Err((name, "missing value".into()));
    }
    Ok((name, row[i].as_str()))
}

fn rebuild(
    t: &TypeExpr,
    path: &mut Vec<Step>,
    index: &BTreeMap<&str, usize>,
    row: &[String],
    used: &mut BTreeSet<usize>,
    s: &Schema,
) -> Result<Value, (String, String)> {
    Ok(match t {
        TypeExpr::Zero => return Err((leaf_name(path), "type 0 has no values".into())),
        TypeExpr::One => Value::Unit,
        TypeExpr::Prim(p) => {
            let (name, text) = take(leaf_name(path), index, row, used)?;
            let mut cur = Cursor::new(text);
            let lit = cur
                .literal()
                .and_then(|lit| cur.expect_end().map(|_| lit))
                .map_err(|e| (name.clone(), e.to_string()))?;
            let kind = s
                .registry()
                .kind(p)
                .ok_or_else(|| (name.clone(), format!("unknown primitive type {p}")))?;
            if !kind.admits(&lit) {
                return Err((name, format!("{text} is not a {p}")));
            }
            Value::Prim(p.clone(), lit)
        }
        TypeExpr::Lbl(_) => {
            let (name, text) = take(leaf_name(path), index, row, used)?;
            Value::Ref(Ident::parse(text).map_err(|e| (name, e.to_string()))?)
        }
        TypeExpr::Sum(a, b) => {
            let (name, tag) = take(discriminator_name(path), index, row, used)?;
            let (step, sub) = match tag {
                "l" => (Step::Inl, a),
                "r" => (Step::Inr, b),
                other => {
                    return Err((name, format!("discriminator must be l or r, found {other}")))
                }
            };
            path.push(step);
            let x = rebuild(sub, path, index, row, used, s);
            path.pop();
            if step == Step::Inl {
                Value::inl(x?)
            } else {
                Value::inr(x?)
            }
        }
        TypeExpr::Prod(a, b) => {
            path.push(Step::Fst);
            let x = rebuild(a, path, index, row, used, s);
            path.pop();
            path.push(Step::Snd);
            let y = rebuild(b, path, index, row, used, s);
            path.pop();
            Value::pair(x?, y?)
        }
    })
}

// ---- files ------------------------------------------------------------------

fn file_name(l: &Label) -> String {
    format!(
        "{}.csv",
        utf8_percent_encode(&l.to_string(), super::IRI_ESCAPE)
    )
}

fn column_to_json(c: &Column) -> Json {
    match &c.kind {
        ColumnKind::Id => json!({"name": c.name, "kind": "id"}),
        ColumnKind::Fk(l) => json!({"name": c.name, "kind": "fk", "label": l.to_string()}),
        ColumnKind::Prim(p) => json!({"name": c.name, "kind": "prim", "type": p}),
        ColumnKind::Discriminator => json!({"name": c.name, "kind": "discriminator"}),
    }
}

fn column_from_json(j: &Json) -> Result<Column, BridgeError> {
    let o = as_object(j, "manifest column")?;
    let field = |k: &str| {
        as_str(
            o.get(k).unwrap_or(&Json::Null),
            &format!("manifest column field {k}"),
        )
    };
    let name = field("name")?.to_string();
    let kind = match field("kind")? {
        "id" => ColumnKind::Id,
        "fk" => ColumnKind::Fk(parse_ident(field("label")?, "label")?),
        "prim" => ColumnKind::Prim(field("type")?.to_string()),
        "discriminator" => ColumnKind::Discriminator,
        other => return Err(shape("manifest column", format!("unknown kind {other}")).into()),
    };
    Ok(Column { name, kind })
}

/// Writes `<label>.csv` per table plus `manifest.json`, which records each
/// table's file and column kinds and, when given, the schema.
pub fn write_tables(dir: &Path, ts: &TableSet, schema: Option<&Schema>) -> Result<(), BridgeError> {
    fs::create_dir_all(dir)?;
    let mut manifest = serde_json::Map::new();
    for (l, table) in &ts.tables {
        let file = file_name(l);
        let mut w = csv::Writer::from_path(dir.join(&file))?;
        w.write_record(table.columns.iter().map(|c| c.name.as_str()))?;
        for row in &table.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        let columns: Vec<Json> = table.columns.iter().map(column_to_json).collect();
        manifest.insert(l.to_string(), json!({"file": file, "columns": columns}));
    }
    let mut doc = json!({"tables": manifest});
    if let Some(s) = schema {
        doc["schema"] = schema_to_json(s);
    }
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    fs::write(dir.join("manifest.json"), text)?;
    Ok(())
}

/// Reads a directory written by [`write_tables`], returning the tables and
/// the schema recorded in the manifest, if any.
pub fn read_tables(dir: &Path) -> Result<(TableSet, Option<Schema>), BridgeError> {
    let text = fs::read_to_string(dir.join("manifest.json"))?;
    let doc: Json = serde_json::from_str(&text).map_err(crate::format::FormatError::from)?;
    let o = as_object(&doc, "manifest")?;
    let schema = o.get("schema").map(schema_from_json).transpose()?;
    let mut tables = BTreeMap::new();
    if let Some(t) = o.get("tables") {
        for (key, entry) in as_object(t, "manifest tables")? {
            let label = parse_ident(key, "label")?;
            let e = as_object(entry, key)?;
            let file = as_str(
                e.get("file").unwrap_or(&Json::Null),
                &format!("file of table {key}"),
            )?;
            let columns = match e.get("columns") {
                Some(Json::Array(cs)) => cs
                    .iter()
                    .map(column_from_json)
                    .collect::<Result<Vec<_>, _>>()?,
                _ => return Err(shape(key.as_str(), "expected a columns array").into()),
            };
            let mut r = csv::ReaderBuilder::new()
                .has_headers(true)
                .from_path(dir.join(file))?;
            let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
            let names: Vec<String> = columns.iter().map(|c| c.name.clone()).collect();
            if header != names {
                return Err(BridgeError::Columns {
                    label,
                    expected: names,
                    found: header,
                });
            }
            let mut rows = Vec::new();
            for rec in r.records() {
                rows.push(rec?.iter().map(str::to_string).collect());
            }
            tables.insert(label, Table { columns, rows });
        }
    }
    Ok((TableSet { tables }, schema))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(t: &Table) -> Vec<&str> {
        t.columns.iter().map(|c| c.name.as_str()).collect()
    }

    #[test]
    fn plate_table() {
        let ts = export_relational(&fixtures::plates1());
        let t = &ts.tables[&Label::atom("PlateNumber")];
        assert_eq!(names(t), ["id", "fst", "snd.fst", "snd.snd"]);
        assert_eq!(
            t.rows,
            [
                ["p1", "\"US\"", "\"CA\"", "\"6TRJ244\""],
                ["p2", "\"MX\"", "\"BC\"", "\"AHD-41-02\""]
            ]
        );
    }

    #[test]
    fn trip_table() {
        let ts = export_relational(&fixtures::trips());
        let t = &ts.tables[&Label::atom("Trip")];
        assert_eq!(
            names(t),
            [
                "id",
                "fst",
                "snd.fst",
                "snd.snd.fst#",
                "snd.snd.fst.inr",
                "snd.snd.snd#",
                "snd.snd.snd.inr"
            ]
        );
        assert_eq!(t.columns[1].kind, ColumnKind::Fk(Label::atom("User")));
        assert_eq!(t.columns[4].kind, ColumnKind::Fk(Label::atom("PlaceEvent")));
        let t2 = t.rows.iter().find(|r| r[0] == "t2").unwrap();
        assert_eq!(t2, &["t2", "u1", "u3", "r", "e3", "l", ""]);
    }

    #[test]
    fn vertex_table_has_only_ids() {
        let ts = export_relational(&fixtures::vertices());
        let t = &ts.tables[&Label::atom("User")];
        assert_eq!(names(t), ["id"]);
        assert_eq!(t.rows, [["u1"]]);
        let alias = export_relational(&fixtures::aliases());
        assert_eq!(
            names(&alias.tables[&Label::atom("DegreesLatitude")]),
            ["id", "$"]
        );
    }

    #[test]
    fn round_trip_fixtures() {
        for (name, g) in fixtures::all() {
            let back = import_relational(&export_relational(&g), g.schema()).unwrap();
            assert_eq!(back, g, "{name}");
        }
    }

    #[test]
    fn empty_tables() {
        let g = fixtures::trips();
        let empty = Graph::empty(g.schema().clone());
        assert_eq!(
            import_relational(&export_relational(&empty), g.schema()).unwrap(),
            empty
        );
        assert_eq!(
            import_relational(&TableSet::default(), g.schema()).unwrap(),
            empty
        );
    }

    #[test]
    fn import_errors() {
        let g = fixtures::trips();
        let mut ts = export_relational(&g);
        let trip = ts.tables.get_mut(&Label::atom("Trip")).unwrap();
        trip.rows[1][5] = String::new();
        let e = import_relational(&ts, g.schema()).unwrap_err();
        assert!(
            matches!(&e, BridgeError::Cell { column, .. } if column == "snd.snd.snd#"),
            "{e}"
        );

        let mut ts = export_relational(&g);
        ts.tables.get_mut(&Label::atom("Trip")).unwrap().rows[0][1] = "nobody".into();
        assert!(matches!(
            import_relational(&ts, g.schema()),
            Err(BridgeError::Invalid(_))
        ));

        let mut ts = export_relational(&g);
        ts.tables
            .get_mut(&Label::atom("UnixTimeSeconds"))
            .unwrap()
            .rows[0][1] = "\"soon\"".into();
        assert!(matches!(
            import_relational(&ts, g.schema()),
            Err(BridgeError::Cell { .. })
        ));

        let mut ts = export_relational(&g);
        ts.tables.get_mut(&Label::atom("Trip")).unwrap().rows[1][6] = "e1".into();
        let e = import_relational(&ts, g.schema()).unwrap_err();
        assert!(e.to_string().contains("not taken"), "{e}");
    }

    #[test]
    fn csv_directory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for (name, g) in fixtures::all() {
            let sub = dir.path().join(name);
            write_tables(&sub, &export_relational(&g), Some(g.schema())).unwrap();
            let (ts, schema) = read_tables(&sub).unwrap();
            let schema = schema.unwrap();
            assert_eq!(&schema, g.schema(), "{name}");
            assert_eq!(import_relational(&ts, &schema).unwrap(), g, "{name}");
        }
        assert!(dir.path().join("vertices").join("%22%22.csv").exists());
    }
}
