//! Bridges to other data models: RDF triples, relational tables and
//! key-value pairs.

mod kv;
mod rdf;
mod relational;

use percent_encoding::{AsciiSet, NON_ALPHANUMERIC};
use thiserror::Error;

use crate::adt::{ElementId, Label};
use crate::format::FormatError;
use crate::graph::{GraphError, ValidationReport};

pub use kv::export_kv;
pub use rdf::{element_iri, export_rdf, label_iri, predicate_iri, RDF_TYPE};
pub use relational::{
    columns_for, export_relational, import_relational, read_tables, write_tables, Column,
    ColumnKind, Table, TableSet,
};

/// Everything except RFC 3986 unreserved characters is escaped.
pub(crate) const IRI_ESCAPE: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'.')
    .remove(b'_')
    .remove(b'~');

#[derive(Debug, Error)]
pub enum BridgeError {
    #[error("table for {0}, which is not a label of the schema")]
    UnknownTable(Label),
    #[error("table {label} has columns {found:?}, expected {expected:?}")]
    Columns {
        label: Label,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("table {label}, row {row}, column {column}: {message}")]
    Cell {
        label: Label,
        row: usize,
        column: String,
        message: String,
    },
    #[error("id {0} occurs twice")]
    DuplicateId(ElementId),
    #[error("imported graph is invalid:\n{0}")]
    Invalid(ValidationReport),
    #[error("label {label} violates its primary key: {pairs:?}")]
    PrimaryKey {
        label: Label,
        pairs: Vec<(ElementId, ElementId)>,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
