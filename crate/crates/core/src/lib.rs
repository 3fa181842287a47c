//! Algebraic property graphs.
//!
//! A graph is a schema assigning an algebraic data type to every label,
//! together with elements that each carry a label and a value of that type.
//! On top of that model this crate provides:
//!
//! * [`adt`]: type and value syntax, checking and structural transport;
//! * [`graph`]: schemas, graphs and validation;
//! * [`morphism`]: label- and element-maps between graphs;
//! * [`catops`]: products, coproducts, (co)equalizers and pushouts;
//! * [`integrate`]: key-based matching and merging;
//! * [`migrate`]: schema mappings, a small term language and Δ migration;
//! * [`taxonomy`]: classification of labels into vertices, edges, properties, ...;
//! * [`bridges`]: RDF, relational and key-value views;
//! * [`format`]: the native JSON document format.

pub mod adt;
pub mod bridges;
pub mod catops;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod integrate;
pub mod migrate;
pub mod morphism;
pub mod taxonomy;
#[cfg(feature = "testing")]
pub mod testing;

pub use adt::{ElementId, Label, TypeExpr, Value};
pub use graph::{validate_graph, Graph, Schema, ValidationReport};
pub use morphism::Morphism;
