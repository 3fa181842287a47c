//! Schema mappings and migration of data along them.
//!
//! A mapping from S to T sends each S-label to a type over T (`onLabels`)
//! and to a term in one free variable `x` of that type (`onTerms`). Terms
//! use pairs, injections, projections, `case` and `phi`, which reads an
//! element's value:
//!
//! ```text
//! (snd phi x, (fst phi x, Integer 0))
//! ```
//!
//! [`delta_migrate`] runs a mapping backwards, turning a T-graph into an
//! S-graph. The types in `onLabels` must be built from `1`, `+`, `×` and
//! labels so that their values over a graph can be listed.

mod delta;
mod enumerate;
mod eval;
mod mapping;
mod normalize;
mod parse;
mod term;
mod typecheck;

use thiserror::Error;

use crate::adt::{ElementId, TypeExpr};
use crate::graph::ValidationReport;

pub use delta::{delta_migrate, migrated_count};
pub use enumerate::{enumerate_values, is_enumerable};
pub use eval::{eval_in, eval_term, EvalError};
pub use mapping::{
    mapping_from_json, mapping_to_json, read_mapping, typecheck_mapping, write_mapping,
    SchemaMapping,
};
pub use normalize::{is_normal, normalize_term, normalize_with_stats, Normalized};
pub use parse::{parse_term, parse_term_with};
pub use term::{Term, MAPPING_VAR};
pub use typecheck::{check_type, infer_type, Context, TypeError};

#[derive(Debug, Error)]
pub enum MigrateError {
    #[error("the mapping does not typecheck:\n{0}")]
    IllTyped(ValidationReport),
    #[error("cannot list the values of {0}; only 0, 1, +, * and labels are allowed")]
    NotEnumerable(TypeExpr),
    #[error("the graph's schema is not the mapping's target schema")]
    TargetMismatch,
    #[error("the input graph is invalid:\n{0}")]
    InvalidInput(ValidationReport),
    #[error("evaluating {element}: {source}")]
    Eval {
        element: ElementId,
        source: EvalError,
    },
    #[error("element {element} at {path}: {detail}")]
    Reindex {
        element: ElementId,
        path: String,
        detail: String,
    },
    #[error("the migrated graph is invalid:\n{0}")]
    InvalidOutput(ValidationReport),
}
