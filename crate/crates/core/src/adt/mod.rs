//! Algebraic types and values: syntax, checking and structural transport.

mod check;
mod ident;
mod transport;
mod types;
mod value;

use thiserror::Error;

pub use check::{check_value, Mismatch, MismatchKind};
pub use ident::{parse_value_text, ElementId, Ident, Label};
pub use transport::{rename_refs, transport_type, transport_value};
pub use types::{parse_type, render_type, TypeExpr};
pub use value::{parse_path, render_path, Literal, PrimKind, PrimRegistry, Step, Value};

pub(crate) use ident::Cursor;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdtError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown identifier '{name}' at byte {pos}")]
    UnknownIdent { pos: usize, name: String },
    #[error("'{0}' is not a usable primitive type name")]
    BadPrimName(String),
    #[error("primitive type '{0}' is declared twice")]
    DuplicatePrim(String),
    #[error("label {0} is outside the domain of the label map")]
    LabelOutsideDomain(Label),
    #[error("reference to {0} is outside the domain of the element map")]
    RefOutsideDomain(ElementId),
    #[error("value {value} does not have the shape of type {ty}")]
    ShapeMismatch { value: String, ty: String },
    #[error("bad access path '{0}'")]
    BadPath(String),
}
