use crate::adt::{Label, Value};
use crate::graph::{check_primary_key, Graph};

use super::BridgeError;

/// Key-value view of a label whose type is a product: each element becomes
/// the pair of its first component (the key) and its second. Fails when
/// two elements share a key.
pub fn export_kv(g: &Graph, l: &Label) -> Result<Vec<(Value, Value)>, BridgeError> {
    let clashes = check_primary_key(g, l)?;
    if !clashes.is_empty() {
        return Err(BridgeError::PrimaryKey {
            label: l.clone(),
            pairs: clashes,
        });
    }
    Ok(g.elements_with_label(l)
        .filter_map(|(_, v)| match v {
            Value::Pair(k, v) => Some(((**k).clone(), (**v).clone())),
            _ => None,
        })
        .collect())
}
