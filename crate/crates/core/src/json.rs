//! Canonical JSON encoding of check results.

use crate::check::CheckResult;

/// Compact JSON with keys in schema order.
pub fn to_json(result: &CheckResult) -> String {
    serde_json::to_string(result).expect("check results always serialize")
}
