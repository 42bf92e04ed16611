//! Machine-readable reports. Field order is fixed by declaration order, so
//! identical inputs serialize to identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::problem::CochainSpec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOut {
    pub object: String,
    pub check: String,
    pub witness: Vec<usize>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub command: String,
    pub ok: bool,
    /// objects that were present and checked, in checking order
    pub checked: Vec<String>,
    pub failures: Vec<CheckOut>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub command: String,
    pub degree: usize,
    pub factors: Vec<u64>,
    pub order: u128,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<CochainSpec>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub command: String,
    pub obstruction: CochainSpec,
    pub liftable: bool,
    pub preimage: Option<CochainSpec>,
    pub torsor_factors: Vec<u64>,
    pub torsor_order: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub command: String,
    pub order: usize,
    pub associative: bool,
    /// `(a, b, c)` with `(ab)c != a(bc)` when not associative
    pub witness: Option<Vec<usize>>,
    /// element `i` as `(residues of a, g)`
    pub elements: Vec<(Vec<i64>, usize)>,
    pub table: Vec<Vec<usize>>,
    pub projection: Vec<usize>,
    pub section: Vec<usize>,
    pub inclusion: Vec<usize>,
    /// orders of the elements, when the table is a group
    pub element_orders: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumOut {
    pub k: BTreeMap<String, CochainSpec>,
    pub theta: BTreeMap<String, CochainSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub command: String,
    pub count: u128,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Vec<DatumOut>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: ErrorOut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorOut {
    pub kind: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

/// Two-column plain-text table.
pub fn table(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:<width$}  {v}\n"));
    }
    out
}

pub fn cyclic_product(factors: &[u64]) -> String {
    if factors.is_empty() {
        "0".into()
    } else {
        factors.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ")
    }
}

pub fn entries_text(f: &CochainSpec) -> String {
    if f.values.is_empty() {
        return "0".into();
    }
    let shown: Vec<String> = f
        .values
        .iter()
        .take(8)
        .map(|(t, v)| format!("{} -> {}", json(t), json(v)))
        .collect();
    let more = f.values.len().saturating_sub(8);
    if more > 0 {
        format!("{} (+{more} more)", shown.join(", "))
    } else {
        shown.join(", ")
    }
}

fn json<T: Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("serializable")
}
