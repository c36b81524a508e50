//! Watch keys and trace records.
//!
//! Watch-key grammar:
//! - `Y0[i][j]`: cell of the network matrix (lightweight networks)
//! - `cell:<row-key>,<col-key>`: cell of the network matrix (either mode)
//! - `out:<col-key>`: whole output matrix of a neuron output

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::index::{parse_index, PortKind};
use crate::matrix::{Key, Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WatchTarget {
    Cell { row: Key, col: Key },
    Output(Key),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WatchKey {
    pub label: String,
    pub target: WatchTarget,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WatchValue {
    Scalar(f64),
    Matrix(Matrix),
}

impl WatchValue {
    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            WatchValue::Scalar(x) => Some(*x),
            WatchValue::Matrix(_) => None,
        }
    }

    /// Exact equality with NaN equal to NaN.
    pub fn same_values(&self, other: &WatchValue) -> bool {
        match (self, other) {
            (WatchValue::Scalar(a), WatchValue::Scalar(b)) => a == b || (a.is_nan() && b.is_nan()),
            (WatchValue::Matrix(a), WatchValue::Matrix(b)) => a.same_values(b),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: u64,
    pub watched: IndexMap<String, WatchValue>,
}

impl TraceRecord {
    /// Same time and labels, values equal under [`WatchValue::same_values`].
    pub fn same_values(&self, other: &TraceRecord) -> bool {
        self.t == other.t
            && self.watched.len() == other.watched.len()
            && self
                .watched
                .iter()
                .zip(&other.watched)
                .all(|((ka, a), (kb, b))| ka == kb && a.same_values(b))
    }
}

pub type Trace = Vec<TraceRecord>;

fn is_decimal(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit())
}

fn parse_y0(s: &str) -> Option<(usize, usize)> {
    let rest = s.strip_prefix("Y0[")?.strip_suffix(']')?;
    let (i, j) = rest.split_once("][")?;
    if !is_decimal(i) || !is_decimal(j) {
        return None;
    }
    Some((i.parse().ok()?, j.parse().ok()?))
}

fn split_cell(body: &str) -> Option<(String, String)> {
    let candidates: Vec<(String, String)> = body
        .match_indices(',')
        .map(|(at, _)| (&body[..at], &body[at + 1..]))
        .filter(|(r, c)| {
            (is_decimal(r) && is_decimal(c))
                || (matches!(parse_index(r).map(|n| n.kind), Ok(PortKind::Input(_)))
                    && matches!(parse_index(c).map(|n| n.kind), Ok(PortKind::Output(_))))
        })
        .map(|(r, c)| (r.to_string(), c.to_string()))
        .collect();
    match candidates.as_slice() {
        [one] => Some(one.clone()),
        _ => None,
    }
}

impl WatchKey {
    pub fn parse(s: &str) -> Result<WatchKey, String> {
        let target = if let Some((i, j)) = parse_y0(s) {
            WatchTarget::Cell {
                row: i.to_string(),
                col: j.to_string(),
            }
        } else if let Some(body) = s.strip_prefix("cell:") {
            let (row, col) = split_cell(body)
                .ok_or_else(|| format!("watch key `{s}`: expected cell:<row-key>,<col-key>"))?;
            WatchTarget::Cell { row, col }
        } else if let Some(key) = s.strip_prefix("out:") {
            let ok = is_decimal(key)
                || matches!(parse_index(key).map(|n| n.kind), Ok(PortKind::Output(_)));
            if !ok {
                return Err(format!("watch key `{s}`: `{key}` is not an output key"));
            }
            WatchTarget::Output(key.to_string())
        } else {
            return Err(format!(
                "watch key `{s}`: expected Y0[i][j], cell:<row>,<col> or out:<col>"
            ));
        };
        Ok(WatchKey {
            label: s.to_string(),
            target,
        })
    }

    /// Splits a comma-separated list of watch keys. Commas inside a `cell:`
    /// key or a type name do not start a new key: a new key begins only at a
    /// piece starting with one of the key prefixes.
    pub fn parse_list(s: &str) -> Result<Vec<WatchKey>, String> {
        let mut keys: Vec<String> = Vec::new();
        for piece in s.split(',') {
            let starts_key =
                piece.starts_with("Y0[") || piece.starts_with("cell:") || piece.starts_with("out:");
            match keys.last_mut() {
                Some(last) if !starts_key => {
                    last.push(',');
                    last.push_str(piece);
                }
                _ => keys.push(piece.to_string()),
            }
        }
        keys.iter()
            .filter(|k| !k.is_empty())
            .map(|k| WatchKey::parse(k))
            .collect()
    }
}
