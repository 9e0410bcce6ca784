//! Text and JSON encodings shared by the command line and job files.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactmath::{parse_rational, Rational};
use crate::spectra::{FinitePointSet, IntSet};

pub fn parse_rational_list(field: &str, text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(|s| parse_rational(field, s))
        .collect()
}

pub fn parse_point_set(field: &str, items: &[String]) -> Result<FinitePointSet> {
    let points = items
        .iter()
        .map(|s| parse_rational(field, s))
        .collect::<Result<Vec<_>>>()?;
    let set = FinitePointSet::new(points.iter().cloned());
    if set.len() != points.len() {
        return Err(Error::Parse {
            field: field.to_string(),
            reason: "duplicate points".to_string(),
        });
    }
    Ok(set)
}

pub fn parse_int_list(field: &str, text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|s| {
            s.trim().parse::<i64>().map_err(|_| Error::Parse {
                field: field.to_string(),
                reason: format!("{s:?} is not an integer"),
            })
        })
        .collect()
}

pub fn parse_int_set(field: &str, text: &str) -> Result<IntSet> {
    let values = parse_int_list(field, text)?;
    let set = IntSet::new(values.iter().copied());
    if set.len() != values.len() {
        return Err(Error::Parse {
            field: field.to_string(),
            reason: format!("duplicate elements in {text:?}"),
        });
    }
    Ok(set)
}

/// `"0,1;0,3"` is the family `[{0,1}, {0,3}]`.
pub fn parse_family(field: &str, text: &str) -> Result<Vec<IntSet>> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_int_set(field, s))
        .collect()
}

/// Compact JSON with object keys sorted, terminated by a newline.
pub fn canonical_json(value: &Value) -> String {
    // serde_json's default map is ordered by key
    let mut s = serde_json::to_string(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
