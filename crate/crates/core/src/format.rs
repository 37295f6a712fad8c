//! JSON file formats and output rounding.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::body::PointBody;
use crate::colourful::BalancedSet;
use crate::error::{Error, Result};
use crate::gauge::Gauge;

/// Significant digits kept when printing numbers.
pub const SIGNIFICANT_DIGITS: usize = 12;

fn parse<T: for<'de> Deserialize<'de>>(what: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::Input(format!(
            "{what}: {}",
            e.to_string().replacen("invalid input: ", "", 1)
        ))
    })
}

/// `{"dim": n, "points": [[...], ...]}`.
pub fn parse_body(text: &str) -> Result<PointBody> {
    parse("body file", text)
}

/// `{"type": "euclidean"}`, `{"type": "lp", "p": ...}` or
/// `{"type": "hpoly", "A": [[...]], "b": [...]}`.
pub fn parse_gauge(text: &str) -> Result<Gauge> {
    parse("gauge file", text)
}

/// Balanced sets plus a center `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetsFile {
    pub dim: usize,
    pub c: Vec<f64>,
    pub sets: Vec<BalancedSet>,
}

pub fn parse_sets(text: &str) -> Result<SetsFile> {
    let f: SetsFile = parse("sets file", text)?;
    if f.c.len() != f.dim {
        return Err(Error::input(format!(
            "sets file: c has dimension {}, expected {}",
            f.c.len(),
            f.dim
        )));
    }
    if f.sets.is_empty() {
        return Err(Error::input("sets file: no sets"));
    }
    if let Some(i) = f.sets.iter().position(|s| s.dim() != f.dim) {
        return Err(Error::input(format!(
            "sets file: set {i} has dimension {}, expected {}",
            f.sets[i].dim(),
            f.dim
        )));
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub bodies: Vec<PointBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<Gauge>,
}

/// `{"instances": [{"bodies": [...], "gauge": {...}?}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstancesFile {
    pub instances: Vec<InstanceSpec>,
}

pub fn parse_instances(text: &str) -> Result<InstancesFile> {
    parse("instances file", text)
}

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let s = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    s.parse().unwrap_or(x)
}

/// Rounds every float inside a JSON value in place.
pub fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n
                .as_f64()
                .and_then(|x| serde_json::Number::from_f64(round_sig(x)))
            {
                *n = r;
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(round_value),
        Value::Object(m) => m.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Compact JSON with rounded numbers, no trailing newline.
pub fn to_line<T: Serialize>(x: &T) -> Result<String> {
    let mut v = serde_json::to_value(x).map_err(|e| Error::Input(format!("serialization: {e}")))?;
    round_value(&mut v);
    Ok(v.to_string())
}
