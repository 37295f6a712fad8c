//! Browser bindings for three interactive views: a planar circumradius
//! under a chosen gauge, the slack of the `sqrt(j)` bound for two bodies,
//! and the three-pair hexagon configuration.
//!
//! Every export takes and returns JSON strings.

use serde::Deserialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use radii_core::body::PointBody;
use radii_core::colourful::{brute_force_max, detect_hexagon_equality, minmax_center, BalancedSet};
use radii_core::format::round_value;
use radii_core::gauge::Gauge;
use radii_core::harness::check_sqrt_j;
use radii_core::radii::circumradius;
use radii_core::tol::{Limits, EPS_EQ};

const OUTLINE_SAMPLES: usize = 256;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn finish(mut v: Value) -> String {
    round_value(&mut v);
    v.to_string()
}

/// Boundary of `center + radius * C`, sampled along rays.
fn outline(c: &Gauge, center: &[f64], radius: f64) -> Vec<[f64; 2]> {
    (0..OUTLINE_SAMPLES)
        .map(|i| {
            let t = i as f64 * std::f64::consts::TAU / OUTLINE_SAMPLES as f64;
            let u = [t.cos(), t.sin()];
            let s = radius / c.value(&u);
            [center[0] + s * u[0], center[1] + s * u[1]]
        })
        .collect()
}

pub fn circumradius_json(points: &str, gauge: &str) -> Result<String, String> {
    let pts: Vec<Vec<f64>> = serde_json::from_str(points).map_err(err)?;
    let k = PointBody::with_dim(2, pts).map_err(err)?;
    let c: Gauge = serde_json::from_str(gauge).map_err(err)?;
    let r = circumradius(&k, &c).map_err(err)?;
    Ok(finish(json!({
        "radius": r.radius,
        "center": r.center,
        "certificate": r.certificate,
        "outline": outline(&c, &r.center, r.radius),
    })))
}

#[derive(Deserialize)]
struct Pair {
    k: Vec<Vec<f64>>,
    l: Vec<Vec<f64>>,
}

pub fn sqrt_j_json(bodies: &str) -> Result<String, String> {
    let p: Pair = serde_json::from_str(bodies).map_err(err)?;
    let k = PointBody::with_dim(2, p.k).map_err(err)?;
    let l = PointBody::with_dim(2, p.l).map_err(err)?;
    let r = check_sqrt_j(&[k, l], &Limits::default()).map_err(err)?;
    let sum = r.artifacts.sum_center.clone();
    let sum_pts =
        radii_core::body::minkowski_sum(&r.artifacts.bodies, &Limits::default()).map_err(err)?;
    Ok(finish(json!({
        "radii": r.artifacts.radii,
        "sum_radius": r.artifacts.sum_radius,
        "sum_center": sum,
        "sum_points": sum_pts.points(),
        "lhs": r.lhs,
        "rhs": r.rhs,
        "slack": r.slack,
        "equality": r.equality_flag,
    })))
}

pub fn hexagon_json(angles: &str) -> Result<String, String> {
    let angles: Vec<f64> = serde_json::from_str(angles).map_err(err)?;
    let sets = angles
        .iter()
        .map(|t| BalancedSet::pair(vec![t.cos(), t.sin()]))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let limits = Limits::default();
    let mm = minmax_center(&sets, &limits).map_err(err)?;
    let best = brute_force_max(&sets, &[0.0, 0.0], &limits).map_err(err)?;
    let hexagon = sets.len() == 3 && detect_hexagon_equality(&sets, EPS_EQ).map_err(err)?;
    Ok(finish(json!({
        "value": mm.value,
        "center": mm.center,
        "best_at_origin": best.achieved,
        "best_indices": best.indices,
        "hexagon": hexagon,
    })))
}

#[wasm_bindgen]
pub fn circumradius_2d(points: &str, gauge: &str) -> Result<String, JsValue> {
    circumradius_json(points, gauge).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sqrt_j_slack(bodies: &str) -> Result<String, JsValue> {
    sqrt_j_json(bodies).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn hexagon_explorer(angles: &str) -> Result<String, JsValue> {
    hexagon_json(angles).map_err(|e| JsValue::from_str(&e))
}
