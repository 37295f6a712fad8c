//! Report records. Every record carries `"schema": "radii-report/1"`.

use serde::{Deserialize, Serialize};

use crate::body::PointBody;
use crate::colourful::BalancedSet;
use crate::gauge::Gauge;

pub const SCHEMA: &str = "radii-report/1";

fn schema() -> String {
    SCHEMA.to_string()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// `sum cir(K_i) <= sqrt(j) cir(sum K_i)`.
    SqrtJ,
    /// `sum cir(K_i)^2 <= cir(sum K_i)^2`.
    Squares,
    /// `sum cir(K_i, C) <= j cir(sum K_i, C)`.
    FactorJ,
    /// `max cir(K_i, C) <= cir(sum K_i, C)`.
    MaxBound,
    /// `cir(K_1 + K_2 + K_3) >= 2` for unit-radius planar bodies in the unit disk.
    PlanarThree,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::SqrtJ,
        Suite::Squares,
        Suite::FactorJ,
        Suite::MaxBound,
        Suite::PlanarThree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SqrtJ => "sqrt-j",
            Suite::Squares => "squares",
            Suite::FactorJ => "factor-j",
            Suite::MaxBound => "max-bound",
            Suite::PlanarThree => "planar-three",
        }
    }

    pub fn uses_gauge(self) -> bool {
        matches!(self, Suite::FactorJ | Suite::MaxBound)
    }
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite \"{s}\""))
    }
}

/// Inputs and intermediate values, enough to replay the computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifacts {
    pub bodies: Vec<PointBody>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<Gauge>,
    /// Circumradius of each body.
    pub radii: Vec<f64>,
    /// Circumradius and center of the Minkowski sum.
    pub sum_radius: f64,
    pub sum_center: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

/// Cylinder `{x : normals[l] . x <= offsets[l]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cylinder {
    pub normals: Vec<Vec<f64>>,
    pub offsets: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylinderVerdict {
    pub verdict: Verdict,
    pub reason: String,
    pub cylinders: Vec<Cylinder>,
    /// `cir(K_i, C_i)` per body, normalized so the expected value is 1.
    pub cylinder_radii: Vec<f64>,
    /// Largest `|a . (x - y)|` over the complementary sums, per body.
    pub orthogonality_defect: Vec<f64>,
    /// Smallest `lambda` with `sum K in z + lambda C` and
    /// `z + lambda C` inside every cylinder, relative to the common radius.
    pub containment_scale: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexagonCheck {
    /// Touch-point families taken from each body's certificate.
    pub sets: Vec<BalancedSet>,
    pub detected: bool,
    /// Whether each body contains the diameter segment through its pair.
    pub segments_contained: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum EqualityCheck {
    Hexagon(HexagonCheck),
    Cylinder(CylinderVerdict),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceReport {
    #[serde(default = "schema")]
    pub schema: String,
    pub instance_id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub theorem_tag: Suite,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    /// `lhs / rhs`, absent when `rhs = 0`.
    pub ratio: Option<f64>,
    pub pass: bool,
    pub equality_flag: bool,
    pub artifacts: Artifacts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equality: Option<EqualityCheck>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjectureTag {
    LpSuperadditivity,
    NPlusOneSets,
}

/// One explored configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub trial: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bodies: Vec<PointBody>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sets: Vec<BalancedSet>,
    /// Radii of the summands (`lp` explorer).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub radii: Vec<f64>,
    /// The conjectured lower bound for this configuration.
    pub bound: f64,
    /// The computed radius of the sum.
    pub value: f64,
    pub slack: f64,
}

/// A known extremal configuration, evaluated exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub label: String,
    /// Simplex size parameter for odd dimensions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub directions: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bodies: Vec<PointBody>,
    pub value: f64,
    pub target: f64,
    pub slack: f64,
    /// Norm of the signed sum that should equal the target, when defined.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signed_sum_norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    #[serde(default = "schema")]
    pub schema: String,
    pub conjecture_tag: ConjectureTag,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<crate::gauge::PExponent>,
    pub seed: u64,
    pub trials: u64,
    /// Smallest slack over random trials, absent when `trials = 0`.
    pub min_observed_slack: Option<f64>,
    pub argmin_trial: Option<u64>,
    /// Confirmed violations; each carries its full instance.
    pub violations: Vec<Trial>,
    /// Candidate violations that did not survive re-verification.
    pub rejected_candidates: u64,
    /// The random trials with the smallest slack.
    pub extremal_candidates: Vec<Trial>,
    pub paper_candidates: Vec<Candidate>,
    pub note: String,
}
