//! Numerical tolerances shared by every module.
//!
//! Two tiers: `EPS_FEAS` absorbs solver round-off, while `EPS_CERT` and
//! `EPS_EQ` decide geometric questions (touching, equality cases).

/// Primal/dual feasibility and duality-gap tolerance.
pub const EPS_FEAS: f64 = 1e-9;
/// Boundary-touching tolerance for certificates.
pub const EPS_CERT: f64 = 1e-7;
/// Equality-case detection threshold.
pub const EPS_EQ: f64 = 1e-6;
/// Strict positivity threshold for convex weights.
pub const EPS_POS: f64 = 1e-12;

/// Default cap on the number of points in a Minkowski sum or selection tuple enumeration.
pub const DEFAULT_MAX_SUM_POINTS: usize = 1_000_000;

/// Size caps for product enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_sum_points: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_sum_points: DEFAULT_MAX_SUM_POINTS,
        }
    }
}
