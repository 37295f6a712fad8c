//! Circumradii of point bodies under general gauges, additive colourful
//! selection, and checks of the Minkowski-sum radius inequalities.

pub mod ball;
pub mod body;
pub mod colourful;
pub mod descent;
pub mod error;
pub mod format;
pub mod gauge;
pub mod harness;
pub mod hull;
pub mod linalg;
pub mod lp;
pub mod radii;
pub mod tol;

pub use error::{Error, Result};
