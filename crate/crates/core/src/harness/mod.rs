//! Verification suites, conjecture explorers and their reports.

pub mod explore;
pub mod generate;
pub mod report;
pub mod suites;

pub use explore::{explore_lp_conjecture, explore_n_plus_one, verify_conjecture_report};
pub use report::{ConjectureReport, InstanceReport, Suite, Verdict};
pub use suites::{
    check_cylinder_equality, check_factor_j_gauge, check_max_lower_bound, check_planar_three,
    check_sqrt_j, check_sum_of_squares, random_instance, replay, replay_matches, run_random,
    run_suite,
};
