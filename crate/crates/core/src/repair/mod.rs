//! Mesh repair: bisection of non-acute transmission edges and edge flips
//! that unblock a stalled march.

mod bisect;
mod flip;

pub use bisect::{bisect_edge, bisection_cap, correct_angle_condition, BisectionOutcome};
pub use flip::{apply_flip, candidate_flips, motz_flip, FlipCandidate, FlipOptions, FlipOutcome};
