//! Numerical and exact verification: singular value sweeps, the singular
//! T_α witness, the determinant lemma for quadrilaterals, the angle lemma
//! and regularity sweeps on quadrilateral meshes.

mod angle;
mod corridor;
mod quad_lemma;
mod report;
mod sigma;
mod talpha;

pub use angle::{verify_angle_lemma, AngleLemmaReport, AngleMismatch};
pub use corridor::{verify_corridor_theorems, CorridorCase, CorridorReport, CORRIDOR_THRESHOLD};
pub use quad_lemma::{
    det_polynomial_reduced_quad, det_polynomial_with_points, p4_factor, positive_real_root,
    reduced_matrix_f64, verify_p4_singularity, P4Report,
};
pub use report::Report;
pub use sigma::{
    default_k_grid, linear_grid, log_grid, sigma_extremes, sigma_min_sweep, sigma_min_sweep_with,
    smallest_singular_value, SigmaReport, SingularExtremes, DENSE_CAP,
};
pub use talpha::{
    alpha_star_estimate, critical_k_talpha, pattern_ratio, talpha_pattern,
    talpha_pattern_quantities, AlphaStarEstimate, CriticalK, PatternQuantities, PatternRatio,
};
