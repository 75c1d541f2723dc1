use num::complex::Complex64;
use serde::Serialize;

use super::sigma::sigma_extremes;
use crate::error::{Error, Result};
use crate::fem::{assemble_p1, system_matrix, Csr};
use crate::mesh::make_talpha;

/// Zero at the corners and the centre, `(1, −1, 1, −1)` on the diamond.
pub fn talpha_pattern() -> Vec<f64> {
    vec![0.0, 0.0, 0.0, 0.0, 1.0, -1.0, 1.0, -1.0, 0.0]
}

/// Row-wise ratios `(A w)_j / (M w)_j` over the rows where `M w` does not vanish.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternRatio {
    pub rows: Vec<usize>,
    pub ratios: Vec<f64>,
    /// Mean of the ratios.
    pub ratio: f64,
    /// `(max − min) / |mean|`
    pub spread: f64,
}

/// Ratio test for a null pattern `w` of `A − λ M`. Fails if a denominator
/// has the opposite sign of its numerator or the ratios are not positive.
pub fn pattern_ratio(a: &Csr<f64>, m: &Csr<f64>, w: &[f64]) -> Result<PatternRatio> {
    let aw = a.matvec(w);
    let mw = m.matvec(w);
    let scale = m.max_abs() * w.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    let mut rows = Vec::new();
    let mut ratios = Vec::new();
    for (j, (&num, &den)) in aw.iter().zip(&mw).enumerate() {
        if den.abs() <= 1e-12 * scale {
            continue;
        }
        let r = num / den;
        if r <= 0.0 {
            return Err(Error::NoCriticalWaveNumber(format!(
                "row {j}: (Aw)_j = {num:e} and (Mw)_j = {den:e} give a nonpositive ratio"
            )));
        }
        rows.push(j);
        ratios.push(r);
    }
    if ratios.is_empty() {
        return Err(Error::NoCriticalWaveNumber(
            "M w vanishes identically".into(),
        ));
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &r| {
            (l.min(r), h.max(r))
        });
    Ok(PatternRatio {
        rows,
        ratios,
        ratio: mean,
        spread: (hi - lo) / mean.abs(),
    })
}

/// The critical wave number of the T_α mesh and its witness.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalK {
    pub alpha: f64,
    pub k_crit: f64,
    pub ratios: Vec<f64>,
    /// Relative spread of the row ratios.
    pub consistency: f64,
    pub null_vector: Vec<f64>,
    /// `‖K w‖ / (‖K‖ ‖w‖)` at `k_crit`.
    pub residual: f64,
    /// `σ_min(K) / ‖K‖` at `k_crit`.
    pub sigma_ratio: f64,
}

/// Wave number at which the pattern vector lies in the kernel of `K_k` on
/// T_α. Since `B w = 0`, this needs `A w = k² M w`.
pub fn critical_k_talpha(alpha: f64) -> Result<CriticalK> {
    let sys = assemble_p1(&make_talpha(alpha)?)?;
    let w = talpha_pattern();
    let pr = pattern_ratio(&sys.a, &sys.m, &w)?;
    if pr.spread > 1e-10 {
        return Err(Error::InvalidMesh(format!(
            "inconsistent row ratios, spread {:e}",
            pr.spread
        )));
    }
    let k_crit = pr.ratio.sqrt();
    let kk = system_matrix(&sys, k_crit)?;
    let dense = kk.matrix.to_dense();
    let ex = sigma_extremes(&dense)?;
    let wc: Vec<Complex64> = w.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let kw = kk.matrix.matvec(&wc);
    let kw_norm = kw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let w_norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(CriticalK {
        alpha,
        k_crit,
        ratios: pr.ratios,
        consistency: pr.spread,
        null_vector: w,
        residual: kw_norm / (ex.max * w_norm),
        sigma_ratio: ex.ratio(),
    })
}

/// Per-diamond-node quantities `(A w)_j / w_j` and `(M w)_j / w_j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PatternQuantities {
    pub alpha: f64,
    pub numerator: f64,
    pub denominator: f64,
}

pub fn talpha_pattern_quantities(alpha: f64) -> Result<PatternQuantities> {
    let sys = assemble_p1(&make_talpha(alpha)?)?;
    let w = talpha_pattern();
    let (aw, mw) = (sys.a.matvec(&w), sys.m.matvec(&w));
    Ok(PatternQuantities {
        alpha,
        numerator: aw[4],
        denominator: mw[4],
    })
}

/// Result of the search for the threshold above which T_α has no critical
/// wave number.
#[derive(Clone, Debug, Serialize)]
pub struct AlphaStarEstimate {
    /// Located sign change of the denominator, if any.
    pub threshold: Option<f64>,
    /// Largest α sampled.
    pub sup_checked: f64,
    /// Smallest denominator seen over the scan.
    pub min_denominator: f64,
    pub samples: usize,
}

/// Scans α ∈ (0, 1) for a sign change of the pattern denominator and
/// bisects it to `tolerance` when one is found.
pub fn alpha_star_estimate(tolerance: f64) -> Result<AlphaStarEstimate> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let mut alphas: Vec<f64> = (1..1000).map(|i| i as f64 / 1000.0).collect();
    alphas.extend((4..=9).map(|e| 1.0 - 10f64.powi(-e)));
    let mut min_den = f64::INFINITY;
    let mut prev: Option<(f64, f64)> = None;
    for &alpha in &alphas {
        let den = talpha_pattern_quantities(alpha)?.denominator;
        min_den = min_den.min(den);
        if let Some((pa, pd)) = prev {
            if pd > 0.0 && den <= 0.0 {
                let (mut lo, mut hi) = (pa, alpha);
                while hi - lo > tolerance {
                    let mid = 0.5 * (lo + hi);
                    if talpha_pattern_quantities(mid)?.denominator > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Ok(AlphaStarEstimate {
                    threshold: Some(0.5 * (lo + hi)),
                    sup_checked: alpha,
                    min_denominator: min_den,
                    samples: alphas.len(),
                });
            }
        }
        prev = Some((alpha, den));
    }
    Ok(AlphaStarEstimate {
        threshold: None,
        sup_checked: *alphas.last().expect("nonempty scan"),
        min_denominator: min_den,
        samples: alphas.len(),
    })
}
