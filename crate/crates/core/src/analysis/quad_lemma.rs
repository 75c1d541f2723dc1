use nalgebra::DMatrix;
use num::{One, Signed, Zero};
use serde::Serialize;

use super::sigma::sigma_extremes;
use crate::error::{Error, Result};
use crate::fem::reduced_quad_local_matrices;
use crate::rational::{int, to_f64, Rational, RationalPoly};

/// `det(S − λ Mr)` as an exact polynomial in `λ = k²`, interpolated from
/// the values at `λ = 0, 1, …, p²`.
pub fn det_polynomial_reduced_quad(p: usize) -> Result<RationalPoly> {
    let pts: Vec<Rational> = (0..=(p * p) as i64).map(int).collect();
    det_polynomial_with_points(p, &pts)
}

/// As [`det_polynomial_reduced_quad`] with caller-chosen distinct points.
pub fn det_polynomial_with_points(p: usize, points: &[Rational]) -> Result<RationalPoly> {
    let (s, mr) = reduced_quad_local_matrices(p)?;
    if points.len() != p * p + 1 {
        return Err(Error::InvalidArgument(format!(
            "need {} interpolation points",
            p * p + 1
        )));
    }
    for (i, a) in points.iter().enumerate() {
        if points[..i].contains(a) {
            return Err(Error::InvalidArgument(
                "interpolation points must be distinct".into(),
            ));
        }
    }
    let values: Vec<Rational> = points
        .iter()
        .map(|l| s.sub_scaled(l, &mr).determinant())
        .collect();
    Ok(RationalPoly::interpolate(points, &values))
}

/// The degree-six factor whose square divides the `p = 4` determinant.
pub fn p4_factor() -> RationalPoly {
    RationalPoly::from_ints(&[-3492720, -161028, 41013, 10800, 810, 36, 1])
}

/// Smallest root of `poly` in `(0, cap]`, isolated with Sturm counts and
/// exact bisection to `1e−12` relative width.
///
/// `Ok(None)` means there is no positive root at all; a positive root
/// beyond `cap` is reported as [`Error::CapTooSmall`].
pub fn positive_real_root(poly: &RationalPoly, cap: f64) -> Result<Option<f64>> {
    if poly.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial".into()));
    }
    let cap_r = Rational::from_float(cap)
        .filter(|c| c.is_positive())
        .ok_or_else(|| Error::InvalidArgument(format!("cap {cap} must be positive and finite")))?;
    let zero = Rational::zero();
    if poly.count_roots(&zero, Some(&cap_r)) == 0 {
        return if poly.count_positive_roots() == 0 {
            Ok(None)
        } else {
            Err(Error::CapTooSmall(format!(
                "positive roots exist beyond λ = {cap}"
            )))
        };
    }
    let (mut lo, mut hi) = (zero, cap_r);
    let two = int(2);
    let tol = Rational::new(1.into(), (1u64 << 40).into());
    loop {
        let width = &hi - &lo;
        if width <= &tol * (Rational::one() + hi.abs()) {
            break;
        }
        let mid = (&lo + &hi) / &two;
        if poly.count_roots(&lo, Some(&mid)) > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(to_f64(&((&lo + &hi) / two))))
}

/// `S − k² Mr` in floating point.
pub fn reduced_matrix_f64(p: usize, k: f64) -> Result<DMatrix<f64>> {
    let (s, mr) = reduced_quad_local_matrices(p)?;
    Ok(s.to_f64() - mr.to_f64() * (k * k))
}

#[derive(Clone, Debug, Serialize)]
pub struct P4Report {
    pub lambda: f64,
    pub k: f64,
    /// `σ_min / ‖·‖` of the reduced matrix at `k`.
    pub ratio_at_root: f64,
    /// The same at `1.2·k`.
    pub ratio_off_root: f64,
    /// The squared factor divides the determinant exactly.
    pub factor_squared_divides: bool,
}

/// Locates the positive root of the `p = 4` factor and checks that the
/// reduced matrix is numerically singular there and regular nearby.
pub fn verify_p4_singularity() -> Result<P4Report> {
    let factor = p4_factor();
    let lambda = positive_real_root(&factor, 1e3)?.ok_or_else(|| {
        Error::NoCriticalWaveNumber("the p = 4 factor has no positive root".into())
    })?;
    let k = lambda.sqrt();
    let at = sigma_extremes(&reduced_matrix_f64(4, k)?)?.ratio();
    let off = sigma_extremes(&reduced_matrix_f64(4, 1.2 * k)?)?.ratio();
    let det = det_polynomial_reduced_quad(4)?;
    let (_, rem) = det.div_rem(&factor.mul(&factor));
    Ok(P4Report {
        lambda,
        k,
        ratio_at_root: at,
        ratio_off_root: off,
        factor_squared_divides: rem.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn linear_determinant() {
        let d = det_polynomial_reduced_quad(1).unwrap();
        assert_eq!(d, RationalPoly::new(vec![rat(-16, 3), rat(-16, 9)]));
        assert_eq!(positive_real_root(&d, 1e6).unwrap(), None);
    }

    #[test]
    fn interpolation_points_are_checked() {
        assert!(det_polynomial_with_points(1, &[int(1)]).is_err());
        assert!(det_polynomial_with_points(1, &[int(1), int(1)]).is_err());
    }

    #[test]
    fn root_isolation() {
        // (λ − 2)(λ − 5)
        let q = RationalPoly::from_ints(&[10, -7, 1]);
        assert!((positive_real_root(&q, 100.0).unwrap().unwrap() - 2.0).abs() < 1e-10);
        assert!(matches!(
            positive_real_root(&q, 1.0),
            Err(Error::CapTooSmall(_))
        ));
        assert!(positive_real_root(&q, -1.0).is_err());
        assert!(positive_real_root(&RationalPoly::zero(), 1.0).is_err());
    }
}
