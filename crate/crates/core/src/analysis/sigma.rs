use nalgebra::{ComplexField, DMatrix};
use num::complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fem::{system_matrix, SystemMatrices};
use crate::par::{self, Execution};

/// Largest dimension handled by the dense SVD.
pub const DENSE_CAP: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingularExtremes {
    pub min: f64,
    pub max: f64,
}

impl SingularExtremes {
    /// `σ_min / σ_max`, zero for the zero matrix.
    pub fn ratio(&self) -> f64 {
        if self.max > 0.0 {
            self.min / self.max
        } else {
            0.0
        }
    }
}

/// Smallest and largest singular value of a dense square matrix.
pub fn sigma_extremes<T>(matrix: &DMatrix<T>) -> Result<SingularExtremes>
where
    T: ComplexField<RealField = f64>,
{
    let (r, c) = matrix.shape();
    if r != c {
        return Err(Error::InvalidArgument(format!(
            "matrix is {r}×{c}, not square"
        )));
    }
    if r > DENSE_CAP {
        return Err(Error::DimensionCap {
            dim: r,
            cap: DENSE_CAP,
        });
    }
    if r == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let sv = matrix.clone().singular_values();
    Ok(SingularExtremes {
        min: sv.min(),
        max: sv.max(),
    })
}

pub fn smallest_singular_value<T>(matrix: &DMatrix<T>) -> Result<f64>
where
    T: ComplexField<RealField = f64>,
{
    Ok(sigma_extremes(matrix)?.min)
}

/// Smallest singular value and spectral norm of `K_k` per sampled `k`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SigmaReport {
    pub k_values: Vec<f64>,
    pub sigma_min: Vec<f64>,
    pub norm: Vec<f64>,
}

impl SigmaReport {
    pub fn ratios(&self) -> Vec<f64> {
        self.sigma_min
            .iter()
            .zip(&self.norm)
            .map(|(s, n)| if *n > 0.0 { s / n } else { 0.0 })
            .collect()
    }

    pub fn min_ratio(&self) -> f64 {
        self.ratios().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Sample with the smallest `σ_min / ‖K‖`.
    pub fn argmin(&self) -> Option<usize> {
        let r = self.ratios();
        (0..r.len()).min_by(|&a, &b| r[a].total_cmp(&r[b]))
    }

    /// `k,sigma_min,norm` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,sigma_min,norm\n");
        for i in 0..self.k_values.len() {
            out.push_str(&format!(
                "{:e},{:e},{:e}\n",
                self.k_values[i], self.sigma_min[i], self.norm[i]
            ));
        }
        out
    }
}

pub fn sigma_min_sweep(sys: &SystemMatrices, ks: &[f64]) -> Result<SigmaReport> {
    sigma_min_sweep_with(sys, ks, Execution::default())
}

/// Assembles `K_k` and its singular value extremes for every `k`.
pub fn sigma_min_sweep_with(
    sys: &SystemMatrices,
    ks: &[f64],
    exec: Execution,
) -> Result<SigmaReport> {
    if ks.contains(&0.0) {
        return Err(Error::ZeroWaveNumber);
    }
    if sys.dim() > DENSE_CAP {
        return Err(Error::DimensionCap {
            dim: sys.dim(),
            cap: DENSE_CAP,
        });
    }
    let results = par::map(exec, ks, |&k| -> Result<SingularExtremes> {
        let kk = system_matrix(sys, k)?;
        let dense: DMatrix<Complex64> = kk.matrix.to_dense();
        sigma_extremes(&dense)
    });
    let mut report = SigmaReport::default();
    for (&k, r) in ks.iter().zip(results) {
        let ex = r?;
        report.k_values.push(k);
        report.sigma_min.push(ex.min);
        report.norm.push(ex.max);
    }
    Ok(report)
}

/// `n` log-spaced samples in `[a, b]`.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => {
            let (la, lb) = (a.ln(), b.ln());
            (0..n)
                .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
                .collect()
        }
    }
}

/// `n` equispaced samples in `[a, b]`.
pub fn linear_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// 60 log-spaced samples in `[0.1, 20]`.
pub fn default_k_grid() -> Vec<f64> {
    log_grid(0.1, 20.0, 60)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::assemble_1d_hp;
    use crate::mesh::Mesh1D;

    #[test]
    fn trivial_matrices() {
        let id = DMatrix::<f64>::identity(3, 3);
        assert!((smallest_singular_value(&id).unwrap() - 1.0).abs() < 1e-15);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.0]));
        assert_eq!(smallest_singular_value(&d).unwrap(), 0.0);
        let c = DMatrix::from_element(2, 2, Complex64::new(0.0, 1.0));
        let ex = sigma_extremes(&c).unwrap();
        assert!(ex.min < 1e-15 && (ex.max - 2.0).abs() < 1e-14);
    }

    #[test]
    fn cap_and_shape_errors() {
        let big = DMatrix::<f64>::zeros(DENSE_CAP + 1, DENSE_CAP + 1);
        assert!(matches!(
            smallest_singular_value(&big),
            Err(Error::DimensionCap { .. })
        ));
        assert!(smallest_singular_value(&DMatrix::<f64>::zeros(2, 3)).is_err());
    }

    #[test]
    fn sweep_rejects_zero_and_modes_agree() {
        let sys = assemble_1d_hp(&Mesh1D::new(vec![0.0, 0.4, 1.0]).unwrap(), 2).unwrap();
        assert!(matches!(
            sigma_min_sweep(&sys, &[1.0, 0.0]),
            Err(Error::ZeroWaveNumber)
        ));
        let ks = log_grid(0.5, 30.0, 12);
        let a = sigma_min_sweep_with(&sys, &ks, Execution::Sequential).unwrap();
        let b = sigma_min_sweep_with(&sys, &ks, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.min_ratio() > 1e-12);
        assert_eq!(a.to_csv().lines().count(), 13);
    }

    #[test]
    fn grids() {
        let g = default_k_grid();
        assert_eq!(g.len(), 60);
        assert!((g[0] - 0.1).abs() < 1e-15 && (g[59] - 20.0).abs() < 1e-12);
        assert_eq!(linear_grid(1.0, 2.0, 3), vec![1.0, 1.5, 2.0]);
    }
}
