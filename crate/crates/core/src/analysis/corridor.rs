use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::sigma::{linear_grid, sigma_min_sweep_with};
use crate::error::Result;
use crate::fem::assemble_quad_tensor;
use crate::mesh::make_tensor_quad_mesh;
use crate::par::Execution;

/// Regularity threshold for `σ_min / ‖K‖` on quadrilateral meshes.
pub const CORRIDOR_THRESHOLD: f64 = 1e-11;

#[derive(Clone, Debug, Serialize)]
pub struct CorridorCase {
    pub label: String,
    pub p: usize,
    pub cells: [usize; 2],
    pub dofs: usize,
    pub samples: usize,
    pub min_ratio: f64,
    pub k_at_min: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorridorReport {
    pub threshold: f64,
    pub cases: Vec<CorridorCase>,
}

impl CorridorReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.min_ratio > self.threshold)
    }
}

fn random_breaks(rng: &mut ChaCha8Rng, cells: usize, length: f64) -> Vec<f64> {
    let widths: Vec<f64> = (0..cells).map(|_| rng.gen_range(0.3..1.7)).collect();
    let total: f64 = widths.iter().sum();
    let mut xs = vec![0.0];
    for w in widths {
        xs.push(xs.last().unwrap() + w * length / total);
    }
    *xs.last_mut().unwrap() = length;
    xs
}

/// `σ_min / ‖K‖` over `k ∈ [0.5, 20]` (40 samples) on a single reference
/// quad, randomized one- and two-row corridors and a 4×3 tensor mesh.
pub fn verify_corridor_theorems(seed: u64, exec: Execution) -> Result<CorridorReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ks = linear_grid(0.5, 20.0, 40);
    let mut meshes: Vec<(String, Vec<f64>, Vec<f64>, usize)> = Vec::new();
    for p in 1..=6 {
        meshes.push(("single quad".into(), vec![-1.0, 1.0], vec![-1.0, 1.0], p));
    }
    for p in 1..=3 {
        for rows in [1, 2] {
            let label = if rows == 1 {
                "one corridor"
            } else {
                "two corridors"
            };
            let xs = random_breaks(&mut rng, 5, 5.0);
            let height = rows as f64 * rng.gen_range(0.6..1.4);
            let ys = random_breaks(&mut rng, rows, height);
            meshes.push((label.into(), xs, ys, p));
        }
        let xs = random_breaks(&mut rng, 4, 4.0);
        let ys = random_breaks(&mut rng, 3, 3.0);
        meshes.push(("tensor 4x3".into(), xs, ys, p));
    }
    let mut cases = Vec::with_capacity(meshes.len());
    for (label, xs, ys, p) in meshes {
        let mesh = make_tensor_quad_mesh(&xs, &ys)?;
        let sys = assemble_quad_tensor(&mesh, p)?;
        let rep = sigma_min_sweep_with(&sys, &ks, exec)?;
        let i = rep.argmin().expect("nonempty sweep");
        cases.push(CorridorCase {
            label,
            p,
            cells: [xs.len() - 1, ys.len() - 1],
            dofs: sys.dim(),
            samples: ks.len(),
            min_ratio: rep.ratios()[i],
            k_at_min: ks[i],
        });
    }
    Ok(CorridorReport {
        threshold: CORRIDOR_THRESHOLD,
        cases,
    })
}
