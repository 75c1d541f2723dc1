use serde::Serialize;

use crate::error::Result;
use crate::fem::assemble_p1;
use crate::mesh::{cot_sum, Mesh2D, ANGLE_EPS};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngleMismatch {
    pub edge: [usize; 2],
    pub stiffness: f64,
    pub cot_sum: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AngleLemmaReport {
    pub edges_checked: usize,
    /// Interior edges violating the weakly acute condition.
    pub obtuse_edges: Vec<[usize; 2]>,
    pub mismatches: Vec<AngleMismatch>,
}

impl AngleLemmaReport {
    pub fn consistent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares, edge by edge, the sign of the assembled off-diagonal
/// stiffness entry with the weakly acute predicate. The entry equals
/// `−(cot α₋ + cot α₊)/2`, so `entry ≤ ε/2` is matched against
/// `cot α₋ + cot α₊ ≥ −ε`.
pub fn verify_angle_lemma(mesh: &Mesh2D) -> Result<AngleLemmaReport> {
    let sys = assemble_p1(mesh)?;
    let mut report = AngleLemmaReport::default();
    for edge in mesh.interior_edges() {
        let [a, b] = edge.nodes;
        let entry = sys.a.get(a, b);
        let cs = cot_sum(mesh, a, b)?;
        let acute = cs >= -ANGLE_EPS;
        let nonpositive = entry <= ANGLE_EPS / 2.0;
        report.edges_checked += 1;
        if !acute {
            report.obtuse_edges.push([a, b]);
        }
        if acute != nonpositive {
            report.mismatches.push(AngleMismatch {
                edge: [a, b],
                stiffness: entry,
                cot_sum: cs,
            });
        }
    }
    Ok(report)
}
