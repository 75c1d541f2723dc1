//! Galerkin assembly of `A` (stiffness), `M` (mass) and `B` (boundary
//! mass), and the complex system matrix `K_k = A − k²M − i·k·B`.

mod hp1d;
mod lagrange;
mod p1;
mod quad;
mod reduced;
pub mod sparse;

pub use hp1d::assemble_1d_hp;
pub use lagrange::{gauss_legendre, reference_matrices, LagrangeBasis};
pub use p1::{assemble_p1, local_edge_mass, local_p1_mass, local_p1_stiffness};
pub use quad::{assemble_quad_tensor, assemble_quad_tensor_with_order, MAX_QUAD_DEGREE};
pub use reduced::reduced_quad_local_matrices;
pub use sparse::{Csr, TripletBuilder};

use num::complex::Complex64;

use crate::error::{Error, Result};

/// Placement of the degrees of freedom.
#[derive(Clone, Debug, PartialEq)]
pub struct DofMap {
    /// Nodal point of every dof (1D meshes use `y = 0`).
    pub points: Vec<[f64; 2]>,
    /// Dofs lying on the boundary Γ.
    pub on_boundary: Vec<bool>,
    /// Dof of each mesh vertex.
    pub vertex_dofs: Vec<usize>,
}

impl DofMap {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The real symmetric matrices of one discretization.
#[derive(Clone, Debug)]
pub struct SystemMatrices {
    pub a: Csr<f64>,
    pub m: Csr<f64>,
    pub b: Csr<f64>,
    pub dofs: DofMap,
}

impl SystemMatrices {
    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

/// `K_k` for a fixed wave number.
#[derive(Clone, Debug)]
pub struct ComplexSystem {
    pub k: f64,
    pub matrix: Csr<Complex64>,
}

/// Forms `K_k = A − k²M − i·k·B` entry by entry.
pub fn system_matrix(sys: &SystemMatrices, k: f64) -> Result<ComplexSystem> {
    if k == 0.0 || !k.is_finite() {
        return Err(Error::ZeroWaveNumber);
    }
    let n = sys.dim();
    let k2 = k * k;
    let mut builder = TripletBuilder::<Complex64>::new(n);
    for i in 0..n {
        // merge the three sorted rows so each entry is formed in one expression
        let mut cols: Vec<usize> = sys
            .a
            .row(i)
            .chain(sys.m.row(i))
            .chain(sys.b.row(i))
            .map(|(j, _)| j)
            .collect();
        cols.sort_unstable();
        cols.dedup();
        for j in cols {
            let re = sys.a.get(i, j) - k2 * sys.m.get(i, j);
            let im = -k * sys.b.get(i, j);
            builder.add(i, j, Complex64::new(re, im));
        }
    }
    Ok(ComplexSystem {
        k,
        matrix: builder.build(),
    })
}
