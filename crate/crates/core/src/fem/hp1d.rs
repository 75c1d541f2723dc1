use super::lagrange::reference_matrices;
use super::{DofMap, SystemMatrices, TripletBuilder};
use crate::error::{Error, Result};
use crate::mesh::Mesh1D;

/// Continuous piecewise degree-`p` elements on a 1D mesh, equispaced nodes
/// per element. Dof of breakpoint `e` is `e·p`; element interiors follow in
/// between.
pub fn assemble_1d_hp(mesh: &Mesh1D, p: usize) -> Result<SystemMatrices> {
    if p < 1 {
        return Err(Error::InvalidArgument(
            "polynomial degree must be at least 1".into(),
        ));
    }
    let xs = mesh.breakpoints();
    let ne = mesh.num_elements();
    if ne < 1 {
        return Err(Error::InvalidMesh(
            "1D mesh needs at least one element".into(),
        ));
    }
    let n = ne * p + 1;
    let q = (2 * p + 1).div_ceil(2) + 1;
    let (kr, mr) = reference_matrices(p, q);
    let mut a = TripletBuilder::new(n);
    let mut m = TripletBuilder::new(n);
    let mut points = Vec::with_capacity(n);
    for e in 0..ne {
        let h = xs[e + 1] - xs[e];
        for i in 0..=p {
            for j in 0..=p {
                a.add(e * p + i, e * p + j, 2.0 / h * kr[(i, j)]);
                m.add(e * p + i, e * p + j, h / 2.0 * mr[(i, j)]);
            }
        }
        for i in 0..p {
            points.push([xs[e] + h * i as f64 / p as f64, 0.0]);
        }
    }
    points.push([xs[ne], 0.0]);
    let mut b = TripletBuilder::new(n);
    b.add(0, 0, 1.0);
    b.add(n - 1, n - 1, 1.0);
    let mut on_boundary = vec![false; n];
    on_boundary[0] = true;
    on_boundary[n - 1] = true;
    let dofs = DofMap {
        points,
        on_boundary,
        vertex_dofs: (0..=ne).map(|e| e * p).collect(),
    };
    Ok(SystemMatrices {
        a: a.build(),
        m: m.build(),
        b: b.build(),
        dofs,
    })
}
