use super::{DofMap, SystemMatrices, TripletBuilder};
use crate::error::{Error, Result};
use crate::mesh::{signed_area, ElementKind, Mesh2D, Point};

fn checked_area(t: &[Point; 3]) -> Result<f64> {
    let area = signed_area(t[0], t[1], t[2]);
    if area > 0.0 {
        Ok(area)
    } else {
        Err(Error::DegenerateElement { element: 0, area })
    }
}

/// `∫_K ∇λⱼ·∇λᵢ` for the barycentric hat functions of a positively
/// oriented triangle.
pub fn local_p1_stiffness(t: &[Point; 3]) -> Result<[[f64; 3]; 3]> {
    let area = checked_area(t)?;
    let g = |i: usize| {
        let (p, q) = (t[(i + 1) % 3], t[(i + 2) % 3]);
        [(p[1] - q[1]) / (2.0 * area), (q[0] - p[0]) / (2.0 * area)]
    };
    let grads = [g(0), g(1), g(2)];
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = area * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
        }
    }
    Ok(k)
}

/// `(area/12)·[[2,1,1],[1,2,1],[1,1,2]]`
pub fn local_p1_mass(t: &[Point; 3]) -> Result<[[f64; 3]; 3]> {
    let area = checked_area(t)?;
    let mut m = [[area / 12.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = area / 6.0;
    }
    Ok(m)
}

/// `(|E|/6)·[[2,1],[1,2]]`
pub fn local_edge_mass(a: Point, b: Point) -> Result<[[f64; 2]; 2]> {
    let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    if len <= 0.0 {
        return Err(Error::InvalidArgument("zero-length edge".into()));
    }
    Ok([[len / 3.0, len / 6.0], [len / 6.0, len / 3.0]])
}

/// Piecewise linear elements on a triangulation; dof `i` is node `i`.
pub fn assemble_p1(mesh: &Mesh2D) -> Result<SystemMatrices> {
    if mesh.kind() != ElementKind::Tri3 {
        return Err(Error::InvalidArgument(
            "P1 assembly needs a triangular mesh".into(),
        ));
    }
    let n = mesh.num_nodes();
    let mut a = TripletBuilder::new(n);
    let mut m = TripletBuilder::new(n);
    let mut b = TripletBuilder::new(n);
    for e in 0..mesh.num_elements() {
        let conn = mesh.element(e);
        let t = mesh.triangle(e);
        let ka = local_p1_stiffness(&t).map_err(|_| Error::DegenerateElement {
            element: e,
            area: 0.0,
        })?;
        let km = local_p1_mass(&t)?;
        for i in 0..3 {
            for j in 0..3 {
                a.add(conn[i], conn[j], ka[i][j]);
                m.add(conn[i], conn[j], km[i][j]);
            }
        }
    }
    for edge in mesh.boundary_edges() {
        let [p, q] = edge.nodes;
        let kb = local_edge_mass(mesh.node(p), mesh.node(q))?;
        let ids = [p, q];
        for i in 0..2 {
            for j in 0..2 {
                b.add(ids[i], ids[j], kb[i][j]);
            }
        }
    }
    let dofs = DofMap {
        points: mesh.nodes().to_vec(),
        on_boundary: (0..n).map(|i| mesh.is_boundary_node(i)).collect(),
        vertex_dofs: (0..n).collect(),
    };
    Ok(SystemMatrices {
        a: a.build(),
        m: m.build(),
        b: b.build(),
        dofs,
    })
}
