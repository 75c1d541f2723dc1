use nalgebra::DMatrix;

use super::lagrange::reference_matrices;
use super::{DofMap, SystemMatrices, TripletBuilder};
use crate::error::{Error, Result};
use crate::mesh::{ElementKind, Mesh2D};

pub const MAX_QUAD_DEGREE: usize = 6;

/// Tensor-product `Q^p` elements on an axis-parallel quadrilateral mesh,
/// integrated with a `(p+1)`-point Gauss–Legendre rule per direction.
pub fn assemble_quad_tensor(mesh: &Mesh2D, p: usize) -> Result<SystemMatrices> {
    assemble_quad_tensor_with_order(mesh, p, p + 1)
}

/// As [`assemble_quad_tensor`] with an explicit number `q` of quadrature
/// points per direction.
///
/// Dofs: mesh vertices first, then `p − 1` per edge in edge-table order
/// (counted from the lower node id), then `(p − 1)²` per cell.
pub fn assemble_quad_tensor_with_order(
    mesh: &Mesh2D,
    p: usize,
    q: usize,
) -> Result<SystemMatrices> {
    if mesh.kind() != ElementKind::Quad4 {
        return Err(Error::InvalidArgument(
            "tensor assembly needs a quadrilateral mesh".into(),
        ));
    }
    if !(1..=MAX_QUAD_DEGREE).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "quad degree {p} outside 1..={MAX_QUAD_DEGREE}"
        )));
    }
    if q < p + 1 {
        return Err(Error::InvalidArgument(format!(
            "{q} quadrature points cannot integrate degree {p}"
        )));
    }
    let (kr, mr) = reference_matrices(p, q);
    let layout = Layout::new(mesh, p);
    let n = layout.num_dofs;
    let mut points = vec![[0.0; 2]; n];
    let mut a = TripletBuilder::new(n);
    let mut m = TripletBuilder::new(n);
    for e in 0..mesh.num_elements() {
        let conn = mesh.element(e);
        let (x0, y0) = (mesh.node(conn[0])[0], mesh.node(conn[0])[1]);
        let (hx, hy) = (mesh.node(conn[1])[0] - x0, mesh.node(conn[3])[1] - y0);
        let dofs = layout.cell_dofs(mesh, e);
        for (l, &d) in dofs.iter().enumerate() {
            let (ia, ib) = (l % (p + 1), l / (p + 1));
            points[d] = [
                x0 + hx * ia as f64 / p as f64,
                y0 + hy * ib as f64 / p as f64,
            ];
        }
        for (l, &row) in dofs.iter().enumerate() {
            let (ia, ib) = (l % (p + 1), l / (p + 1));
            for (r, &col) in dofs.iter().enumerate() {
                let (ja, jb) = (r % (p + 1), r / (p + 1));
                let stiff = (2.0 / hx) * kr[(ia, ja)] * (hy / 2.0) * mr[(ib, jb)]
                    + (hx / 2.0) * mr[(ia, ja)] * (2.0 / hy) * kr[(ib, jb)];
                let mass = (hx / 2.0) * mr[(ia, ja)] * (hy / 2.0) * mr[(ib, jb)];
                a.add(row, col, stiff);
                m.add(row, col, mass);
            }
        }
    }
    let mut b = TripletBuilder::new(n);
    let mut on_boundary = vec![false; n];
    for edge in mesh.boundary_edges() {
        let dofs = layout.edge_dofs(mesh, edge.nodes);
        let (pa, pb) = (mesh.node(edge.nodes[0]), mesh.node(edge.nodes[1]));
        let len = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
        add_scaled(&mut b, &dofs, &mr, len / 2.0);
        for &d in &dofs {
            on_boundary[d] = true;
        }
    }
    let dofs = DofMap {
        points,
        on_boundary,
        vertex_dofs: (0..mesh.num_nodes()).collect(),
    };
    Ok(SystemMatrices {
        a: a.build(),
        m: m.build(),
        b: b.build(),
        dofs,
    })
}

fn add_scaled(builder: &mut TripletBuilder<f64>, dofs: &[usize], local: &DMatrix<f64>, s: f64) {
    for (i, &r) in dofs.iter().enumerate() {
        for (j, &c) in dofs.iter().enumerate() {
            builder.add(r, c, s * local[(i, j)]);
        }
    }
}

struct Layout {
    p: usize,
    nodes: usize,
    edges: usize,
    num_dofs: usize,
}

impl Layout {
    fn new(mesh: &Mesh2D, p: usize) -> Self {
        let nodes = mesh.num_nodes();
        let edges = mesh.edges().len();
        let num_dofs = nodes + edges * (p - 1) + mesh.num_elements() * (p - 1) * (p - 1);
        Self {
            p,
            nodes,
            edges,
            num_dofs,
        }
    }

    /// Dof at position `t ∈ 1..p` along the edge from `from` to `to`.
    fn edge_interior(&self, mesh: &Mesh2D, from: usize, to: usize, t: usize) -> usize {
        let id = mesh
            .edge_id(from, to)
            .expect("cell edge present in edge table");
        let pos = if from < to { t } else { self.p - t };
        self.nodes + id * (self.p - 1) + pos - 1
    }

    /// Dofs along an edge ordered from its lower to its higher node.
    fn edge_dofs(&self, mesh: &Mesh2D, nodes: [usize; 2]) -> Vec<usize> {
        let mut out = vec![nodes[0]];
        out.extend((1..self.p).map(|t| self.edge_interior(mesh, nodes[0], nodes[1], t)));
        out.push(nodes[1]);
        out
    }

    /// Global dofs of cell `e` at local index `b·(p+1) + a`.
    fn cell_dofs(&self, mesh: &Mesh2D, e: usize) -> Vec<usize> {
        let p = self.p;
        let c = mesh.element(e);
        let (bl, br, tr, tl) = (c[0], c[1], c[2], c[3]);
        let interior_base = self.nodes + self.edges * (p - 1) + e * (p - 1) * (p - 1);
        let mut out = Vec::with_capacity((p + 1) * (p + 1));
        for b in 0..=p {
            for a in 0..=p {
                let d = match (a, b) {
                    (0, 0) => bl,
                    (a, 0) if a == p => br,
                    (a, b) if a == p && b == p => tr,
                    (0, b) if b == p => tl,
                    (a, 0) => self.edge_interior(mesh, bl, br, a),
                    (a, b) if b == p => self.edge_interior(mesh, tl, tr, a),
                    (0, b) => self.edge_interior(mesh, bl, tl, b),
                    (a, b) if a == p => self.edge_interior(mesh, br, tr, b),
                    (a, b) => interior_base + (b - 1) * (p - 1) + (a - 1),
                };
                out.push(d);
            }
        }
        out
    }
}
