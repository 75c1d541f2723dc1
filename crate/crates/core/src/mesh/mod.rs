//! Mesh data model: conforming triangulations and axis-parallel
//! rectangle meshes with a derived, deterministically ordered edge table.

mod generate;
mod geometry;
mod io;
mod nodeset;

pub use generate::{
    make_equilateral_mesh, make_jittered_mesh, make_kite, make_layered_ring_mesh,
    make_structured_tri_mesh, make_talpha, make_tensor_quad_mesh, TriPattern,
};
pub use geometry::{
    cot_sum, min_angle_quality, opposite_angles, signed_area, transmission_degree, triangle_angles,
    triangle_min_angle, weakly_acute, OppositeAngles, ANGLE_EPS,
};
pub use io::{
    load_mesh, load_mesh_1d, mesh_1d_from_json, mesh_1d_to_json, mesh_from_json, mesh_to_json,
    save_mesh, save_mesh_1d, Mesh1D,
};
pub use nodeset::NodeSet;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = [f64; 2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Tri3,
    Quad4,
    Interval2,
}

impl ElementKind {
    pub fn arity(self) -> usize {
        match self {
            ElementKind::Tri3 => 3,
            ElementKind::Quad4 => 4,
            ElementKind::Interval2 => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeLocation {
    Interior,
    Boundary,
}

/// An undirected mesh edge. `nodes` is sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub nodes: [usize; 2],
    /// One element for boundary edges, two (ascending) for interior edges.
    pub elements: Vec<usize>,
}

impl Edge {
    pub fn location(&self) -> EdgeLocation {
        if self.elements.len() == 2 {
            EdgeLocation::Interior
        } else {
            EdgeLocation::Boundary
        }
    }

    pub fn is_interior(&self) -> bool {
        self.elements.len() == 2
    }
}

/// Sorted node pair used as an edge key.
pub fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A validated conforming planar mesh with a homogeneous element kind.
///
/// Immutable after construction; the modification routines in
/// [`crate::repair`] build new values.
#[derive(Clone, Debug)]
pub struct Mesh2D {
    nodes: Vec<Point>,
    kind: ElementKind,
    elements: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    edge_lookup: HashMap<(usize, usize), usize>,
    boundary: Vec<bool>,
    neighbors: Vec<Vec<usize>>,
}

impl Mesh2D {
    /// Validates the input, normalizes element orientation to
    /// counter-clockwise and derives the edge table.
    pub fn new(nodes: Vec<Point>, kind: ElementKind, elements: Vec<Vec<usize>>) -> Result<Self> {
        if kind == ElementKind::Interval2 {
            return Err(Error::InvalidMesh(
                "interval2 elements need a 1D mesh".into(),
            ));
        }
        if nodes.is_empty() || elements.is_empty() {
            return Err(Error::InvalidMesh("empty mesh".into()));
        }
        if let Some(i) = nodes
            .iter()
            .position(|p| !p[0].is_finite() || !p[1].is_finite())
        {
            return Err(Error::InvalidMesh(format!(
                "node {i} has non-finite coordinates"
            )));
        }
        check_duplicates(&nodes)?;

        let scale = bbox_diameter(&nodes);
        let area_tol = 1e-14 * scale * scale;
        let mut used = vec![false; nodes.len()];
        let mut normalized = Vec::with_capacity(elements.len());
        for (e, conn) in elements.into_iter().enumerate() {
            if conn.len() != kind.arity() {
                return Err(Error::InvalidMesh(format!(
                    "element {e} has {} vertices, {:?} needs {}",
                    conn.len(),
                    kind,
                    kind.arity()
                )));
            }
            for (i, &v) in conn.iter().enumerate() {
                if v >= nodes.len() {
                    return Err(Error::InvalidMesh(format!(
                        "element {e} references missing node {v}"
                    )));
                }
                if conn[..i].contains(&v) {
                    return Err(Error::InvalidMesh(format!("element {e} repeats node {v}")));
                }
                used[v] = true;
            }
            let area = polygon_area(&nodes, &conn);
            if area.abs() <= area_tol {
                return Err(Error::DegenerateElement { element: e, area });
            }
            let mut conn = conn;
            if area < 0.0 {
                conn.reverse();
            }
            if kind == ElementKind::Quad4 {
                conn = normalize_rectangle(&nodes, &conn).ok_or_else(|| {
                    Error::InvalidMesh(format!("element {e} is not an axis-parallel rectangle"))
                })?;
            }
            normalized.push(conn);
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::InvalidMesh(format!(
                "node {i} belongs to no element"
            )));
        }

        let edges = build_edges(&normalized)?;
        let mut edge_lookup = HashMap::with_capacity(edges.len());
        let mut boundary = vec![false; nodes.len()];
        let mut neighbors = vec![Vec::new(); nodes.len()];
        for (id, edge) in edges.iter().enumerate() {
            let [a, b] = edge.nodes;
            edge_lookup.insert((a, b), id);
            if edge.is_interior() {
                neighbors[a].push(b);
                neighbors[b].push(a);
            } else {
                boundary[a] = true;
                boundary[b] = true;
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }

        let mesh = Mesh2D {
            nodes,
            kind,
            elements: normalized,
            edges,
            edge_lookup,
            boundary,
            neighbors,
        };
        mesh.check_hanging_nodes()?;
        mesh.check_connected()?;
        Ok(mesh)
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> Point {
        self.nodes[i]
    }

    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn element(&self, e: usize) -> &[usize] {
        &self.elements[e]
    }

    /// Vertex coordinates of a triangle element.
    pub fn triangle(&self, e: usize) -> [Point; 3] {
        let c = &self.elements[e];
        [self.nodes[c[0]], self.nodes[c[1]], self.nodes[c[2]]]
    }

    /// Edge table in lexicographic order of the sorted endpoint ids.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_lookup.get(&edge_key(a, b)).copied()
    }

    pub fn edge(&self, a: usize, b: usize) -> Option<&Edge> {
        self.edge_id(a, b).map(|id| &self.edges[id])
    }

    pub fn is_interior_edge(&self, a: usize, b: usize) -> bool {
        self.edge(a, b).is_some_and(Edge::is_interior)
    }

    pub fn interior_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.is_interior())
    }

    pub fn boundary_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| !e.is_interior())
    }

    pub fn num_interior_edges(&self) -> usize {
        self.interior_edges().count()
    }

    pub fn num_boundary_edges(&self) -> usize {
        self.boundary_edges().count()
    }

    pub fn is_boundary_node(&self, i: usize) -> bool {
        self.boundary[i]
    }

    /// The node set 𝒩 ∩ Γ.
    pub fn boundary_nodes(&self) -> NodeSet {
        NodeSet::from_mask(self.boundary.clone())
    }

    /// Neighbours of `i` across interior edges, ascending.
    pub fn interior_neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// Returns the mesh with node `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Mesh2D> {
        let n = self.num_nodes();
        if perm.len() != n {
            return Err(Error::InvalidArgument(format!(
                "permutation has length {}, mesh has {n} nodes",
                perm.len()
            )));
        }
        let mut nodes = vec![[0.0; 2]; n];
        let mut seen = vec![false; n];
        for (old, &new) in perm.iter().enumerate() {
            if new >= n || seen[new] {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
            seen[new] = true;
            nodes[new] = self.nodes[old];
        }
        let elements = self
            .elements
            .iter()
            .map(|c| c.iter().map(|&v| perm[v]).collect())
            .collect();
        Mesh2D::new(nodes, self.kind, elements)
    }

    /// Smallest and largest extent of the mesh bounding box.
    pub fn bounding_box(&self) -> (Point, Point) {
        bbox(&self.nodes)
    }

    fn check_hanging_nodes(&self) -> Result<()> {
        let scale = bbox_diameter(&self.nodes);
        for edge in self.boundary_edges() {
            let [a, b] = edge.nodes;
            let (pa, pb) = (self.nodes[a], self.nodes[b]);
            let d = [pb[0] - pa[0], pb[1] - pa[1]];
            let len2 = d[0] * d[0] + d[1] * d[1];
            for (i, p) in self.nodes.iter().enumerate() {
                if i == a || i == b {
                    continue;
                }
                let r = [p[0] - pa[0], p[1] - pa[1]];
                let cross = d[0] * r[1] - d[1] * r[0];
                if cross.abs() > 1e-12 * scale * len2.sqrt() {
                    continue;
                }
                let t = (d[0] * r[0] + d[1] * r[1]) / len2;
                if t > 0.0 && t < 1.0 {
                    return Err(Error::NonConforming(format!(
                        "node {i} hangs on edge [{a}, {b}]"
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_connected(&self) -> Result<()> {
        let ne = self.elements.len();
        let mut adj = vec![Vec::new(); ne];
        for edge in self.interior_edges() {
            adj[edge.elements[0]].push(edge.elements[1]);
            adj[edge.elements[1]].push(edge.elements[0]);
        }
        let mut seen = vec![false; ne];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(e) = stack.pop() {
            for &f in &adj[e] {
                if !seen[f] {
                    seen[f] = true;
                    stack.push(f);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(e) => Err(Error::InvalidMesh(format!(
                "element {e} is disconnected from element 0"
            ))),
            None => Ok(()),
        }
    }
}

fn build_edges(elements: &[Vec<usize>]) -> Result<Vec<Edge>> {
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    let mut undirected: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (e, conn) in elements.iter().enumerate() {
        let m = conn.len();
        for i in 0..m {
            let (a, b) = (conn[i], conn[(i + 1) % m]);
            if let Some(f) = directed.insert((a, b), e) {
                return Err(Error::NonConforming(format!(
                    "elements {f} and {e} overlap along edge [{a}, {b}]"
                )));
            }
            let adj = undirected.entry(edge_key(a, b)).or_default();
            adj.push(e);
            if adj.len() > 2 {
                return Err(Error::NonConforming(format!(
                    "edge [{a}, {b}] has more than two elements"
                )));
            }
        }
    }
    let mut edges: Vec<Edge> = undirected
        .into_iter()
        .map(|((a, b), mut elements)| {
            elements.sort_unstable();
            Edge {
                nodes: [a, b],
                elements,
            }
        })
        .collect();
    edges.sort_unstable_by_key(|e| e.nodes);
    Ok(edges)
}

fn check_duplicates(nodes: &[Point]) -> Result<()> {
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&i, &j| {
        nodes[i][0]
            .total_cmp(&nodes[j][0])
            .then(nodes[i][1].total_cmp(&nodes[j][1]))
            .then(i.cmp(&j))
    });
    for w in order.windows(2) {
        if nodes[w[0]] == nodes[w[1]] {
            return Err(Error::DuplicateNode {
                first: w[0].min(w[1]),
                second: w[0].max(w[1]),
            });
        }
    }
    Ok(())
}

fn polygon_area(nodes: &[Point], conn: &[usize]) -> f64 {
    let m = conn.len();
    let mut s = 0.0;
    for i in 0..m {
        let p = nodes[conn[i]];
        let q = nodes[conn[(i + 1) % m]];
        s += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * s
}

/// Reorders a counter-clockwise quad as bottom-left, bottom-right,
/// top-right, top-left; `None` unless it is an axis-parallel rectangle.
fn normalize_rectangle(nodes: &[Point], conn: &[usize]) -> Option<Vec<usize>> {
    let pts: Vec<Point> = conn.iter().map(|&v| nodes[v]).collect();
    let x0 = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let y0 = pts.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
    let x1 = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let y1 = pts.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max);
    let corners = [[x0, y0], [x1, y0], [x1, y1], [x0, y1]];
    let start = pts.iter().position(|p| *p == corners[0])?;
    let rotated: Vec<usize> = (0..4).map(|i| conn[(start + i) % 4]).collect();
    for (v, c) in rotated.iter().zip(corners.iter()) {
        if nodes[*v] != *c {
            return None;
        }
    }
    Some(rotated)
}

fn bbox(nodes: &[Point]) -> (Point, Point) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in nodes {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

fn bbox_diameter(nodes: &[Point]) -> f64 {
    let (lo, hi) = bbox(nodes);
    let d = ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt();
    if d > 0.0 {
        d
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square_two_triangles() -> Mesh2D {
        Mesh2D::new(
            vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            ElementKind::Tri3,
            vec![vec![0, 1, 2], vec![0, 2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn single_triangle_has_three_boundary_edges() {
        let m = Mesh2D::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            ElementKind::Tri3,
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        assert_eq!(m.num_boundary_edges(), 3);
        assert_eq!(m.num_interior_edges(), 0);
        assert_eq!(m.boundary_nodes().count(), 3);
    }

    #[test]
    fn diagonal_is_the_only_interior_edge() {
        let m = unit_square_two_triangles();
        assert_eq!(m.num_boundary_edges(), 4);
        assert_eq!(m.num_interior_edges(), 1);
        let e = m.edge(2, 0).unwrap();
        assert_eq!(e.nodes, [0, 2]);
        assert_eq!(e.elements, vec![0, 1]);
        assert_eq!(m.interior_neighbors(0), &[2]);
        assert!(m.interior_neighbors(1).is_empty());
    }

    #[test]
    fn edges_are_lexicographic() {
        let m = unit_square_two_triangles();
        let keys: Vec<[usize; 2]> = m.edges().iter().map(|e| e.nodes).collect();
        assert_eq!(keys, vec![[0, 1], [0, 2], [0, 3], [1, 2], [2, 3]]);
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let m = Mesh2D::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            ElementKind::Tri3,
            vec![vec![0, 2, 1]],
        )
        .unwrap();
        let t = m.triangle(0);
        assert!(signed_area(t[0], t[1], t[2]) > 0.0);
    }

    #[test]
    fn rejects_degenerate_triangle() {
        let err = Mesh2D::new(
            vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]],
            ElementKind::Tri3,
            vec![vec![0, 1, 2]],
        );
        assert!(matches!(err, Err(Error::DegenerateElement { .. })));
    }

    #[test]
    fn rejects_duplicate_nodes() {
        let err = Mesh2D::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 0.0]],
            ElementKind::Tri3,
            vec![vec![0, 1, 2], vec![3, 2, 0]],
        );
        assert!(matches!(
            err,
            Err(Error::DuplicateNode {
                first: 1,
                second: 3
            })
        ));
    }

    #[test]
    fn rejects_non_manifold_edge() {
        // three triangles on edge [0,1]; two of them overlap
        let err = Mesh2D::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.5, 1.0], [0.5, -1.0], [0.5, 2.0]],
            ElementKind::Tri3,
            vec![vec![0, 1, 2], vec![1, 0, 3], vec![0, 1, 4]],
        );
        assert!(matches!(err, Err(Error::NonConforming(_))));
    }

    #[test]
    fn rejects_hanging_node() {
        // big triangle next to two small ones splitting its edge
        let err = Mesh2D::new(
            vec![[0.0, 0.0], [2.0, 0.0], [1.0, 0.0], [1.0, -1.0], [1.0, 1.0]],
            ElementKind::Tri3,
            vec![vec![0, 1, 4], vec![0, 3, 2], vec![2, 3, 1]],
        );
        assert!(matches!(err, Err(Error::NonConforming(_))));
    }

    #[test]
    fn rejects_non_rectangular_quad() {
        let err = Mesh2D::new(
            vec![[0.0, 0.0], [1.0, 0.0], [1.2, 1.0], [0.0, 1.0]],
            ElementKind::Quad4,
            vec![vec![0, 1, 2, 3]],
        );
        assert!(matches!(err, Err(Error::InvalidMesh(_))));
    }

    #[test]
    fn quad_is_normalized_to_bottom_left_start() {
        let m = Mesh2D::new(
            vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            ElementKind::Quad4,
            vec![vec![2, 1, 0, 3]],
        )
        .unwrap();
        assert_eq!(m.element(0), &[0, 1, 2, 3]);
    }

    #[test]
    fn relabel_rejects_non_permutation() {
        let m = unit_square_two_triangles();
        assert!(m.relabel(&[0, 0, 1, 2]).is_err());
        let r = m.relabel(&[3, 2, 1, 0]).unwrap();
        assert_eq!(r.node(3), [0.0, 0.0]);
        assert_eq!(r.num_interior_edges(), 1);
    }
}
