use super::{Mesh2D, NodeSet, Point};
use crate::error::{Error, Result};

/// Tolerance of the cotangent form of the weakly acute angle test.
pub const ANGLE_EPS: f64 = 1e-12;

pub fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

/// Interior angle at `apex` of the triangle `apex, p, q`.
fn angle_at(apex: Point, p: Point, q: Point) -> f64 {
    let u = [p[0] - apex[0], p[1] - apex[1]];
    let v = [q[0] - apex[0], q[1] - apex[1]];
    let cross = u[0] * v[1] - u[1] * v[0];
    let dot = u[0] * v[0] + u[1] * v[1];
    cross.abs().atan2(dot)
}

/// Cotangent of the angle at `apex`; `None` for a degenerate corner.
fn cot_at(apex: Point, p: Point, q: Point) -> Option<f64> {
    let u = [p[0] - apex[0], p[1] - apex[1]];
    let v = [q[0] - apex[0], q[1] - apex[1]];
    let cross = (u[0] * v[1] - u[1] * v[0]).abs();
    let dot = u[0] * v[0] + u[1] * v[1];
    let scale = (u[0] * u[0] + u[1] * u[1]) * (v[0] * v[0] + v[1] * v[1]);
    if cross <= 1e-15 * scale.sqrt() {
        None
    } else {
        Some(dot / cross)
    }
}

/// The three interior angles, at vertices 0, 1 and 2.
pub fn triangle_angles(a: Point, b: Point, c: Point) -> [f64; 3] {
    [angle_at(a, b, c), angle_at(b, c, a), angle_at(c, a, b)]
}

pub fn triangle_min_angle(a: Point, b: Point, c: Point) -> f64 {
    let [x, y, z] = triangle_angles(a, b, c);
    x.min(y).min(z)
}

/// Angles opposite an interior edge in its two adjacent triangles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OppositeAngles {
    /// In the adjacent triangle with the smaller element id.
    pub minus: f64,
    pub plus: f64,
    /// `minus + plus`
    pub total: f64,
}

/// Opposite vertex of edge `{a, b}` in triangle `e`.
fn opposite_vertex(mesh: &Mesh2D, e: usize, a: usize, b: usize) -> usize {
    *mesh
        .element(e)
        .iter()
        .find(|&&v| v != a && v != b)
        .expect("triangle has a third vertex")
}

fn interior_triangle_edge(mesh: &Mesh2D, a: usize, b: usize) -> Result<[usize; 2]> {
    if mesh.kind() != super::ElementKind::Tri3 {
        return Err(Error::InvalidArgument(
            "angle predicates need a triangular mesh".into(),
        ));
    }
    let edge = mesh.edge(a, b).ok_or(Error::NoSuchEdge(a, b))?;
    if !edge.is_interior() {
        return Err(Error::NotInterior(edge.nodes[0], edge.nodes[1]));
    }
    Ok([edge.elements[0], edge.elements[1]])
}

pub fn opposite_angles(mesh: &Mesh2D, a: usize, b: usize) -> Result<OppositeAngles> {
    let [em, ep] = interior_triangle_edge(mesh, a, b)?;
    let (pa, pb) = (mesh.node(a), mesh.node(b));
    let at = |e: usize| {
        let c = opposite_vertex(mesh, e, a, b);
        angle_at(mesh.node(c), pa, pb)
    };
    let (minus, plus) = (at(em), at(ep));
    Ok(OppositeAngles {
        minus,
        plus,
        total: minus + plus,
    })
}

/// `cot(α₋) + cot(α₊)` for an interior edge.
pub fn cot_sum(mesh: &Mesh2D, a: usize, b: usize) -> Result<f64> {
    let [em, ep] = interior_triangle_edge(mesh, a, b)?;
    let (pa, pb) = (mesh.node(a), mesh.node(b));
    let mut sum = 0.0;
    for e in [em, ep] {
        let c = opposite_vertex(mesh, e, a, b);
        sum += cot_at(mesh.node(c), pa, pb).ok_or(Error::DegenerateElement {
            element: e,
            area: 0.0,
        })?;
    }
    Ok(sum)
}

/// Weakly acute angle condition `α_E ≤ π`, evaluated as
/// `cot(α₋) + cot(α₊) ≥ −ANGLE_EPS`.
pub fn weakly_acute(mesh: &Mesh2D, a: usize, b: usize) -> Result<bool> {
    Ok(cot_sum(mesh, a, b)? >= -ANGLE_EPS)
}

/// Number of nodes outside `n1` joined to `z_prime` by an interior edge.
pub fn transmission_degree(mesh: &Mesh2D, z_prime: usize, n1: &NodeSet) -> Result<usize> {
    if !n1.contains(z_prime) {
        return Err(Error::InvalidArgument(format!(
            "node {z_prime} is not in the reference set"
        )));
    }
    Ok(mesh
        .interior_neighbors(z_prime)
        .iter()
        .filter(|&&z| !n1.contains(z))
        .count())
}

/// Smallest interior angle over all triangles.
pub fn min_angle_quality(mesh: &Mesh2D) -> Result<f64> {
    if mesh.kind() != super::ElementKind::Tri3 {
        return Err(Error::InvalidArgument(
            "quality is defined for triangular meshes".into(),
        ));
    }
    (0..mesh.num_elements())
        .map(|e| {
            let [a, b, c] = mesh.triangle(e);
            triangle_min_angle(a, b, c)
        })
        .reduce(f64::min)
        .ok_or_else(|| Error::InvalidMesh("empty mesh".into()))
}
