//! Mesh generators for the structured, symmetric and randomized meshes
//! used by the checks, the CLI and the test suites.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::geometry::triangle_min_angle;
use super::{ElementKind, Mesh2D, Point};
use crate::error::{Error, Result};

/// How each cell of a structured grid is split into triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriPattern {
    /// Two triangles per cell, split along the `(i,j)–(i+1,j+1)` diagonal.
    Diagonal,
    /// Four triangles per cell around an added cell-centre node.
    Crisscross,
}

/// Conforming triangulation of `[0,1]²` on an `nx × ny` grid.
///
/// Grid nodes are numbered row by row (`j·(nx+1) + i`); crisscross cell
/// centres follow, also row by row.
pub fn make_structured_tri_mesh(nx: usize, ny: usize, pattern: TriPattern) -> Result<Mesh2D> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidArgument("grid needs nx, ny >= 1".into()));
    }
    let mut nodes = grid_nodes(nx, ny);
    let mut elements = Vec::new();
    let stride = nx + 1;
    for j in 0..ny {
        for i in 0..nx {
            let v00 = j * stride + i;
            let (v10, v01, v11) = (v00 + 1, v00 + stride, v00 + stride + 1);
            match pattern {
                TriPattern::Diagonal => {
                    elements.push(vec![v00, v10, v11]);
                    elements.push(vec![v00, v11, v01]);
                }
                TriPattern::Crisscross => {
                    let c = nodes.len();
                    nodes.push([(i as f64 + 0.5) / nx as f64, (j as f64 + 0.5) / ny as f64]);
                    elements.push(vec![v00, v10, c]);
                    elements.push(vec![v10, v11, c]);
                    elements.push(vec![v11, v01, c]);
                    elements.push(vec![v01, v00, c]);
                }
            }
        }
    }
    Mesh2D::new(nodes, ElementKind::Tri3, elements)
}

fn grid_nodes(nx: usize, ny: usize) -> Vec<Point> {
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push([i as f64 / nx as f64, j as f64 / ny as f64]);
        }
    }
    nodes
}

/// The symmetric 9-node, 12-triangle mesh of `(−1,1)²` with an inner
/// diamond of half-width `alpha`.
///
/// Node ids: corners `P1Γ..P4Γ = 0..3` at `(−1,−1), (1,−1), (1,1), (−1,1)`;
/// diamond `P1Ω..P4Ω = 4..7` at `(−α,0), (0,−α), (α,0), (0,α)`; centre
/// `P5Ω = 8`.
pub fn make_talpha(alpha: f64) -> Result<Mesh2D> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0,1), got {alpha}"
        )));
    }
    let nodes = vec![
        [-1.0, -1.0],
        [1.0, -1.0],
        [1.0, 1.0],
        [-1.0, 1.0],
        [-alpha, 0.0],
        [0.0, -alpha],
        [alpha, 0.0],
        [0.0, alpha],
        [0.0, 0.0],
    ];
    let mut elements = Vec::with_capacity(12);
    for i in 0..4 {
        let corner = i;
        let next_corner = (i + 1) % 4;
        let diamond = 4 + i;
        let next_diamond = 4 + (i + 1) % 4;
        // side triangle between two corners, corner triangle, inner triangle
        elements.push(vec![corner, next_corner, next_diamond]);
        elements.push(vec![corner, next_diamond, diamond]);
        elements.push(vec![diamond, next_diamond, 8]);
    }
    Mesh2D::new(nodes, ElementKind::Tri3, elements)
}

/// Axis-parallel rectangle mesh on the tensor grid `xs × ys`.
pub fn make_tensor_quad_mesh(xs: &[f64], ys: &[f64]) -> Result<Mesh2D> {
    for (name, v) in [("xs", xs), ("ys", ys)] {
        if v.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "{name} needs at least two entries"
            )));
        }
        if v.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument(format!(
                "{name} must be strictly increasing"
            )));
        }
    }
    let stride = xs.len();
    let mut nodes = Vec::with_capacity(xs.len() * ys.len());
    for &y in ys {
        for &x in xs {
            nodes.push([x, y]);
        }
    }
    let mut elements = Vec::new();
    for j in 0..ys.len() - 1 {
        for i in 0..xs.len() - 1 {
            let v00 = j * stride + i;
            elements.push(vec![v00, v00 + 1, v00 + stride + 1, v00 + stride]);
        }
    }
    Mesh2D::new(nodes, ElementKind::Quad4, elements)
}

/// Structured `nx × ny` triangulation of `[0,1]²` with interior nodes
/// displaced by up to `jitter · h` in each direction.
///
/// Each cell is split along the diagonal with the larger minimum angle,
/// or along a random diagonal when `random_diagonals` is set.
pub fn make_jittered_mesh(
    nx: usize,
    ny: usize,
    jitter: f64,
    random_diagonals: bool,
    seed: u64,
) -> Result<Mesh2D> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidArgument("grid needs nx, ny >= 1".into()));
    }
    if !(0.0..0.5).contains(&jitter) {
        return Err(Error::InvalidArgument("jitter must lie in [0, 0.5)".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = grid_nodes(nx, ny);
    let (hx, hy) = (1.0 / nx as f64, 1.0 / ny as f64);
    for j in 1..ny {
        for i in 1..nx {
            let p = &mut nodes[j * (nx + 1) + i];
            p[0] += jitter * hx * rng.gen_range(-1.0..1.0);
            p[1] += jitter * hy * rng.gen_range(-1.0..1.0);
        }
    }
    let stride = nx + 1;
    let mut elements = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let v00 = j * stride + i;
            let (v10, v01, v11) = (v00 + 1, v00 + stride, v00 + stride + 1);
            let main = [[v00, v10, v11], [v00, v11, v01]];
            let anti = [[v00, v10, v01], [v10, v11, v01]];
            let use_main = if random_diagonals {
                rng.gen_bool(0.5)
            } else {
                let q = |t: &[[usize; 3]; 2]| {
                    t.iter()
                        .map(|c| triangle_min_angle(nodes[c[0]], nodes[c[1]], nodes[c[2]]))
                        .fold(f64::INFINITY, f64::min)
                };
                q(&main) >= q(&anti)
            };
            for tri in if use_main { main } else { anti } {
                elements.push(tri.to_vec());
            }
        }
    }
    Mesh2D::new(nodes, ElementKind::Tri3, elements)
}

/// Lattice of equilateral triangles with unit sides, `nx` triangles wide
/// per row pair and `ny` rows high.
pub fn make_equilateral_mesh(nx: usize, ny: usize) -> Result<Mesh2D> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidArgument("lattice needs nx, ny >= 1".into()));
    }
    let h = 3f64.sqrt() / 2.0;
    let stride = nx + 1;
    let mut nodes = Vec::new();
    for j in 0..=ny {
        let shift = if j % 2 == 1 { 0.5 } else { 0.0 };
        for i in 0..=nx {
            nodes.push([i as f64 + shift, j as f64 * h]);
        }
    }
    let mut elements = Vec::new();
    for j in 0..ny {
        let lo = |i: usize| j * stride + i;
        let up = |i: usize| (j + 1) * stride + i;
        for i in 0..nx {
            if j % 2 == 0 {
                elements.push(vec![lo(i), lo(i + 1), up(i)]);
                elements.push(vec![lo(i + 1), up(i + 1), up(i)]);
            } else {
                elements.push(vec![lo(i), lo(i + 1), up(i + 1)]);
                elements.push(vec![lo(i), up(i + 1), up(i)]);
            }
        }
    }
    Mesh2D::new(nodes, ElementKind::Tri3, elements)
}

/// Two triangles on the edge `[(−1,0), (1,0)]` (nodes 0 and 1) whose
/// apexes (nodes 2 and 3) each see the edge under `total_angle / 2`, so
/// that `α_E = total_angle`.
pub fn make_kite(total_angle: f64) -> Result<Mesh2D> {
    if !(total_angle > 0.0 && total_angle < 2.0 * PI) {
        return Err(Error::InvalidArgument(
            "total angle must lie in (0, 2π)".into(),
        ));
    }
    let t = 1.0 / (total_angle / 4.0).tan();
    Mesh2D::new(
        vec![[-1.0, 0.0], [1.0, 0.0], [0.0, t], [0.0, -t]],
        ElementKind::Tri3,
        vec![vec![0, 1, 2], vec![1, 0, 3]],
    )
}

/// Concentric mesh on which marching from the boundary stalls.
///
/// An outer `2n`-gon of radius 1 (corner nodes `Aᵢ` aligned with the first
/// ring, edge nodes `Bᵢ` between them) encloses `rings ≥ 2` rings of `n`
/// nodes with alternating angular offsets and a centre node. Each `Aᵢ` has
/// a single interior neighbour, so the first ring is reached; every node of
/// the second ring has exactly two neighbours in the first ring and two in
/// the third ring (or the centre), so the march stops there.
///
/// Node ids: `Aᵢ = 2i`, `Bᵢ = 2i+1`, then the rings in order, then the centre.
pub fn make_layered_ring_mesh(n: usize, rings: usize) -> Result<Mesh2D> {
    if n < 5 {
        return Err(Error::InvalidArgument("ring mesh needs n >= 5".into()));
    }
    if rings < 2 {
        return Err(Error::InvalidArgument(
            "ring mesh needs at least two rings".into(),
        ));
    }
    let step = 2.0 * PI / n as f64;
    let polar = |r: f64, phi: f64| [r * phi.cos(), r * phi.sin()];
    let mut nodes = Vec::new();
    for i in 0..n {
        nodes.push(polar(1.0, i as f64 * step));
        nodes.push(polar(1.0, (i as f64 + 0.5) * step));
    }
    let c = (PI / n as f64).cos();
    // radii shrink by a factor below cos(π/n) so every flip quad is convex
    let ratio = 0.8 * c;
    let mut radius = 0.75;
    let ring_start = |k: usize| 2 * n + k * n;
    for k in 0..rings {
        let offset = if k % 2 == 0 { 0.0 } else { 0.5 };
        for i in 0..n {
            nodes.push(polar(radius, (i as f64 + offset) * step));
        }
        radius *= ratio;
    }
    let centre = nodes.len();
    nodes.push([0.0, 0.0]);

    let mut elements = Vec::new();
    let ring = |k: usize, i: usize| ring_start(k) + i % n;
    for i in 0..n {
        let (a, b, a_next) = (2 * i, 2 * i + 1, (2 * i + 2) % (2 * n));
        elements.push(vec![a, b, ring(0, i)]);
        elements.push(vec![b, a_next, ring(0, i + 1)]);
        elements.push(vec![b, ring(0, i + 1), ring(0, i)]);
    }
    for k in 0..rings - 1 {
        // ring k+1 sits half a step after ring k when k is even, before when odd
        for i in 0..n {
            if k % 2 == 0 {
                elements.push(vec![ring(k, i), ring(k, i + 1), ring(k + 1, i)]);
                elements.push(vec![ring(k + 1, i), ring(k, i + 1), ring(k + 1, i + 1)]);
            } else {
                elements.push(vec![ring(k, i), ring(k, i + 1), ring(k + 1, i + 1)]);
                elements.push(vec![ring(k, i), ring(k + 1, i + 1), ring(k + 1, i)]);
            }
        }
    }
    for i in 0..n {
        elements.push(vec![ring(rings - 1, i), ring(rings - 1, i + 1), centre]);
    }
    Mesh2D::new(nodes, ElementKind::Tri3, elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn structured_counts() {
        let m = make_structured_tri_mesh(1, 1, TriPattern::Diagonal).unwrap();
        assert_eq!(m.num_elements(), 2);
        let m = make_structured_tri_mesh(2, 2, TriPattern::Diagonal).unwrap();
        assert_eq!((m.num_elements(), m.num_nodes()), (8, 9));
        assert_eq!((m.num_boundary_edges(), m.num_interior_edges()), (8, 8));
        let m = make_structured_tri_mesh(1, 1, TriPattern::Crisscross).unwrap();
        assert_eq!((m.num_elements(), m.num_nodes()), (4, 5));
    }

    #[test]
    fn talpha_layout() {
        let m = make_talpha(0.4).unwrap();
        assert_eq!(m.node(4), [-0.4, 0.0]);
        assert_eq!((m.num_nodes(), m.num_elements()), (9, 12));
        // Euler: 3·12 = 2·E_int + E_bnd
        assert_eq!((m.num_boundary_edges(), m.num_interior_edges()), (4, 16));
        for corner in 0..4 {
            assert_eq!(m.interior_neighbors(corner).len(), 2);
            assert!(m
                .interior_neighbors(corner)
                .iter()
                .all(|&v| (4..8).contains(&v)));
        }
        assert!(make_talpha(1.0).is_err());
        assert!(make_talpha(0.0).is_err());
    }

    #[test]
    fn talpha_is_rotation_symmetric() {
        let m = make_talpha(0.3).unwrap();
        let rot = |p: Point| [-p[1], p[0]];
        let key = |p: Point| ((p[0] * 1e9).round() as i64, (p[1] * 1e9).round() as i64);
        let pts: BTreeSet<_> = m.nodes().iter().map(|&p| key(p)).collect();
        let rotated: BTreeSet<_> = m.nodes().iter().map(|&p| key(rot(p))).collect();
        assert_eq!(pts, rotated);
        let edge = |a: Point, b: Point| {
            let (ka, kb) = (key(a), key(b));
            if ka < kb {
                (ka, kb)
            } else {
                (kb, ka)
            }
        };
        let edges: BTreeSet<_> = m
            .edges()
            .iter()
            .map(|e| edge(m.node(e.nodes[0]), m.node(e.nodes[1])))
            .collect();
        let rotated: BTreeSet<_> = m
            .edges()
            .iter()
            .map(|e| edge(rot(m.node(e.nodes[0])), rot(m.node(e.nodes[1]))))
            .collect();
        assert_eq!(edges, rotated);
    }

    #[test]
    fn tensor_meshes() {
        let k = make_tensor_quad_mesh(&[-1.0, 1.0], &[-1.0, 1.0]).unwrap();
        assert_eq!(k.num_elements(), 1);
        assert_eq!(
            k.nodes(),
            &[[-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0], [1.0, 1.0]]
        );
        let c = make_tensor_quad_mesh(&[0.0, 1.0, 2.0], &[0.0, 1.0]).unwrap();
        assert_eq!((c.num_elements(), c.num_interior_edges()), (2, 1));
        let m = make_tensor_quad_mesh(&[0.0, 1.0, 2.0, 3.0], &[0.0, 1.0]).unwrap();
        // every vertical interior grid line is a single edge in a one-row mesh
        assert_eq!(m.num_interior_edges(), 2);
        assert!(m
            .interior_edges()
            .all(|e| m.node(e.nodes[0])[0] == m.node(e.nodes[1])[0]));
        let xs = [-7.0, -5.0, -4.3, -3.0, -2.0, 1.0];
        assert_eq!(
            make_tensor_quad_mesh(&xs, &[-1.0, 1.0])
                .unwrap()
                .num_elements(),
            5
        );
        assert!(make_tensor_quad_mesh(&[0.0, 0.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn equilateral_quality() {
        let m = make_equilateral_mesh(3, 3).unwrap();
        let q = crate::mesh::min_angle_quality(&m).unwrap();
        assert!((q - PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn kite_has_requested_angle() {
        let m = make_kite(PI + 0.2).unwrap();
        let ang = crate::mesh::opposite_angles(&m, 0, 1).unwrap();
        assert!((ang.total - (PI + 0.2)).abs() < 1e-12);
    }

    #[test]
    fn jittered_meshes_validate() {
        for seed in 0..10 {
            let m = make_jittered_mesh(5, 4, 0.3, seed % 2 == 0, seed).unwrap();
            assert_eq!(m.num_nodes(), 30);
            assert_eq!(m.num_elements(), 40);
        }
    }

    #[test]
    fn ring_mesh_validates() {
        let m = make_layered_ring_mesh(8, 3).unwrap();
        assert_eq!(m.num_nodes(), 16 + 24 + 1);
        assert_eq!(m.boundary_nodes().count(), 16);
        // second ring: two neighbours in each adjacent ring
        for i in 0..8 {
            let z = 16 + 8 + i;
            let nb = m.interior_neighbors(z);
            assert_eq!(nb.iter().filter(|&&v| (16..24).contains(&v)).count(), 2);
            assert_eq!(nb.iter().filter(|&&v| (32..40).contains(&v)).count(), 2);
        }
    }
}
