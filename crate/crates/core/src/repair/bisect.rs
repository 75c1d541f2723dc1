use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mesh::{edge_key, min_angle_quality, weakly_acute, ElementKind, Mesh2D};

/// Splits both triangles adjacent to the interior edge `[a, b]` at its
/// midpoint. The midpoint is appended as the last node; each parent keeps
/// its element id for one child and the other child is appended.
pub fn bisect_edge(mesh: &Mesh2D, a: usize, b: usize) -> Result<Mesh2D> {
    if mesh.kind() != ElementKind::Tri3 {
        return Err(Error::InvalidArgument(
            "bisection needs a triangular mesh".into(),
        ));
    }
    let edge = mesh.edge(a, b).ok_or(Error::NoSuchEdge(a, b))?;
    if !edge.is_interior() {
        return Err(Error::NotInterior(edge.nodes[0], edge.nodes[1]));
    }
    let (pa, pb) = (mesh.node(a), mesh.node(b));
    let m = mesh.num_nodes();
    let mut nodes = mesh.nodes().to_vec();
    nodes.push([(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0]);
    let mut elements = mesh.elements().to_vec();
    for &e in &edge.elements {
        let conn = mesh.element(e);
        // rotate so the split edge comes first in counter-clockwise order
        let start = (0..3).find(|&i| {
            let (u, v) = (conn[i], conn[(i + 1) % 3]);
            edge_key(u, v) == edge_key(a, b)
        });
        let i = start.expect("adjacent triangle contains the edge");
        let (u, v, w) = (conn[i], conn[(i + 1) % 3], conn[(i + 2) % 3]);
        elements[e] = vec![u, m, w];
        elements.push(vec![m, v, w]);
    }
    Mesh2D::new(nodes, ElementKind::Tri3, elements)
}

/// Per-edge bisection budget `⌈π / θ_min⌉ + 4`.
pub fn bisection_cap(mesh: &Mesh2D) -> Result<usize> {
    Ok((PI / min_angle_quality(mesh)?).ceil() as usize + 4)
}

#[derive(Clone, Debug)]
pub struct BisectionOutcome {
    pub mesh: Mesh2D,
    /// Descendants of the input transmission edges, all weakly acute.
    pub trans_edges: BTreeSet<(usize, usize)>,
    pub bisections: usize,
}

/// Bisects every transmission edge, and recursively its halves, until all
/// of them satisfy the weakly acute angle condition.
pub fn correct_angle_condition(
    mesh: &Mesh2D,
    trans_edges: &BTreeSet<(usize, usize)>,
) -> Result<BisectionOutcome> {
    let mut seen_triangles = BTreeMap::new();
    for &(a, b) in trans_edges {
        let edge = mesh.edge(a, b).ok_or(Error::NoSuchEdge(a, b))?;
        if !edge.is_interior() {
            return Err(Error::NotInterior(a, b));
        }
        for &e in &edge.elements {
            if let Some((c, d)) = seen_triangles.insert(e, (a, b)) {
                return Err(Error::Precondition(format!(
                    "transmission edges [{c}, {d}] and [{a}, {b}] share triangle {e}"
                )));
            }
        }
    }
    let cap = bisection_cap(mesh)?;
    let mut current = mesh.clone();
    let mut done = BTreeSet::new();
    let mut bisections = 0;
    // (edge, originating trans edge, depth)
    let mut work: Vec<((usize, usize), (usize, usize), usize)> =
        trans_edges.iter().rev().map(|&e| (e, e, 0)).collect();
    let mut used: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    while let Some(((a, b), root, depth)) = work.pop() {
        if weakly_acute(&current, a, b)? {
            done.insert((a, b));
            continue;
        }
        let count = used.entry(root).or_insert(0);
        *count += 1;
        if *count > cap {
            return Err(Error::BisectionCap {
                a: root.0,
                b: root.1,
                cap,
            });
        }
        let mid = current.num_nodes();
        current = bisect_edge(&current, a, b)?;
        bisections += 1;
        work.push((edge_key(mid, b), root, depth + 1));
        work.push((edge_key(a, mid), root, depth + 1));
    }
    Ok(BisectionOutcome {
        mesh: current,
        trans_edges: done,
        bisections,
    })
}
