//! JSON mesh files.
//!
//! ```json
//! { "dim": 2, "nodes": [[x, y], ...],
//!   "elements": { "kind": "tri3", "connectivity": [[i, j, k], ...] } }
//! ```
//! One-dimensional meshes use `"dim": 1`, nodes `[[x], ...]` and kind
//! `"interval2"`. The boundary is not stored; it is recovered from edge
//! adjacency.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ElementKind, Mesh2D};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct MeshFile {
    dim: usize,
    nodes: Vec<Vec<f64>>,
    elements: ElementBlock,
}

#[derive(Serialize, Deserialize)]
struct ElementBlock {
    kind: ElementKind,
    connectivity: Vec<Vec<usize>>,
}

/// Breakpoints of a one-dimensional mesh, strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh1D {
    breakpoints: Vec<f64>,
}

impl Mesh1D {
    pub fn new(breakpoints: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidMesh(
                "a 1D mesh needs at least one element".into(),
            ));
        }
        if breakpoints.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMesh("non-finite breakpoint".into()));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidMesh(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Mesh1D { breakpoints })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn num_elements(&self) -> usize {
        self.breakpoints.len() - 1
    }
}

fn parse(text: &str) -> Result<MeshFile> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn mesh_from_json(text: &str) -> Result<Mesh2D> {
    let file = parse(text)?;
    if file.dim != 2 {
        return Err(Error::InvalidMesh(format!(
            "expected a 2D mesh, found dim {}",
            file.dim
        )));
    }
    let mut nodes = Vec::with_capacity(file.nodes.len());
    for (i, p) in file.nodes.iter().enumerate() {
        match p.as_slice() {
            [x, y] => nodes.push([*x, *y]),
            _ => return Err(Error::Parse(format!("node {i} must have two coordinates"))),
        }
    }
    Mesh2D::new(nodes, file.elements.kind, file.elements.connectivity)
}

pub fn mesh_to_json(mesh: &Mesh2D) -> String {
    let file = MeshFile {
        dim: 2,
        nodes: mesh.nodes().iter().map(|p| p.to_vec()).collect(),
        elements: ElementBlock {
            kind: mesh.kind(),
            connectivity: mesh.elements().to_vec(),
        },
    };
    serde_json::to_string(&file).expect("mesh serializes")
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<Mesh2D> {
    mesh_from_json(&fs::read_to_string(path)?)
}

pub fn save_mesh(mesh: &Mesh2D, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, mesh_to_json(mesh) + "\n")?;
    Ok(())
}

pub fn load_mesh_1d(path: impl AsRef<Path>) -> Result<Mesh1D> {
    mesh_1d_from_json(&fs::read_to_string(path)?)
}

pub fn mesh_1d_from_json(text: &str) -> Result<Mesh1D> {
    let file = parse(text)?;
    if file.dim != 1 || file.elements.kind != ElementKind::Interval2 {
        return Err(Error::InvalidMesh("expected a 1D interval2 mesh".into()));
    }
    let mut xs = Vec::with_capacity(file.nodes.len());
    for (i, p) in file.nodes.iter().enumerate() {
        match p.as_slice() {
            [x] => xs.push(*x),
            _ => return Err(Error::Parse(format!("node {i} must have one coordinate"))),
        }
    }
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut rank = vec![0; xs.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let mut covered = vec![false; xs.len().saturating_sub(1)];
    for (e, conn) in file.elements.connectivity.iter().enumerate() {
        let [a, b] = conn.as_slice() else {
            return Err(Error::InvalidMesh(format!("interval {e} needs two nodes")));
        };
        if *a >= xs.len() || *b >= xs.len() {
            return Err(Error::InvalidMesh(format!(
                "interval {e} references a missing node"
            )));
        }
        let (ra, rb) = (rank[*a].min(rank[*b]), rank[*a].max(rank[*b]));
        if rb != ra + 1 || covered[ra] {
            return Err(Error::NonConforming(format!(
                "interval {e} does not join consecutive nodes"
            )));
        }
        covered[ra] = true;
    }
    if covered.iter().any(|c| !c) {
        return Err(Error::NonConforming(
            "intervals do not cover the line".into(),
        ));
    }
    Mesh1D::new(order.iter().map(|&i| xs[i]).collect())
}

pub fn mesh_1d_to_json(mesh: &Mesh1D) -> String {
    let n = mesh.breakpoints.len();
    let file = MeshFile {
        dim: 1,
        nodes: mesh.breakpoints.iter().map(|&x| vec![x]).collect(),
        elements: ElementBlock {
            kind: ElementKind::Interval2,
            connectivity: (0..n - 1).map(|i| vec![i, i + 1]).collect(),
        },
    };
    serde_json::to_string(&file).expect("mesh serializes")
}

pub fn save_mesh_1d(mesh: &Mesh1D, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, mesh_1d_to_json(mesh) + "\n")?;
    Ok(())
}
