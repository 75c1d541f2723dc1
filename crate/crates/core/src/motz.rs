//! Marching of the zeros: propagates the zero boundary trace of a
//! homogeneous discrete solution through the mesh, one node per step.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{edge_key, transmission_degree, weakly_acute, Mesh2D, NodeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Critical,
}

/// One marching step: `z` joins the test set through pivot `z_prime`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotzStep {
    pub step: usize,
    pub z: usize,
    pub z_prime: usize,
    pub edge: [usize; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct MotzState {
    pub initial: NodeSet,
    pub n_test: NodeSet,
    /// Sorted endpoint pairs of the marked transmission edges.
    pub trans_edges: BTreeSet<(usize, usize)>,
    pub trace: Vec<MotzStep>,
    /// Edges refused in strict mode because they violate the angle condition.
    pub rejected: BTreeSet<(usize, usize)>,
    pub verdict: Verdict,
}

impl MotzState {
    pub fn n_dof(&self) -> NodeSet {
        self.n_test.complement()
    }

    /// Nodes left in `𝒩_dof`, ascending.
    pub fn residual(&self) -> Vec<usize> {
        self.n_dof().to_vec()
    }

    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    /// The trace as JSON lines, one step per line.
    pub fn trace_jsonl(&self) -> String {
        let mut out = String::new();
        for step in &self.trace {
            let line = serde_json::to_string(step).expect("step serializes");
            writeln!(out, "{line}").expect("writing to a string");
        }
        out
    }
}

/// Parses a JSON-lines trace.
pub fn parse_trace(text: &str) -> Result<Vec<MotzStep>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse(format!("trace line {}: {e}", i + 1)))
        })
        .collect()
}

/// Local discrete unique continuation test for the pair `(z, z′)`:
/// `[z, z′]` is interior and `deg(z′, n_test) = 1`. The angle condition is
/// not checked here.
pub fn check_lducp_pair(mesh: &Mesh2D, z: usize, z_prime: usize, n_test: &NodeSet) -> Result<bool> {
    check_universe(mesh, n_test)?;
    if z >= mesh.num_nodes() || z_prime >= mesh.num_nodes() {
        return Err(Error::InvalidArgument("node id out of range".into()));
    }
    if n_test.contains(z) || !n_test.contains(z_prime) {
        return Err(Error::InvalidArgument(format!(
            "pair ({z}, {z_prime}) must have z outside and z' inside the test set"
        )));
    }
    Ok(mesh.is_interior_edge(z, z_prime) && transmission_degree(mesh, z_prime, n_test)? == 1)
}

fn check_universe(mesh: &Mesh2D, set: &NodeSet) -> Result<()> {
    if set.universe() != mesh.num_nodes() {
        return Err(Error::InvalidArgument(format!(
            "node set over {} ids does not match a mesh with {} nodes",
            set.universe(),
            mesh.num_nodes()
        )));
    }
    Ok(())
}

/// MOTZ from the boundary nodes `𝒩 ∩ Γ`.
pub fn motz_from_boundary(mesh: &Mesh2D) -> Result<MotzState> {
    motz(mesh, &mesh.boundary_nodes())
}

pub fn motz(mesh: &Mesh2D, init: &NodeSet) -> Result<MotzState> {
    motz_with_options(mesh, init, false)
}

/// Worklist implementation. Each test node keeps a count of its dof
/// neighbours; nodes with count one are eligible pivots and the smallest
/// one is taken first. With `strict`, a pivot whose transmission edge
/// violates the angle condition is skipped.
pub fn motz_with_options(mesh: &Mesh2D, init: &NodeSet, strict: bool) -> Result<MotzState> {
    check_universe(mesh, init)?;
    let n = mesh.num_nodes();
    let mut n_test = init.clone();
    let mut count: Vec<usize> = (0..n)
        .map(|i| {
            mesh.interior_neighbors(i)
                .iter()
                .filter(|&&j| !n_test.contains(j))
                .count()
        })
        .collect();
    let mut eligible: BTreeSet<usize> = n_test.iter().filter(|&i| count[i] == 1).collect();
    let mut trace = Vec::new();
    let mut trans_edges = BTreeSet::new();
    let mut rejected = BTreeSet::new();
    while let Some(z_prime) = eligible.pop_first() {
        debug_assert_eq!(count[z_prime], 1);
        let z = *mesh
            .interior_neighbors(z_prime)
            .iter()
            .find(|&&j| !n_test.contains(j))
            .expect("pivot has one dof neighbour");
        if strict && !weakly_acute(mesh, z, z_prime)? {
            rejected.insert(edge_key(z, z_prime));
            continue;
        }
        let (a, b) = edge_key(z, z_prime);
        trace.push(MotzStep {
            step: trace.len() + 1,
            z,
            z_prime,
            edge: [a, b],
        });
        trans_edges.insert((a, b));
        n_test.insert(z);
        for &y in mesh.interior_neighbors(z) {
            count[y] -= 1;
            if n_test.contains(y) && y != z_prime {
                match count[y] {
                    1 if !rejected_pivot(mesh, y, &n_test, &rejected) => {
                        eligible.insert(y);
                    }
                    0 => {
                        eligible.remove(&y);
                    }
                    _ => {}
                }
            }
        }
        if count[z] == 1 {
            eligible.insert(z);
        }
    }
    let verdict = if n_test.count() == n {
        Verdict::Certified
    } else {
        Verdict::Critical
    };
    Ok(MotzState {
        initial: init.clone(),
        n_test,
        trans_edges,
        trace,
        rejected,
        verdict,
    })
}

/// A pivot whose only dof neighbour sits across an already refused edge.
fn rejected_pivot(
    mesh: &Mesh2D,
    y: usize,
    n_test: &NodeSet,
    rejected: &BTreeSet<(usize, usize)>,
) -> bool {
    !rejected.is_empty()
        && mesh
            .interior_neighbors(y)
            .iter()
            .any(|&j| !n_test.contains(j) && rejected.contains(&edge_key(j, y)))
}

/// Rescanning reference: each step scans all test nodes in ascending order.
pub fn motz_reference(mesh: &Mesh2D, init: &NodeSet, strict: bool) -> Result<MotzState> {
    check_universe(mesh, init)?;
    let n = mesh.num_nodes();
    let mut n_test = init.clone();
    let mut trace = Vec::new();
    let mut trans_edges = BTreeSet::new();
    let mut rejected = BTreeSet::new();
    loop {
        let mut moved = false;
        for z_prime in n_test.to_vec() {
            let dof: Vec<usize> = mesh
                .interior_neighbors(z_prime)
                .iter()
                .copied()
                .filter(|&j| !n_test.contains(j))
                .collect();
            if dof.len() != 1 {
                continue;
            }
            let z = dof[0];
            let key = edge_key(z, z_prime);
            if rejected.contains(&key) {
                continue;
            }
            if strict && !weakly_acute(mesh, z, z_prime)? {
                rejected.insert(key);
                continue;
            }
            trace.push(MotzStep {
                step: trace.len() + 1,
                z,
                z_prime,
                edge: [key.0, key.1],
            });
            trans_edges.insert(key);
            n_test.insert(z);
            moved = true;
            break;
        }
        if !moved {
            break;
        }
    }
    let verdict = if n_test.count() == n {
        Verdict::Certified
    } else {
        Verdict::Critical
    };
    Ok(MotzState {
        initial: init.clone(),
        n_test,
        trans_edges,
        trace,
        rejected,
        verdict,
    })
}

/// Runs MOTZ from the boundary on `mesh` and on its relabeling by `perm`
/// and compares verdicts and residual point sets.
pub fn motz_invariant_under_relabel(mesh: &Mesh2D, perm: &[usize]) -> Result<bool> {
    let relabeled = mesh.relabel(perm)?;
    let before = motz_from_boundary(mesh)?;
    let after = motz_from_boundary(&relabeled)?;
    let points = |m: &Mesh2D, s: &MotzState| {
        let mut pts: Vec<(u64, u64)> = s
            .residual()
            .into_iter()
            .map(|i| (m.node(i)[0].to_bits(), m.node(i)[1].to_bits()))
            .collect();
        pts.sort_unstable();
        pts
    };
    Ok(before.verdict == after.verdict && points(mesh, &before) == points(&relabeled, &after))
}
