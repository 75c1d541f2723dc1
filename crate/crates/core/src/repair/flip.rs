use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::{
    edge_key, min_angle_quality, signed_area, triangle_min_angle, ElementKind, Mesh2D, NodeSet,
};
use crate::motz::{motz, MotzState, Verdict};

/// Replace `[z1, z2]` by `[z, z̃]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlipCandidate {
    pub z: usize,
    pub z1: usize,
    pub z2: usize,
    pub z_tilde: usize,
    pub removed_edge: [usize; 2],
    pub inserted_edge: [usize; 2],
    /// Smallest angle after the flip.
    pub score: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FlipOptions {
    /// Continue marching from the grown test set instead of restarting
    /// from the boundary after each flip.
    pub paper_faithful: bool,
    /// Score candidates by the smallest angle of the whole mesh.
    pub global_score: bool,
}

#[derive(Clone, Debug)]
pub struct FlipOutcome {
    pub mesh: Mesh2D,
    pub state: MotzState,
    pub flips: Vec<FlipCandidate>,
    /// Why the loop stopped short of certification.
    pub diagnostic: Option<String>,
}

/// Triangles of `[z1, z2]` as `(element with z, element with z̃)`.
fn flip_triangles(
    mesh: &Mesh2D,
    z: usize,
    z1: usize,
    z2: usize,
    z_tilde: usize,
) -> Option<(usize, usize)> {
    let edge = mesh.edge(z1, z2)?;
    if !edge.is_interior() {
        return None;
    }
    let has = |e: usize, v: usize| mesh.element(e).contains(&v);
    let [e0, e1] = [edge.elements[0], edge.elements[1]];
    if has(e0, z) && has(e1, z_tilde) {
        Some((e0, e1))
    } else if has(e1, z) && has(e0, z_tilde) {
        Some((e1, e0))
    } else {
        None
    }
}

/// The diagonals `[z, z̃]` and `[z1, z2]` cross in their interiors.
fn strictly_convex(mesh: &Mesh2D, z: usize, z1: usize, z2: usize, z_tilde: usize) -> bool {
    let (p, p1, p2, q) = (
        mesh.node(z),
        mesh.node(z1),
        mesh.node(z2),
        mesh.node(z_tilde),
    );
    let s1 = signed_area(p, q, p1);
    let s2 = signed_area(p, q, p2);
    let s3 = signed_area(p1, p2, p);
    let s4 = signed_area(p1, p2, q);
    s1 * s2 < 0.0 && s3 * s4 < 0.0
}

fn retile(mesh: &Mesh2D, c: &FlipCandidate) -> Result<Mesh2D> {
    let (ez, et) = flip_triangles(mesh, c.z, c.z1, c.z2, c.z_tilde).ok_or_else(|| {
        Error::StaleCandidate(format!(
            "edge [{}, {}] no longer separates {} and {}",
            c.z1, c.z2, c.z, c.z_tilde
        ))
    })?;
    if !strictly_convex(mesh, c.z, c.z1, c.z2, c.z_tilde) {
        return Err(Error::StaleCandidate(
            "quadrilateral is not strictly convex".into(),
        ));
    }
    let mut elements = mesh.elements().to_vec();
    elements[ez] = vec![c.z, c.z1, c.z_tilde];
    elements[et] = vec![c.z, c.z_tilde, c.z2];
    Mesh2D::new(mesh.nodes().to_vec(), ElementKind::Tri3, elements)
}

/// Applies a flip; the two triangles keep their element ids.
pub fn apply_flip(mesh: &Mesh2D, c: &FlipCandidate) -> Result<Mesh2D> {
    retile(mesh, c)
}

fn local_score(mesh: &Mesh2D, z: usize, z1: usize, z2: usize, z_tilde: usize) -> f64 {
    let (p, p1, p2, q) = (
        mesh.node(z),
        mesh.node(z1),
        mesh.node(z2),
        mesh.node(z_tilde),
    );
    triangle_min_angle(p, p1, q).min(triangle_min_angle(p, q, p2))
}

/// Flips that would give some dof node a pivot: dof nodes `z` with exactly
/// two test neighbours `z1, z2` that share exactly one further test
/// neighbour `z̃` across the edge `[z1, z2]`.
pub fn candidate_flips(mesh: &Mesh2D, state: &MotzState) -> Result<Vec<FlipCandidate>> {
    candidate_flips_scored(mesh, state, false)
}

fn candidate_flips_scored(
    mesh: &Mesh2D,
    state: &MotzState,
    global: bool,
) -> Result<Vec<FlipCandidate>> {
    if state.verdict == Verdict::Certified {
        return Err(Error::Precondition(
            "flips are only sought on a critical state".into(),
        ));
    }
    if state.n_test.universe() != mesh.num_nodes() {
        return Err(Error::InvalidArgument(
            "state does not belong to this mesh".into(),
        ));
    }
    let test = &state.n_test;
    let mut out = Vec::new();
    for z in state.n_dof().iter() {
        let tn: Vec<usize> = mesh
            .interior_neighbors(z)
            .iter()
            .copied()
            .filter(|&j| test.contains(j))
            .collect();
        let [z1, z2] = tn[..] else { continue };
        if !mesh.is_interior_edge(z1, z2) {
            continue;
        }
        let common: Vec<usize> = mesh
            .interior_neighbors(z1)
            .iter()
            .copied()
            .filter(|&j| {
                j != z && test.contains(j) && mesh.interior_neighbors(z2).binary_search(&j).is_ok()
            })
            .collect();
        let [z_tilde] = common[..] else { continue };
        if flip_triangles(mesh, z, z1, z2, z_tilde).is_none()
            || !strictly_convex(mesh, z, z1, z2, z_tilde)
        {
            continue;
        }
        let (a, b) = edge_key(z1, z2);
        let (c, d) = edge_key(z, z_tilde);
        let mut cand = FlipCandidate {
            z,
            z1,
            z2,
            z_tilde,
            removed_edge: [a, b],
            inserted_edge: [c, d],
            score: 0.0,
        };
        cand.score = if global {
            min_angle_quality(&retile(mesh, &cand)?)?
        } else {
            local_score(mesh, z, z1, z2, z_tilde)
        };
        out.push(cand);
    }
    Ok(out)
}

/// Flip-and-remarch loop: applies the best-scoring candidate (ties go to
/// the smallest removed edge id) and reruns the march until it certifies,
/// runs out of candidates, revisits an edge set or exceeds `|ℰ_Ω|` flips.
pub fn motz_flip(mesh: &Mesh2D, state: &MotzState, opts: FlipOptions) -> Result<FlipOutcome> {
    if state.verdict == Verdict::Certified {
        return Err(Error::Precondition("mesh is already certified".into()));
    }
    let budget = mesh.num_interior_edges();
    let mut current = mesh.clone();
    let mut st = state.clone();
    let mut flips = Vec::new();
    let mut visited = BTreeSet::from([edge_set(&current)]);
    loop {
        let cands = candidate_flips_scored(&current, &st, opts.global_score)?;
        let best = cands.iter().max_by(|x, y| {
            let ix = current.edge_id(x.z1, x.z2).expect("candidate edge");
            let iy = current.edge_id(y.z1, y.z2).expect("candidate edge");
            x.score.total_cmp(&y.score).then(iy.cmp(&ix))
        });
        let Some(best) = best.copied() else {
            let msg = format!(
                "no flip candidates; {} dof nodes remain",
                st.n_dof().count()
            );
            return Ok(FlipOutcome {
                mesh: current,
                state: st,
                flips,
                diagnostic: Some(msg),
            });
        };
        current = apply_flip(&current, &best)?;
        flips.push(best);
        let init: NodeSet = if opts.paper_faithful {
            st.n_test.clone()
        } else {
            current.boundary_nodes()
        };
        st = motz(&current, &init)?;
        if st.verdict == Verdict::Certified {
            return Ok(FlipOutcome {
                mesh: current,
                state: st,
                flips,
                diagnostic: None,
            });
        }
        if !visited.insert(edge_set(&current)) {
            let msg = "flip sequence revisited an earlier mesh".to_string();
            return Ok(FlipOutcome {
                mesh: current,
                state: st,
                flips,
                diagnostic: Some(msg),
            });
        }
        if flips.len() >= budget {
            let msg = format!("flip budget of {budget} exhausted");
            return Ok(FlipOutcome {
                mesh: current,
                state: st,
                flips,
                diagnostic: Some(msg),
            });
        }
    }
}

fn edge_set(mesh: &Mesh2D) -> Vec<[usize; 2]> {
    mesh.edges().iter().map(|e| e.nodes).collect()
}
