//! Deterministic SVG frames of a marching trace.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mesh::{edge_key, Mesh2D, NodeSet};
use crate::motz::MotzStep;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 20.0;
const TEST_FILL: &str = "#f28e2b";
const DOF_FILL: &str = "#d62728";

/// Checks that every step is a legal move on `mesh` starting from `init`.
pub fn validate_trace(mesh: &Mesh2D, init: &NodeSet, trace: &[MotzStep]) -> Result<()> {
    if init.universe() != mesh.num_nodes() {
        return Err(Error::MismatchedTrace(
            "initial set does not match the mesh".into(),
        ));
    }
    let mut test = init.clone();
    for (i, s) in trace.iter().enumerate() {
        let bad = |why: &str| Err(Error::MismatchedTrace(format!("step {}: {why}", i + 1)));
        if s.step != i + 1 {
            return bad("steps are not numbered consecutively");
        }
        if s.z >= mesh.num_nodes() || s.z_prime >= mesh.num_nodes() {
            return bad("node id out of range");
        }
        let (a, b) = edge_key(s.z, s.z_prime);
        if s.edge != [a, b] || !mesh.is_interior_edge(a, b) {
            return bad("edge is not the interior edge [z, z']");
        }
        if test.contains(s.z) || !test.contains(s.z_prime) {
            return bad("z must be a dof node and z' a test node");
        }
        test.insert(s.z);
    }
    Ok(())
}

/// Step indices drawn for `every = N`: 0, N, 2N, … and the last step.
pub fn frame_steps(trace_len: usize, every: usize) -> Vec<usize> {
    let every = every.max(1);
    let mut steps: Vec<usize> = (0..=trace_len).step_by(every).collect();
    if steps.last() != Some(&trace_len) {
        steps.push(trace_len);
    }
    steps
}

/// `frame_NNNN.svg` contents for every sampled step.
pub fn render_frames(
    mesh: &Mesh2D,
    init: &NodeSet,
    trace: &[MotzStep],
    every: usize,
) -> Result<Vec<(String, String)>> {
    validate_trace(mesh, init, trace)?;
    Ok(frame_steps(trace.len(), every)
        .into_iter()
        .map(|s| {
            (
                format!("frame_{s:04}.svg"),
                render_step(mesh, init, &trace[..s]),
            )
        })
        .collect())
}

/// The state after applying `steps` to `init`.
pub fn render_step(mesh: &Mesh2D, init: &NodeSet, steps: &[MotzStep]) -> String {
    let mut test = init.clone();
    let mut trans = BTreeSet::new();
    for s in steps {
        test.insert(s.z);
        trans.insert((s.edge[0], s.edge[1]));
    }
    let ([x0, y0], [x1, y1]) = mesh.bounding_box();
    let scale = (SIZE - 2.0 * MARGIN) / (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let map = |i: usize| {
        let p = mesh.node(i);
        (
            MARGIN + (p[0] - x0) * scale,
            SIZE - MARGIN - (p[1] - y0) * scale,
        )
    };
    let mut out = String::new();
    let w = |out: &mut String, s: String| out.push_str(&s);
    w(&mut out, format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE:.0}\" height=\"{SIZE:.0}\" viewBox=\"0 0 {SIZE:.0} {SIZE:.0}\">\n"
    ));
    w(&mut out, format!("<!-- step {} -->\n", steps.len()));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for edge in mesh.edges() {
        let [a, b] = edge.nodes;
        let ((ax, ay), (bx, by)) = (map(a), map(b));
        let style = if trans.contains(&(a, b)) {
            "stroke=\"black\" stroke-width=\"2\" stroke-dasharray=\"6 4\""
        } else {
            "stroke=\"#888888\" stroke-width=\"1\""
        };
        writeln!(
            out,
            "<line x1=\"{ax:.4}\" y1=\"{ay:.4}\" x2=\"{bx:.4}\" y2=\"{by:.4}\" {style}/>"
        )
        .expect("writing to a string");
    }
    for i in 0..mesh.num_nodes() {
        let (x, y) = map(i);
        let fill = if test.contains(i) {
            TEST_FILL
        } else {
            DOF_FILL
        };
        writeln!(out, "<circle cx=\"{x:.4}\" cy=\"{y:.4}\" r=\"4\" fill=\"{fill}\"><title>{i}</title></circle>")
            .expect("writing to a string");
    }
    out.push_str("</svg>\n");
    out
}
