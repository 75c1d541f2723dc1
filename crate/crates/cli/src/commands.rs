use std::fs;
use std::path::Path;

use ducp::analysis::{
    critical_k_talpha, det_polynomial_reduced_quad, linear_grid, log_grid, positive_real_root,
    sigma_min_sweep, verify_p4_singularity, Report,
};
use ducp::fem::{assemble_1d_hp, assemble_p1, assemble_quad_tensor, SystemMatrices};
use ducp::mesh::{
    load_mesh, load_mesh_1d, make_equilateral_mesh, make_jittered_mesh, make_kite,
    make_layered_ring_mesh, make_structured_tri_mesh, make_talpha, make_tensor_quad_mesh,
    mesh_1d_to_json, mesh_to_json, save_mesh, save_mesh_1d, ElementKind, Mesh1D, Mesh2D,
    TriPattern,
};
use ducp::motz::{motz_from_boundary, motz_with_options, parse_trace, MotzState};
use ducp::render::render_frames;
use ducp::repair::{correct_angle_condition, motz_flip, FlipOptions};
use ducp::{Error, Result};
use serde_json::{json, Value};

use crate::{
    CheckArgs, Command, FlipArgs, GenArgs, MeshKind, RenderArgs, RepairArgs, SingularArgs,
    SweepArgs,
};

pub struct Outcome {
    pub json: String,
    pub code: u8,
}

impl Outcome {
    fn new(value: Value, code: u8) -> Self {
        Self {
            json: serde_json::to_string_pretty(&value).expect("json value serializes"),
            code,
        }
    }

    fn report(r: Report, ok: bool) -> Self {
        Self {
            json: r.to_json(),
            code: if ok { 0 } else { 2 },
        }
    }
}

pub fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Gen(a) => gen(a),
        Command::Check(a) => check(a),
        Command::Repair(a) => repair(a),
        Command::Flip(a) => flip(a),
        Command::Sweep(a) => sweep(a),
        Command::SingularDemo(a) => singular_demo(a),
        Command::QuadLemma(a) => quad_lemma(a.p),
        Command::Render(a) => render(a),
    }
}

fn verdict_code(state: &MotzState) -> u8 {
    if state.is_certified() {
        0
    } else {
        2
    }
}

fn state_json(state: &MotzState) -> Value {
    json!({
        "verdict": state.verdict,
        "steps": state.trace.len(),
        "residual_dof": state.residual(),
        "trans_edges": state.trans_edges.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
    })
}

fn gen(a: GenArgs) -> Result<Outcome> {
    if let MeshKind::Interval = a.kind {
        let xs = linear_grid(0.0, 1.0, a.nx + 1);
        let mesh = Mesh1D::new(xs)?;
        return match a.out {
            Some(path) => {
                save_mesh_1d(&mesh, &path)?;
                Ok(Outcome::new(
                    json!({"written": path, "dim": 1, "elements": mesh.num_elements()}),
                    0,
                ))
            }
            None => Ok(Outcome {
                json: mesh_1d_to_json(&mesh),
                code: 0,
            }),
        };
    }
    let mesh = match a.kind {
        MeshKind::Diagonal => make_structured_tri_mesh(a.nx, a.ny, TriPattern::Diagonal)?,
        MeshKind::Crisscross => make_structured_tri_mesh(a.nx, a.ny, TriPattern::Crisscross)?,
        MeshKind::Talpha => make_talpha(a.alpha)?,
        MeshKind::Ring => make_layered_ring_mesh(a.n, a.rings)?,
        MeshKind::Jittered => make_jittered_mesh(a.nx, a.ny, a.jitter, false, a.seed)?,
        MeshKind::Equilateral => make_equilateral_mesh(a.nx, a.ny)?,
        MeshKind::Tensor => make_tensor_quad_mesh(
            &linear_grid(0.0, a.nx as f64, a.nx + 1),
            &linear_grid(0.0, a.ny as f64, a.ny + 1),
        )?,
        MeshKind::Kite => make_kite(a.angle)?,
        MeshKind::Interval => unreachable!("handled above"),
    };
    match a.out {
        Some(path) => {
            save_mesh(&mesh, &path)?;
            Ok(Outcome::new(
                json!({"written": path, "dim": 2, "nodes": mesh.num_nodes(), "elements": mesh.num_elements()}),
                0,
            ))
        }
        None => Ok(Outcome {
            json: mesh_to_json(&mesh),
            code: 0,
        }),
    }
}

fn dump(sys: &SystemMatrices, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    for (name, m) in [("A", &sys.a), ("M", &sys.m), ("B", &sys.b)] {
        let mut f = fs::File::create(dir.join(format!("{name}.mtx")))?;
        m.write_matrix_market(&mut f)?;
    }
    Ok(())
}

fn check(a: CheckArgs) -> Result<Outcome> {
    let mesh = load_mesh(&a.mesh)?;
    let state = motz_with_options(&mesh, &mesh.boundary_nodes(), a.strict_angles)?;
    if let Some(path) = &a.trace {
        fs::write(path, state.trace_jsonl())?;
    }
    if let Some(dir) = &a.dump_matrices {
        dump(&assemble_p1(&mesh)?, dir)?;
    }
    let mut v = state_json(&state);
    if a.strict_angles {
        v["rejected_edges"] = json!(state
            .rejected
            .iter()
            .map(|&(x, y)| [x, y])
            .collect::<Vec<_>>());
    }
    Ok(Outcome::new(v, verdict_code(&state)))
}

fn repair(a: RepairArgs) -> Result<Outcome> {
    let mesh = load_mesh(&a.mesh)?;
    let before = motz_from_boundary(&mesh)?;
    let fixed = correct_angle_condition(&mesh, &before.trans_edges)?;
    let after = motz_from_boundary(&fixed.mesh)?;
    if let Some(path) = &a.out {
        save_mesh(&fixed.mesh, path)?;
    }
    let v = json!({
        "verdict_before": before.verdict,
        "bisections": fixed.bisections,
        "nodes": fixed.mesh.num_nodes(),
        "after": state_json(&after),
    });
    Ok(Outcome::new(v, verdict_code(&after)))
}

fn flip(a: FlipArgs) -> Result<Outcome> {
    let mesh = load_mesh(&a.mesh)?;
    let state = motz_from_boundary(&mesh)?;
    if state.is_certified() {
        if let Some(path) = &a.out {
            save_mesh(&mesh, path)?;
        }
        return Ok(Outcome::new(
            json!({"flips": [], "after": state_json(&state)}),
            0,
        ));
    }
    let opts = FlipOptions {
        paper_faithful: a.paper_faithful,
        global_score: a.global_score,
    };
    let out = motz_flip(&mesh, &state, opts)?;
    if let Some(d) = &out.diagnostic {
        eprintln!("{d}");
    }
    if let Some(path) = &a.out {
        save_mesh(&out.mesh, path)?;
    }
    let v =
        json!({"flips": out.flips, "diagnostic": out.diagnostic, "after": state_json(&out.state)});
    Ok(Outcome::new(v, verdict_code(&out.state)))
}

enum Loaded {
    Line(Mesh1D),
    Plane(Mesh2D),
}

fn load_any(path: &Path) -> Result<Loaded> {
    let text = fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    if v.get("dim").and_then(Value::as_u64) == Some(1) {
        Ok(Loaded::Line(load_mesh_1d(path)?))
    } else {
        Ok(Loaded::Plane(load_mesh(path)?))
    }
}

fn sweep(a: SweepArgs) -> Result<Outcome> {
    if a.k_min <= 0.0 || a.k_max < a.k_min || a.k_samples == 0 {
        return Err(Error::InvalidArgument(
            "need 0 < k-min <= k-max and k-samples >= 1".into(),
        ));
    }
    let sys = match load_any(&a.mesh)? {
        Loaded::Line(m) => assemble_1d_hp(&m, a.p)?,
        Loaded::Plane(m) if m.kind() == ElementKind::Quad4 => assemble_quad_tensor(&m, a.p)?,
        Loaded::Plane(m) => {
            if a.p != 1 {
                return Err(Error::InvalidArgument(
                    "triangular meshes support p = 1 only".into(),
                ));
            }
            assemble_p1(&m)?
        }
    };
    let ks = log_grid(a.k_min, a.k_max, a.k_samples);
    let rep = sigma_min_sweep(&sys, &ks)?;
    if let Some(path) = &a.out {
        fs::write(path, rep.to_csv())?;
    }
    let i = rep.argmin().expect("nonempty sweep");
    let v = json!({
        "dofs": sys.dim(),
        "samples": ks.len(),
        "min_ratio": rep.ratios()[i],
        "k_at_min": ks[i],
    });
    Ok(Outcome::new(v, 0))
}

fn singular_demo(a: SingularArgs) -> Result<Outcome> {
    let mesh = make_talpha(a.alpha)?;
    let state = motz_from_boundary(&mesh)?;
    let crit = critical_k_talpha(a.alpha)?;
    let sys = assemble_p1(&mesh)?;
    let ks = linear_grid(0.5 * crit.k_crit, 1.5 * crit.k_crit, a.k_samples.max(1));
    let rep = sigma_min_sweep(&sys, &ks)?;
    let ok = crit.residual < 1e-12 && crit.sigma_ratio < 1e-10;
    let r = Report::new(
        "T_alpha admits a nontrivial homogeneous solution at a critical wave number",
        json!({"alpha": a.alpha}),
        json!({
            "motz": state_json(&state),
            "k_crit": crit.k_crit,
            "ratio_consistency": crit.consistency,
            "null_vector": crit.null_vector,
            "null_residual": crit.residual,
            "sigma_ratio_at_k_crit": crit.sigma_ratio,
            "sweep": {"k": rep.k_values, "ratio": rep.ratios()},
        }),
        if ok { "verified" } else { "not verified" },
    );
    Ok(Outcome::report(r, ok))
}

fn quad_lemma(p: usize) -> Result<Outcome> {
    let det = det_polynomial_reduced_quad(p)?;
    let roots = det.count_positive_roots();
    let mut values = json!({
        "determinant": det.to_string(),
        "degree": det.degree(),
        "positive_roots": roots,
    });
    let ok = if p == 4 {
        let rep = verify_p4_singularity()?;
        values["p4"] = serde_json::to_value(&rep).expect("report serializes");
        rep.ratio_at_root < 1e-8 && rep.factor_squared_divides
    } else {
        values["smallest_positive_root"] = json!(positive_real_root(&det, 1e6).ok().flatten());
        roots == 0
    };
    let claim = if p == 4 {
        "the reduced local system is singular at some positive k^2"
    } else {
        "the reduced local system has only the trivial solution for every k"
    };
    Ok(Outcome::report(
        Report::new(
            claim,
            json!({"p": p}),
            values,
            if ok { "verified" } else { "refuted" },
        ),
        ok,
    ))
}

fn render(a: RenderArgs) -> Result<Outcome> {
    let mesh = load_mesh(&a.mesh)?;
    let trace = parse_trace(&fs::read_to_string(&a.trace)?)?;
    let frames = render_frames(&mesh, &mesh.boundary_nodes(), &trace, a.every)?;
    fs::create_dir_all(&a.out)?;
    let mut names = Vec::with_capacity(frames.len());
    for (name, svg) in frames {
        fs::write(a.out.join(&name), svg)?;
        names.push(name);
    }
    Ok(Outcome::new(json!({"frames": names}), 0))
}
