//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};

use ducp::analysis::{
    alpha_star_estimate, critical_k_talpha, det_polynomial_reduced_quad, linear_grid, p4_factor,
    sigma_extremes, sigma_min_sweep, verify_angle_lemma, verify_corridor_theorems,
    verify_p4_singularity,
};
use ducp::fem::{assemble_1d_hp, assemble_p1, reduced_quad_local_matrices, system_matrix};
use ducp::mesh::{
    make_jittered_mesh, make_kite, make_layered_ring_mesh, make_structured_tri_mesh, make_talpha,
    save_mesh, signed_area, weakly_acute, ElementKind, Mesh1D, Mesh2D, TriPattern,
};
use ducp::motz::{motz, motz_from_boundary, motz_invariant_under_relabel, Verdict};
use ducp::par::Execution;
use ducp::rational::{int, rat, RationalPoly};
use ducp::repair::{correct_angle_condition, motz_flip, FlipOptions};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned tolerances.
const P4_ROOT_RATIO_MAX: f64 = 1e-8;
const P4_OFF_ROOT_RATIO_MIN: f64 = 1e-4;
const P4_OFF_ROOT_FACTOR: f64 = 1.2;
const ONE_D_RATIO_MIN: f64 = 1e-12;
const ONE_D_CASES: usize = 200;
const TALPHA_ALPHA: f64 = 0.4;
const TALPHA_CONSISTENCY_MAX: f64 = 1e-12;
const TALPHA_RESIDUAL_MAX: f64 = 1e-12;
const TALPHA_SIGMA_MAX: f64 = 1e-10;
const TALPHA_OFF_FACTOR: f64 = 1.5;
const TALPHA_OFF_SIGMA_MIN: f64 = 1e-6;
/// Closed form of k_crit² on T_α: 6·(1/(1−α) + α/(2−α) + 1 + 4(1−α)/(α(2−α))).
const TALPHA_CLOSED_FORM_TOL: f64 = 1e-10;
const ALPHA_STAR_TOL: f64 = 1e-6;
const CERTIFIED_MESHES: usize = 30;
const CERTIFIED_K_SAMPLES: usize = 20;
const CERTIFIED_RATIO_MIN: f64 = 1e-11;
const RELABELINGS: usize = 20;
const CORRIDOR_RATIO_MIN: f64 = 1e-11;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn poly(coeffs: &[i64]) -> RationalPoly {
    RationalPoly::from_ints(coeffs)
}

fn reduced_golden() -> Outcome {
    let (s, m) = reduced_quad_local_matrices(2).expect("p = 2 is in range");
    let z = int(0);
    let s_expect = [
        [rat(-16, 3), rat(8, 3), rat(8, 3), z.clone()],
        [rat(-8, 3), rat(-64, 45), z.clone(), rat(8, 15)],
        [rat(-8, 3), z.clone(), rat(-64, 45), rat(8, 15)],
        [z.clone(), rat(-8, 15), rat(-8, 15), rat(-16, 45)],
    ];
    let m_diag = [rat(16, 9), rat(16, 45), rat(16, 45), rat(16, 225)];
    let mut bad = Vec::new();
    for r in 0..4 {
        for c in 0..4 {
            if *s.get(r, c) != s_expect[r][c] {
                bad.push(format!("S[{r}][{c}] = {}", s.get(r, c)));
            }
            let want = if r == c { m_diag[r].clone() } else { z.clone() };
            if *m.get(r, c) != want {
                bad.push(format!("Mr[{r}][{c}] = {}", m.get(r, c)));
            }
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "S and Mr match exactly".into()
        } else {
            bad.join(", ")
        },
    )
}

fn determinant_polynomials() -> Outcome {
    let mut notes = Vec::new();
    let d1 = det_polynomial_reduced_quad(1).unwrap();
    let ok1 = d1 == RationalPoly::new(vec![rat(-16, 3), rat(-16, 9)]);
    notes.push(format!("p=1 {}", if ok1 { "exact" } else { "differs" }));

    let d2 = det_polynomial_reduced_quad(2).unwrap();
    let lin = poly(&[4, 1]);
    let e2 = lin
        .mul(&lin)
        .mul(&poly(&[60, 8, 1]))
        .scale(&rat(65536, 4100625));
    let ok2 = d2 == e2;
    notes.push(format!("p=2 {}", if ok2 { "exact" } else { "differs" }));

    let d3 = det_polynomial_reduced_quad(3).unwrap();
    let g = poly(&[450, 495, 60, 4]);
    let f3 = poly(&[3150, 270, 15, 1]).mul(&g).mul(&g).scale(&int(-1));
    let (q3, r3) = d3.div_rem(&f3);
    let c3 = q3.coeffs().first().cloned().unwrap_or_else(|| int(0));
    let ok3 = r3.is_zero() && q3.degree() == Some(0) && c3 > int(0);
    notes.push(format!("p=3 constant {c3} remainder zero {}", r3.is_zero()));

    let d4 = det_polynomial_reduced_quad(4).unwrap();
    let f4 = p4_factor();
    let (_, r4) = d4.div_rem(&f4.mul(&f4));
    let ok4 = r4.is_zero();
    notes.push(format!("p=4 factor² divides {ok4}"));
    outcome(ok1 && ok2 && ok3 && ok4, notes.join("; "))
}

fn p4_witness() -> Outcome {
    let f = p4_factor();
    let at_zero = f.eval(&int(0));
    let rep = match verify_p4_singularity() {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("no root: {e}")),
    };
    // independent check of the root: the factor changes sign across λ*
    let lo = f.eval_f64(rep.lambda * (1.0 - 1e-9));
    let hi = f.eval_f64(rep.lambda * (1.0 + 1e-9));
    let sign_change = at_zero == int(-3492720) && lo * hi < 0.0;
    let pass = sign_change
        && rep.ratio_at_root < P4_ROOT_RATIO_MAX
        && rep.ratio_off_root > P4_OFF_ROOT_RATIO_MIN
        && rep.factor_squared_divides;
    outcome(
        pass,
        format!(
            "λ* = {:.12}, k = {:.12}, σ ratio at k {:e} (< {P4_ROOT_RATIO_MAX:e}), at {P4_OFF_ROOT_FACTOR}·k {:e} (> {P4_OFF_ROOT_RATIO_MIN:e})",
            rep.lambda, rep.k, rep.ratio_at_root, rep.ratio_off_root
        ),
    )
}

fn one_d_regularity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_241_016);
    let mut worst = (f64::INFINITY, 0, 0, 0.0);
    for _ in 0..ONE_D_CASES {
        let n = rng.gen_range(1..=20);
        let p = rng.gen_range(1..=5);
        let mut xs: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.0..1.0)).collect();
        xs.push(0.0);
        xs.push(1.0);
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let k = (rng.gen_range(0.1f64.ln()..50f64.ln())).exp();
        let sys = assemble_1d_hp(&Mesh1D::new(xs).unwrap(), p).unwrap();
        let dense = system_matrix(&sys, k).unwrap().matrix.to_dense();
        let ratio = sigma_extremes(&dense).unwrap().ratio();
        if ratio < worst.0 {
            worst = (ratio, n, p, k);
        }
    }
    outcome(
        worst.0 > ONE_D_RATIO_MIN,
        format!(
            "{ONE_D_CASES} cases, worst σ ratio {:e} (N={}, p={}, k={:.3})",
            worst.0, worst.1, worst.2, worst.3
        ),
    )
}

fn talpha_closed_form(alpha: f64) -> f64 {
    6.0 * (1.0 / (1.0 - alpha)
        + alpha / (2.0 - alpha)
        + 1.0
        + 4.0 * (1.0 - alpha) / (alpha * (2.0 - alpha)))
}

fn talpha_singularity() -> Outcome {
    let c = match critical_k_talpha(TALPHA_ALPHA) {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("critical_k_talpha failed: {e}")),
    };
    let sys = assemble_p1(&make_talpha(TALPHA_ALPHA).unwrap()).unwrap();
    let off = system_matrix(&sys, TALPHA_OFF_FACTOR * c.k_crit)
        .unwrap()
        .matrix
        .to_dense();
    let off = sigma_extremes(&off).unwrap();
    let state = motz_from_boundary(&make_talpha(TALPHA_ALPHA).unwrap()).unwrap();
    let closed = talpha_closed_form(TALPHA_ALPHA);
    let pass = c.consistency < TALPHA_CONSISTENCY_MAX
        && c.residual < TALPHA_RESIDUAL_MAX
        && c.sigma_ratio < TALPHA_SIGMA_MAX
        && off.min > TALPHA_OFF_SIGMA_MIN * off.max
        && (c.k_crit * c.k_crit - closed).abs() < TALPHA_CLOSED_FORM_TOL * closed
        && state.verdict == Verdict::Critical
        && state.residual() == vec![4, 5, 6, 7, 8];
    outcome(
        pass,
        format!(
            "k_crit = {:.12} (k² = {:.12}, closed form {closed}), consistency {:e}, residual {:e}, σ ratio {:e}, σ ratio at {TALPHA_OFF_FACTOR}·k {:e}, MOTZ residual {:?}",
            c.k_crit,
            c.k_crit * c.k_crit,
            c.consistency,
            c.residual,
            c.sigma_ratio,
            off.ratio(),
            state.residual()
        ),
    )
}

fn alpha_star() -> Outcome {
    let est = alpha_star_estimate(ALPHA_STAR_TOL).unwrap();
    let Some(a) = est.threshold else {
        return outcome(
            false,
            format!(
                "no sign change of the pattern denominator for α up to {} (min {:.6}); α* not found",
                est.sup_checked, est.min_denominator
            ),
        );
    };
    let below = critical_k_talpha(a / 2.0).is_ok();
    let above = critical_k_talpha((1.0 + a) / 2.0).is_err();
    outcome(
        a > 0.0 && a < 1.0 && below && above,
        format!("α* = {a}, below ok {below}, above errors {above}"),
    )
}

/// Structured and jittered meshes that MOTZ certifies from the boundary.
fn certified_meshes() -> Vec<(String, Mesh2D)> {
    let mut out = Vec::new();
    for n in 2..=5 {
        out.push((
            format!("crisscross {n}x{n}"),
            make_structured_tri_mesh(n, n, TriPattern::Crisscross).unwrap(),
        ));
        out.push((
            format!("diagonal {n}x{}", n + 1),
            make_structured_tri_mesh(n, n + 1, TriPattern::Diagonal).unwrap(),
        ));
    }
    let mut seed = 0;
    while out.len() < CERTIFIED_MESHES {
        let nx = 3 + (seed % 3) as usize;
        let random = seed % 2 == 1;
        let m = make_jittered_mesh(nx, nx + 1, 0.3, random, seed).unwrap();
        if motz_from_boundary(&m).unwrap().is_certified() {
            out.push((format!("jittered {nx}x{} seed {seed}", nx + 1), m));
        }
        seed += 1;
    }
    out
}

fn certified_regularity() -> Outcome {
    let ks = linear_grid(0.5, 5.0, CERTIFIED_K_SAMPLES);
    let mut worst = (f64::INFINITY, String::new());
    let mut problems = Vec::new();
    for (name, mesh) in certified_meshes() {
        let state = motz_from_boundary(&mesh).unwrap();
        if !state.is_certified() {
            problems.push(format!("{name} not certified"));
            continue;
        }
        let fixed = correct_angle_condition(&mesh, &state.trans_edges).unwrap();
        let rep = sigma_min_sweep(&assemble_p1(&fixed.mesh).unwrap(), &ks).unwrap();
        if rep.min_ratio() < worst.0 {
            worst = (rep.min_ratio(), name);
        }
    }
    let pass = problems.is_empty() && worst.0 > CERTIFIED_RATIO_MIN;
    outcome(
        pass,
        format!(
            "{CERTIFIED_MESHES} meshes, worst σ ratio {:e} on {} {}",
            worst.0,
            worst.1,
            problems.join(", ")
        ),
    )
}

fn suite_meshes() -> Vec<(String, Mesh2D)> {
    let mut out = certified_meshes();
    out.push(("T_α 0.4".into(), make_talpha(0.4).unwrap()));
    out.push(("T_α 0.8".into(), make_talpha(0.8).unwrap()));
    out.push(("ring 7x3".into(), make_layered_ring_mesh(7, 3).unwrap()));
    out.push((
        "kite π+0.3".into(),
        make_kite(std::f64::consts::PI + 0.3).unwrap(),
    ));
    out.push(("kite π".into(), make_kite(std::f64::consts::PI).unwrap()));
    for seed in 0..30 {
        out.push((
            format!("random diagonals seed {seed}"),
            make_jittered_mesh(4, 4, 0.35, true, 1000 + seed).unwrap(),
        ));
    }
    out
}

fn angle_lemma() -> Outcome {
    let mut edges = 0;
    let mut obtuse = 0;
    let mut mismatches = Vec::new();
    for (name, mesh) in suite_meshes() {
        let r = verify_angle_lemma(&mesh).unwrap();
        edges += r.edges_checked;
        obtuse += r.obtuse_edges.len();
        if !r.consistent() {
            mismatches.push(format!("{name}: {:?}", r.mismatches));
        }
    }
    outcome(
        mismatches.is_empty(),
        format!(
            "{edges} interior edges, {obtuse} obtuse, {} mismatches {}",
            mismatches.len(),
            mismatches.join("; ")
        ),
    )
}

fn enumeration_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let certified = make_jittered_mesh(4, 5, 0.25, false, 3).unwrap();
    let talpha = make_talpha(0.4).unwrap();
    let mut failures = 0;
    for mesh in [&certified, &talpha] {
        for _ in 0..RELABELINGS {
            let mut perm: Vec<usize> = (0..mesh.num_nodes()).collect();
            perm.shuffle(&mut rng);
            if !motz_invariant_under_relabel(mesh, &perm).unwrap() {
                failures += 1;
            }
        }
    }
    let base_ok = motz_from_boundary(&certified).unwrap().is_certified();
    outcome(
        base_ok && failures == 0,
        format!(
            "{} relabelings per mesh, {failures} changed the outcome",
            RELABELINGS
        ),
    )
}

/// Moves the vertex opposite a transmission edge towards the edge midpoint
/// until the edge is no longer weakly acute, keeping every triangle
/// positively oriented.
fn induce_obtuse(mesh: &Mesh2D, edges: &BTreeSet<(usize, usize)>) -> Option<Mesh2D> {
    for &(a, b) in edges {
        let edge = mesh.edge(a, b)?;
        for &e in &edge.elements {
            let c = *mesh.element(e).iter().find(|&&v| v != a && v != b)?;
            if mesh.is_boundary_node(c) {
                continue;
            }
            let (pa, pb, pc) = (mesh.node(a), mesh.node(b), mesh.node(c));
            let mid = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
            for t in [0.5, 0.65, 0.8, 0.9] {
                let mut nodes = mesh.nodes().to_vec();
                nodes[c] = [pc[0] + t * (mid[0] - pc[0]), pc[1] + t * (mid[1] - pc[1])];
                let positive = mesh
                    .elements()
                    .iter()
                    .all(|conn| signed_area(nodes[conn[0]], nodes[conn[1]], nodes[conn[2]]) > 0.0);
                if !positive {
                    break;
                }
                let Ok(moved) = Mesh2D::new(nodes, ElementKind::Tri3, mesh.elements().to_vec())
                else {
                    break;
                };
                if !weakly_acute(&moved, a, b).unwrap() {
                    return Some(moved);
                }
            }
        }
    }
    None
}

fn repair_efficacy() -> Outcome {
    let mut notes = Vec::new();
    let talpha = make_talpha(TALPHA_ALPHA).unwrap();
    let st = motz_from_boundary(&talpha).unwrap();
    let t_out = motz_flip(&talpha, &st, FlipOptions::default()).unwrap();
    let t_ok = t_out.state.is_certified();
    notes.push(format!(
        "T_α: {} after {} flips{}",
        if t_ok { "certified" } else { "critical" },
        t_out.flips.len(),
        t_out
            .diagnostic
            .as_deref()
            .map(|d| format!(" ({d})"))
            .unwrap_or_default()
    ));

    let ring = make_layered_ring_mesh(8, 3).unwrap();
    let rs = motz_from_boundary(&ring).unwrap();
    let r_out = motz_flip(&ring, &rs, FlipOptions::default()).unwrap();
    let r_ok = rs.verdict == Verdict::Critical && r_out.state.is_certified();
    notes.push(format!(
        "ring: {:?} before, {:?} after {} flips",
        rs.verdict,
        r_out.state.verdict,
        r_out.flips.len()
    ));

    let mut induced = 0;
    let mut broken = Vec::new();
    for (name, mesh) in certified_meshes() {
        let state = motz_from_boundary(&mesh).unwrap();
        let Some(moved) = induce_obtuse(&mesh, &state.trans_edges) else {
            continue;
        };
        induced += 1;
        let s2 = motz(&moved, &moved.boundary_nodes()).unwrap();
        let fixed = match correct_angle_condition(&moved, &s2.trans_edges) {
            Ok(f) => f,
            Err(e) => {
                broken.push(format!("{name}: {e}"));
                continue;
            }
        };
        let acute = fixed
            .trans_edges
            .iter()
            .all(|&(a, b)| weakly_acute(&fixed.mesh, a, b).unwrap());
        let again = motz_from_boundary(&fixed.mesh).unwrap();
        if !(s2.is_certified() && fixed.bisections > 0 && acute && again.is_certified()) {
            broken.push(name);
        }
    }
    let b_ok = induced > 0 && broken.is_empty();
    notes.push(format!(
        "bisection kept certification on {}/{induced} induced meshes {}",
        induced - broken.len(),
        broken.join(", ")
    ));
    outcome(t_ok && r_ok && b_ok, notes.join("; "))
}

fn quad_regularity() -> Outcome {
    let rep = verify_corridor_theorems(11, Execution::default()).unwrap();
    let worst = rep
        .cases
        .iter()
        .min_by(|a, b| a.min_ratio.total_cmp(&b.min_ratio))
        .unwrap();
    let pass = rep.cases.iter().all(|c| c.min_ratio > CORRIDOR_RATIO_MIN);
    outcome(
        pass,
        format!(
            "{} configurations, worst σ ratio {:e} ({} p={})",
            rep.cases.len(),
            worst.min_ratio,
            worst.label,
            worst.p
        ),
    )
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_ducp"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mesh_path = dir.path().join("mesh.json");
    save_mesh(
        &make_jittered_mesh(5, 4, 0.3, false, 17).unwrap(),
        &mesh_path,
    )
    .unwrap();
    let mesh = mesh_path.to_str().unwrap();
    let mut runs = Vec::new();
    for i in 0..2 {
        let trace = dir.path().join(format!("trace{i}.jsonl"));
        let frames = dir.path().join(format!("frames{i}"));
        let check = run_cli(&["check", "--mesh", mesh, "--trace", trace.to_str().unwrap()]);
        let render = run_cli(&[
            "render",
            "--mesh",
            mesh,
            "--trace",
            trace.to_str().unwrap(),
            "--out",
            frames.to_str().unwrap(),
            "--every",
            "2",
        ]);
        runs.push((
            check,
            fs::read(&trace).unwrap(),
            render,
            read_dir_sorted(&frames),
        ));
    }
    let same = runs[0] == runs[1];
    let codes = (runs[0].0 .0, runs[0].2 .0);
    let frames = runs[0].3.len();
    outcome(
        same && codes == (0, 0) && frames > 1,
        format!("exit codes {codes:?}, {frames} frames, identical {same}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("reduced matrices p=2", reduced_golden),
        ("determinant polynomials p=1..4", determinant_polynomials),
        ("p=4 singularity witness", p4_witness),
        ("1D unconditional regularity", one_d_regularity),
        ("T_α singularity", talpha_singularity),
        ("α* existence", alpha_star),
        ("certified meshes are regular", certified_regularity),
        ("angle lemma equivalence", angle_lemma),
        ("enumeration invariance", enumeration_invariance),
        ("repair efficacy", repair_efficacy),
        ("quadrilateral regularity", quad_regularity),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
