//! `ducp`: certify or refute unique solvability of Helmholtz Galerkin
//! systems from the command line. JSON goes to stdout, diagnostics to
//! stderr. Exit codes: 0 certified or verified, 2 critical, 1 error.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "ducp",
    version,
    about = "Discrete unique continuation checks for Helmholtz discretizations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a mesh file.
    Gen(GenArgs),
    /// Run the marching certification from the boundary.
    Check(CheckArgs),
    /// Bisect non-acute transmission edges and re-certify.
    Repair(RepairArgs),
    /// Flip edges until the march certifies or no candidate remains.
    Flip(FlipArgs),
    /// Smallest singular value of K_k over a range of wave numbers.
    Sweep(SweepArgs),
    /// Singular witness on the T_α mesh.
    SingularDemo(SingularArgs),
    /// Exact determinant of the reduced quadrilateral system.
    QuadLemma(QuadLemmaArgs),
    /// SVG frames of a marching trace.
    Render(RenderArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MeshKind {
    Diagonal,
    Crisscross,
    Talpha,
    Ring,
    Jittered,
    Equilateral,
    Tensor,
    Kite,
    Interval,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: MeshKind,
    #[arg(long, default_value_t = 4)]
    nx: usize,
    #[arg(long, default_value_t = 4)]
    ny: usize,
    #[arg(long, default_value_t = 0.4)]
    alpha: f64,
    /// Nodes per ring for `ring`.
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    rings: usize,
    #[arg(long, default_value_t = 0.2)]
    jitter: f64,
    /// Total opposite angle of the kite diagonal, in radians.
    #[arg(long, default_value_t = 3.0)]
    angle: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the mesh here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    mesh: PathBuf,
    /// Write the step trace as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Refuse transmission edges that violate the angle condition.
    #[arg(long)]
    strict_angles: bool,
    /// Write A, M and B in Matrix Market format into this directory.
    #[arg(long)]
    dump_matrices: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RepairArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FlipArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Keep the grown test set between flips.
    #[arg(long)]
    paper_faithful: bool,
    /// Score flips by the smallest angle of the whole mesh.
    #[arg(long)]
    global_score: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    mesh: PathBuf,
    /// Polynomial degree (1D and quadrilateral meshes).
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value_t = 0.1)]
    k_min: f64,
    #[arg(long, default_value_t = 20.0)]
    k_max: f64,
    #[arg(long, default_value_t = 60)]
    k_samples: usize,
    /// Write the curve as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SingularArgs {
    #[arg(long, default_value_t = 0.4)]
    alpha: f64,
    #[arg(long, default_value_t = 21)]
    k_samples: usize,
}

#[derive(Args, Debug)]
struct QuadLemmaArgs {
    #[arg(long)]
    p: usize,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    every: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(outcome) => {
            // a closed pipe on stdout is not an error of the command itself
            let _ = writeln!(std::io::stdout().lock(), "{}", outcome.json);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
