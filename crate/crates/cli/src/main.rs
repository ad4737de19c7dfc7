//! Command-line front end: solve, extract, classify and sweep from a single
//! JSON run configuration.
//!
//! Every subcommand reads the same config shape (see `RunConfig`), writes
//! its artifacts into the `--out` run directory and finishes with a
//! `manifest.json` echoing the command, the full config and the list of
//! files written. Paths inside the manifest are relative to the run
//! directory.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use obstacle_lab::blowup::classify_point;
use obstacle_lab::config::RunConfig;
use obstacle_lab::elliptic::{assemble_lcp, solve_psor, SolveStats};
use obstacle_lab::error::Error;
use obstacle_lab::experiments::{schaeffer_sweep, singular_times, SweepParams};
use obstacle_lab::freeboundary::{contact_set, growth_ratio};
use obstacle_lab::grid::{write_snapshot, ScalarField};
use obstacle_lab::linalg::SymMat;
use obstacle_lab::monotonicity::{check_monotone, monneau};
use obstacle_lab::parabolic::{solve_parabolic, Trajectory};
use obstacle_lab::store;

#[derive(Parser)]
#[command(name = "obstacle-lab", version, about = "Obstacle-problem laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the stationary problem and extract the free boundary.
    SolveElliptic(RunArgs),
    /// March the time-dependent problem and store the trajectory.
    SolveParabolic(RunArgs),
    /// Solve, then classify the given points by blow-up profile fitting.
    Classify(PointsArgs),
    /// Solve, then evaluate the monotonicity curve at one point.
    Monneau(MonneauArgs),
    /// Solve, then report quadratic growth ratios at the given points.
    Growth(PointsArgs),
    /// Sweep the shifted boundary family and count verdicts per shift.
    SchaefferSweep(SweepArgs),
    /// Melting run plus a per-time-level singular-point scan.
    Stefan(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Run directory for outputs; created if missing.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PointsArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Point as comma-separated coordinates; repeatable.
    #[arg(long = "point", required = true, allow_negative_numbers = true)]
    points: Vec<String>,
}

#[derive(Args)]
struct MonneauArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Point as comma-separated coordinates.
    #[arg(long, allow_negative_numbers = true)]
    point: String,
    /// Upper triangle of the comparison matrix, row-major: 1D `a11`,
    /// 2D `a11,a12,a22`, 3D `a11,a12,a13,a22,a23,a33`.
    #[arg(long, allow_negative_numbers = true)]
    matrix: String,
    /// Sphere quadrature sample count.
    #[arg(long, default_value_t = 256)]
    m: usize,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Smallest boundary shift.
    #[arg(long, allow_negative_numbers = true)]
    t_min: f64,
    /// Largest boundary shift.
    #[arg(long, allow_negative_numbers = true)]
    t_max: f64,
    /// Number of equally spaced shifts.
    #[arg(long, default_value_t = 11)]
    count: usize,
    /// Solve every shift cold, in parallel, instead of warm-chaining.
    #[arg(long)]
    cold: bool,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::SolveElliptic(a) => run_elliptic(&a),
        Command::SolveParabolic(a) => run_parabolic(&a),
        Command::Classify(a) => run_classify(&a),
        Command::Monneau(a) => run_monneau(&a),
        Command::Growth(a) => run_growth(&a),
        Command::SchaefferSweep(a) => run_sweep(&a),
        Command::Stefan(a) => run_stefan(&a),
    }
}

fn load(args: &RunArgs) -> Result<RunConfig> {
    let cfg = RunConfig::from_path(&args.config)
        .with_context(|| format!("reading config {}", args.config.display()))?;
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating run directory {}", args.out.display()))?;
    Ok(cfg)
}

fn parse_point(text: &str, dim: usize) -> Result<[f64; 3]> {
    let parts: Vec<&str> = text.split(',').collect();
    anyhow::ensure!(
        parts.len() == dim,
        "point {:?} needs {} coordinates",
        text,
        dim
    );
    let mut p = [0.0f64; 3];
    for (k, s) in parts.iter().enumerate() {
        p[k] = s
            .trim()
            .parse()
            .with_context(|| format!("bad coordinate {:?}", s))?;
    }
    Ok(p)
}

fn parse_matrix(text: &str, dim: usize) -> Result<SymMat<f64>> {
    let need = dim * (dim + 1) / 2;
    let entries: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse().with_context(|| format!("bad entry {:?}", s)))
        .collect::<Result<_>>()?;
    anyhow::ensure!(
        entries.len() == need,
        "matrix {:?} needs {} upper-triangle entries for dimension {}",
        text,
        need,
        dim
    );
    let mut m = SymMat::zeros(dim);
    let mut idx = 0;
    for i in 0..dim {
        for j in i..dim {
            m.set_sym(i, j, entries[idx]);
            idx += 1;
        }
    }
    Ok(m)
}

fn solve_stationary(cfg: &RunConfig) -> Result<(ScalarField<f64>, SolveStats<f64>)> {
    let grid = cfg.grid()?;
    let expr = cfg.boundary_expr()?;
    let boundary = ScalarField::from_fn(grid, |p| expr.eval(p, 0.0));
    let rhs = ScalarField::from_fn(grid, |_| cfg.g);
    let problem = assemble_lcp(grid, &rhs, &boundary)?;
    let solved = solve_psor(&problem, cfg.omega, cfg.tol, cfg.maxit)?;
    Ok(solved)
}

fn march(cfg: &RunConfig) -> Result<(Trajectory<f64>, f64)> {
    let tau = cfg.tau.context("config needs tau for a time-dependent run")?;
    let t_end = cfg.t_final.context("config needs T for a time-dependent run")?;
    let grid = cfg.grid()?;
    let expr = cfg.boundary_expr()?;
    let initial = ScalarField::from_fn(grid, |p| expr.eval(p, 0.0).max(0.0));
    let traj = solve_parabolic(
        grid,
        &initial,
        |t, p| expr.eval(p, t),
        tau,
        t_end,
        cfg.omega,
        cfg.tol,
        cfg.maxit,
    )?;
    Ok((traj, tau))
}

fn write_manifest(
    out: &Path,
    command: &str,
    cfg: &RunConfig,
    outputs: &[&str],
) -> Result<()> {
    let manifest = serde_json::json!({
        "command": command,
        "config": cfg.to_json(),
        "outputs": outputs,
    });
    store::write_json(&out.join("manifest.json"), &manifest)?;
    Ok(())
}

fn run_elliptic(args: &RunArgs) -> Result<()> {
    let cfg = load(args)?;
    let (u, stats) = solve_stationary(&cfg)?;
    let out = &args.out;
    write_snapshot(&out.join("solution.snap"), &u)?;
    store::write_json(&out.join("stats.json"), &stats.to_json())?;
    let geo = contact_set(&u, cfg.thresholds().delta)?;
    store::write_fb_csv(&out.join("fb.csv"), &geo.fb_points, cfg.dim)?;
    write_snapshot(&out.join("mask.snap"), &geo.mask_field(&u))?;
    write_manifest(
        out,
        "solve-elliptic",
        &cfg,
        &["solution.snap", "stats.json", "fb.csv", "mask.snap"],
    )?;
    println!(
        "solved in {} sweeps, residual {:.3e}; {} free-boundary points",
        stats.iterations,
        stats.final_residual,
        geo.fb_points.len()
    );
    Ok(())
}

fn run_parabolic(args: &RunArgs) -> Result<()> {
    let cfg = load(args)?;
    let (traj, tau) = march(&cfg)?;
    let out = &args.out;
    store::save_trajectory(&out.join("trajectory"), &traj, tau)?;
    let stats: Vec<serde_json::Value> = traj
        .stats()
        .iter()
        .map(|s| match s {
            Some(s) => s.to_json(),
            None => serde_json::Value::Null,
        })
        .collect();
    store::write_json(&out.join("stats.json"), &serde_json::Value::Array(stats))?;
    write_manifest(out, "solve-parabolic", &cfg, &["trajectory", "stats.json"])?;
    println!("marched {} time levels to T = {}", traj.len(), cfg.t_final.unwrap());
    Ok(())
}

fn run_classify(args: &PointsArgs) -> Result<()> {
    let cfg = load(&args.run)?;
    let (u, _) = solve_stationary(&cfg)?;
    let radii = cfg.radii();
    let thresholds = cfg.thresholds();
    let mut reports = Vec::new();
    let mut summary = Vec::new();
    for text in &args.points {
        let p = parse_point(text, cfg.dim)?;
        match classify_point(&u, &p, &radii, &thresholds) {
            Ok(rep) => {
                summary.push(format!("{} -> {}", text, rep.verdict));
                reports.push(rep.to_json());
            }
            Err(
                e @ (Error::Resolution(_)
                | Error::OutOfDomain(_)
                | Error::NotFreeBoundary { .. }),
            ) => {
                summary.push(format!("{} -> error: {}", text, e));
                reports.push(serde_json::json!({
                    "point": p[..cfg.dim].to_vec(),
                    "error": e.to_string(),
                }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let out = &args.run.out;
    store::write_json(&out.join("classify.json"), &serde_json::Value::Array(reports))?;
    write_manifest(out, "classify", &cfg, &["classify.json"])?;
    for line in summary {
        println!("{}", line);
    }
    Ok(())
}

fn run_monneau(args: &MonneauArgs) -> Result<()> {
    let cfg = load(&args.run)?;
    let (u, _) = solve_stationary(&cfg)?;
    let p = parse_point(&args.point, cfg.dim)?;
    let matrix = parse_matrix(&args.matrix, cfg.dim)?;
    let curve = monneau(&u, &p, &matrix, &cfg.radii(), args.m)?;
    let slack = 1e-6f64.max(10.0 * cfg.h * cfg.h);
    let (monotone, worst) = check_monotone(&curve, slack)?;
    let out = &args.run.out;
    store::write_monneau_csv(&out.join("monneau.csv"), &curve)?;
    let mut header = curve.header_json();
    let obj = header.as_object_mut().expect("header is an object");
    obj.insert("monotone".into(), serde_json::json!(monotone));
    obj.insert("worst_increment".into(), serde_json::json!(worst));
    obj.insert("slack".into(), serde_json::json!(slack));
    store::write_json(&out.join("monneau.json"), &header)?;
    write_manifest(out, "monneau", &cfg, &["monneau.csv", "monneau.json"])?;
    println!(
        "M evaluated at {} radii; monotone within slack {:.1e}: {}",
        curve.radii.len(),
        slack,
        monotone
    );
    Ok(())
}

fn run_growth(args: &PointsArgs) -> Result<()> {
    let cfg = load(&args.run)?;
    let (u, _) = solve_stationary(&cfg)?;
    let radii = cfg.radii();
    let out = &args.run.out;
    let mut outputs = Vec::new();
    for (k, text) in args.points.iter().enumerate() {
        let p = parse_point(text, cfg.dim)?;
        let diag = growth_ratio(&u, &p, &radii)?;
        let name = format!("growth_{}.csv", k);
        store::write_growth_csv(&out.join(&name), &diag)?;
        println!(
            "{}: {} ratios, {} radii skipped",
            text,
            diag.ratios.len(),
            diag.skipped.len()
        );
        outputs.push(name);
    }
    let refs: Vec<&str> = outputs.iter().map(String::as_str).collect();
    write_manifest(out, "growth", &cfg, &refs)?;
    Ok(())
}

fn run_sweep(args: &SweepArgs) -> Result<()> {
    let cfg = load(&args.run)?;
    let grid = cfg.grid()?;
    let expr = cfg.boundary_expr()?;
    let base = ScalarField::from_fn(grid, |p| expr.eval(p, 0.0));
    let params = SweepParams {
        radii: cfg.radii(),
        thresholds: cfg.thresholds(),
        omega: cfg.omega,
        tol: cfg.tol,
        max_iter: cfg.maxit,
        warm_start: !args.cold,
    };
    let result = schaeffer_sweep(grid, &base, (args.t_min, args.t_max), args.count, &params)?;
    let out = &args.run.out;
    store::write_json(&out.join("sweep.json"), &result.to_json())?;
    write_manifest(out, "schaeffer-sweep", &cfg, &["sweep.json"])?;
    let flagged = result.flagged_shifts();
    println!(
        "{} shifts, {} flagged singular; worst monotonicity violation {:.3e}",
        result.records.len(),
        flagged.len(),
        result.worst_monotonicity_violation
    );
    Ok(())
}

fn run_stefan(args: &RunArgs) -> Result<()> {
    let cfg = load(args)?;
    let (traj, tau) = march(&cfg)?;
    let report = singular_times(&traj, &cfg.radii(), &cfg.thresholds())?;
    let out = &args.out;
    store::save_trajectory(&out.join("trajectory"), &traj, tau)?;
    store::write_json(&out.join("stefan.json"), &report.to_json())?;
    write_manifest(out, "stefan", &cfg, &["trajectory", "stefan.json"])?;
    println!(
        "{} time levels, {} flagged, flagged fraction {:.3}",
        report.records.len(),
        report.flagged_times.len(),
        report.flagged_fraction
    );
    Ok(())
}
