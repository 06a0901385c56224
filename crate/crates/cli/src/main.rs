//! `wachspress` command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on domain, parse and I/O
//! errors. With `--json` every command prints exactly one JSON document on
//! stdout, errors included.

mod shape_file;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use wachspress::bounds::{estimate_lambda_sup, regular_ngon_reference, BoundReport, ShapeTag};
use wachspress::exec::configure_threads;
use wachspress::fem::{convergence_study, solve_model_problem, to_csv, FemSolution};
use wachspress::geometry::{Polygon, Polytope};
use wachspress::mesh::{self, MeshKind, PolyMesh};
use wachspress::shapes::Shape;
use wachspress::{Error, Execution, Vec2, Vec3};

const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "wachspress", version, about = "Wachspress coordinates, gradient bounds and polyhedral FEM")]
struct Cli {
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Cap the number of worker threads.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coordinates and gradients at one point.
    Eval(EvalArgs),
    /// h*, sampled and vertex λ, and the bounds that bracket Λ.
    Analyze(AnalyzeArgs),
    /// Generate a hex or prism mesh of the unit cube.
    Mesh(MeshArgs),
    /// Solve the model Poisson problem on a mesh file.
    Solve(SolveArgs),
    /// Convergence study over a range of mesh levels.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Shape file, or `builtin:NAME`.
    #[arg(long)]
    shape: String,
    /// Comma-separated coordinates, `x,y` or `x,y,z`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
    point: Point,
}

#[derive(Debug, Clone)]
struct Point(Vec<f64>);

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long)]
    shape: String,
    /// Interior Halton samples.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct MeshArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: MeshKind,
    #[arg(long)]
    level: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    mesh: PathBuf,
    /// Solution file to write.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConvergenceArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: MeshKind,
    /// Inclusive level range `L0..L1`.
    #[arg(long, value_parser = parse_levels)]
    levels: (u32, u32),
    /// CSV file to write; text mode prints the CSV when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_point(s: &str) -> Result<Point, String> {
    let coords: Vec<f64> = s
        .split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|e| format!("`{c}`: {e}")))
        .collect::<Result<_, _>>()?;
    match coords.len() {
        2 | 3 if coords.iter().all(|c| c.is_finite()) => Ok(Point(coords)),
        2 | 3 => Err("coordinates must be finite".into()),
        n => Err(format!("expected 2 or 3 coordinates, got {n}")),
    }
}

fn parse_kind(s: &str) -> Result<MeshKind, String> {
    s.parse().map_err(|_| format!("expected `hex` or `prism`, got `{s}`"))
}

fn parse_levels(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").ok_or("expected `L0..L1`")?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let level = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
    let (a, b) = (level(a)?, level(b)?);
    if a >= b {
        return Err(format!("need L0 < L1, got {a}..{b}"));
    }
    Ok((a, b))
}

/// What a command produced: a JSON body and its text rendering.
struct Output {
    json: Value,
    text: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let name = command_name(&cli.command);
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", envelope(name, out.json));
            } else {
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if cli.json {
                println!("{}", envelope(name, json!({ "error": error_json(&e) })));
            }
            ExitCode::from(2)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval(_) => "eval",
        Command::Analyze(_) => "analyze",
        Command::Mesh(_) => "mesh",
        Command::Solve(_) => "solve",
        Command::Convergence(_) => "convergence",
    }
}

fn envelope(command: &str, body: Value) -> Value {
    let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    doc
}

fn error_json(e: &Error) -> Value {
    let kind = match e {
        Error::DegenerateGeometry(_) => "degenerate_geometry",
        Error::NonPlanarFace { .. } => "non_planar_face",
        Error::NotConvex { .. } => "not_convex",
        Error::BadTopology(_) => "bad_topology",
        Error::PointNotInterior { .. } => "point_not_interior",
        Error::ShapeError { .. } => "shape_error",
        Error::NonSimpleVertex { .. } => "non_simple_vertex",
        Error::DomainError(_) => "domain_error",
        Error::ParseError { .. } => "parse_error",
        Error::Io(_) => "io_error",
        Error::SolveError { .. } => "solve_error",
        Error::Invariant(_) => "invariant",
    };
    let mut v = json!({ "kind": kind, "message": e.to_string() });
    match e {
        Error::ParseError { line, .. } => v["line"] = json!(line),
        Error::PointNotInterior { min_h } => v["min_h"] = json!(min_h),
        Error::NotConvex { cell: Some(c), .. } => v["cell"] = json!(c),
        _ => {}
    }
    v
}

fn run(cli: &Cli) -> wachspress::Result<Output> {
    if let Some(t) = cli.threads {
        configure_threads(t.into())?;
    }
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    match &cli.command {
        Command::Eval(a) => eval(a),
        Command::Analyze(a) => analyze(a, exec),
        Command::Mesh(a) => make_mesh(a),
        Command::Solve(a) => solve(a, exec),
        Command::Convergence(a) => convergence(a, exec),
    }
}

fn eval(a: &EvalArgs) -> wachspress::Result<Output> {
    let shape = shape_file::resolve(&a.shape)?;
    let p = &a.point.0;
    if p.len() != shape.dim() {
        return Err(Error::ShapeError { expected: shape.dim(), got: p.len() });
    }
    let (phi, dphi, lambda, residual) = match &shape {
        Shape::Polygon(poly) => {
            let e = poly.evaluate(&Vec2::new(p[0], p[1]))?;
            let g = e.dphi.iter().map(|g| g.as_slice().to_vec()).collect::<Vec<_>>();
            (e.phi.clone(), g, e.lambda(), e.partition_residual())
        }
        Shape::Polyhedron(poly) => {
            let e = poly.evaluate(&Vec3::new(p[0], p[1], p[2]))?;
            let g = e.dphi.iter().map(|g| g.as_slice().to_vec()).collect::<Vec<_>>();
            (e.phi.clone(), g, e.lambda(), e.partition_residual())
        }
    };
    let mut text = String::new();
    writeln!(text, "vertex phi grad").unwrap();
    for (v, (f, g)) in phi.iter().zip(&dphi).enumerate() {
        writeln!(text, "{v} {f} {}", join(g)).unwrap();
    }
    writeln!(text, "lambda {lambda}").unwrap();
    writeln!(text, "partition_residual {residual}").unwrap();
    Ok(Output {
        json: json!({
            "shape": a.shape,
            "dim": shape.dim(),
            "point": p,
            "phi": phi,
            "grad": dphi,
            "lambda": lambda,
            "partition_residual": residual,
        }),
        text,
    })
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
}

fn analyze(a: &AnalyzeArgs, exec: Execution) -> wachspress::Result<Output> {
    let shape = shape_file::resolve(&a.shape)?;
    let report = match &shape {
        Shape::Polygon(p) => estimate_lambda_sup(p, a.samples, a.seed, exec)?,
        Shape::Polyhedron(p) => estimate_lambda_sup(p, a.samples, a.seed, exec)?,
    };
    let ngon = match &shape {
        Shape::Polygon(p) if report.special_shape == Some(ShapeTag::RegularNgon) => Some(ngon_closed_forms(p)?),
        _ => None,
    };
    let mut text = String::new();
    writeln!(text, "shape: {}", a.shape).unwrap();
    for (k, v) in report.to_record() {
        writeln!(text, "{k}: {v}").unwrap();
    }
    writeln!(text, "lambda_estimate: {}", report.lambda_estimate()).unwrap();
    if !report.non_simple_vertices.is_empty() {
        writeln!(
            text,
            "note: no vertex closed form at non-simple vertices {}",
            report.non_simple_vertices.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
        )
        .unwrap();
    }
    if let Some(Value::Object(m)) = &ngon {
        for (k, v) in m {
            writeln!(text, "ngon_{k}: {v}").unwrap();
        }
    }
    Ok(Output {
        json: json!({
            "shape": a.shape,
            "report": report_json(&report),
            "regular_ngon": ngon,
        }),
        text,
    })
}

fn report_json(r: &BoundReport) -> Value {
    let mut v = serde_json::to_value(r).expect("report serializes");
    v["lambda_estimate"] = json!(r.lambda_estimate());
    v
}

/// Closed forms for a regular polygon, rescaled from the unit circumcircle.
fn ngon_closed_forms(p: &Polygon) -> wachspress::Result<Value> {
    let r = (p.vertices()[0] - p.centroid()).norm();
    let c = regular_ngon_reference(p.n_vertices())?;
    Ok(json!({
        "n": c.n,
        "circumradius": r,
        "h_star": c.h_star * r,
        "lambda_vertex": c.lambda_vertex / r,
        "lower_bound": c.lower_bound / r,
        "upper_bound": c.upper_bound / r,
        "bound_ratio": c.lower_bound / c.upper_bound,
    }))
}

fn make_mesh(a: &MeshArgs) -> wachspress::Result<Output> {
    let m = a.kind.generate(a.level)?;
    mesh::save(&m, &a.out)?;
    let stats = m.stats();
    let text = format!(
        "wrote {}: {} nodes, {} cells, h = {}, min h*/h = {}\n",
        a.out.display(),
        stats.n_nodes,
        stats.n_cells,
        stats.h,
        stats.min_h_star_scaled
    );
    Ok(Output {
        json: json!({
            "kind": a.kind.as_str(),
            "level": a.level,
            "out": a.out,
            "stats": stats,
        }),
        text,
    })
}

fn solve(a: &SolveArgs, exec: Execution) -> wachspress::Result<Output> {
    let m = mesh::load(&a.mesh)?;
    let (sol, norms) = solve_model_problem(&m, exec)?;
    if let Some(out) = &a.out {
        write_solution(&m, &sol, out)?;
    }
    let text = format!(
        "{} nodes, {} cells, {} CG iterations (relative residual {:e})\nrel_l2 {}\nrel_h1 {}\n",
        m.n_nodes(),
        m.n_cells(),
        sol.iterations,
        sol.relative_residual,
        norms.rel_l2,
        norms.rel_h1_semi
    );
    Ok(Output {
        json: json!({
            "mesh": a.mesh,
            "out": a.out,
            "stats": m.stats(),
            "iterations": sol.iterations,
            "relative_residual": sol.relative_residual,
            "errors": norms,
        }),
        text,
    })
}

/// `solution 1`, `nodes N`, then one `x y z u` line per mesh point.
fn write_solution(m: &PolyMesh, sol: &FemSolution, path: &Path) -> wachspress::Result<()> {
    let mut s = String::new();
    writeln!(s, "solution 1\nnodes {}", m.n_nodes()).unwrap();
    for (p, u) in m.points().iter().zip(&sol.nodal) {
        writeln!(s, "{} {} {} {u}", p.x, p.y, p.z).unwrap();
    }
    std::fs::write(path, s)?;
    Ok(())
}

fn convergence(a: &ConvergenceArgs, exec: Execution) -> wachspress::Result<Output> {
    let rows = convergence_study(a.kind, a.levels.0..=a.levels.1, exec)?;
    let csv = to_csv(&rows);
    let text = match &a.out {
        Some(out) => {
            std::fs::write(out, &csv)?;
            format!("wrote {} ({} levels)\n", out.display(), rows.len())
        }
        None => csv,
    };
    Ok(Output {
        json: json!({
            "kind": a.kind.as_str(),
            "levels": [a.levels.0, a.levels.1],
            "out": a.out,
            "rows": rows,
        }),
        text,
    })
}
