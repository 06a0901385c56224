//! Acceptance criteria, one line per criterion.
//!
//! Criteria 1–9 run twice: once sequentially and once with the parallel
//! execution mode. Criterion 10 requires the two reports to be identical.
//! The process exits non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use wachspress::basis::mu_f;
use wachspress::bounds::{estimate_lambda_sup, lambda_at, lambda_at_vertex_2d, lambda_at_vertex_3d};
use wachspress::fem::{assemble, convergence_study, solve};
use wachspress::geometry::{triangle_circumradius_check, Polygon, Polyhedron, Polytope};
use wachspress::mesh::{generate_hex_mesh, generate_prism_mesh, MeshKind, PolyMesh};
use wachspress::quadrature::integrate_cell;
use wachspress::sampling::interior_points;
use wachspress::{shapes, Execution, Vec2, Vec3};

const CORPUS_SEED: u64 = 20_240_917;
const SAMPLE_SEED: u64 = 3;
const SAMPLES: usize = 200;

// criterion 1
const TOL_PARTITION: f64 = 1e-12;
const TOL_LINEAR_PRECISION: f64 = 1e-10;
const RUNTIME_1: Duration = Duration::from_secs(30);
// criterion 2
const FD_STEP: f64 = 1e-6;
const FD_MIN_DEPTH: f64 = 0.05;
const TOL_FD: f64 = 1e-5;
const RUNTIME_2: Duration = Duration::from_secs(60);
// criterion 3
const TOL_BRACKET: f64 = 1e-9;
// criterion 4
const TOL_CUBE: f64 = 1e-12;
const TOL_TET: f64 = 1e-10;
const TOL_NGON: f64 = 1e-10;
const TOL_NGON_RATIO: f64 = 1e-12;
// criterion 5
const TOL_MU: f64 = 1e-10;
// criterion 6
const TOL_QUAD: f64 = 1e-12;
// criterion 7
const TOL_PATCH: f64 = 1e-8;
// criterion 8
const L2_WINDOW: (f64, f64) = (1.85, 2.15);
const H1_WINDOW: (f64, f64) = (0.85, 1.15);
const RUNTIME_8: Duration = Duration::from_secs(300);
// criterion 9
const TOL_CIRCUM: f64 = 1e-10;

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    /// Measured values; compared verbatim between runs.
    detail: String,
    elapsed: Duration,
}

struct Corpus {
    polygons: Vec<Polygon>,
    polyhedra: Vec<Polyhedron>,
}

fn samples<const D: usize, P: Polytope<D>>(p: &P) -> Vec<nalgebra::SVector<f64, D>> {
    interior_points(p, SAMPLES, SAMPLE_SEED, 1e-9 * p.diameter()).expect("interior samples")
}

fn criterion_1(c: &Corpus) -> (bool, String) {
    fn check<const D: usize, P: Polytope<D>>(p: &P, worst: &mut [f64; 3], bad_range: &mut usize) {
        let diam = p.diameter();
        for x in samples(p) {
            let e = p.evaluate(&x).expect("interior evaluation");
            let sum: f64 = e.phi.iter().sum();
            let recon: nalgebra::SVector<f64, D> =
                e.phi.iter().zip(p.vertices()).map(|(f, v)| v * *f).sum();
            worst[0] = worst[0].max((sum - 1.0).abs());
            worst[1] = worst[1].max((recon - x).norm() / diam);
            for &f in &e.phi {
                if !(f > 0.0 && f < 1.0) {
                    *bad_range += 1;
                }
                worst[2] = worst[2].max(f);
            }
        }
    }
    let mut worst = [0.0; 3];
    let mut bad_range = 0;
    for p in &c.polygons {
        check(p, &mut worst, &mut bad_range);
    }
    for p in &c.polyhedra {
        check(p, &mut worst, &mut bad_range);
    }
    let pass = worst[0] < TOL_PARTITION && worst[1] < TOL_LINEAR_PRECISION && bad_range == 0;
    (
        pass,
        format!(
            "max|Σφ−1| = {:.3e}, max|Σφv−x|/diam = {:.3e}, φ outside (0,1): {bad_range}",
            worst[0], worst[1]
        ),
    )
}

fn criterion_2(c: &Corpus) -> (bool, String) {
    fn check<const D: usize, P: Polytope<D>>(p: &P, worst: &mut f64, points: &mut usize) {
        let diam = p.diameter();
        let h = FD_STEP * diam;
        for x in samples(p) {
            if p.min_face_distance(&x) <= FD_MIN_DEPTH * diam {
                continue;
            }
            *points += 1;
            let e = p.evaluate(&x).expect("interior evaluation");
            let mut fd = vec![nalgebra::SVector::<f64, D>::zeros(); e.phi.len()];
            for k in 0..D {
                let mut step = nalgebra::SVector::<f64, D>::zeros();
                step[k] = h;
                let plus = p.evaluate(&(x + step)).expect("interior evaluation");
                let minus = p.evaluate(&(x - step)).expect("interior evaluation");
                for (v, g) in fd.iter_mut().enumerate() {
                    g[k] = (plus.phi[v] - minus.phi[v]) / (2.0 * h);
                }
            }
            for (g, f) in e.dphi.iter().zip(&fd) {
                *worst = worst.max((g - f).norm() / g.norm());
            }
        }
    }
    let mut worst = 0.0;
    let mut points = 0;
    for p in &c.polygons {
        check(p, &mut worst, &mut points);
    }
    for p in &c.polyhedra {
        check(p, &mut worst, &mut points);
    }
    (
        worst < TOL_FD && points > 0,
        format!("max relative FD mismatch = {worst:.3e} over {points} points"),
    )
}

fn criterion_3(c: &Corpus, exec: Execution) -> (bool, String) {
    fn check<const D: usize, P: Polytope<D>>(
        p: &P,
        exec: Execution,
        upper_viol: &mut usize,
        lower_viol: &mut usize,
        tightest: &mut f64,
    ) {
        let h_star = p.h_star();
        let r = estimate_lambda_sup(p, SAMPLES, SAMPLE_SEED, exec).expect("bound report");
        let upper = 2.0 * D as f64 / h_star + TOL_BRACKET / h_star;
        for x in samples(p) {
            if lambda_at(p, &x).expect("interior λ") > upper {
                *upper_viol += 1;
            }
        }
        let best = r.lambda_estimate();
        if best > upper {
            *upper_viol += 1;
        }
        if best < 1.0 / h_star - TOL_BRACKET / h_star {
            *lower_viol += 1;
        }
        *tightest = tightest.max(best * h_star / (2.0 * D as f64));
    }
    let (mut up, mut lo, mut tight) = (0, 0, 0.0);
    for p in &c.polygons {
        check(p, exec, &mut up, &mut lo, &mut tight);
    }
    for p in &c.polyhedra {
        check(p, exec, &mut up, &mut lo, &mut tight);
    }
    (
        up == 0 && lo == 0,
        format!("upper violations = {up}, lower violations = {lo}, max Λ̂·h*/2d = {tight:.6}"),
    )
}

fn criterion_4() -> (bool, String) {
    let cube = shapes::unit_cube();
    let cube_err = (0..8)
        .map(|v| (lambda_at_vertex_3d(&cube, v).unwrap() - (3f64.sqrt() + 3.0)).abs())
        .fold(0.0, f64::max);

    let tet = shapes::regular_simplex_3d();
    let tet_exact = 4.0 / (2.0f64 / 3.0).sqrt();
    let tet_err = (0..4)
        .map(|v| (lambda_at_vertex_3d(&tet, v).unwrap() - tet_exact).abs() / tet_exact)
        .fold(0.0, f64::max);

    let (mut lam_err, mut h_err, mut ratio_err) = (0.0f64, 0.0f64, 0.0f64);
    for n in 3..=64 {
        let p = shapes::regular_ngon(n).unwrap();
        let t = PI / n as f64;
        let (s, c) = t.sin_cos();
        let h_exact = 4.0 * s * s * c;
        let lam_exact = (1.0 + c) / (2.0 * s * s * c);
        let h = p.h_star();
        h_err = h_err.max((h - h_exact).abs() / h_exact);
        for v in 0..n {
            let lam = lambda_at_vertex_2d(&p, v).unwrap();
            lam_err = lam_err.max((lam - lam_exact).abs() / lam_exact);
            // attained lower value over the 4/h* upper bound
            ratio_err = ratio_err.max((lam * h / 4.0 - (1.0 + c) / 2.0).abs() / ((1.0 + c) / 2.0));
        }
    }
    let pass = cube_err < TOL_CUBE && tet_err < TOL_TET && lam_err < TOL_NGON && h_err < TOL_NGON && ratio_err < TOL_NGON_RATIO;
    (
        pass,
        format!(
            "cube {cube_err:.2e}, tet {tet_err:.2e}, n-gon λ {lam_err:.2e}, h* {h_err:.2e}, ratio {ratio_err:.2e}"
        ),
    )
}

fn criterion_5(c: &Corpus) -> (bool, String) {
    fn check<const D: usize, P: Polytope<D>>(p: &P, worst: &mut f64, viol: &mut usize) {
        let inv_h = 1.0 / p.h_star();
        for x in samples(p) {
            for f in 0..p.n_faces() {
                let mu = mu_f(p, &x, f).expect("interior μ_f");
                let excess = (1.0 - mu) / p.h_f(f, &x) - inv_h;
                *worst = worst.max(excess * p.h_star());
                if excess > TOL_MU {
                    *viol += 1;
                }
            }
        }
    }
    let (mut worst, mut viol) = (f64::NEG_INFINITY, 0);
    for p in &c.polygons {
        check(p, &mut worst, &mut viol);
    }
    for p in &c.polyhedra {
        check(p, &mut worst, &mut viol);
    }
    (
        viol == 0,
        format!("violations = {viol}, max ((1−μ_f)/h_f − 1/h*)·h* = {worst:.3e}"),
    )
}

/// `c + g·x + xᵀAx` with symmetric `A`.
struct Quadratic {
    c: f64,
    g: Vec3,
    a: nalgebra::Matrix3<f64>,
}

impl Quadratic {
    fn eval(&self, x: &Vec3) -> f64 {
        self.c + self.g.dot(x) + x.dot(&(self.a * x))
    }

    /// Exact integral over a tet from `∫λ_i = V/4` and
    /// `∫λ_iλ_j = V(1 + δ_ij)/20`.
    fn tet_integral(&self, t: [Vec3; 4]) -> f64 {
        let vol = ((t[1] - t[0]).dot(&(t[2] - t[0]).cross(&(t[3] - t[0]))) / 6.0).abs();
        let lin: f64 = t.iter().map(|v| self.g.dot(v)).sum::<f64>() / 4.0;
        let mut quad = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                quad += (1.0 + (i == j) as u8 as f64) * t[i].dot(&(self.a * t[j]));
            }
        }
        vol * (self.c + lin + quad / 20.0)
    }
}

/// Exact integral over a convex cell by a fan from vertex 0, a different
/// decomposition from the one used by the quadrature.
fn exact_cell_integral(cell: &Polyhedron, q: &Quadratic) -> f64 {
    let v = cell.vertices();
    let mut total = 0.0;
    for face in cell.faces() {
        if face.contains(&0) {
            continue;
        }
        for i in 1..face.len() - 1 {
            total += q.tet_integral([v[0], v[face[0]], v[face[i]], v[face[i + 1]]]);
        }
    }
    total
}

fn criterion_6() -> (bool, String) {
    let mut r = common::rng(CORPUS_SEED + 6);
    let mut cells: Vec<Polyhedron> = (0..7).map(|_| common::random_prism(&mut r)).collect();
    cells.push(shapes::square_pyramid());
    cells.push(shapes::box_3d(0.3, 0.7, 1.3).unwrap());
    let tet = loop {
        let p: Vec<Vec3> = (0..4)
            .map(|_| Vec3::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
            .collect();
        let vol = (p[1] - p[0]).dot(&(p[2] - p[0]).cross(&(p[3] - p[0]))).abs() / 6.0;
        if vol > 0.05 {
            break Polyhedron::new(p, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
        }
    };
    cells.push(tet);

    let polys: Vec<Quadratic> = (0..20)
        .map(|_| {
            let mut a = nalgebra::Matrix3::from_fn(|_, _| r.gen_range(-1.0..1.0));
            a = (a + a.transpose()) / 2.0;
            Quadratic {
                c: r.gen_range(-1.0..1.0),
                g: Vec3::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)),
                a,
            }
        })
        .collect();
    let mut worst: f64 = 0.0;
    for cell in &cells {
        // relative to the integral, or to the cell volume when the
        // integral happens to be small
        let scale_floor = cell.volume();
        for q in &polys {
            let exact = exact_cell_integral(cell, q);
            let got = integrate_cell(cell, |x| q.eval(x)).unwrap();
            worst = worst.max((got - exact).abs() / exact.abs().max(scale_floor));
        }
    }
    (
        worst < TOL_QUAD,
        format!("max relative error = {worst:.3e} over {} cells × {} polynomials", cells.len(), polys.len()),
    )
}

/// Imposes `g(x) = 1 + 2x − 0.7y + 0.3z` on the boundary by lifting and
/// returns the largest nodal deviation from `g`.
fn patch_error(mesh: &PolyMesh, exec: Execution) -> f64 {
    let g = |p: &Vec3| 1.0 + 2.0 * p.x - 0.7 * p.y + 0.3 * p.z;
    let mut sys = assemble(mesh, &|_| 0.0, exec).unwrap();
    let lift: Vec<f64> = mesh
        .points()
        .iter()
        .zip(&sys.dirichlet)
        .map(|(p, &d)| if d { g(p) } else { 0.0 })
        .collect();
    sys.load = sys.stiffness.mul(&lift).iter().map(|v| -v).collect();
    let sol = solve(&sys, exec).unwrap();
    mesh.points()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let u = if sys.dirichlet[i] { lift[i] } else { sol.nodal[i] };
            (u - g(p)).abs()
        })
        .fold(0.0, f64::max)
}

fn criterion_7(exec: Execution) -> (bool, String) {
    let hex = patch_error(&generate_hex_mesh(2).unwrap(), exec);
    let prism = patch_error(&generate_prism_mesh(1).unwrap(), exec);
    (
        hex < TOL_PATCH && prism < TOL_PATCH,
        format!("max nodal error: hex n=2 {hex:.3e}, prism level 1 {prism:.3e}"),
    )
}

fn criterion_8(exec: Execution) -> (bool, String, Duration) {
    let mut pass = true;
    let mut detail = String::new();
    let mut slowest = Duration::ZERO;
    for (kind, levels) in [(MeshKind::Hex, 1..=4), (MeshKind::Prism, 0..=3)] {
        let t = Instant::now();
        let rows = convergence_study(kind, levels, exec).unwrap();
        slowest = slowest.max(t.elapsed());
        let last = rows.last().unwrap();
        let (l2, h1) = (last.l2_rate.unwrap(), last.h1_rate.unwrap());
        pass &= (L2_WINDOW.0..=L2_WINDOW.1).contains(&l2) && (H1_WINDOW.0..=H1_WINDOW.1).contains(&h1);
        write!(
            detail,
            "{} ({} nodes): L² rate {l2:.4}, H¹ rate {h1:.4}; ",
            last.mesh, last.n_nodes
        )
        .unwrap();
    }
    (pass, detail.trim_end_matches("; ").to_string(), slowest)
}

/// Circumradius from the intersection of two perpendicular bisectors.
fn circumradius_oracle(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    let (na, nb, nc) = (a.norm_squared(), b.norm_squared(), c.norm_squared());
    let ux = (na * (b.y - c.y) + nb * (c.y - a.y) + nc * (a.y - b.y)) / d;
    let uy = (na * (c.x - b.x) + nb * (a.x - c.x) + nc * (b.x - a.x)) / d;
    (Vec2::new(ux, uy) - a).norm()
}

fn criterion_9() -> (bool, String) {
    let mut r = common::rng(CORPUS_SEED + 9);
    let (mut worst, mut above) = (0.0f64, 0);
    let mut count = 0;
    while count < 100 {
        let mut p: Vec<Vec2> = (0..3).map(|_| Vec2::new(r.gen(), r.gen())).collect();
        let cross = (p[1] - p[0]).perp(&(p[2] - p[0]));
        if cross.abs() < 1e-3 {
            continue;
        }
        if cross < 0.0 {
            p.swap(1, 2);
        }
        count += 1;
        let longest = (p[1] - p[0]).norm().max((p[2] - p[1]).norm()).max((p[0] - p[2]).norm());
        let oracle = circumradius_oracle(p[0], p[1], p[2]) / longest;
        let check = match triangle_circumradius_check(&Polygon::new(p).unwrap()) {
            Ok(c) => c,
            Err(_) => {
                above += 1;
                continue;
            }
        };
        worst = worst.max((check.from_h_star - oracle).abs() / oracle);
        if oracle > check.bound {
            above += 1;
        }
    }
    (
        worst < TOL_CIRCUM && above == 0,
        format!("max |r − ℓminℓmed/2h*|/r = {worst:.3e}, bound violations = {above}"),
    )
}

fn run_all(exec: Execution) -> Vec<Outcome> {
    let (polygons, polyhedra) = common::corpus(CORPUS_SEED);
    let corpus = Corpus {
        polygons,
        polyhedra,
    };
    let mut out = Vec::new();
    let mut timed = |id, name, f: &mut dyn FnMut() -> (bool, String)| {
        let t = Instant::now();
        let (pass, detail) = f();
        out.push(Outcome {
            id,
            name,
            pass,
            detail,
            elapsed: t.elapsed(),
        });
    };
    timed(1, "coordinate identities", &mut || criterion_1(&corpus));
    timed(2, "gradient finite differences", &mut || criterion_2(&corpus));
    timed(3, "λ bracket 1/h* ≤ Λ ≤ 2d/h*", &mut || criterion_3(&corpus, exec));
    timed(4, "sharp special cases", &mut criterion_4);
    timed(5, "(1 − μ_f)/h_f ≤ 1/h*", &mut || criterion_5(&corpus));
    timed(6, "quadrature exactness", &mut criterion_6);
    timed(7, "FEM patch test", &mut || criterion_7(exec));
    let mut solve_time = Duration::ZERO;
    timed(8, "convergence rates", &mut || {
        let (pass, detail, slowest) = criterion_8(exec);
        solve_time = slowest;
        (pass, detail)
    });
    timed(9, "triangle circumradius identity", &mut criterion_9);
    // runtime limits only apply to the sequential run
    if exec == Execution::Sequential {
        for o in out.iter_mut() {
            let limit = match o.id {
                1 => Some(RUNTIME_1),
                2 => Some(RUNTIME_2),
                8 => Some(RUNTIME_8),
                _ => None,
            };
            if let Some(limit) = limit {
                let elapsed = if o.id == 8 { solve_time } else { o.elapsed };
                if elapsed > limit {
                    o.pass = false;
                    o.detail.push_str(&format!(" [over time limit {limit:?}]"));
                }
            }
        }
    }
    out
}

fn main() -> ExitCode {
    let first = run_all(Execution::Sequential);
    let second = run_all(Execution::Parallel);
    let mut all_pass = true;
    for o in &first {
        all_pass &= o.pass;
        println!(
            "{} [{:>2}] {}: {} ({:.2?})",
            if o.pass { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.detail,
            o.elapsed
        );
    }
    let mismatched: Vec<u32> = first
        .iter()
        .zip(&second)
        .filter(|(a, b)| a.detail != b.detail || a.pass != b.pass)
        .map(|(a, _)| a.id)
        .collect();
    let det_pass = mismatched.is_empty();
    all_pass &= det_pass;
    println!(
        "{} [10] determinism: sequential and parallel reruns of 1–9 {}",
        if det_pass { "PASS" } else { "FAIL" },
        if det_pass {
            "are identical".to_string()
        } else {
            format!("differ in {mismatched:?}")
        }
    );
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
