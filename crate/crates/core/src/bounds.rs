//! Gradient sums `λ(x) = Σ_v |∇φ_v(x)|`, estimates of `Λ = sup λ`, and the
//! closed-form bounds that bracket `Λ` in terms of `h*`.

use std::f64::consts::PI;

use nalgebra::SVector;
use serde::Serialize;

use crate::geometry::{cross2, Polygon, Polyhedron, Polytope, TOL_REL};
use crate::sampling;
use crate::{Error, Execution, Result};

/// Shape classes with a sharper bound than `2d / h*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeTag {
    Simplex,
    HyperRectangle,
    RegularNgon,
    /// Not a `Λ` bound: the value bounds each individual `|∇φ_v|` from the
    /// minimum edge length and the extreme interior angles.
    PolygonAngle,
}

impl ShapeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ShapeTag::Simplex => "simplex",
            ShapeTag::HyperRectangle => "hyper-rectangle",
            ShapeTag::RegularNgon => "regular-n-gon",
            ShapeTag::PolygonAngle => "polygon-angle",
        }
    }
}

/// Result of [`estimate_lambda_sup`]; every `λ`-valued field has units of
/// 1/length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub dim: usize,
    pub n_vertices: usize,
    pub n_faces: usize,
    pub samples: usize,
    pub seed: u64,
    pub h_star: f64,
    /// Max of `λ` over interior Halton samples and near-vertex probes.
    pub lambda_max_sampled: f64,
    /// Max of the closed-form `λ(v)` over simple vertices.
    pub lambda_vertex_max: Option<f64>,
    /// Vertices without a closed-form `λ(v)` (more than `d` faces).
    pub non_simple_vertices: Vec<usize>,
    /// `1 / h*`.
    pub lower_bound_general: f64,
    /// `2d / h*`.
    pub upper_bound_general: f64,
    pub special_shape: Option<ShapeTag>,
    pub special_lower: Option<f64>,
    pub special_upper: Option<f64>,
}

impl BoundReport {
    /// Best certified lower estimate of `Λ` from the evaluated points.
    pub fn lambda_estimate(&self) -> f64 {
        self.lambda_vertex_max
            .map_or(self.lambda_max_sampled, |v| v.max(self.lambda_max_sampled))
    }

    /// Flat key/value view for CSV-style output.
    pub fn to_record(&self) -> Vec<(&'static str, String)> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        vec![
            ("dim", self.dim.to_string()),
            ("n_vertices", self.n_vertices.to_string()),
            ("n_faces", self.n_faces.to_string()),
            ("samples", self.samples.to_string()),
            ("seed", self.seed.to_string()),
            ("h_star", self.h_star.to_string()),
            ("lambda_max_sampled", self.lambda_max_sampled.to_string()),
            ("lambda_vertex_max", opt(self.lambda_vertex_max)),
            (
                "non_simple_vertices",
                self.non_simple_vertices
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
            ),
            ("lower_bound_general", self.lower_bound_general.to_string()),
            ("upper_bound_general", self.upper_bound_general.to_string()),
            (
                "special_shape",
                self.special_shape
                    .map(|s| s.as_str().to_string())
                    .unwrap_or_default(),
            ),
            ("special_lower", opt(self.special_lower)),
            ("special_upper", opt(self.special_upper)),
        ]
    }
}

/// `λ(x) = Σ_v |∇φ_v(x)|`.
pub fn lambda_at<const D: usize, P: Polytope<D> + ?Sized>(
    poly: &P,
    x: &SVector<f64, D>,
) -> Result<f64> {
    Ok(poly.evaluate(x)?.lambda())
}

/// Limit of `λ` at polygon vertex `i`:
/// `(|e_i| + |e_i + e_{i−1}| + |e_{i−1}|) / (e_{i−1} × e_i)`.
pub fn lambda_at_vertex_2d(poly: &Polygon, i: usize) -> Result<f64> {
    let n = poly.n_vertices();
    let prev = poly.edge((i + n - 1) % n);
    let next = poly.edge(i);
    let cross = cross2(&prev, &next);
    if !(cross > poly.tolerances().convex) {
        return Err(Error::DegenerateGeometry(format!(
            "edges at vertex {i} are collinear"
        )));
    }
    Ok((next.norm() + (next + prev).norm() + prev.norm()) / cross)
}

/// Limit of `λ` at a simple polyhedron vertex, from the edge vectors
/// `e_i = w_i − v` to its three neighbours.
pub fn lambda_at_vertex_3d(poly: &Polyhedron, v: usize) -> Result<f64> {
    let valence = poly.valence(v);
    if valence != 3 {
        return Err(Error::NonSimpleVertex { vertex: v, valence });
    }
    let x = poly.vertices()[v];
    let nb = poly.neighbors(v);
    let [e1, e2, e3] = [0, 1, 2].map(|k| poly.vertices()[nb[k]] - x);
    let det = e1.dot(&e2.cross(&e3));
    let scale = e1.norm() * e2.norm() * e3.norm();
    if !(det.abs() > 1e-12 * scale) {
        return Err(Error::DegenerateGeometry(format!(
            "edges at vertex {v} are coplanar"
        )));
    }
    let (c23, c31, c12) = (e2.cross(&e3), e3.cross(&e1), e1.cross(&e2));
    Ok(((c23 + c31 + c12).norm() + c23.norm() + c31.norm() + c12.norm()) / det.abs())
}

/// `2d / h*`, valid for every simple convex polytope.
pub fn bound_general(d: usize, h_star: f64) -> Result<f64> {
    check_dim_h(d, h_star)?;
    Ok(2.0 * d as f64 / h_star)
}

/// `(d + 1) / h*`, attained by the regular simplex.
pub fn bound_simplex(d: usize, h_star: f64) -> Result<f64> {
    check_dim_h(d, h_star)?;
    Ok((d + 1) as f64 / h_star)
}

fn check_dim_h(d: usize, h_star: f64) -> Result<()> {
    if d < 1 {
        return Err(Error::DomainError("dimension must be at least 1".into()));
    }
    if !(h_star > 0.0) || !h_star.is_finite() {
        return Err(Error::DomainError(format!(
            "h* must be positive and finite, got {h_star}"
        )));
    }
    Ok(())
}

/// Exact `Λ = (Σ 1/h_i²)^{1/2} + Σ 1/h_i` of a box with the given side
/// lengths, and its `h* = min h_i`.
pub fn bound_hyper_rectangle(side_lengths: &[f64]) -> Result<(f64, f64)> {
    if side_lengths.is_empty() || side_lengths.iter().any(|&h| !(h > 0.0) || !h.is_finite()) {
        return Err(Error::DomainError(
            "hyper-rectangle sides must be positive".into(),
        ));
    }
    let d = side_lengths.len() as f64;
    let inv_sq: f64 = side_lengths.iter().map(|h| 1.0 / (h * h)).sum();
    let inv: f64 = side_lengths.iter().map(|h| 1.0 / h).sum();
    let lambda = inv_sq.sqrt() + inv;
    let h_star = side_lengths.iter().copied().fold(f64::INFINITY, f64::min);
    let cap = (d.sqrt() + d) / h_star;
    if lambda > cap * (1.0 + TOL_REL) {
        return Err(Error::Invariant(format!(
            "box Λ = {lambda} exceeds (√d + d)/h* = {cap}"
        )));
    }
    Ok((lambda, h_star))
}

/// Closed forms for the regular `n`-gon inscribed in the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NgonReference {
    pub n: usize,
    /// `4 sin²(π/n) cos(π/n)`.
    pub h_star: f64,
    /// `λ` at a vertex: `(1 + cos(π/n)) / (2 sin²(π/n) cos(π/n))`.
    pub lambda_vertex: f64,
    /// `2(1 + cos(π/n)) / h*`.
    pub lower_bound: f64,
    /// `4 / h*`.
    pub upper_bound: f64,
}

pub fn regular_ngon_reference(n: usize) -> Result<NgonReference> {
    if n < 3 {
        return Err(Error::DomainError(format!("n-gon needs n >= 3, got {n}")));
    }
    let t = PI / n as f64;
    let (s, c) = t.sin_cos();
    let h_star = 4.0 * s * s * c;
    Ok(NgonReference {
        n,
        h_star,
        lambda_vertex: (1.0 + c) / (2.0 * s * s * c),
        lower_bound: 2.0 * (1.0 + c) / h_star,
        upper_bound: 4.0 / h_star,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleBound {
    /// Minimum edge length.
    pub d_min: f64,
    pub beta_min: f64,
    pub beta_max: f64,
    /// `4 / (d_min sin β_min sin β_max)`, a bound on every `|∇φ_v|`.
    pub bound: f64,
}

pub fn polygon_angle_bound(poly: &Polygon) -> Result<AngleBound> {
    let n = poly.n_vertices();
    let d_min = (0..n)
        .map(|i| poly.edge(i).norm())
        .fold(f64::INFINITY, f64::min);
    let mut beta_min = f64::INFINITY;
    let mut beta_max = f64::NEG_INFINITY;
    for i in 0..n {
        let b = poly.interior_angle(i);
        if b < beta_min {
            beta_min = b;
        }
        if b > beta_max {
            beta_max = b;
        }
    }
    let denom = d_min * beta_min.sin() * beta_max.sin();
    if !(denom > 0.0) || !(beta_max < PI) {
        return Err(Error::DegenerateGeometry(
            "polygon has a zero edge or a straight angle".into(),
        ));
    }
    let h_star = poly.h_star();
    if h_star < denom * (1.0 - 1e-12) {
        return Err(Error::Invariant(format!(
            "h* = {h_star} below d_min sin β_min sin β_max = {denom}"
        )));
    }
    Ok(AngleBound {
        d_min,
        beta_min,
        beta_max,
        bound: 4.0 / denom,
    })
}

/// Distance from each vertex, as a fraction of the diameter, of the
/// near-vertex probes used by [`estimate_lambda_sup`].
pub const VERTEX_PROBE_OFFSET: f64 = 1e-6;

/// Point at distance `delta` from vertex `v` towards the centroid.
pub fn near_vertex_point<const D: usize, P: Polytope<D> + ?Sized>(
    poly: &P,
    v: usize,
    delta: f64,
) -> SVector<f64, D> {
    let x = poly.vertices()[v];
    let dir = (poly.centroid() - x).normalize();
    x + dir * delta
}

/// Brackets `Λ` for a validated polytope.
///
/// `λ` is evaluated at `budget` interior Halton points (seeded by `seed`) and
/// at one probe per vertex, `VERTEX_PROBE_OFFSET · diam` inside along the
/// vertex-to-centroid direction. Closed-form vertex values are added for
/// simple vertices. The special-case bound is filled when the shape is a
/// simplex, a box, or a regular polygon (detected to 1e−9 relative); other
/// polygons get the angle-based gradient bound.
pub fn estimate_lambda_sup<const D: usize, P: Polytope<D> + ?Sized>(
    poly: &P,
    budget: usize,
    seed: u64,
    exec: Execution,
) -> Result<BoundReport> {
    let diam = poly.diameter();
    let h_star = poly.h_star();
    if !(h_star > 0.0) {
        return Err(Error::not_convex(format!("h* = {h_star} is not positive")));
    }
    let mut points = sampling::interior_points(poly, budget, seed, 1e-9 * diam)?;
    let nv = poly.n_vertices();
    points.extend((0..nv).map(|v| near_vertex_point(poly, v, VERTEX_PROBE_OFFSET * diam)));

    let lambdas = exec.try_map(points.len(), |i| lambda_at(poly, &points[i]))?;
    let lambda_max_sampled = lambdas.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut lambda_vertex_max: Option<f64> = None;
    let mut non_simple_vertices = Vec::new();
    for v in 0..nv {
        if poly.is_simple_vertex(v) {
            let lv = poly.vertex_lambda(v)?;
            lambda_vertex_max = Some(lambda_vertex_max.map_or(lv, |m: f64| m.max(lv)));
        } else {
            non_simple_vertices.push(v);
        }
    }

    let (special_shape, special_lower, special_upper) = special_bound(poly, h_star)?;
    Ok(BoundReport {
        dim: D,
        n_vertices: nv,
        n_faces: poly.n_faces(),
        samples: budget,
        seed,
        h_star,
        lambda_max_sampled,
        lambda_vertex_max,
        non_simple_vertices,
        lower_bound_general: 1.0 / h_star,
        upper_bound_general: bound_general(D, h_star)?,
        special_shape,
        special_lower,
        special_upper,
    })
}

type Special = (Option<ShapeTag>, Option<f64>, Option<f64>);

fn special_bound<const D: usize, P: Polytope<D> + ?Sized>(poly: &P, h_star: f64) -> Result<Special> {
    let nv = poly.n_vertices();
    if nv == D + 1 {
        // gradients are constant: Λ = Σ_v 1 / h_{f(v)}(v), f(v) opposite v
        let mut exact = 0.0;
        for v in 0..nv {
            let f = (0..poly.n_faces())
                .find(|&f| !poly.face_vertices(f).contains(&v))
                .ok_or_else(|| Error::Invariant("simplex vertex without opposite face".into()))?;
            exact += 1.0 / poly.h_f(f, &poly.vertices()[v]);
        }
        return Ok((
            Some(ShapeTag::Simplex),
            Some(exact),
            Some(bound_simplex(D, h_star)?),
        ));
    }
    if let Some(sides) = box_sides(poly) {
        let (lambda, _) = bound_hyper_rectangle(&sides)?;
        return Ok((Some(ShapeTag::HyperRectangle), Some(lambda), Some(lambda)));
    }
    if let Some(polygon) = poly.as_polygon() {
        if is_regular_polygon(polygon) {
            let n = nv as f64;
            return Ok((
                Some(ShapeTag::RegularNgon),
                Some(2.0 * (1.0 + (PI / n).cos()) / h_star),
                Some(4.0 / h_star),
            ));
        }
        let angle = polygon_angle_bound(polygon)?;
        return Ok((Some(ShapeTag::PolygonAngle), None, Some(angle.bound)));
    }
    Ok((None, None, None))
}

const SHAPE_DETECT_TOL: f64 = 1e-9;

/// Side lengths if `poly` is a (possibly rotated) box.
fn box_sides<const D: usize, P: Polytope<D> + ?Sized>(poly: &P) -> Option<Vec<f64>> {
    if poly.n_vertices() != 1 << D || poly.n_faces() != 2 * D {
        return None;
    }
    let planes = poly.planes();
    let mut sides = Vec::with_capacity(D);
    let mut paired = vec![false; planes.len()];
    for f in 0..planes.len() {
        for g in 0..planes.len() {
            if f == g {
                continue;
            }
            let dot = planes[f].unit_normal.dot(&planes[g].unit_normal);
            let parallel = (dot + 1.0).abs() < SHAPE_DETECT_TOL;
            if !parallel && dot.abs() > SHAPE_DETECT_TOL {
                return None;
            }
            if parallel && !paired[f] {
                paired[f] = true;
                paired[g] = true;
                sides.push(planes[f].h_f(&planes[g].anchor));
            }
        }
    }
    (sides.len() == D).then_some(sides)
}

fn is_regular_polygon(p: &Polygon) -> bool {
    let c = p.centroid();
    let r0 = (p.vertices()[0] - c).norm();
    let e0 = p.edge(0).norm();
    let n = p.n_vertices();
    (0..n).all(|i| {
        ((p.vertices()[i] - c).norm() - r0).abs() <= SHAPE_DETECT_TOL * r0
            && (p.edge(i).norm() - e0).abs() <= SHAPE_DETECT_TOL * e0
    })
}
