//! Convex polytope representation and face-plane geometry.

mod polygon;
mod polyhedron;

pub use polygon::{outward_normals_2d, validate_polygon, Polygon};
pub use polyhedron::{validate_polyhedron, Polyhedron};

use nalgebra::SVector;
use serde::Serialize;

use crate::basis::BasisEval;
use crate::{Error, Result, Vec2};

/// Relative tolerance for identities that should hold to rounding error.
pub const TOL_REL: f64 = 1e-12;

/// Scale-aware validation tolerances for a polytope of diameter `diam`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub planar: f64,
    pub side: f64,
    pub convex: f64,
    pub length: f64,
    pub interior: f64,
}

impl Tolerances {
    pub fn for_diameter(diam: f64) -> Self {
        Tolerances {
            planar: 1e-9 * diam,
            side: 1e-9 * diam,
            convex: 1e-12 * diam * diam,
            length: 1e-9 * diam,
            interior: 1e-12 * diam,
        }
    }
}

/// Hyperplane of a face: outward unit normal plus one point on the face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FacePlane<const D: usize> {
    pub unit_normal: SVector<f64, D>,
    pub anchor: SVector<f64, D>,
}

impl<const D: usize> FacePlane<D> {
    /// Signed distance `(anchor − x) · n`; positive on the inner side.
    #[inline]
    pub fn h_f(&self, x: &SVector<f64, D>) -> f64 {
        (self.anchor - x).dot(&self.unit_normal)
    }
}

/// Something that failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Offender {
    TooFewVertices,
    IndexOutOfRange { face: usize, index: usize },
    DegenerateEdge { edge: usize },
    DegenerateFace { face: usize },
    NonPlanarFace { face: usize },
    Reflex { vertex: usize },
    SideViolation { face: usize, vertex: usize },
    UnpairedEdge { from: usize, to: usize },
    UnusedVertex { vertex: usize },
    BrokenVertexCycle { vertex: usize },
    NonSimpleVertex { vertex: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub is_convex: bool,
    pub is_simple: bool,
    pub worst_planarity: f64,
    pub worst_side_violation: f64,
    pub offending_entities: Vec<Offender>,
}

/// Common surface of [`Polygon`] (`D = 2`) and [`Polyhedron`] (`D = 3`).
///
/// Faces are edges for polygons: face `i` joins vertices `i` and `i + 1`.
pub trait Polytope<const D: usize>: Sync {
    fn vertices(&self) -> &[SVector<f64, D>];
    fn planes(&self) -> &[FacePlane<D>];
    /// Vertex indices of face `f`.
    fn face_vertices(&self, f: usize) -> &[usize];
    fn diameter(&self) -> f64;
    fn tolerances(&self) -> Tolerances;
    /// Strictly interior reference point (vertex average).
    fn centroid(&self) -> SVector<f64, D>;
    /// Number of faces incident to vertex `v`.
    fn valence(&self, v: usize) -> usize;

    /// Wachspress coordinates and gradients at a strictly interior point.
    fn evaluate(&self, x: &SVector<f64, D>) -> Result<BasisEval<D>>;

    /// Closed-form `λ(v)` at a simple vertex.
    fn vertex_lambda(&self, v: usize) -> Result<f64>;

    fn as_polygon(&self) -> Option<&Polygon> {
        None
    }

    fn n_vertices(&self) -> usize {
        self.vertices().len()
    }

    fn n_faces(&self) -> usize {
        self.planes().len()
    }

    fn is_simple_vertex(&self, v: usize) -> bool {
        self.valence(v) == D
    }

    fn is_simple(&self) -> bool {
        (0..self.n_vertices()).all(|v| self.is_simple_vertex(v))
    }

    fn h_f(&self, f: usize, x: &SVector<f64, D>) -> f64 {
        self.planes()[f].h_f(x)
    }

    /// Smallest face distance of `x`; positive iff `x` is inside.
    fn min_face_distance(&self, x: &SVector<f64, D>) -> f64 {
        self.planes()
            .iter()
            .map(|p| p.h_f(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// `h* = min_f min_{u ∉ f} h_f(u)`.
    fn h_star(&self) -> f64 {
        let verts = self.vertices();
        let mut best = f64::INFINITY;
        for (f, plane) in self.planes().iter().enumerate() {
            let on_face = self.face_vertices(f);
            for (u, x) in verts.iter().enumerate() {
                if !on_face.contains(&u) {
                    best = best.min(plane.h_f(x));
                }
            }
        }
        best
    }

    /// Axis-aligned bounding box `(min, max)`.
    fn bounding_box(&self) -> (SVector<f64, D>, SVector<f64, D>) {
        let verts = self.vertices();
        let mut lo = verts[0];
        let mut hi = verts[0];
        for v in &verts[1..] {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }
}

pub(crate) fn diameter_of<const D: usize>(points: &[SVector<f64, D>]) -> f64 {
    let mut d2: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            d2 = d2.max((a - b).norm_squared());
        }
    }
    d2.sqrt()
}

pub(crate) fn vertex_average<const D: usize>(points: &[SVector<f64, D>]) -> SVector<f64, D> {
    points.iter().sum::<SVector<f64, D>>() / points.len() as f64
}

/// Circumradius diagnostic for a triangle rescaled to unit longest edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircumradiusCheck {
    /// Circumradius from the classical `abc / 4A` construction.
    pub r_circ: f64,
    /// `ℓ_min ℓ_med / (2 h*)`.
    pub from_h_star: f64,
    /// `1 / (2 h*)`.
    pub bound: f64,
    pub h_star: f64,
}

/// Relative tolerance used to confirm `r_circ = ℓ_min ℓ_med / (2 h*)`.
pub const CIRCUMRADIUS_TOL: f64 = 1e-10;

/// Rescales `t` so its longest edge is 1 and relates its circumradius to
/// `h*`. Errors if the two routes disagree beyond [`CIRCUMRADIUS_TOL`].
pub fn triangle_circumradius_check(t: &Polygon) -> Result<CircumradiusCheck> {
    if t.n_vertices() != 3 {
        return Err(Error::DegenerateGeometry(format!(
            "expected a triangle, got {} vertices",
            t.n_vertices()
        )));
    }
    let v = t.vertices();
    let mut lengths = [
        (v[1] - v[0]).norm(),
        (v[2] - v[1]).norm(),
        (v[0] - v[2]).norm(),
    ];
    lengths.sort_by(f64::total_cmp);
    let longest = lengths[2];
    let scaled: Vec<Vec2> = v.iter().map(|p| p / longest).collect();
    let t = Polygon::new(scaled)?;
    let [l_min, l_med, _] = lengths.map(|l| l / longest);

    let s = t.vertices();
    let area = 0.5 * cross2(&(s[1] - s[0]), &(s[2] - s[0]));
    let r_circ = l_min * l_med / (4.0 * area);
    let h_star = t.h_star();
    let from_h_star = l_min * l_med / (2.0 * h_star);
    if (r_circ - from_h_star).abs() > CIRCUMRADIUS_TOL * r_circ {
        return Err(Error::Invariant(format!(
            "circumradius {r_circ} disagrees with l_min l_med / 2h* = {from_h_star}"
        )));
    }
    Ok(CircumradiusCheck {
        r_circ,
        from_h_star,
        bound: 0.5 / h_star,
        h_star,
    })
}

#[inline]
pub(crate) fn cross2(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}
