use super::{
    cross2, diameter_of, vertex_average, ConvexityReport, FacePlane, Offender, Polytope, Tolerances,
};
use crate::basis::{self, BasisEval};
use crate::{bounds, Error, Result, Vec2};

/// Strictly convex polygon with counter-clockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Vec2>,
    edges: Vec<[usize; 2]>,
    planes: Vec<FacePlane<2>>,
    diam: f64,
}

impl Polygon {
    pub fn new(vertices: Vec<Vec2>) -> Result<Self> {
        let report = validate_polygon(&vertices);
        if let Some(off) = report.offending_entities.first() {
            return Err(match *off {
                Offender::TooFewVertices => Error::DegenerateGeometry(format!(
                    "polygon needs at least 3 vertices, got {}",
                    vertices.len()
                )),
                Offender::DegenerateEdge { edge } => {
                    Error::DegenerateGeometry(format!("edge {edge} has (near) zero length"))
                }
                Offender::Reflex { vertex } => Error::not_convex(format!(
                    "polygon is not strictly convex and counter-clockwise at vertex {vertex}"
                )),
                other => Error::not_convex(format!("{other:?}")),
            });
        }
        let n = vertices.len();
        let edges: Vec<[usize; 2]> = (0..n).map(|i| [i, (i + 1) % n]).collect();
        let planes = outward_normals_2d(&vertices)?
            .into_iter()
            .zip(&vertices)
            .map(|(unit_normal, &anchor)| FacePlane {
                unit_normal,
                anchor,
            })
            .collect();
        let diam = diameter_of(&vertices);
        Ok(Polygon {
            vertices,
            edges,
            planes,
            diam,
        })
    }

    /// Edge vector `e_i = v_{i+1} − v_i`.
    pub fn edge(&self, i: usize) -> Vec2 {
        let n = self.vertices.len();
        self.vertices[(i + 1) % n] - self.vertices[i % n]
    }

    /// Interior angle at vertex `i`, in `(0, π)`.
    pub fn interior_angle(&self, i: usize) -> f64 {
        let n = self.vertices.len();
        let prev = self.edge((i + n - 1) % n);
        let next = self.edge(i);
        // angle between −e_{i−1} and e_i
        let a = -prev;
        cross2(&next, &a).atan2(next.dot(&a))
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        0.5 * (0..n)
            .map(|i| cross2(&self.vertices[i], &self.vertices[(i + 1) % n]))
            .sum::<f64>()
    }

    /// Applies `x ↦ s·x + t`.
    pub fn scaled_translated(&self, s: f64, t: Vec2) -> Result<Polygon> {
        Polygon::new(self.vertices.iter().map(|v| v * s + t).collect())
    }
}

/// Outward unit normals of the edges `[v_i, v_{i+1}]` of a counter-clockwise
/// loop.
pub fn outward_normals_2d(vertices: &[Vec2]) -> Result<Vec<Vec2>> {
    let n = vertices.len();
    let tol = Tolerances::for_diameter(diameter_of(vertices));
    (0..n)
        .map(|i| {
            let d = vertices[(i + 1) % n] - vertices[i];
            let len = d.norm();
            if !(len > tol.length) {
                return Err(Error::DegenerateGeometry(format!(
                    "edge {i} has (near) zero length"
                )));
            }
            Ok(Vec2::new(d.y, -d.x) / len)
        })
        .collect()
}

/// Checks the counter-clockwise strict-convexity invariants.
pub fn validate_polygon(vertices: &[Vec2]) -> ConvexityReport {
    let n = vertices.len();
    let mut offending = Vec::new();
    if n < 3 {
        offending.push(Offender::TooFewVertices);
        return ConvexityReport {
            is_convex: false,
            is_simple: false,
            worst_planarity: 0.0,
            worst_side_violation: 0.0,
            offending_entities: offending,
        };
    }
    let tol = Tolerances::for_diameter(diameter_of(vertices));
    let edge = |i: usize| vertices[(i + 1) % n] - vertices[i % n];
    for i in 0..n {
        if !(edge(i).norm() > tol.length) {
            offending.push(Offender::DegenerateEdge { edge: i });
        }
    }
    for i in 0..n {
        if !(cross2(&edge(i + n - 1), &edge(i)) > tol.convex) {
            offending.push(Offender::Reflex { vertex: i });
        }
    }
    // Every vertex must lie on the inner side of every edge line; a loop can
    // turn left at each vertex and still wind more than once.
    let mut worst_side: f64 = 0.0;
    if offending.is_empty() {
        for i in 0..n {
            let e = edge(i);
            let nrm = Vec2::new(e.y, -e.x) / e.norm();
            for u in 0..n {
                if u == i || u == (i + 1) % n {
                    continue;
                }
                let h = (vertices[i] - vertices[u]).dot(&nrm);
                worst_side = worst_side.max(-h);
                if !(h > tol.side) {
                    offending.push(Offender::SideViolation { face: i, vertex: u });
                }
            }
        }
    }
    let is_convex = offending.is_empty();
    ConvexityReport {
        is_convex,
        is_simple: is_convex,
        worst_planarity: 0.0,
        worst_side_violation: worst_side,
        offending_entities: offending,
    }
}

impl Polytope<2> for Polygon {
    fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    fn planes(&self) -> &[FacePlane<2>] {
        &self.planes
    }

    fn face_vertices(&self, f: usize) -> &[usize] {
        &self.edges[f]
    }

    fn diameter(&self) -> f64 {
        self.diam
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances::for_diameter(self.diam)
    }

    fn centroid(&self) -> Vec2 {
        vertex_average(&self.vertices)
    }

    fn valence(&self, _v: usize) -> usize {
        2
    }

    fn evaluate(&self, x: &Vec2) -> Result<BasisEval<2>> {
        basis::wachspress_2d(self, x)
    }

    fn vertex_lambda(&self, v: usize) -> Result<f64> {
        bounds::lambda_at_vertex_2d(self, v)
    }

    fn as_polygon(&self) -> Option<&Polygon> {
        Some(self)
    }
}
