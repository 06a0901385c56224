use std::collections::BTreeMap;

use super::{
    diameter_of, vertex_average, ConvexityReport, FacePlane, Offender, Polytope, Tolerances,
};
use crate::basis::{self, BasisEval};
use crate::{bounds, Error, Result, Vec3};

/// Strictly convex polyhedron.
///
/// Face loops are stored counter-clockwise as seen from outside, whatever
/// orientation they were supplied in. `vertex_faces[v]` lists the faces
/// around `v` as a cycle in which consecutive faces share an edge through
/// `v`, oriented so the Wachspress weight of `v` is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedron {
    vertices: Vec<Vec3>,
    faces: Vec<Vec<usize>>,
    planes: Vec<FacePlane<3>>,
    vertex_faces: Vec<Vec<usize>>,
    diam: f64,
}

struct Analysis {
    faces: Vec<Vec<usize>>,
    planes: Vec<FacePlane<3>>,
    vertex_faces: Vec<Vec<usize>>,
    face_planarity: Vec<f64>,
    report: ConvexityReport,
}

/// Newell normal of a loop (length = twice the loop's vector area).
fn newell(vertices: &[Vec3], face: &[usize]) -> Vec3 {
    let mut n = Vec3::zeros();
    for (k, &i) in face.iter().enumerate() {
        let a = vertices[i];
        let b = vertices[face[(k + 1) % face.len()]];
        n.x += (a.y - b.y) * (a.z + b.z);
        n.y += (a.z - b.z) * (a.x + b.x);
        n.z += (a.x - b.x) * (a.y + b.y);
    }
    n
}

fn analyze(vertices: &[Vec3], faces: &[Vec<usize>]) -> Analysis {
    let nv = vertices.len();
    let mut offending = Vec::new();
    let mut report = ConvexityReport {
        is_convex: false,
        is_simple: false,
        worst_planarity: 0.0,
        worst_side_violation: 0.0,
        offending_entities: Vec::new(),
    };
    let empty = |report: ConvexityReport| Analysis {
        faces: Vec::new(),
        planes: Vec::new(),
        vertex_faces: Vec::new(),
        face_planarity: Vec::new(),
        report,
    };

    if nv < 4 || faces.len() < 4 {
        report.offending_entities.push(Offender::TooFewVertices);
        return empty(report);
    }
    for (f, face) in faces.iter().enumerate() {
        if face.len() < 3 {
            offending.push(Offender::DegenerateFace { face: f });
        }
        for &i in face {
            if i >= nv {
                offending.push(Offender::IndexOutOfRange { face: f, index: i });
            }
        }
        let mut sorted = face.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            offending.push(Offender::DegenerateFace { face: f });
        }
    }
    if !offending.is_empty() {
        report.offending_entities = offending;
        return empty(report);
    }

    let diam = diameter_of(vertices);
    let tol = Tolerances::for_diameter(diam);
    let centroid = vertex_average(vertices);

    let mut oriented = Vec::with_capacity(faces.len());
    let mut planes = Vec::with_capacity(faces.len());
    let mut face_planarity = Vec::with_capacity(faces.len());
    for (f, face) in faces.iter().enumerate() {
        let n = newell(vertices, face);
        let len = n.norm();
        if !(len > tol.convex) {
            offending.push(Offender::DegenerateFace { face: f });
        }
        let mut loop_ = face.clone();
        let mut normal = if len > 0.0 { n / len } else { Vec3::z() };
        if (vertices[loop_[0]] - centroid).dot(&normal) < 0.0 {
            loop_.reverse();
            normal = -normal;
        }
        let anchor = vertices[loop_[0]];
        let plane = FacePlane {
            unit_normal: normal,
            anchor,
        };
        let dev = loop_
            .iter()
            .map(|&i| plane.h_f(&vertices[i]).abs())
            .fold(0.0, f64::max);
        if dev > tol.planar {
            offending.push(Offender::NonPlanarFace { face: f });
        }
        report.worst_planarity = report.worst_planarity.max(dev);
        face_planarity.push(dev);
        oriented.push(loop_);
        planes.push(plane);
    }

    // closed, consistently oriented surface
    let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for face in &oriented {
        for k in 0..face.len() {
            *directed
                .entry((face[k], face[(k + 1) % face.len()]))
                .or_default() += 1;
        }
    }
    for (&(a, b), &count) in &directed {
        if count != 1 || directed.get(&(b, a)) != Some(&1) {
            offending.push(Offender::UnpairedEdge { from: a, to: b });
        }
    }

    let mut used = vec![false; nv];
    for face in &oriented {
        for &i in face {
            used[i] = true;
        }
    }
    for (v, &u) in used.iter().enumerate() {
        if !u {
            offending.push(Offender::UnusedVertex { vertex: v });
        }
    }

    // strict convexity
    let mut worst_side: f64 = 0.0;
    for (f, plane) in planes.iter().enumerate() {
        for (v, x) in vertices.iter().enumerate() {
            if oriented[f].contains(&v) {
                continue;
            }
            let h = plane.h_f(x);
            worst_side = worst_side.max(-h);
            if !(h > tol.side) {
                offending.push(Offender::SideViolation { face: f, vertex: v });
            }
        }
    }
    report.worst_side_violation = worst_side;

    let mut vertex_faces = Vec::new();
    if offending.is_empty() {
        match order_cycles(vertices, &oriented, &planes, &centroid) {
            Ok(cycles) => vertex_faces = cycles,
            Err(v) => offending.push(Offender::BrokenVertexCycle { vertex: v }),
        }
    }

    report.is_convex = offending.is_empty();
    if report.is_convex {
        for (v, cycle) in vertex_faces.iter().enumerate() {
            if cycle.len() != 3 {
                offending.push(Offender::NonSimpleVertex { vertex: v });
            }
        }
        report.is_simple = vertex_faces.iter().all(|c| c.len() == 3);
    }
    report.offending_entities = offending;
    Analysis {
        faces: oriented,
        planes,
        vertex_faces,
        face_planarity,
        report,
    }
}

/// Fan-summed Wachspress weight of a vertex with incident-face cycle `cycle`.
pub(crate) fn fan_weight(cycle: &[usize], p: &[Vec3]) -> f64 {
    let k = cycle.len();
    let last = p[cycle[k - 1]];
    (0..k - 2)
        .map(|j| p[cycle[j]].dot(&p[cycle[j + 1]].cross(&last)))
        .sum()
}

/// Walks shared edges around every vertex. On failure returns the first
/// vertex whose incident faces do not form a single cycle.
fn order_cycles(
    vertices: &[Vec3],
    faces: &[Vec<usize>],
    planes: &[FacePlane<3>],
    centroid: &Vec3,
) -> std::result::Result<Vec<Vec<usize>>, usize> {
    let nv = vertices.len();
    // (face, prev vertex, next vertex) for each incidence
    let mut incident: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); nv];
    for (f, face) in faces.iter().enumerate() {
        let m = face.len();
        for k in 0..m {
            incident[face[k]].push((f, face[(k + m - 1) % m], face[(k + 1) % m]));
        }
    }
    let p: Vec<Vec3> = planes
        .iter()
        .map(|pl| pl.unit_normal / pl.h_f(centroid))
        .collect();

    let mut cycles = Vec::with_capacity(nv);
    for (v, inc) in incident.iter().enumerate() {
        if inc.len() < 3 {
            return Err(v);
        }
        let mut cycle = vec![inc[0].0];
        let mut next_vertex = inc[0].2;
        loop {
            // the face that enters v along the edge we just left by
            let Some(&(g, _, nxt)) = inc.iter().find(|(_, prev, _)| *prev == next_vertex) else {
                return Err(v);
            };
            if g == cycle[0] {
                break;
            }
            if cycle.len() >= inc.len() {
                return Err(v);
            }
            cycle.push(g);
            next_vertex = nxt;
        }
        if cycle.len() != inc.len() {
            return Err(v);
        }
        if fan_weight(&cycle, &p) < 0.0 {
            cycle[1..].reverse();
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

impl Polyhedron {
    /// Validates and builds a polyhedron from vertices and face loops.
    ///
    /// Loops may be given in either orientation; each is reoriented to be
    /// counter-clockwise from outside. Non-simple vertices are accepted.
    pub fn new(vertices: Vec<Vec3>, faces: Vec<Vec<usize>>) -> Result<Self> {
        let a = analyze(&vertices, &faces);
        let first = a
            .report
            .offending_entities
            .iter()
            .find(|o| !matches!(o, Offender::NonSimpleVertex { .. }));
        if let Some(&off) = first {
            return Err(match off {
                Offender::TooFewVertices => Error::DegenerateGeometry(
                    "a polyhedron needs at least 4 vertices and 4 faces".into(),
                ),
                Offender::DegenerateFace { face } => {
                    Error::DegenerateGeometry(format!("face {face} is degenerate"))
                }
                Offender::NonPlanarFace { face } => Error::NonPlanarFace {
                    face,
                    deviation: a.face_planarity[face],
                },
                Offender::SideViolation { face, vertex } => Error::not_convex(format!(
                    "vertex {vertex} is not strictly inside the plane of face {face}"
                )),
                Offender::IndexOutOfRange { face, index } => Error::BadTopology(format!(
                    "face {face} references missing vertex {index}"
                )),
                Offender::UnpairedEdge { from, to } => Error::BadTopology(format!(
                    "edge {from}->{to} is not shared by exactly two oppositely oriented faces"
                )),
                Offender::UnusedVertex { vertex } => {
                    Error::BadTopology(format!("vertex {vertex} belongs to no face"))
                }
                Offender::BrokenVertexCycle { vertex } => Error::BadTopology(format!(
                    "faces around vertex {vertex} do not form a single cycle"
                )),
                other => Error::not_convex(format!("{other:?}")),
            });
        }
        let diam = diameter_of(&vertices);
        Ok(Polyhedron {
            vertices,
            faces: a.faces,
            planes: a.planes,
            vertex_faces: a.vertex_faces,
            diam,
        })
    }

    /// Oriented face loops.
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    /// Incident-face cycle of every vertex.
    pub fn vertex_faces(&self) -> &[Vec<usize>] {
        &self.vertex_faces
    }

    pub fn face_plane(&self, f: usize) -> FacePlane<3> {
        self.planes[f]
    }

    /// Recomputes the incident-face cycles from topology alone.
    pub fn order_incident_faces(&self) -> Result<Vec<Vec<usize>>> {
        order_cycles(
            &self.vertices,
            &self.faces,
            &self.planes,
            &self.centroid(),
        )
        .map_err(|v| {
            Error::BadTopology(format!(
                "faces around vertex {v} do not form a single cycle"
            ))
        })
    }

    pub fn validate(&self) -> ConvexityReport {
        validate_polyhedron(&self.vertices, &self.faces)
    }

    /// Neighbours of `v`, in the order of its incident-face cycle.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.vertex_faces[v]
            .iter()
            .map(|&f| {
                let face = &self.faces[f];
                let k = face.iter().position(|&i| i == v).expect("incident face");
                face[(k + 1) % face.len()]
            })
            .collect()
    }

    /// Undirected edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .faces
            .iter()
            .flat_map(|face| {
                (0..face.len()).map(move |k| {
                    let (a, b) = (face[k], face[(k + 1) % face.len()]);
                    (a.min(b), a.max(b))
                })
            })
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    pub fn face_centroid(&self, f: usize) -> Vec3 {
        let face = &self.faces[f];
        face.iter().map(|&i| self.vertices[i]).sum::<Vec3>() / face.len() as f64
    }

    pub fn face_area(&self, f: usize) -> f64 {
        0.5 * newell(&self.vertices, &self.faces[f]).norm()
    }

    /// Volume by the divergence theorem over fan-triangulated faces.
    pub fn volume(&self) -> f64 {
        let mut six_v = 0.0;
        for face in &self.faces {
            let a = self.vertices[face[0]];
            for k in 1..face.len() - 1 {
                let b = self.vertices[face[k]];
                let c = self.vertices[face[k + 1]];
                six_v += a.dot(&b.cross(&c));
            }
        }
        six_v / 6.0
    }

    /// Applies `map` to every vertex and revalidates.
    pub fn map_vertices(&self, map: impl Fn(&Vec3) -> Vec3) -> Result<Polyhedron> {
        Polyhedron::new(
            self.vertices.iter().map(map).collect(),
            self.faces.clone(),
        )
    }
}

/// Convexity, planarity, topology and simplicity report for raw input.
pub fn validate_polyhedron(vertices: &[Vec3], faces: &[Vec<usize>]) -> ConvexityReport {
    analyze(vertices, faces).report
}

impl Polytope<3> for Polyhedron {
    fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    fn planes(&self) -> &[FacePlane<3>] {
        &self.planes
    }

    fn face_vertices(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }

    fn diameter(&self) -> f64 {
        self.diam
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances::for_diameter(self.diam)
    }

    fn centroid(&self) -> Vec3 {
        vertex_average(&self.vertices)
    }

    fn valence(&self, v: usize) -> usize {
        self.vertex_faces[v].len()
    }

    fn evaluate(&self, x: &Vec3) -> Result<BasisEval<3>> {
        basis::wachspress_3d(self, x)
    }

    fn vertex_lambda(&self, v: usize) -> Result<f64> {
        bounds::lambda_at_vertex_3d(self, v)
    }
}
