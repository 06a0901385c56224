//! Centroid-fan tetrahedralization and the symmetric 4-point degree-2
//! tetrahedral rule.

use crate::geometry::{Polyhedron, Polytope};
use crate::{Error, Result, Vec3};

pub const TET4_ALPHA: f64 = 0.5854101966249685;
pub const TET4_BETA: f64 = 0.1381966011250105;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPoint {
    pub position: Vec3,
    pub weight: f64,
}

pub type Tet = [Vec3; 4];

/// Signed volume `det(b − a, c − a, d − a) / 6`.
pub fn tet_volume(t: &Tet) -> f64 {
    (t[1] - t[0]).dot(&(t[2] - t[0]).cross(&(t[3] - t[0]))) / 6.0
}

/// Splits a convex cell into tets `(c, c_f, a, b)` for every face `f` and
/// every edge `(a, b)` of that face, with `c` the cell's vertex average and
/// `c_f` the face's vertex average. All tets are positively oriented.
pub fn tetrahedralize(cell: &Polyhedron) -> Result<Vec<Tet>> {
    let c = cell.centroid();
    let verts = cell.vertices();
    let tol = cell.diameter().powi(3) * 1e-14;
    let mut tets = Vec::with_capacity(cell.faces().iter().map(Vec::len).sum());
    for (f, face) in cell.faces().iter().enumerate() {
        let cf = cell.face_centroid(f);
        let k = face.len();
        for i in 0..k {
            let (a, b) = (verts[face[i]], verts[face[(i + 1) % k]]);
            let t = [c, cf, a, b];
            if !(tet_volume(&t) > tol) {
                return Err(Error::not_convex(format!(
                    "fan tet on face {f}, edge {i} has non-positive volume"
                )));
            }
            tets.push(t);
        }
    }
    Ok(tets)
}

/// Four points at barycentric `(α, β, β, β)` and permutations, weight
/// `volume / 4` each; exact for total degree ≤ 2.
pub fn rule_tet4(t: &Tet) -> Result<[QuadPoint; 4]> {
    let vol = tet_volume(t);
    let scale = (t[1] - t[0])
        .norm()
        .max((t[2] - t[0]).norm())
        .max((t[3] - t[0]).norm());
    if !(vol > 1e-14 * scale.powi(3)) {
        return Err(Error::DegenerateGeometry(format!(
            "tetrahedron is inverted or flat (volume {vol})"
        )));
    }
    let w = vol / 4.0;
    Ok(std::array::from_fn(|i| {
        let position = (0..4)
            .map(|j| t[j] * if i == j { TET4_ALPHA } else { TET4_BETA })
            .sum();
        QuadPoint { position, weight: w }
    }))
}

/// Quadrature points of a cell: the 4-point rule on every fan tet.
pub fn cell_points(cell: &Polyhedron) -> Result<Vec<QuadPoint>> {
    let tets = tetrahedralize(cell)?;
    let mut pts = Vec::with_capacity(4 * tets.len());
    for t in &tets {
        pts.extend(rule_tet4(t)?);
    }
    Ok(pts)
}

pub fn integrate_cell(cell: &Polyhedron, f: impl Fn(&Vec3) -> f64) -> Result<f64> {
    Ok(cell_points(cell)?
        .iter()
        .map(|q| q.weight * f(&q.position))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;
    use approx::assert_relative_eq;

    fn reference_tet() -> Tet {
        [
            Vec3::zeros(),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        ]
    }

    fn integrate_tet(t: &Tet, f: impl Fn(&Vec3) -> f64) -> f64 {
        rule_tet4(t)
            .unwrap()
            .iter()
            .map(|q| q.weight * f(&q.position))
            .sum()
    }

    #[test]
    fn reference_tet_monomials() {
        let t = reference_tet();
        assert_relative_eq!(integrate_tet(&t, |_| 1.0), 1.0 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(integrate_tet(&t, |x| x.x), 1.0 / 24.0, max_relative = 1e-14);
        assert_relative_eq!(integrate_tet(&t, |x| x.x * x.x), 1.0 / 60.0, max_relative = 1e-14);
        assert_relative_eq!(integrate_tet(&t, |x| x.x * x.y), 1.0 / 120.0, max_relative = 1e-14);
    }

    #[test]
    fn rule_constants_are_consistent() {
        assert_relative_eq!(TET4_ALPHA + 3.0 * TET4_BETA, 1.0, epsilon = 1e-15);
        assert_relative_eq!(TET4_BETA, (5.0 - 5f64.sqrt()) / 20.0, epsilon = 1e-16);
    }

    #[test]
    fn inverted_tet_rejected() {
        let mut t = reference_tet();
        t.swap(1, 2);
        assert!(matches!(rule_tet4(&t), Err(Error::DegenerateGeometry(_))));
    }

    #[test]
    fn cube_fan() {
        let cube = shapes::unit_cube();
        let tets = tetrahedralize(&cube).unwrap();
        assert_eq!(tets.len(), 24);
        let vol: f64 = tets.iter().map(tet_volume).sum();
        assert_relative_eq!(vol, 1.0, max_relative = 1e-14);
        assert_relative_eq!(integrate_cell(&cube, |_| 1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(
            integrate_cell(&cube, |x| x.x + x.y + x.z).unwrap(),
            1.5,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            integrate_cell(&cube, |x| x.x * x.y * x.z).unwrap(),
            0.125,
            max_relative = 1e-12
        );
    }

    #[test]
    fn tet_and_prism_volumes() {
        let tet = shapes::regular_simplex_3d();
        let direct = tet_volume(&[
            tet.vertices()[0],
            tet.vertices()[1],
            tet.vertices()[2],
            tet.vertices()[3],
        ])
        .abs();
        let fan: f64 = tetrahedralize(&tet).unwrap().iter().map(tet_volume).sum();
        assert_relative_eq!(fan, direct, max_relative = 1e-14);

        let base = shapes::regular_simplex_2d();
        let prism = shapes::prism(&base, 0.7).unwrap();
        let fan: f64 = tetrahedralize(&prism).unwrap().iter().map(tet_volume).sum();
        assert_relative_eq!(fan, base.area() * 0.7, max_relative = 1e-12);
    }

    #[test]
    fn points_interior_weights_positive() {
        let cell = shapes::square_pyramid();
        let pts = cell_points(&cell).unwrap();
        let tol = cell.tolerances().interior;
        for q in &pts {
            assert!(q.weight > 0.0);
            assert!(cell.min_face_distance(&q.position) > tol);
        }
        let total: f64 = pts.iter().map(|q| q.weight).sum();
        assert_relative_eq!(total, cell.volume(), max_relative = 1e-12);
    }
}
