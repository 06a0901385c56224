//! Wachspress coordinates, their gradients, and vertex interpolation.
//!
//! With `p_f(x) = n_f / h_f(x)` the weight of a vertex is the determinant of
//! the scaled normals of its incident faces; `φ_v = w_v / Σ w_u` and
//! `∇φ_v = φ_v (R_v − Σ φ_u R_u)` with `R_v = ∇w_v / w_v`. Polyhedral
//! vertices with more than three faces use the fan
//! `w_v = Σ_{i=1}^{k−2} det(p_i, p_{i+1}, p_k)` over their face cycle.

use nalgebra::SVector;

use crate::geometry::{cross2, Polygon, Polyhedron, Polytope};
use crate::{Error, Result, Vec2, Vec3};

/// Coordinate values and gradients at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisEval<const D: usize> {
    pub phi: Vec<f64>,
    pub dphi: Vec<SVector<f64, D>>,
}

impl<const D: usize> BasisEval<D> {
    /// `λ(x) = Σ |∇φ_v(x)|`.
    pub fn lambda(&self) -> f64 {
        self.dphi.iter().map(|g| g.norm()).sum()
    }

    /// `|Σ φ_v − 1|`.
    pub fn partition_residual(&self) -> f64 {
        (self.phi.iter().sum::<f64>() - 1.0).abs()
    }
}

/// Scaled normals `p_f(x) = n_f / h_f(x)`, one per face.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledNormalSet<const D: usize> {
    pub p: Vec<SVector<f64, D>>,
}

/// Computes `p_f(x)` for every face, rejecting points within
/// `tol.interior` of the boundary.
pub fn scaled_normals<const D: usize, P: Polytope<D> + ?Sized>(
    poly: &P,
    x: &SVector<f64, D>,
) -> Result<ScaledNormalSet<D>> {
    let tol = poly.tolerances().interior;
    let mut min_h = f64::INFINITY;
    let p = poly
        .planes()
        .iter()
        .map(|plane| {
            let h = plane.h_f(x);
            // f64::min would drop a NaN distance
            if !(h >= min_h) {
                min_h = if min_h.is_nan() { min_h } else { h };
            }
            plane.unit_normal / h
        })
        .collect();
    if !(min_h > tol) {
        return Err(Error::PointNotInterior { min_h });
    }
    Ok(ScaledNormalSet { p })
}

fn finish<const D: usize>(w: Vec<f64>, r: Vec<SVector<f64, D>>) -> BasisEval<D> {
    let wsum: f64 = w.iter().sum();
    let phi: Vec<f64> = w.iter().map(|wi| wi / wsum).collect();
    let phi_r: SVector<f64, D> = phi.iter().zip(&r).map(|(f, ri)| ri * *f).sum();
    let dphi = phi
        .iter()
        .zip(&r)
        .map(|(f, ri)| (ri - phi_r) * *f)
        .collect();
    BasisEval { phi, dphi }
}

/// Coordinates on a polygon: `w_i = det(p_{i−1}, p_i)`, `R_i = p_{i−1} + p_i`.
pub fn wachspress_2d(poly: &Polygon, x: &Vec2) -> Result<BasisEval<2>> {
    let ScaledNormalSet { p } = scaled_normals(poly, x)?;
    let n = p.len();
    let mut w = Vec::with_capacity(n);
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let prev = p[(i + n - 1) % n];
        w.push(cross2(&prev, &p[i]));
        r.push(prev + p[i]);
    }
    Ok(finish(w, r))
}

/// Coordinates on a polyhedron, simple or not.
pub fn wachspress_3d(poly: &Polyhedron, x: &Vec3) -> Result<BasisEval<3>> {
    let ScaledNormalSet { p } = scaled_normals(poly, x)?;
    let cycles = poly.vertex_faces();
    if cycles.len() != poly.n_vertices() {
        return Err(Error::BadTopology("incident-face cycles missing".into()));
    }
    let mut w = Vec::with_capacity(cycles.len());
    let mut r = Vec::with_capacity(cycles.len());
    for (v, faces) in cycles.iter().enumerate() {
        let k = faces.len();
        if k < 3 {
            return Err(Error::BadTopology(format!(
                "vertex {v} has only {k} incident faces"
            )));
        }
        let pk = p[faces[k - 1]];
        let mut wv = 0.0;
        let mut rv = Vec3::zeros();
        for j in 0..k - 2 {
            let (pj, pj1) = (p[faces[j]], p[faces[j + 1]]);
            let wj = pj.dot(&pj1.cross(&pk));
            wv += wj;
            rv += (pj + pj1 + pk) * wj;
        }
        w.push(wv);
        r.push(rv / wv);
    }
    Ok(finish(w, r))
}

/// `I(u)(x) = Σ u_v φ_v(x)` and its gradient.
pub fn interpolate<const D: usize>(
    basis: &BasisEval<D>,
    nodal_values: &[f64],
) -> Result<(f64, SVector<f64, D>)> {
    if nodal_values.len() != basis.phi.len() {
        return Err(Error::ShapeError {
            expected: basis.phi.len(),
            got: nodal_values.len(),
        });
    }
    let mut value = 0.0;
    let mut grad = SVector::<f64, D>::zeros();
    for ((u, phi), dphi) in nodal_values.iter().zip(&basis.phi).zip(&basis.dphi) {
        value += u * phi;
        grad += dphi * *u;
    }
    Ok((value, grad))
}

/// `μ_f(x) = Σ_{v ∈ f} φ_v(x)`.
pub fn mu_f<const D: usize, P: Polytope<D> + ?Sized>(
    poly: &P,
    x: &SVector<f64, D>,
    f: usize,
) -> Result<f64> {
    let eval = poly.evaluate(x)?;
    Ok(poly.face_vertices(f).iter().map(|&v| eval.phi[v]).sum())
}
