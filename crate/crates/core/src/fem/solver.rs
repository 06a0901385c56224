use super::CsrMatrix;
use crate::{Error, Execution, Result};

/// Outcome of a converged [`pcg`] run.
#[derive(Debug, Clone, PartialEq)]
pub struct PcgResult {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned conjugate gradients on the rows and columns where
/// `free` is true; the other unknowns are held at zero.
///
/// Stops when `‖r‖ ≤ rtol ‖b‖` (restricted to free rows) and fails with the
/// residual history after `max_iter` iterations. Dot products are summed
/// sequentially so results do not depend on the thread count.
pub fn pcg(
    a: &CsrMatrix,
    b: &[f64],
    free: &[bool],
    rtol: f64,
    max_iter: usize,
    exec: Execution,
) -> Result<PcgResult> {
    let n = a.n();
    let mask = |v: &mut [f64]| {
        for (x, &f) in v.iter_mut().zip(free) {
            if !f {
                *x = 0.0;
            }
        }
    };
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .zip(free)
        .map(|(&d, &f)| if f && d > 0.0 { 1.0 / d } else { 0.0 })
        .collect();
    if let Some(i) = (0..n).find(|&i| free[i] && inv_diag[i] == 0.0) {
        return Err(Error::Invariant(format!(
            "non-positive diagonal at free node {i}"
        )));
    }

    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    mask(&mut r);
    let b_norm = dot(&r, &r).sqrt();
    if b_norm == 0.0 {
        return Ok(PcgResult {
            x,
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let mut history = Vec::new();
    for it in 1..=max_iter {
        a.mul_vec(&p, &mut ap, exec);
        mask(&mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            history.push(dot(&r, &r).sqrt() / b_norm);
            return Err(Error::SolveError {
                residual_history: history,
            });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rel = dot(&r, &r).sqrt() / b_norm;
        history.push(rel);
        if rel <= rtol {
            return Ok(PcgResult {
                x,
                iterations: it,
                relative_residual: rel,
            });
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::SolveError {
        residual_history: history,
    })
}
