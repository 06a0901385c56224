//! Galerkin solution of `−Δu = f` in the unit cube with `u = 0` on the
//! boundary, using Wachspress shape functions on polyhedral meshes.

mod solver;
mod sparse;
mod study;

pub use solver::{pcg, PcgResult};
pub use sparse::CsrMatrix;
pub use study::{convergence_study, to_csv, StudyRow, CSV_HEADER};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::geometry::Polytope;
use crate::mesh::PolyMesh;
use crate::quadrature;
use crate::{Error, Execution, Result, Vec3};

/// Relative residual at which the linear solve stops.
pub const SOLVE_RTOL: f64 = 1e-10;

/// Assembled stiffness matrix, load vector and Dirichlet mask.
#[derive(Debug, Clone)]
pub struct SparseSystem {
    pub stiffness: CsrMatrix,
    pub load: Vec<f64>,
    pub dirichlet: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementSystem {
    /// `K_e[i, j] = ∫ ∇φ_i · ∇φ_j`, in the cell's local vertex order.
    pub stiffness: DMatrix<f64>,
    /// `f_e[i] = ∫ f φ_i`.
    pub load: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FemSolution {
    pub nodal: Vec<f64>,
    pub iterations: usize,
    pub relative_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorNorms {
    pub rel_l2: f64,
    pub rel_h1_semi: f64,
}

/// Element matrix and load vector of cell `c` by the fan quadrature.
pub fn element_system(mesh: &PolyMesh, c: usize, f: &(dyn Fn(&Vec3) -> f64 + Sync)) -> Result<ElementSystem> {
    let cell = mesh.cell(c);
    let n = cell.n_vertices();
    let mut k = DMatrix::zeros(n, n);
    let mut load = vec![0.0; n];
    let points = quadrature::cell_points(cell).map_err(|e| {
        Error::Invariant(format!("cell {c}: quadrature failed: {e}"))
    })?;
    for q in &points {
        let b = cell.evaluate(&q.position).map_err(|e| {
            Error::Invariant(format!("cell {c}: basis evaluation failed: {e}"))
        })?;
        let fx = f(&q.position);
        for i in 0..n {
            load[i] += q.weight * fx * b.phi[i];
            for j in i..n {
                k[(i, j)] += q.weight * b.dphi[i].dot(&b.dphi[j]);
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            k[(i, j)] = k[(j, i)];
        }
    }
    Ok(ElementSystem { stiffness: k, load })
}

/// Assembles the global system; boundary nodes are marked in `dirichlet`.
///
/// Element systems are computed per cell (in parallel when `exec` allows)
/// and scattered in cell order, so the result is bit-identical across modes.
pub fn assemble(
    mesh: &PolyMesh,
    f: &(dyn Fn(&Vec3) -> f64 + Sync),
    exec: Execution,
) -> Result<SparseSystem> {
    let elements = exec.try_map(mesh.n_cells(), |c| element_system(mesh, c, f))?;
    let mut stiffness =
        CsrMatrix::from_cliques(mesh.n_nodes(), (0..mesh.n_cells()).map(|c| mesh.cell_nodes(c)));
    let mut load = vec![0.0; mesh.n_nodes()];
    for (c, e) in elements.iter().enumerate() {
        let nodes = mesh.cell_nodes(c);
        for (i, &gi) in nodes.iter().enumerate() {
            load[gi] += e.load[i];
            for (j, &gj) in nodes.iter().enumerate() {
                stiffness.add(gi, gj, e.stiffness[(i, j)]);
            }
        }
    }
    Ok(SparseSystem {
        stiffness,
        load,
        dirichlet: mesh.boundary_mask(),
    })
}

/// Solves `K d = f` with `d = 0` on Dirichlet nodes.
///
/// Constrained rows and columns are eliminated symmetrically and the free
/// block is solved by Jacobi-preconditioned CG to [`SOLVE_RTOL`], capped at
/// `10 n` iterations.
pub fn solve(system: &SparseSystem, exec: Execution) -> Result<FemSolution> {
    let free: Vec<bool> = system.dirichlet.iter().map(|&d| !d).collect();
    let n = system.stiffness.n();
    let r = pcg(&system.stiffness, &system.load, &free, SOLVE_RTOL, 10 * n.max(1), exec)?;
    Ok(FemSolution {
        nodal: r.x,
        iterations: r.iterations,
        relative_residual: r.relative_residual,
    })
}

/// Relative `L²` and `H¹`-seminorm errors of the nodal field `nodal`,
/// interpolated by the Wachspress basis and integrated per cell with the
/// same quadrature as assembly.
pub fn error_norms(
    mesh: &PolyMesh,
    nodal: &[f64],
    u: &(dyn Fn(&Vec3) -> f64 + Sync),
    grad_u: &(dyn Fn(&Vec3) -> Vec3 + Sync),
    exec: Execution,
) -> Result<ErrorNorms> {
    if nodal.len() != mesh.n_nodes() {
        return Err(Error::ShapeError {
            expected: mesh.n_nodes(),
            got: nodal.len(),
        });
    }
    let per_cell = exec.try_map(mesh.n_cells(), |c| -> Result<[f64; 4]> {
        let cell = mesh.cell(c);
        let nodes = mesh.cell_nodes(c);
        let mut acc = [0.0; 4];
        for q in quadrature::cell_points(cell)? {
            let b = cell.evaluate(&q.position)?;
            let mut uh = 0.0;
            let mut guh = Vec3::zeros();
            for (i, &g) in nodes.iter().enumerate() {
                uh += nodal[g] * b.phi[i];
                guh += b.dphi[i] * nodal[g];
            }
            let ue = u(&q.position);
            let ge = grad_u(&q.position);
            acc[0] += q.weight * (ue - uh).powi(2);
            acc[1] += q.weight * ue * ue;
            acc[2] += q.weight * (ge - guh).norm_squared();
            acc[3] += q.weight * ge.norm_squared();
        }
        Ok(acc)
    })?;
    let mut sums = [0.0; 4];
    for a in &per_cell {
        for k in 0..4 {
            sums[k] += a[k];
        }
    }
    if !(sums[1] > 0.0 && sums[3] > 0.0) {
        return Err(Error::DomainError(
            "exact solution has zero norm; relative errors undefined".into(),
        ));
    }
    Ok(ErrorNorms {
        rel_l2: (sums[0] / sums[1]).sqrt(),
        rel_h1_semi: (sums[2] / sums[3]).sqrt(),
    })
}

/// `u = xyz(1−x)(1−y)(1−z)` and its data.
pub mod model {
    use crate::Vec3;

    fn b(t: f64) -> f64 {
        t * (1.0 - t)
    }

    pub fn exact(p: &Vec3) -> f64 {
        b(p.x) * b(p.y) * b(p.z)
    }

    pub fn gradient(p: &Vec3) -> Vec3 {
        let db = |t: f64| 1.0 - 2.0 * t;
        Vec3::new(
            db(p.x) * b(p.y) * b(p.z),
            b(p.x) * db(p.y) * b(p.z),
            b(p.x) * b(p.y) * db(p.z),
        )
    }

    /// `f = −Δu = 2[b(y)b(z) + b(x)b(z) + b(x)b(y)]`.
    pub fn source(p: &Vec3) -> f64 {
        2.0 * (b(p.y) * b(p.z) + b(p.x) * b(p.z) + b(p.x) * b(p.y))
    }
}

/// Assembles, solves and measures the model problem on `mesh`.
pub fn solve_model_problem(mesh: &PolyMesh, exec: Execution) -> Result<(FemSolution, ErrorNorms)> {
    let system = assemble(mesh, &model::source, exec)?;
    let sol = solve(&system, exec)?;
    let norms = error_norms(mesh, &sol.nodal, &model::exact, &model::gradient, exec)?;
    Ok((sol, norms))
}
