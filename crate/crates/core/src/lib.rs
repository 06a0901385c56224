//! Wachspress generalized barycentric coordinates on convex polygons and
//! polyhedra.
//!
//! The crate covers four layers:
//!
//! * [`geometry`]: validated convex polygons and polyhedra, face planes,
//!   perpendicular face distances and the quality measure `h*`.
//! * [`basis`]: coordinate values and gradients, plus the vertex
//!   interpolation operator.
//! * [`bounds`]: the gradient-sum `λ(x)`, estimates of its supremum `Λ` and
//!   the closed-form bounds that bracket it.
//! * [`mesh`], [`quadrature`] and [`fem`]: a Galerkin solver for the Poisson
//!   problem on polyhedral meshes of the unit cube, with error norms and
//!   convergence studies.
//!
//! Data-parallel loops (FEM assembly, error integration, `λ` sampling) run on
//! rayon when the `parallel` feature is enabled; every such entry point takes
//! an [`Execution`] so the sequential path stays available either way.

// `!(a < b)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod bounds;
pub mod error;
pub mod exec;
pub mod fem;
pub mod geometry;
pub mod mesh;
pub mod quadrature;
pub mod sampling;
pub mod shapes;

pub use error::{Error, Result};
pub use exec::Execution;

pub type Vec2 = nalgebra::Vector2<f64>;
pub type Vec3 = nalgebra::Vector3<f64>;
