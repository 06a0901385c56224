//! Reference shapes, including one for every row of the `Λ` bound table.

use std::f64::consts::PI;

use crate::geometry::{Polygon, Polyhedron, Polytope};
use crate::{Error, Result, Vec2, Vec3};

/// A polygon or a polyhedron.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Polygon(Polygon),
    Polyhedron(Polyhedron),
}

impl Shape {
    pub fn dim(&self) -> usize {
        match self {
            Shape::Polygon(_) => 2,
            Shape::Polyhedron(_) => 3,
        }
    }

    pub fn n_vertices(&self) -> usize {
        match self {
            Shape::Polygon(p) => p.n_vertices(),
            Shape::Polyhedron(p) => p.n_vertices(),
        }
    }
}

pub fn unit_square() -> Polygon {
    box_2d(1.0, 1.0).expect("unit square")
}

pub fn unit_cube() -> Polyhedron {
    box_3d(1.0, 1.0, 1.0).expect("unit cube")
}

/// Axis-aligned rectangle `[0,a] × [0,b]`.
pub fn box_2d(a: f64, b: f64) -> Result<Polygon> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::DomainError("box sides must be positive".into()));
    }
    Polygon::new(vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(a, 0.0),
        Vec2::new(a, b),
        Vec2::new(0.0, b),
    ])
}

/// Axis-aligned box `[0,a] × [0,b] × [0,c]`.
pub fn box_3d(a: f64, b: f64, c: f64) -> Result<Polyhedron> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(Error::DomainError("box sides must be positive".into()));
    }
    let vertices = vec![
        Vec3::new(0.0, 0.0, 0.0),
        Vec3::new(a, 0.0, 0.0),
        Vec3::new(a, b, 0.0),
        Vec3::new(0.0, b, 0.0),
        Vec3::new(0.0, 0.0, c),
        Vec3::new(a, 0.0, c),
        Vec3::new(a, b, c),
        Vec3::new(0.0, b, c),
    ];
    let faces = vec![
        vec![0, 3, 2, 1],
        vec![4, 5, 6, 7],
        vec![0, 1, 5, 4],
        vec![1, 2, 6, 5],
        vec![2, 3, 7, 6],
        vec![3, 0, 4, 7],
    ];
    Polyhedron::new(vertices, faces)
}

/// Regular `n`-gon inscribed in the unit circle, first vertex at `(1, 0)`.
pub fn regular_ngon(n: usize) -> Result<Polygon> {
    if n < 3 {
        return Err(Error::DomainError(format!("regular n-gon needs n >= 3, got {n}")));
    }
    let theta = 2.0 * PI / n as f64;
    Polygon::new(
        (0..n)
            .map(|i| {
                let t = theta * i as f64;
                Vec2::new(t.cos(), t.sin())
            })
            .collect(),
    )
}

/// Equilateral triangle with unit edges.
pub fn regular_simplex_2d() -> Polygon {
    Polygon::new(vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(0.5, 3f64.sqrt() / 2.0),
    ])
    .expect("equilateral triangle")
}

/// Regular tetrahedron with unit edges.
pub fn regular_simplex_3d() -> Polyhedron {
    let s3 = 3f64.sqrt();
    Polyhedron::new(
        vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.5, s3 / 2.0, 0.0),
            Vec3::new(0.5, s3 / 6.0, (2.0f64 / 3.0).sqrt()),
        ],
        vec![vec![0, 2, 1], vec![0, 1, 3], vec![1, 2, 3], vec![2, 0, 3]],
    )
    .expect("regular tetrahedron")
}

/// Unit-square base with apex `(1/2, 1/2, 1)`; the apex has four faces.
pub fn square_pyramid() -> Polyhedron {
    Polyhedron::new(
        vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.5, 0.5, 1.0),
        ],
        vec![
            vec![0, 3, 2, 1],
            vec![0, 1, 4],
            vec![1, 2, 4],
            vec![2, 3, 4],
            vec![3, 0, 4],
        ],
    )
    .expect("square pyramid")
}

/// Right prism of the given height over `base` (base in `z = 0`).
///
/// Vertices `0..n` are the bottom loop, `n..2n` the top loop.
pub fn prism(base: &Polygon, height: f64) -> Result<Polyhedron> {
    if !(height > 0.0) {
        return Err(Error::DomainError("prism height must be positive".into()));
    }
    let n = base.n_vertices();
    let mut vertices: Vec<Vec3> = base.vertices().iter().map(|v| Vec3::new(v.x, v.y, 0.0)).collect();
    vertices.extend(base.vertices().iter().map(|v| Vec3::new(v.x, v.y, height)));
    let mut faces = vec![(0..n).rev().collect::<Vec<_>>(), (n..2 * n).collect()];
    for i in 0..n {
        let j = (i + 1) % n;
        faces.push(vec![i, j, n + j, n + i]);
    }
    Polyhedron::new(vertices, faces)
}

/// Resolves a builtin shape name:
/// `unit-square`, `unit-cube`, `regular-ngon:<n>`, `regular-simplex:<2|3>`,
/// `box:<a>,<b>[,<c>]`, `square-pyramid`, `prism:<n>` (unit-height prism over
/// the regular `n`-gon).
pub fn builtin(name: &str) -> Result<Shape> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let int_arg = |what: &str| -> Result<usize> {
        arg.and_then(|a| a.trim().parse().ok())
            .ok_or_else(|| Error::DomainError(format!("{what} needs an integer argument")))
    };
    match head {
        "unit-square" => Ok(Shape::Polygon(unit_square())),
        "unit-cube" => Ok(Shape::Polyhedron(unit_cube())),
        "square-pyramid" => Ok(Shape::Polyhedron(square_pyramid())),
        "regular-ngon" => Ok(Shape::Polygon(regular_ngon(int_arg("regular-ngon")?)?)),
        "prism" => Ok(Shape::Polyhedron(prism(
            &regular_ngon(int_arg("prism")?)?,
            1.0,
        )?)),
        "regular-simplex" => match int_arg("regular-simplex")? {
            2 => Ok(Shape::Polygon(regular_simplex_2d())),
            3 => Ok(Shape::Polyhedron(regular_simplex_3d())),
            d => Err(Error::DomainError(format!(
                "regular-simplex supports d = 2 or 3, got {d}"
            ))),
        },
        "box" => {
            let sides: Vec<f64> = arg
                .unwrap_or("")
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::DomainError(format!("box sides: {e}")))?;
            match sides[..] {
                [a, b] => Ok(Shape::Polygon(box_2d(a, b)?)),
                [a, b, c] => Ok(Shape::Polyhedron(box_3d(a, b, c)?)),
                _ => Err(Error::DomainError("box needs 2 or 3 side lengths".into())),
            }
        }
        _ => Err(Error::DomainError(format!("unknown builtin shape `{name}`"))),
    }
}
