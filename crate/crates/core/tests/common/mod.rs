//! Seeded random shapes shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wachspress::geometry::{Polygon, Polyhedron};
use wachspress::{shapes, Vec2};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Convex `n`-gon inscribed in a random ellipse. Consecutive angles are at
/// least a quarter of the uniform spacing apart, so no vertex is nearly flat.
pub fn random_polygon(rng: &mut impl Rng, n: usize) -> Polygon {
    let min_gap = 0.25 * 2.0 * PI / n as f64;
    let angles = loop {
        let mut a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        a.sort_by(f64::total_cmp);
        let ok = (0..n).all(|i| {
            let next = if i + 1 < n { a[i + 1] } else { a[0] + 2.0 * PI };
            next - a[i] >= min_gap
        });
        if ok {
            break a;
        }
    };
    let (sx, sy) = (rng.gen_range(0.5..1.5), rng.gen_range(0.5..1.5));
    let rot: f64 = rng.gen_range(0.0..2.0 * PI);
    let t = Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let (s, c) = rot.sin_cos();
    let verts = angles
        .iter()
        .map(|&a| {
            let p = Vec2::new(sx * a.cos(), sy * a.sin());
            Vec2::new(c * p.x - s * p.y, s * p.x + c * p.y) + t
        })
        .collect();
    Polygon::new(verts).expect("ellipse polygon is convex")
}

pub fn random_prism(rng: &mut impl Rng) -> Polyhedron {
    let n = rng.gen_range(3..=8);
    let base = random_polygon(rng, n);
    shapes::prism(&base, rng.gen_range(0.3..2.0)).expect("prism over a convex polygon")
}

/// 50 polygons with 5–12 vertices; 20 random prisms plus the square pyramid.
pub fn corpus(seed: u64) -> (Vec<Polygon>, Vec<Polyhedron>) {
    let mut r = rng(seed);
    let polygons = (0..50)
        .map(|_| {
            let n = r.gen_range(5..=12);
            random_polygon(&mut r, n)
        })
        .collect();
    let mut polyhedra: Vec<Polyhedron> = (0..20).map(|_| random_prism(&mut r)).collect();
    polyhedra.push(shapes::square_pyramid());
    (polygons, polyhedra)
}
