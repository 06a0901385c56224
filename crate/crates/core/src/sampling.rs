//! Halton points inside convex polytopes.

use nalgebra::SVector;

use crate::geometry::Polytope;
use crate::{Error, Result};

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
const SEED_STRIDE: u64 = 1 << 20;

/// Radical inverse of `index` in `base`, in `[0, 1)`.
pub fn radical_inverse(base: u64, mut index: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    out
}

/// `D`-dimensional Halton sequence with bases 2, 3, 5, …
#[derive(Debug, Clone)]
pub struct Halton<const D: usize> {
    index: u64,
}

impl<const D: usize> Halton<D> {
    /// Each seed owns a disjoint block of `2^20` indices; index 0 (the
    /// all-zero point) is never produced.
    pub fn new(seed: u64) -> Self {
        assert!(D <= PRIMES.len());
        Halton {
            index: seed.wrapping_mul(SEED_STRIDE),
        }
    }
}

impl<const D: usize> Iterator for Halton<D> {
    type Item = SVector<f64, D>;

    fn next(&mut self) -> Option<Self::Item> {
        self.index += 1;
        let i = self.index;
        Some(SVector::from_fn(|k, _| radical_inverse(PRIMES[k], i)))
    }
}

/// Maps Halton points into the bounding box of `poly` and keeps the first
/// `count` whose distance to every face exceeds `margin`.
pub fn interior_points<const D: usize, P: Polytope<D> + ?Sized>(
    poly: &P,
    count: usize,
    seed: u64,
    margin: f64,
) -> Result<Vec<SVector<f64, D>>> {
    let (lo, hi) = poly.bounding_box();
    let extent = hi - lo;
    let max_tries = 1000 * count + 10_000;
    let mut out = Vec::with_capacity(count);
    for (tries, u) in Halton::<D>::new(seed).enumerate() {
        if out.len() == count {
            break;
        }
        if tries >= max_tries {
            return Err(Error::DegenerateGeometry(format!(
                "only {} of {count} interior samples found after {max_tries} tries",
                out.len()
            )));
        }
        let x = lo + extent.component_mul(&u);
        if poly.min_face_distance(&x) > margin {
            out.push(x);
        }
    }
    Ok(out)
}
