use std::collections::HashMap;
use std::str::FromStr;

use super::{MeshBuilder, PolyMesh};
use crate::{Error, Result, Vec3};

/// Mesh families of the unit cube used in convergence studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshKind {
    Hex,
    Prism,
}

impl MeshKind {
    /// Mesh at refinement `level`: `2^level` hexes per axis, or the prism
    /// mesh of that level.
    pub fn generate(self, level: u32) -> Result<PolyMesh> {
        match self {
            MeshKind::Hex => {
                if level > 10 {
                    return Err(Error::DomainError(format!("hex level {level} too large")));
                }
                generate_hex_mesh(1 << level)
            }
            MeshKind::Prism => generate_prism_mesh(level),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MeshKind::Hex => "hex",
            MeshKind::Prism => "prism",
        }
    }
}

impl FromStr for MeshKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hex" => Ok(MeshKind::Hex),
            "prism" => Ok(MeshKind::Prism),
            _ => Err(Error::DomainError(format!("unknown mesh kind `{s}`"))),
        }
    }
}

/// `n³` axis-aligned cubes of side `1/n`.
pub fn generate_hex_mesh(n: usize) -> Result<PolyMesh> {
    if n < 1 {
        return Err(Error::DomainError("hex mesh needs n >= 1".into()));
    }
    let m = n + 1;
    let id = |i: usize, j: usize, k: usize| i + m * (j + m * k);
    let mut b = MeshBuilder::default();
    for k in 0..m {
        for j in 0..m {
            for i in 0..m {
                b.push_point(Vec3::new(
                    i as f64 / n as f64,
                    j as f64 / n as f64,
                    k as f64 / n as f64,
                ));
            }
        }
    }
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let v = |di, dj, dk| id(i + di, j + dj, k + dk);
                b.push_cell(vec![
                    vec![v(0, 0, 0), v(0, 1, 0), v(1, 1, 0), v(1, 0, 0)],
                    vec![v(0, 0, 1), v(1, 0, 1), v(1, 1, 1), v(0, 1, 1)],
                    vec![v(0, 0, 0), v(1, 0, 0), v(1, 0, 1), v(0, 0, 1)],
                    vec![v(1, 0, 0), v(1, 1, 0), v(1, 1, 1), v(1, 0, 1)],
                    vec![v(1, 1, 0), v(0, 1, 0), v(0, 1, 1), v(1, 1, 1)],
                    vec![v(0, 1, 0), v(0, 0, 0), v(0, 0, 1), v(0, 1, 1)],
                ]);
            }
        }
    }
    b.build()
}

/// Integer lattice point of the hexagon tiling.
type Lattice = (i64, i64);

/// Hexagonal prisms filling the unit cube.
///
/// With `k = 2^level`, the tiling lives on the lattice `x = X/(6k)`,
/// `y = Y/(4k)`. Hexagons have vertices `(X ± 2, Y)` and `(X ± 1, Y ± 1)`
/// around centres `(3i, 2j)` for even columns and `(3i, 2j + 1)` for odd
/// ones, so boundary centres sit exactly on the square's edges and clipping
/// only produces half and quarter hexagons. The tiling is extruded into
/// `2k` layers.
pub fn generate_prism_mesh(level: u32) -> Result<PolyMesh> {
    if level > 8 {
        return Err(Error::DomainError(format!("prism level {level} too large")));
    }
    let k = 1i64 << level;
    let (xmax, ymax) = (6 * k, 4 * k);
    let layers = 2 * k;

    let mut polygons: Vec<Vec<Lattice>> = Vec::new();
    for i in 0..=2 * k {
        let cx = 3 * i;
        let odd = i % 2 == 1;
        for j in 0..=2 * k {
            let cy = 2 * j + odd as i64;
            if cy > ymax {
                continue;
            }
            let hex = vec![
                (cx + 2, cy),
                (cx + 1, cy + 1),
                (cx - 1, cy + 1),
                (cx - 2, cy),
                (cx - 1, cy - 1),
                (cx + 1, cy - 1),
            ];
            let clipped = clip_to_box(hex, xmax, ymax);
            if clipped.len() >= 3 {
                polygons.push(clipped);
            }
        }
    }

    let mut b = MeshBuilder::default();
    let mut ids: HashMap<(i64, i64, i64), usize> = HashMap::new();
    let (sx, sy, sz) = ((6 * k) as f64, (4 * k) as f64, layers as f64);
    let mut node = |b: &mut MeshBuilder, (x, y): Lattice, z: i64| {
        *ids.entry((x, y, z)).or_insert_with(|| {
            b.push_point(Vec3::new(x as f64 / sx, y as f64 / sy, z as f64 / sz))
        })
    };
    for z in 0..layers {
        for poly in &polygons {
            let bottom: Vec<usize> = poly.iter().map(|&p| node(&mut b, p, z)).collect();
            let top: Vec<usize> = poly.iter().map(|&p| node(&mut b, p, z + 1)).collect();
            let n = poly.len();
            let mut faces = Vec::with_capacity(n + 2);
            faces.push(bottom.iter().rev().copied().collect());
            faces.push(top.clone());
            for a in 0..n {
                let c = (a + 1) % n;
                faces.push(vec![bottom[a], bottom[c], top[c], top[a]]);
            }
            b.push_cell(faces);
        }
    }
    b.build()
}

/// Sutherland–Hodgman clip of a counter-clockwise lattice polygon to
/// `[0, xmax] × [0, ymax]`, dropping repeated and collinear vertices.
///
/// Every crossing used by the tiling lands on the lattice, which is checked.
fn clip_to_box(poly: Vec<Lattice>, xmax: i64, ymax: i64) -> Vec<Lattice> {
    // (axis, bound, keep side sign): keep points with sign·(coord − bound) ≥ 0
    let planes = [(0, 0, 1), (0, xmax, -1), (1, 0, 1), (1, ymax, -1)];
    let mut out = poly;
    for (axis, bound, sign) in planes {
        let coord = |p: &Lattice| if axis == 0 { p.0 } else { p.1 };
        let inside = |p: &Lattice| sign * (coord(p) - bound) >= 0;
        let input = std::mem::take(&mut out);
        let n = input.len();
        for idx in 0..n {
            let cur = input[idx];
            let prev = input[(idx + n - 1) % n];
            if inside(&cur) {
                if !inside(&prev) {
                    out.push(crossing(prev, cur, axis, bound));
                }
                out.push(cur);
            } else if inside(&prev) {
                out.push(crossing(prev, cur, axis, bound));
            }
        }
    }
    simplify(out)
}

fn crossing(a: Lattice, b: Lattice, axis: usize, bound: i64) -> Lattice {
    let (ca, cb, oa, ob) = if axis == 0 {
        (a.0, b.0, a.1, b.1)
    } else {
        (a.1, b.1, a.0, b.0)
    };
    let num = (bound - ca) * (ob - oa);
    let den = cb - ca;
    assert_eq!(num % den, 0, "clip crossing off the lattice");
    let other = oa + num / den;
    if axis == 0 {
        (bound, other)
    } else {
        (other, bound)
    }
}

fn simplify(mut poly: Vec<Lattice>) -> Vec<Lattice> {
    poly.dedup();
    while poly.len() > 1 && poly.first() == poly.last() {
        poly.pop();
    }
    loop {
        let n = poly.len();
        if n < 3 {
            return poly;
        }
        let straight = (0..n).find(|&i| {
            let (a, b, c) = (poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]);
            (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0) == 0
        });
        match straight {
            Some(i) => {
                poly.remove(i);
            }
            None => return poly,
        }
    }
}
