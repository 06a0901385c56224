use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::PolyMesh;
use crate::{Error, Result, Vec3};

const HEADER: &str = "polymesh 1";

/// Serializes `mesh`. Coordinates use the shortest round-trip decimal form,
/// so `parse(to_text(m))` reproduces every point bit for bit.
pub fn to_text(mesh: &PolyMesh) -> String {
    let mut s = String::new();
    writeln!(s, "{HEADER}").unwrap();
    writeln!(s, "points {}", mesh.points().len()).unwrap();
    for p in mesh.points() {
        writeln!(s, "{} {} {}", p.x, p.y, p.z).unwrap();
    }
    writeln!(s, "faces {}", mesh.faces().len()).unwrap();
    for f in mesh.faces() {
        writeln!(s, "{}", join(f)).unwrap();
    }
    writeln!(s, "cells {}", mesh.cells().len()).unwrap();
    for c in mesh.cells() {
        writeln!(s, "{}", join(c)).unwrap();
    }
    s
}

fn join(ids: &[usize]) -> String {
    ids.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn save(mesh: &PolyMesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_text(mesh))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<PolyMesh> {
    parse(&std::fs::read_to_string(path)?)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    /// Next non-blank, non-comment line with its 1-based number.
    fn next(&mut self) -> Result<(usize, &'a str)> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Ok((i + 1, t));
        }
        Err(err(self.last + 1, "unexpected end of file"))
    }

    fn section(&mut self, name: &str) -> Result<usize> {
        let (n, line) = self.next()?;
        let mut tok = line.split_whitespace();
        if tok.next() != Some(name) {
            return Err(err(n, format!("expected `{name} <count>`")));
        }
        let count = tok
            .next()
            .ok_or_else(|| err(n, format!("missing {name} count")))
            .and_then(|t| number::<usize>(n, t))?;
        if tok.next().is_some() {
            return Err(err(n, "trailing tokens"));
        }
        Ok(count)
    }
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::ParseError {
        line,
        message: message.into(),
    }
}

fn number<T: FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| err(line, format!("invalid number `{tok}`")))
}

fn indices(line: usize, text: &str, bound: usize, what: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|t| {
            let i = number::<usize>(line, t)?;
            if i >= bound {
                return Err(err(line, format!("{what} index {i} out of range (have {bound})")));
            }
            Ok(i)
        })
        .collect()
}

/// Parses the text format; syntax problems are [`Error::ParseError`] with
/// the offending line, invalid cells are [`Error::NotConvex`].
pub fn parse(text: &str) -> Result<PolyMesh> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let (n, first) = lines.next()?;
    if first.split_whitespace().collect::<Vec<_>>() != ["polymesh", "1"] {
        return Err(err(n, format!("expected header `{HEADER}`")));
    }

    let np = lines.section("points")?;
    let mut points = Vec::with_capacity(np);
    for _ in 0..np {
        let (n, line) = lines.next()?;
        let xs = line
            .split_whitespace()
            .map(|t| number::<f64>(n, t))
            .collect::<Result<Vec<_>>>()?;
        if xs.len() != 3 {
            return Err(err(n, format!("expected 3 coordinates, got {}", xs.len())));
        }
        if xs.iter().any(|x| !x.is_finite()) {
            return Err(err(n, "non-finite coordinate"));
        }
        points.push(Vec3::new(xs[0], xs[1], xs[2]));
    }

    let nf = lines.section("faces")?;
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (n, line) = lines.next()?;
        let face = indices(n, line, np, "point")?;
        if face.len() < 3 {
            return Err(err(n, "a face needs at least 3 points"));
        }
        faces.push(face);
    }

    let nc = lines.section("cells")?;
    let mut cells = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (n, line) = lines.next()?;
        let cell = indices(n, line, nf, "face")?;
        if cell.len() < 4 {
            return Err(err(n, "a cell needs at least 4 faces"));
        }
        cells.push(cell);
    }
    if let Ok((n, _)) = lines.next() {
        return Err(err(n, "unexpected content after cells"));
    }
    PolyMesh::new(points, faces, cells)
}
