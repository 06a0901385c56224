//! Shape arguments: `builtin:NAME` or a path to a shape file.
//!
//! A shape file is either a polygon
//!
//! ```text
//! polygon 4
//! 0 0
//! 1 0
//! 1 1
//! 0 1
//! ```
//!
//! with vertices in counter-clockwise order, or a mesh file holding exactly
//! one cell. `#` comments and blank lines are ignored in both.

use std::path::Path;

use wachspress::geometry::Polygon;
use wachspress::mesh;
use wachspress::shapes::{self, Shape};
use wachspress::{Error, Result, Vec2};

pub fn resolve(arg: &str) -> Result<Shape> {
    match arg.strip_prefix("builtin:") {
        Some(name) => shapes::builtin(name),
        None => load(arg),
    }
}

pub fn load(path: impl AsRef<Path>) -> Result<Shape> {
    parse(&std::fs::read_to_string(path)?)
}

pub fn parse(text: &str) -> Result<Shape> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let Some((first_no, first)) = lines.next() else {
        return Err(Error::ParseError { line: 1, message: "empty shape file".into() });
    };
    if first.starts_with("polymesh") {
        let m = mesh::parse(text)?;
        if m.n_cells() != 1 {
            return Err(Error::DomainError(format!(
                "a shape file mesh must hold exactly one cell, found {}",
                m.n_cells()
            )));
        }
        return Ok(Shape::Polyhedron(m.cell(0).clone()));
    }
    let bad = |line: usize, message: String| Error::ParseError { line, message };
    let n: usize = match first.split_whitespace().collect::<Vec<_>>()[..] {
        ["polygon", n] => n
            .parse()
            .map_err(|_| bad(first_no, format!("invalid vertex count `{n}`")))?,
        _ => return Err(bad(first_no, "expected `polygon N` or a polymesh header".into())),
    };
    let mut vertices = Vec::with_capacity(n);
    let mut last = first_no;
    for _ in 0..n {
        let Some((no, line)) = lines.next() else {
            return Err(bad(last + 1, format!("expected {n} vertices, found {}", vertices.len())));
        };
        last = no;
        let coords: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| bad(no, format!("invalid coordinate: {e}")))?;
        match coords[..] {
            [x, y] if x.is_finite() && y.is_finite() => vertices.push(Vec2::new(x, y)),
            _ => return Err(bad(no, "a vertex needs exactly 2 finite coordinates".into())),
        }
    }
    if let Some((no, _)) = lines.next() {
        return Err(bad(no, "trailing content after the last vertex".into()));
    }
    Ok(Shape::Polygon(Polygon::new(vertices)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_file() {
        let s = parse("# square\npolygon 4\n0 0\n1 0\n\n1 1\n0 1\n").unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.n_vertices(), 4);
    }

    #[test]
    fn polygon_errors_carry_lines() {
        let line = |t: &str| match parse(t) {
            Err(Error::ParseError { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("polygon 3\n0 0\n1 0\n"), 4);
        assert_eq!(line("polygon 3\n0 0\n1 x\n0 1\n"), 3);
        assert_eq!(line("polygon 3\n0 0\n1 0 0\n0 1\n"), 3);
        assert_eq!(line("triangle\n"), 1);
        assert_eq!(line("polygon 3\n0 0\n1 0\n0 1\n5 5\n"), 5);
    }

    #[test]
    fn clockwise_polygon_rejected() {
        assert!(matches!(
            parse("polygon 3\n0 0\n0 1\n1 0\n"),
            Err(Error::NotConvex { .. })
        ));
    }

    #[test]
    fn single_cell_mesh() {
        let text = mesh::to_text(&mesh::generate_hex_mesh(1).unwrap());
        let s = parse(&text).unwrap();
        assert_eq!((s.dim(), s.n_vertices()), (3, 8));
        let two = mesh::to_text(&mesh::generate_hex_mesh(2).unwrap());
        assert!(matches!(parse(&two), Err(Error::DomainError(_))));
    }

    #[test]
    fn builtin_prefix() {
        assert_eq!(resolve("builtin:unit-cube").unwrap().n_vertices(), 8);
        assert!(resolve("builtin:nope").is_err());
    }
}
