use std::fmt::Write as _;

use serde::Serialize;

use super::solve_model_problem;
use crate::mesh::MeshKind;
use crate::{Error, Execution, Result};

pub const CSV_HEADER: &str = "mesh,n_nodes,h,rel_l2,l2_rate,rel_h1,h1_rate";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRow {
    pub mesh: String,
    pub level: u32,
    pub n_nodes: usize,
    pub h: f64,
    pub rel_l2: f64,
    pub l2_rate: Option<f64>,
    pub rel_h1: f64,
    pub h1_rate: Option<f64>,
}

fn label(kind: MeshKind, level: u32) -> String {
    match kind {
        MeshKind::Hex => format!("hex-n{}", 1u64 << level),
        MeshKind::Prism => format!("prism-l{level}"),
    }
}

/// Solves the model problem on each level of a mesh family. Rates are
/// `log(e_{k−1}/e_k) / log(h_{k−1}/h_k)`.
pub fn convergence_study(kind: MeshKind, levels: std::ops::RangeInclusive<u32>, exec: Execution) -> Result<Vec<StudyRow>> {
    if levels.end() <= levels.start() {
        return Err(Error::DomainError(
            "a convergence study needs at least two levels".into(),
        ));
    }
    let mut rows: Vec<StudyRow> = Vec::new();
    for level in levels {
        let mesh = kind.generate(level)?;
        let (_, norms) = solve_model_problem(&mesh, exec)?;
        let h = mesh.stats().h;
        let rate = |prev_e: f64, e: f64, prev_h: f64| (prev_e / e).ln() / (prev_h / h).ln();
        let (l2_rate, h1_rate) = match rows.last() {
            Some(p) => (
                Some(rate(p.rel_l2, norms.rel_l2, p.h)),
                Some(rate(p.rel_h1, norms.rel_h1_semi, p.h)),
            ),
            None => (None, None),
        };
        rows.push(StudyRow {
            mesh: label(kind, level),
            level,
            n_nodes: mesh.n_nodes(),
            h,
            rel_l2: norms.rel_l2,
            l2_rate,
            rel_h1: norms.rel_h1_semi,
            h1_rate,
        });
    }
    Ok(rows)
}

/// CSV with [`CSV_HEADER`]; rates of the first row are left empty.
pub fn to_csv(rows: &[StudyRow]) -> String {
    let opt = |r: Option<f64>| r.map(|v| format!("{v:.4}")).unwrap_or_default();
    let mut s = String::new();
    writeln!(s, "{CSV_HEADER}").unwrap();
    for r in rows {
        writeln!(
            s,
            "{},{},{:.6e},{:.6e},{},{:.6e},{}",
            r.mesh,
            r.n_nodes,
            r.h,
            r.rel_l2,
            opt(r.l2_rate),
            r.rel_h1,
            opt(r.h1_rate)
        )
        .unwrap();
    }
    s
}
