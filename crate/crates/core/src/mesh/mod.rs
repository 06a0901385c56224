//! Polyhedral meshes of the unit cube: data model, text I/O, generators and
//! quality statistics.

mod generate;
mod io;

pub use generate::{generate_hex_mesh, generate_prism_mesh, MeshKind};
pub use io::{load, parse, save, to_text};

use std::collections::HashMap;

use serde::Serialize;

use crate::geometry::{Polyhedron, Polytope};
use crate::{Error, Result, Vec3};

/// Cells sharing a global point array. Faces are stored once and referenced
/// by index from every cell that owns them.
#[derive(Debug, Clone)]
pub struct PolyMesh {
    points: Vec<Vec3>,
    faces: Vec<Vec<usize>>,
    cells: Vec<Vec<usize>>,
    /// Validated cell geometry in local numbering.
    polys: Vec<Polyhedron>,
    /// Local-to-global vertex map per cell.
    cell_nodes: Vec<Vec<usize>>,
    boundary: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeshStats {
    pub n_nodes: usize,
    pub n_cells: usize,
    /// Largest cell diameter.
    pub h: f64,
    /// Smallest `h*` over cells rescaled to unit diameter.
    pub min_h_star_scaled: f64,
}

impl PolyMesh {
    /// Builds and validates a mesh. `faces` list global point indices;
    /// `cells` list face indices.
    pub fn new(points: Vec<Vec3>, faces: Vec<Vec<usize>>, cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut owners = vec![0usize; faces.len()];
        for (c, cell) in cells.iter().enumerate() {
            for &f in cell {
                let slot = owners.get_mut(f).ok_or_else(|| {
                    Error::BadTopology(format!("cell {c} references missing face {f}"))
                })?;
                *slot += 1;
                if *slot > 2 {
                    return Err(Error::BadTopology(format!(
                        "face {f} is shared by more than two cells"
                    )));
                }
            }
        }
        if let Some(f) = owners.iter().position(|&n| n == 0) {
            return Err(Error::BadTopology(format!("face {f} belongs to no cell")));
        }
        for (f, face) in faces.iter().enumerate() {
            if let Some(&i) = face.iter().find(|&&i| i >= points.len()) {
                return Err(Error::BadTopology(format!(
                    "face {f} references missing point {i}"
                )));
            }
        }

        let mut polys = Vec::with_capacity(cells.len());
        let mut cell_nodes = Vec::with_capacity(cells.len());
        for (c, cell) in cells.iter().enumerate() {
            let mut local: HashMap<usize, usize> = HashMap::new();
            let mut nodes = Vec::new();
            let local_faces: Vec<Vec<usize>> = cell
                .iter()
                .map(|&f| {
                    faces[f]
                        .iter()
                        .map(|&g| {
                            *local.entry(g).or_insert_with(|| {
                                nodes.push(g);
                                nodes.len() - 1
                            })
                        })
                        .collect()
                })
                .collect();
            let verts = nodes.iter().map(|&g| points[g]).collect();
            let poly = Polyhedron::new(verts, local_faces).map_err(|e| Error::NotConvex {
                cell: Some(c),
                detail: e.to_string(),
            })?;
            polys.push(poly);
            cell_nodes.push(nodes);
        }

        let mut on_boundary = vec![false; points.len()];
        for (f, face) in faces.iter().enumerate() {
            if owners[f] == 1 {
                for &g in face {
                    on_boundary[g] = true;
                }
            }
        }
        let boundary = (0..points.len()).filter(|&i| on_boundary[i]).collect();
        Ok(PolyMesh {
            points,
            faces,
            cells,
            polys,
            cell_nodes,
            boundary,
        })
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    /// Face indices of each cell.
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn n_nodes(&self) -> usize {
        self.points.len()
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, c: usize) -> &Polyhedron {
        &self.polys[c]
    }

    /// Global node of each local vertex of cell `c`.
    pub fn cell_nodes(&self, c: usize) -> &[usize] {
        &self.cell_nodes[c]
    }

    /// Sorted nodes lying on a face owned by a single cell.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn boundary_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.points.len()];
        for &i in &self.boundary {
            mask[i] = true;
        }
        mask
    }

    /// Number of cells touching each node.
    pub fn incident_cell_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.points.len()];
        for nodes in &self.cell_nodes {
            for &g in nodes {
                counts[g] += 1;
            }
        }
        counts
    }

    pub fn total_volume(&self) -> f64 {
        self.polys.iter().map(Polyhedron::volume).sum()
    }

    pub fn stats(&self) -> MeshStats {
        let mut h: f64 = 0.0;
        let mut gamma = f64::INFINITY;
        for p in &self.polys {
            let d = p.diameter();
            h = h.max(d);
            gamma = gamma.min(p.h_star() / d);
        }
        MeshStats {
            n_nodes: self.n_nodes(),
            n_cells: self.n_cells(),
            h,
            min_h_star_scaled: gamma,
        }
    }
}

/// Accumulates cells given as face loops over global points, storing each
/// face once under its sorted vertex set.
#[derive(Debug, Default)]
pub(crate) struct MeshBuilder {
    points: Vec<Vec3>,
    faces: Vec<Vec<usize>>,
    face_index: HashMap<Vec<usize>, usize>,
    cells: Vec<Vec<usize>>,
}

impl MeshBuilder {
    pub(crate) fn push_point(&mut self, p: Vec3) -> usize {
        self.points.push(p);
        self.points.len() - 1
    }

    /// Adds a cell; the first cell to mention a face fixes its orientation.
    pub(crate) fn push_cell(&mut self, loops: Vec<Vec<usize>>) {
        let ids = loops
            .into_iter()
            .map(|face| {
                let mut key = face.clone();
                key.sort_unstable();
                *self.face_index.entry(key).or_insert_with(|| {
                    self.faces.push(face);
                    self.faces.len() - 1
                })
            })
            .collect();
        self.cells.push(ids);
    }

    pub(crate) fn build(self) -> Result<PolyMesh> {
        PolyMesh::new(self.points, self.faces, self.cells)
    }
}
