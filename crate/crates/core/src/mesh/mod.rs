//! Face-addressed polyhedral mesh.
//!
//! Faces are polygons listed by point index. Internal faces come first and
//! carry an owner and a neighbour cell with `owner < neighbour`; their area
//! vector points from owner to neighbour. Boundary faces follow, grouped
//! into contiguous patches, and point out of their owner cell.

mod block;
mod geometry;
mod io;
mod validate;

use std::fmt;
use std::str::FromStr;

pub use block::build_block_mesh;
pub use geometry::{polygon_metrics, MeshGeometry};
pub use io::{read_mesh, write_mesh, parse_mesh, format_mesh};
pub use validate::{validate_geometry, validate_mesh, Issue, ValidationReport};

use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatchKind {
    FixedDisplacement,
    Traction,
    Symmetry,
}

impl PatchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PatchKind::FixedDisplacement => "fixedDisplacement",
            PatchKind::Traction => "traction",
            PatchKind::Symmetry => "symmetry",
        }
    }
}

impl fmt::Display for PatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PatchKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixedDisplacement" => Ok(PatchKind::FixedDisplacement),
            "traction" => Ok(PatchKind::Traction),
            "symmetry" => Ok(PatchKind::Symmetry),
            other => Err(format!(
                "unknown patch kind `{other}` (expected fixedDisplacement, traction or symmetry)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPatch {
    pub name: String,
    pub start_face: usize,
    pub face_count: usize,
    pub kind: PatchKind,
}

impl BoundaryPatch {
    pub fn faces(&self) -> std::ops::Range<usize> {
        self.start_face..self.start_face + self.face_count
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyMesh {
    pub points: Vec<Vec3>,
    pub faces: Vec<Vec<usize>>,
    pub owner: Vec<usize>,
    pub neighbour: Vec<usize>,
    pub patches: Vec<BoundaryPatch>,
    pub cell_count: usize,
}

impl PolyMesh {
    /// Builds a mesh, inferring the cell count from the owner/neighbour
    /// arrays. No validation is performed.
    pub fn new(
        points: Vec<Vec3>,
        faces: Vec<Vec<usize>>,
        owner: Vec<usize>,
        neighbour: Vec<usize>,
        patches: Vec<BoundaryPatch>,
    ) -> Self {
        let cell_count = owner
            .iter()
            .chain(neighbour.iter())
            .max()
            .map_or(0, |&m| m + 1);
        PolyMesh {
            points,
            faces,
            owner,
            neighbour,
            patches,
            cell_count,
        }
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn internal_face_count(&self) -> usize {
        self.neighbour.len()
    }

    pub fn boundary_face_count(&self) -> usize {
        self.faces.len().saturating_sub(self.neighbour.len())
    }

    pub fn is_internal(&self, face: usize) -> bool {
        face < self.neighbour.len()
    }

    pub fn patch_index(&self, name: &str) -> Option<usize> {
        self.patches.iter().position(|p| p.name == name)
    }

    /// Faces of every cell, ascending by face index.
    pub fn cell_faces(&self) -> Vec<Vec<usize>> {
        let mut cells = vec![Vec::new(); self.cell_count];
        for (f, &o) in self.owner.iter().enumerate() {
            if o < self.cell_count {
                cells[o].push(f);
            }
        }
        for (f, &n) in self.neighbour.iter().enumerate() {
            if n < self.cell_count {
                cells[n].push(f);
            }
        }
        for faces in &mut cells {
            faces.sort_unstable();
        }
        cells
    }

    /// Patch index of each boundary face, indexed by `face - internal_face_count`.
    /// Faces not covered by any patch map to `None`.
    pub fn boundary_face_patches(&self) -> Vec<Option<usize>> {
        let n_int = self.internal_face_count();
        let mut out = vec![None; self.boundary_face_count()];
        for (p, patch) in self.patches.iter().enumerate() {
            for f in patch.faces() {
                if let Some(slot) = f.checked_sub(n_int).and_then(|i| out.get_mut(i)) {
                    *slot = Some(p);
                }
            }
        }
        out
    }

    pub fn translate(&mut self, offset: Vec3) {
        for p in &mut self.points {
            *p += offset;
        }
    }
}
