//! Legacy ASCII VTK output with polyhedral cells.

use std::fmt::Write as _;
use std::path::Path;

use crate::fields::{TensorField, VectorField};
use crate::material::{von_mises, LinearElasticMaterial};
use crate::mesh::PolyMesh;
use crate::{Error, Mat3, Result, Vec3};

/// VTK cell type of an arbitrary polyhedron.
pub const VTK_POLYHEDRON: u8 = 42;

/// Cell fields written at one output step.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputSet {
    pub displacement: Vec<Vec3>,
    pub stress: Vec<Mat3>,
    pub von_mises: Vec<f64>,
}

impl OutputSet {
    /// Stress from the cell gradients.
    pub fn new(material: &LinearElasticMaterial, u: &VectorField, grads: &TensorField) -> Self {
        let stress: Vec<Mat3> = grads.cells.iter().map(|g| material.stress(g)).collect();
        let von_mises = stress.iter().map(von_mises).collect();
        OutputSet {
            displacement: u.cells.clone(),
            stress,
            von_mises,
        }
    }
}

/// Renders `mesh` and `out` as a legacy unstructured grid. Faces are listed
/// with outward orientation for every cell.
pub fn format_vtk(mesh: &PolyMesh, out: &OutputSet, title: &str) -> String {
    let n = mesh.cell_count;
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 4.2\n");
    let title: String = title.chars().filter(|c| *c != '\n').take(255).collect();
    let _ = writeln!(s, "{title}");
    s.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {} double", mesh.points.len());
    for p in &mesh.points {
        let _ = writeln!(s, "{} {} {}", p.x, p.y, p.z);
    }

    let cell_faces = mesh.cell_faces();
    let mut size = 0;
    let mut lines = Vec::with_capacity(n);
    for (c, faces) in cell_faces.iter().enumerate() {
        let mut stream = vec![faces.len()];
        for &f in faces {
            stream.push(mesh.faces[f].len());
            if mesh.owner[f] == c {
                stream.extend_from_slice(&mesh.faces[f]);
            } else {
                stream.extend(mesh.faces[f].iter().rev());
            }
        }
        size += stream.len() + 1;
        let mut line = stream.len().to_string();
        for v in stream {
            let _ = write!(line, " {v}");
        }
        lines.push(line);
    }
    let _ = writeln!(s, "CELLS {n} {size}");
    for l in lines {
        s.push_str(&l);
        s.push('\n');
    }
    let _ = writeln!(s, "CELL_TYPES {n}");
    for _ in 0..n {
        let _ = writeln!(s, "{VTK_POLYHEDRON}");
    }

    let _ = writeln!(s, "CELL_DATA {n}");
    s.push_str("VECTORS displacement double\n");
    for v in &out.displacement {
        let _ = writeln!(s, "{} {} {}", v.x, v.y, v.z);
    }
    s.push_str("TENSORS stress double\n");
    for t in &out.stress {
        for i in 0..3 {
            let _ = writeln!(s, "{} {} {}", t[(i, 0)], t[(i, 1)], t[(i, 2)]);
        }
    }
    s.push_str("SCALARS vonMises double 1\nLOOKUP_TABLE default\n");
    for v in &out.von_mises {
        let _ = writeln!(s, "{v}");
    }
    s
}

pub fn write_vtk(path: impl AsRef<Path>, mesh: &PolyMesh, out: &OutputSet, title: &str) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_vtk(mesh, out, title)).map_err(|e| Error::io(path, e))
}
