//! Spatial and temporal discretisation of the momentum balance.
//!
//! Each internal face contributes once: its force is added to the owner row
//! and subtracted from the neighbour row. The implicit part of every face is
//! the two-point diffusion `K |Delta| (u_N - u_P) / |d|` with
//! `K = 2 mu + lambda`; everything else is evaluated explicitly from the
//! latest displacement and gradient fields.

mod assembly;
mod gradient;
mod terms;

use std::sync::Arc;

pub use assembly::{BodyForceField, MomentumSystem, PropertyViolation};
pub use gradient::GradientWeighting;

use crate::fields::{BoundaryCondition, BoundaryConditions};
use crate::linsolve::SymmetricPattern;
use crate::material::LinearElasticMaterial;
use crate::mesh::{MeshGeometry, PolyMesh};
use crate::{Error, Execution, Mat3, Result, Vec3};

/// Mesh, metrics, material and boundary conditions bundled with the
/// geometry-only data the operators reuse every iteration.
#[derive(Debug, Clone)]
pub struct Discretisation<'a> {
    pub mesh: &'a PolyMesh,
    pub geom: &'a MeshGeometry,
    pub material: LinearElasticMaterial,
    pub bcs: &'a BoundaryConditions,
    pub weighting: GradientWeighting,
    pub exec: Execution,
    /// Patch of each boundary face.
    boundary_patch: Vec<usize>,
    /// Inverse least-squares normal matrix of each cell.
    ls_inverse: Vec<Mat3>,
    pattern: Arc<SymmetricPattern>,
    slots: Vec<usize>,
}

impl<'a> Discretisation<'a> {
    pub fn new(
        mesh: &'a PolyMesh,
        geom: &'a MeshGeometry,
        material: LinearElasticMaterial,
        bcs: &'a BoundaryConditions,
        weighting: GradientWeighting,
        exec: Execution,
    ) -> Result<Self> {
        if bcs.patches.len() != mesh.patches.len() {
            return Err(Error::InvalidArgument(format!(
                "{} boundary conditions for {} patches",
                bcs.patches.len(),
                mesh.patches.len()
            )));
        }
        let boundary_patch = mesh
            .boundary_face_patches()
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                p.ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "boundary face {} has no patch",
                        i + mesh.internal_face_count()
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let pairs: Vec<_> = mesh
            .owner
            .iter()
            .zip(&mesh.neighbour)
            .map(|(&o, &n)| (o, n))
            .collect();
        let (pattern, slots) = SymmetricPattern::from_pairs(mesh.cell_count, &pairs)?;
        let mut disc = Discretisation {
            mesh,
            geom,
            material,
            bcs,
            weighting,
            exec,
            boundary_patch,
            ls_inverse: Vec::new(),
            pattern: Arc::new(pattern),
            slots,
        };
        disc.ls_inverse = gradient::least_squares_inverses(&disc)?;
        Ok(disc)
    }

    pub fn cell_count(&self) -> usize {
        self.mesh.cell_count
    }

    pub fn n_internal(&self) -> usize {
        self.mesh.internal_face_count()
    }

    pub fn n_boundary(&self) -> usize {
        self.mesh.boundary_face_count()
    }

    /// Condition applied on boundary face `b` (0-based within boundary faces).
    pub fn boundary_condition(&self, b: usize) -> &BoundaryCondition {
        &self.bcs.patches[self.boundary_patch[b]]
    }

    pub fn boundary_patch(&self, b: usize) -> usize {
        self.boundary_patch[b]
    }

    /// Implicit coefficient `K |Delta_f| / |d_f|` of face `f`.
    pub fn face_coefficient(&self, f: usize) -> f64 {
        self.material.implicit_stiffness() * self.geom.ortho[f].norm() / self.geom.delta[f].norm()
    }

    pub(crate) fn unit_normal(&self, f: usize) -> Vec3 {
        self.geom.face_area[f].normalize()
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use crate::mesh::build_block_mesh;

    /// Block mesh whose interior points are moved randomly by up to
    /// `fraction` of the local spacing, deterministically from `seed`.
    pub fn distorted_block(div: [usize; 3], fraction: f64, seed: u64) -> PolyMesh {
        let mut m = build_block_mesh(Vec3::zeros(), Vec3::new(1.0, 1.0, 1.0), div).unwrap();
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let h = [1.0 / div[0] as f64, 1.0 / div[1] as f64, 1.0 / div[2] as f64];
        for p in m.points.iter_mut() {
            let interior = (0..3).all(|d| p[d] > 1e-12 && p[d] < 1.0 - 1e-12);
            if interior {
                for d in 0..3 {
                    p[d] += fraction * h[d] * next();
                }
            }
        }
        m
    }
}
