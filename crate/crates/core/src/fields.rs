//! Cell-centred fields, boundary conditions and time levels.

use crate::mesh::{PatchKind, PolyMesh};
use crate::{Error, Mat3, Result, Vec3};

/// Displacement at cell centroids plus boundary-face values and the two
/// previous time levels.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub cells: Vec<Vec3>,
    /// One value per boundary face, indexed by `face - internal_face_count`.
    pub boundary: Vec<Vec3>,
    pub old: Vec<Vec3>,
    pub old_old: Vec<Vec3>,
}

/// Displacement gradient `G[(i, j)] = du_j/dx_i` at cells and faces.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField {
    pub cells: Vec<Mat3>,
    pub internal_faces: Vec<Mat3>,
    pub boundary_faces: Vec<Mat3>,
}

impl TensorField {
    pub fn zeros(mesh: &PolyMesh) -> Self {
        TensorField {
            cells: vec![Mat3::zeros(); mesh.cell_count],
            internal_faces: vec![Mat3::zeros(); mesh.internal_face_count()],
            boundary_faces: vec![Mat3::zeros(); mesh.boundary_face_count()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    FixedDisplacement(Vec3),
    /// Surface traction `traction - pressure * n`, uniform over the patch.
    Traction { traction: Vec3, pressure: f64 },
    Symmetry,
}

impl BoundaryCondition {
    pub fn kind(&self) -> PatchKind {
        match self {
            BoundaryCondition::FixedDisplacement(_) => PatchKind::FixedDisplacement,
            BoundaryCondition::Traction { .. } => PatchKind::Traction,
            BoundaryCondition::Symmetry => PatchKind::Symmetry,
        }
    }

    pub fn traction(t: Vec3) -> Self {
        BoundaryCondition::Traction {
            traction: t,
            pressure: 0.0,
        }
    }

    pub fn pressure(p: f64) -> Self {
        BoundaryCondition::Traction {
            traction: Vec3::zeros(),
            pressure: p,
        }
    }

    pub fn free() -> Self {
        Self::traction(Vec3::zeros())
    }
}

/// One condition per mesh patch, in patch order.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryConditions {
    pub patches: Vec<BoundaryCondition>,
}

impl BoundaryConditions {
    /// Checks the list against the mesh: one entry per patch, matching kinds.
    pub fn new(mesh: &PolyMesh, patches: Vec<BoundaryCondition>) -> Result<Self> {
        if patches.len() != mesh.patches.len() {
            return Err(Error::InvalidArgument(format!(
                "{} boundary conditions for {} patches",
                patches.len(),
                mesh.patches.len()
            )));
        }
        for (bc, patch) in patches.iter().zip(&mesh.patches) {
            if bc.kind() != patch.kind {
                return Err(Error::InvalidArgument(format!(
                    "patch {} is {} but its condition is {}",
                    patch.name,
                    patch.kind,
                    bc.kind()
                )));
            }
        }
        Ok(BoundaryConditions { patches })
    }

    /// Re-types the mesh patches to match `patches`, then builds the set.
    pub fn assign(mesh: &mut PolyMesh, patches: Vec<BoundaryCondition>) -> Result<Self> {
        for (patch, bc) in mesh.patches.iter_mut().zip(&patches) {
            patch.kind = bc.kind();
        }
        Self::new(mesh, patches)
    }

    /// Convenience: set conditions by patch name, everything else traction-free.
    pub fn assign_by_name(mesh: &mut PolyMesh, named: &[(&str, BoundaryCondition)]) -> Result<Self> {
        let mut list = vec![BoundaryCondition::free(); mesh.patches.len()];
        for (name, bc) in named {
            let i = mesh
                .patch_index(name)
                .ok_or_else(|| Error::InvalidArgument(format!("no patch named `{name}`")))?;
            list[i] = *bc;
        }
        Self::assign(mesh, list)
    }

    /// Whether any patch pins displacement (fixed or symmetry).
    pub fn constrains_displacement(&self) -> bool {
        self.patches
            .iter()
            .any(|bc| !matches!(bc, BoundaryCondition::Traction { .. }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeState {
    pub dt: f64,
    pub step_index: usize,
    pub current_time: f64,
    pub steady: bool,
}

impl TimeState {
    pub fn steady() -> Self {
        TimeState {
            dt: 1.0,
            step_index: 0,
            current_time: 0.0,
            steady: true,
        }
    }

    pub fn transient(dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
        }
        Ok(TimeState {
            dt,
            step_index: 0,
            current_time: 0.0,
            steady: false,
        })
    }
}

/// Uniform initial field. Fixed-displacement patches take their prescribed
/// value; other boundary faces take the initial value.
pub fn initialise_field(mesh: &PolyMesh, initial: Vec3, bcs: &BoundaryConditions) -> VectorField {
    let n_int = mesh.internal_face_count();
    let mut boundary = vec![initial; mesh.boundary_face_count()];
    for (patch, bc) in mesh.patches.iter().zip(&bcs.patches) {
        if let BoundaryCondition::FixedDisplacement(value) = bc {
            for f in patch.faces() {
                boundary[f - n_int] = *value;
            }
        }
    }
    VectorField {
        cells: vec![initial; mesh.cell_count],
        boundary,
        old: vec![initial; mesh.cell_count],
        old_old: vec![initial; mesh.cell_count],
    }
}

/// Shifts the time levels after a converged step.
pub fn advance_time(field: &mut VectorField, state: &mut TimeState) {
    std::mem::swap(&mut field.old_old, &mut field.old);
    field.old.copy_from_slice(&field.cells);
    state.step_index += 1;
    state.current_time += state.dt;
}
