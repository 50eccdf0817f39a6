use super::Discretisation;
use crate::fields::{BoundaryCondition, TensorField, VectorField};
use crate::{Mat3, Vec3};

/// Implicit and explicit parts a boundary face adds to its owner row:
/// `diag` joins `a_P`, `source` joins `b_P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BoundaryFaceTerms {
    /// Per-component implicit coefficient.
    pub diag: Vec3,
    pub source: Vec3,
}

impl Discretisation<'_> {
    /// `n . sigma |Gamma|` for a face gradient.
    pub(crate) fn face_traction(&self, grad: &Mat3, area: &Vec3) -> Vec3 {
        self.material.stress(grad) * area
    }

    /// Explicit owner-side force of internal face `f`: the surface stress
    /// plus the explicit part of the third-order diffusion,
    /// `K (k_f - Gamma_f) . grad(u)_f`.
    pub(crate) fn internal_explicit_force(&self, f: usize, grad: &Mat3) -> Vec3 {
        let k = self.material.implicit_stiffness();
        let area = self.geom.face_area[f];
        self.face_traction(grad, &area) + k * (grad.transpose() * (self.geom.non_ortho[f] - area))
    }

    pub(crate) fn boundary_face_terms(&self, b: usize, u: &VectorField, grads: &TensorField) -> BoundaryFaceTerms {
        let f = self.n_internal() + b;
        let area = self.geom.face_area[f];
        let grad = &grads.boundary_faces[b];
        let k = self.material.implicit_stiffness();
        match *self.boundary_condition(b) {
            BoundaryCondition::Traction { traction, pressure } => {
                let n = area.normalize();
                BoundaryFaceTerms {
                    diag: Vec3::zeros(),
                    source: (traction - pressure * n) * area.norm(),
                }
            }
            BoundaryCondition::FixedDisplacement(_) => {
                let a_b = self.face_coefficient(f);
                let surface = self.face_traction(grad, &area);
                let correction = k * (grad.transpose() * self.geom.ortho[f]);
                BoundaryFaceTerms {
                    diag: Vec3::repeat(a_b),
                    source: a_b * u.boundary[b] + surface - correction,
                }
            }
            BoundaryCondition::Symmetry => {
                // Only the normal component is implicit, with coefficient
                // a_b n_i^2; the tangential components see the zero shear
                // directly and are not pinned to a lagged value.
                let n = area.normalize();
                let surface = n * n.dot(&self.face_traction(grad, &area));
                let diag = self.face_coefficient(f) * n.component_mul(&n);
                let p = self.mesh.owner[f];
                BoundaryFaceTerms {
                    diag,
                    source: surface + diag.component_mul(&u.cells[p]),
                }
            }
        }
    }

    /// Surface-stress force on every cell: interpolated face gradients on
    /// internal faces, boundary gradients on fixed faces, their normal part
    /// on symmetry faces and the prescribed traction on traction faces.
    pub fn explicit_surface_force(&self, grads: &TensorField) -> Vec<Vec3> {
        let n_int = self.n_internal();
        let internal = self.exec.map(n_int, |f| {
            self.face_traction(&grads.internal_faces[f], &self.geom.face_area[f])
        });
        let boundary = self.exec.map(self.n_boundary(), |b| {
            let f = n_int + b;
            let area = self.geom.face_area[f];
            match *self.boundary_condition(b) {
                BoundaryCondition::Traction { traction, pressure } => {
                    (traction - pressure * area.normalize()) * area.norm()
                }
                BoundaryCondition::FixedDisplacement(_) => self.face_traction(&grads.boundary_faces[b], &area),
                BoundaryCondition::Symmetry => {
                    let n = area.normalize();
                    n * n.dot(&self.face_traction(&grads.boundary_faces[b], &area))
                }
            }
        });
        self.gather(&internal, &boundary)
    }

    /// Third-order diffusion term
    /// `K [|Delta| (u_N - u_P)/|d| + k . grad(u)_f] - Gamma . K grad(u)_f`
    /// on internal faces; zero on boundary faces.
    pub fn stabilization_term(&self, u: &VectorField, grads: &TensorField) -> Vec<Vec3> {
        let k = self.material.implicit_stiffness();
        let internal = self.exec.map(self.n_internal(), |f| {
            let (p, n) = (self.mesh.owner[f], self.mesh.neighbour[f]);
            let g = grads.internal_faces[f].transpose();
            let normal = self.geom.ortho[f].norm() * (u.cells[n] - u.cells[p]) / self.geom.delta[f].norm();
            k * (normal + g * self.geom.non_ortho[f]) - k * (g * self.geom.face_area[f])
        });
        self.gather(&internal, &[])
    }

    /// Force each boundary face exerts on its cell for the current state,
    /// `source - diag u_P` componentwise.
    pub fn boundary_forces(&self, u: &VectorField, grads: &TensorField) -> Vec<Vec3> {
        let n_int = self.n_internal();
        self.exec.map(self.n_boundary(), |b| {
            let t = self.boundary_face_terms(b, u, grads);
            t.source - t.diag.component_mul(&u.cells[self.mesh.owner[n_int + b]])
        })
    }

    /// Per-cell sum of face quantities: internal values added to the owner
    /// and subtracted from the neighbour, boundary values added to the
    /// owner. Faces are visited in ascending order for every cell.
    pub(crate) fn gather(&self, internal: &[Vec3], boundary: &[Vec3]) -> Vec<Vec3> {
        let n_int = self.n_internal();
        self.exec.map(self.cell_count(), |c| {
            let mut sum = Vec3::zeros();
            for &f in &self.geom.cell_faces[c] {
                if f < n_int {
                    if self.mesh.owner[f] == c {
                        sum += internal[f];
                    } else {
                        sum -= internal[f];
                    }
                } else if let Some(v) = boundary.get(f - n_int) {
                    sum += v;
                }
            }
            sum
        })
    }
}
