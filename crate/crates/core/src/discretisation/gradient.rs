use super::Discretisation;
use crate::fields::{BoundaryCondition, TensorField, VectorField};
use crate::{Error, Mat3, Result, Vec3};

/// Least-squares weight per stencil direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GradientWeighting {
    Unity,
    /// `w = 1 / |d|`.
    #[default]
    InverseDistance,
}

impl GradientWeighting {
    pub fn as_str(self) -> &'static str {
        match self {
            GradientWeighting::Unity => "unity",
            GradientWeighting::InverseDistance => "inverseDistance",
        }
    }

    fn weight_squared(self, d: &Vec3) -> f64 {
        match self {
            GradientWeighting::Unity => 1.0,
            GradientWeighting::InverseDistance => 1.0 / d.norm_squared(),
        }
    }
}

impl std::str::FromStr for GradientWeighting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unity" => Ok(GradientWeighting::Unity),
            "inverseDistance" => Ok(GradientWeighting::InverseDistance),
            other => Err(format!("unknown gradient weighting `{other}` (expected unity or inverseDistance)")),
        }
    }
}

/// Smallest accepted ratio of extreme eigenvalues of the normal matrix.
const STENCIL_CONDITION: f64 = 1e-12;

/// Stencil vector from `cell` across face `f`, towards the neighbour centroid
/// or the boundary face centroid.
fn stencil_delta(disc: &Discretisation, f: usize, cell: usize) -> Vec3 {
    if disc.mesh.owner[f] == cell {
        disc.geom.delta[f]
    } else {
        -disc.geom.delta[f]
    }
}

pub(super) fn least_squares_inverses(disc: &Discretisation) -> Result<Vec<Mat3>> {
    disc.exec
        .map(disc.cell_count(), |c| {
            let mut m = Mat3::zeros();
            for &f in &disc.geom.cell_faces[c] {
                let d = stencil_delta(disc, f, c);
                m += disc.weighting.weight_squared(&d) * d * d.transpose();
            }
            let eig = m.symmetric_eigenvalues();
            let (lo, hi) = (eig.min(), eig.max());
            if !(lo > STENCIL_CONDITION * hi) {
                return Err(Error::DegenerateStencil { cell: c });
            }
            m.try_inverse().ok_or(Error::DegenerateStencil { cell: c })
        })
        .into_iter()
        .collect()
}

impl Discretisation<'_> {
    /// Refreshes boundary-face displacements: `u_P + d . grad(u)_P` on
    /// traction patches and its tangential projection on symmetry patches.
    /// Fixed faces keep their stored value, which [`initialise_field`] sets
    /// from the patch and callers may override face by face.
    ///
    /// [`initialise_field`]: crate::fields::initialise_field
    pub fn update_boundary_values(&self, u: &mut VectorField, cell_grads: &[Mat3]) {
        let n_int = self.n_internal();
        let values = self.exec.map(self.n_boundary(), |b| {
            let f = n_int + b;
            let p = self.mesh.owner[f];
            let extrapolated = || u.cells[p] + cell_grads[p].transpose() * self.geom.delta[f];
            match self.boundary_condition(b) {
                BoundaryCondition::FixedDisplacement(_) => u.boundary[b],
                BoundaryCondition::Traction { .. } => extrapolated(),
                BoundaryCondition::Symmetry => {
                    let n = self.unit_normal(f);
                    let w = extrapolated();
                    w - n * n.dot(&w)
                }
            }
        });
        u.boundary = values;
    }

    /// Least-squares cell gradients over all faces of each cell, boundary
    /// faces included with their current boundary values.
    pub fn least_squares_gradient(&self, u: &VectorField) -> Vec<Mat3> {
        let n_int = self.n_internal();
        self.exec.map(self.cell_count(), |c| {
            let up = u.cells[c];
            let mut rhs = Mat3::zeros();
            for &f in &self.geom.cell_faces[c] {
                let d = stencil_delta(self, f, c);
                let other = if f < n_int {
                    let o = self.mesh.owner[f];
                    u.cells[if o == c { self.mesh.neighbour[f] } else { o }]
                } else {
                    u.boundary[f - n_int]
                };
                rhs += self.weighting.weight_squared(&d) * d * (other - up).transpose();
            }
            self.ls_inverse[c] * rhs
        })
    }

    /// `gamma_f G_P + (1 - gamma_f) G_N` on every internal face.
    pub fn interpolate_face_gradients(&self, cell_grads: &[Mat3]) -> Vec<Mat3> {
        self.exec.map(self.n_internal(), |f| {
            let g = self.geom.gamma[f];
            cell_grads[self.mesh.owner[f]] * g + cell_grads[self.mesh.neighbour[f]] * (1.0 - g)
        })
    }

    /// Owner-cell gradient with its component along `d_b` replaced by the
    /// one-sided difference to the boundary value.
    pub fn boundary_face_gradients(&self, u: &VectorField, cell_grads: &[Mat3]) -> Vec<Mat3> {
        let n_int = self.n_internal();
        self.exec.map(self.n_boundary(), |b| {
            let f = n_int + b;
            let p = self.mesh.owner[f];
            let d = self.geom.delta[f];
            let dist = d.norm();
            let dhat = d / dist;
            let gp = cell_grads[p];
            let correction = (u.boundary[b] - u.cells[p]) / dist - gp.transpose() * dhat;
            gp + dhat * correction.transpose()
        })
    }

    /// One full gradient refresh: boundary values from the previous cell
    /// gradients, then new cell, internal-face and boundary-face gradients.
    pub fn refresh_gradients(&self, u: &mut VectorField, grads: &mut TensorField) {
        self.update_boundary_values(u, &grads.cells);
        grads.cells = self.least_squares_gradient(u);
        grads.internal_faces = self.interpolate_face_gradients(&grads.cells);
        grads.boundary_faces = self.boundary_face_gradients(u, &grads.cells);
    }
}
