use std::collections::HashMap;
use std::fmt;

use super::Discretisation;
use crate::fields::{BoundaryCondition, TensorField, TimeState, VectorField};
use crate::linsolve::SparseSymmetricMatrix;
use crate::{Error, Result, Vec3};

/// Body-force acceleration per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BodyForceField {
    pub cells: Vec<Vec3>,
}

impl BodyForceField {
    pub fn uniform(cell_count: usize, value: Vec3) -> Self {
        BodyForceField {
            cells: vec![value; cell_count],
        }
    }

    pub fn zeros(cell_count: usize) -> Self {
        Self::uniform(cell_count, Vec3::zeros())
    }
}

/// `a_P u_P - sum a_N u_N = b_P` for the three displacement components.
/// The components share `a_N`; `a_P` differs only through symmetry faces,
/// which act implicitly on the normal component alone.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumSystem {
    /// `a_P` per cell and component.
    pub diag: Vec<Vec3>,
    /// `a_N` of each internal face, shared by the owner and neighbour rows.
    pub off_diag: Vec<f64>,
    pub rhs: Vec<Vec3>,
    /// Boundary implicit coefficients summed per cell (part of `diag`).
    pub boundary_diag: Vec<Vec3>,
    /// Inertia coefficient per cell (part of `diag`).
    pub inertia_diag: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PropertyViolation {
    NonPositiveCoefficient { face: usize, value: f64 },
    Asymmetric { row: usize, col: usize },
    NotDominant { row: usize, component: usize, excess: f64 },
    NotStrictlyDominant { row: usize, component: usize },
}

impl fmt::Display for PropertyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyViolation::NonPositiveCoefficient { face, value } => {
                write!(f, "face {face}: a_N = {value:e} is not positive")
            }
            PropertyViolation::Asymmetric { row, col } => write!(f, "entry ({row}, {col}) differs from ({col}, {row})"),
            PropertyViolation::NotDominant { row, component, excess } => {
                write!(f, "row {row}, component {component}: a_P - sum a_N = {excess:e} < 0")
            }
            PropertyViolation::NotStrictlyDominant { row, component } => {
                write!(f, "row {row}, component {component}: constrained or inertial row is not strictly dominant")
            }
        }
    }
}

impl MomentumSystem {
    pub fn cell_count(&self) -> usize {
        self.diag.len()
    }

    /// `b_P - (a_P u_P - sum a_N u_N)` per cell.
    pub fn residual(&self, disc: &Discretisation, u: &[Vec3]) -> Vec<Vec3> {
        let n_int = disc.n_internal();
        disc.exec.map(self.cell_count(), |c| {
            let mut r = self.rhs[c] - self.diag[c].component_mul(&u[c]);
            for &f in &disc.geom.cell_faces[c] {
                if f < n_int {
                    let other = if disc.mesh.owner[f] == c { disc.mesh.neighbour[f] } else { disc.mesh.owner[f] };
                    r += self.off_diag[f] * u[other];
                }
            }
            r
        })
    }

    /// Scale-free residual per component,
    /// `sum |r_P| / max(sum (|a_P| |u_P| + |b_P|), 1e-300)`.
    ///
    /// Each denominator is floored at `1e-3` of the largest one, so a
    /// component whose exact solution vanishes is judged against the force
    /// scale of the problem rather than against its own round-off.
    pub fn normalised_residual(&self, disc: &Discretisation, u: &[Vec3]) -> [f64; 3] {
        let r = self.residual(disc, u);
        let mut num = [0.0; 3];
        let mut den = [0.0; 3];
        for k in 0..3 {
            num[k] = r.iter().map(|v| v[k].abs()).sum();
            den[k] = (0..self.cell_count())
                .map(|c| self.diag[c][k].abs() * u[c][k].abs() + self.rhs[c][k].abs())
                .sum();
        }
        let floor = 1e-3 * den.iter().cloned().fold(0.0, f64::max);
        std::array::from_fn(|k| num[k] / den[k].max(floor).max(1e-300))
    }

    /// Sparse matrix of one component with `a_P` on the diagonal and
    /// `-a_N` off it.
    pub fn matrix(&self, disc: &Discretisation, component: usize) -> SparseSymmetricMatrix {
        let mut upper = vec![0.0; disc.pattern.nnz_upper()];
        for (f, &a) in self.off_diag.iter().enumerate() {
            upper[disc.slots[f]] -= a;
        }
        let diag = self.diag.iter().map(|d| d[component]).collect();
        SparseSymmetricMatrix::new(disc.pattern.clone(), diag, upper).expect("pattern built from the same mesh")
    }

    /// Checks positive off-diagonal coefficients, row-wise symmetry of the
    /// cell-by-cell coefficient lists and diagonal dominance (strict for
    /// rows with inertia or a constraining boundary face).
    pub fn check_properties(&self, disc: &Discretisation) -> Vec<PropertyViolation> {
        let mut out = Vec::new();
        for (face, &value) in self.off_diag.iter().enumerate() {
            if !(value > 0.0) {
                out.push(PropertyViolation::NonPositiveCoefficient { face, value });
            }
        }
        let n_int = disc.n_internal();
        let rows: Vec<HashMap<usize, f64>> = (0..self.cell_count())
            .map(|c| {
                let mut row = HashMap::new();
                for &f in disc.geom.cell_faces[c].iter().filter(|&&f| f < n_int) {
                    let other = if disc.mesh.owner[f] == c { disc.mesh.neighbour[f] } else { disc.mesh.owner[f] };
                    *row.entry(other).or_insert(0.0) += self.off_diag[f];
                }
                row
            })
            .collect();
        for (r, row) in rows.iter().enumerate() {
            for (&c, &v) in row {
                if rows[c].get(&r) != Some(&v) {
                    out.push(PropertyViolation::Asymmetric { row: r, col: c });
                }
            }
            let off: f64 = row.values().map(|v| v.abs()).sum();
            for k in 0..3 {
                let d = self.diag[r][k];
                let excess = d.abs() - off;
                // interior rows balance exactly; allow summation-order round-off
                if excess < -1e-12 * d.abs() {
                    out.push(PropertyViolation::NotDominant { row: r, component: k, excess });
                }
                let constrained = self.boundary_diag[r][k] > 0.0 || self.inertia_diag[r] > 0.0;
                if constrained && !(d > off) {
                    out.push(PropertyViolation::NotStrictlyDominant { row: r, component: k });
                }
            }
        }
        out
    }
}

impl Discretisation<'_> {
    /// Adds boundary-face contributions to `system` and returns the force
    /// each boundary face exerts on the body.
    ///
    /// Fixed faces add `a_b = K |Delta_b| / |d_b|` to `a_P` and
    /// `a_b u_b + n . sigma_b |Gamma| - K Delta_b . grad(u)_b` to `b_P`.
    /// Symmetry faces add `a_b n_i^2` to component `i` of `a_P`, so only the
    /// normal displacement is held implicitly, and the normal stress force
    /// to `b_P`. Traction faces add the prescribed force only.
    pub fn apply_boundary_conditions(
        &self,
        system: &mut MomentumSystem,
        u: &VectorField,
        grads: &TensorField,
        time: &TimeState,
    ) -> Result<Vec<Vec3>> {
        if time.steady && !self.bcs.constrains_displacement() {
            return Err(Error::SingularSystem(
                "steady problem has no fixedDisplacement or symmetry patch".into(),
            ));
        }
        let n_int = self.n_internal();
        let terms = self.exec.map(self.n_boundary(), |b| self.boundary_face_terms(b, u, grads));
        let mut forces = Vec::with_capacity(terms.len());
        for (b, t) in terms.iter().enumerate() {
            let p = self.mesh.owner[n_int + b];
            system.diag[p] += t.diag;
            system.boundary_diag[p] += t.diag;
            system.rhs[p] += t.source;
            forces.push(t.source - t.diag.component_mul(&u.cells[p]));
        }
        Ok(forces)
    }

    /// Assembles the segregated momentum system from the current
    /// displacement and gradients.
    pub fn assemble_momentum(
        &self,
        u: &VectorField,
        grads: &TensorField,
        body_force: &BodyForceField,
        time: &TimeState,
    ) -> Result<MomentumSystem> {
        if !time.steady && !(time.dt > 0.0) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {}", time.dt)));
        }
        let n_int = self.n_internal();
        let rho = self.material.density;
        let off_diag = self.exec.map(n_int, |f| self.face_coefficient(f));
        let face_force = self.exec.map(n_int, |f| self.internal_explicit_force(f, &grads.internal_faces[f]));

        let rows = self.exec.map(self.cell_count(), |c| {
            let volume = self.geom.cell_volume[c];
            let (inertia, mut rhs) = if time.steady {
                (0.0, Vec3::zeros())
            } else {
                let m = rho * volume / (time.dt * time.dt);
                (m, m * (2.0 * u.old[c] - u.old_old[c]))
            };
            rhs += rho * volume * body_force.cells[c];
            let mut diag = inertia;
            for &f in self.geom.cell_faces[c].iter().filter(|&&f| f < n_int) {
                diag += off_diag[f];
                if self.mesh.owner[f] == c {
                    rhs += face_force[f];
                } else {
                    rhs -= face_force[f];
                }
            }
            (diag, rhs, inertia)
        });

        let n = rows.len();
        let mut system = MomentumSystem {
            diag: Vec::with_capacity(n),
            off_diag,
            rhs: Vec::with_capacity(n),
            boundary_diag: vec![Vec3::zeros(); n],
            inertia_diag: Vec::with_capacity(n),
        };
        for (d, r, i) in rows {
            system.diag.push(Vec3::repeat(d));
            system.rhs.push(r);
            system.inertia_diag.push(i);
        }
        self.apply_boundary_conditions(&mut system, u, grads, time)?;
        Ok(system)
    }

    /// Whether a cell touches a fixed or symmetry patch.
    pub fn is_constrained_cell(&self, cell: usize) -> bool {
        let n_int = self.n_internal();
        self.geom.cell_faces[cell].iter().any(|&f| {
            f >= n_int && !matches!(self.boundary_condition(f - n_int), BoundaryCondition::Traction { .. })
        })
    }
}
