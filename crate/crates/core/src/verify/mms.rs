use std::f64::consts::PI;

use crate::discretisation::BodyForceField;
use crate::material::LinearElasticMaterial;
use crate::mesh::{MeshGeometry, PolyMesh};
use crate::{Error, Mat3, Result, Vec3};

/// Closed-form displacement fields with known body forces.
#[derive(Debug, Clone, PartialEq)]
pub enum ManufacturedSolution {
    /// `u = A^T x + c`, so `grad(u) = A`.
    Affine { gradient: Mat3, offset: Vec3 },
    /// `u_j = c_j + b_j . x + x . H_j x / 2` with symmetric `H_j`.
    Quadratic {
        offset: Vec3,
        /// Row `j` holds `b_j`.
        linear: Mat3,
        hessians: [Mat3; 3],
    },
    /// `u_j = a_j prod_i s_i(x_i)` with `s_i = sin(k_i x_i)`, or 1 when
    /// `k_i = 0`.
    SineProduct { amplitude: Vec3, wavenumber: Vec3 },
}

impl ManufacturedSolution {
    pub const CATALOGUE: [&'static str; 3] = ["affine", "quadratic", "sine"];

    /// Catalogue entry with its default coefficients.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "affine" => Ok(ManufacturedSolution::Affine {
                gradient: Mat3::new(0.3, -0.2, 0.1, 0.15, 0.25, -0.3, -0.1, 0.2, 0.35),
                offset: Vec3::new(0.5, -0.25, 1.0),
            }),
            "quadratic" => {
                let sym = |m: Mat3| (m + m.transpose()) * 0.5;
                Ok(ManufacturedSolution::Quadratic {
                    offset: Vec3::new(0.1, -0.2, 0.05),
                    linear: Mat3::new(0.2, -0.1, 0.3, 0.05, 0.4, -0.2, -0.3, 0.1, 0.25),
                    hessians: [
                        sym(Mat3::new(1.0, 0.4, -0.3, 0.2, -0.6, 0.5, 0.1, 0.3, 0.8)),
                        sym(Mat3::new(-0.5, 0.2, 0.6, 0.1, 0.9, -0.4, 0.3, 0.2, -0.7)),
                        sym(Mat3::new(0.7, -0.3, 0.2, 0.5, 0.4, 0.1, -0.6, 0.3, -0.9)),
                    ],
                })
            }
            "sine" => Ok(ManufacturedSolution::SineProduct {
                amplitude: Vec3::new(1.0, -0.5, 0.75),
                wavenumber: Vec3::new(PI, 0.5 * PI, 0.75 * PI),
            }),
            other => Err(Error::InvalidArgument(format!(
                "unknown manufactured solution `{other}` (catalogue: {})",
                Self::CATALOGUE.join(", ")
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ManufacturedSolution::Affine { .. } => "affine",
            ManufacturedSolution::Quadratic { .. } => "quadratic",
            ManufacturedSolution::SineProduct { .. } => "sine",
        }
    }

    /// Whether the scheme reproduces this field exactly.
    pub fn is_linear(&self) -> bool {
        matches!(self, ManufacturedSolution::Affine { .. })
    }

    pub fn displacement(&self, x: &Vec3) -> Vec3 {
        match self {
            ManufacturedSolution::Affine { gradient, offset } => gradient.transpose() * x + offset,
            ManufacturedSolution::Quadratic { offset, linear, hessians } => {
                let quad = Vec3::from_fn(|j, _| 0.5 * x.dot(&(hessians[j] * x)));
                offset + linear * x + quad
            }
            ManufacturedSolution::SineProduct { amplitude, wavenumber } => {
                amplitude * sine_factors(wavenumber, x).0.iter().product::<f64>()
            }
        }
    }

    /// `G[(i, j)] = du_j/dx_i`.
    pub fn gradient(&self, x: &Vec3) -> Mat3 {
        match self {
            ManufacturedSolution::Affine { gradient, .. } => *gradient,
            ManufacturedSolution::Quadratic { linear, hessians, .. } => {
                Mat3::from_fn(|i, j| linear[(j, i)] + (hessians[j] * x)[i])
            }
            ManufacturedSolution::SineProduct { amplitude, wavenumber } => {
                let (s, ds, _) = sine_factors(wavenumber, x);
                let grad_s = Vec3::from_fn(|i, _| ds[i] * (0..3).filter(|&m| m != i).map(|m| s[m]).product::<f64>());
                grad_s * amplitude.transpose()
            }
        }
    }

    /// Second derivatives `d2u_j/dx_i dx_m` as one matrix per component.
    pub fn hessians(&self, x: &Vec3) -> [Mat3; 3] {
        match self {
            ManufacturedSolution::Affine { .. } => [Mat3::zeros(); 3],
            ManufacturedSolution::Quadratic { hessians, .. } => *hessians,
            ManufacturedSolution::SineProduct { amplitude, wavenumber } => {
                let (s, ds, d2s) = sine_factors(wavenumber, x);
                let h = Mat3::from_fn(|i, m| {
                    let rest = |skip: &[usize]| (0..3).filter(|q| !skip.contains(q)).map(|q| s[q]).product::<f64>();
                    if i == m {
                        d2s[i] * rest(&[i])
                    } else {
                        ds[i] * ds[m] * rest(&[i, m])
                    }
                });
                [h * amplitude.x, h * amplitude.y, h * amplitude.z]
            }
        }
    }

    /// `div(sigma(u))` from the closed-form second derivatives.
    pub fn stress_divergence(&self, x: &Vec3, material: &LinearElasticMaterial) -> Vec3 {
        let h = self.hessians(x);
        let (mu, lambda) = (material.mu, material.lambda);
        Vec3::from_fn(|j, _| {
            let grad_div: f64 = (0..3).map(|k| h[k][(j, k)]).sum();
            mu * h[j].trace() + (mu + lambda) * grad_div
        })
    }

    /// Body-force acceleration `-div(sigma(u)) / rho` that makes `u` an
    /// equilibrium solution.
    pub fn body_force(&self, x: &Vec3, material: &LinearElasticMaterial) -> Vec3 {
        -self.stress_divergence(x, material) / material.density
    }
}

/// `(s_i, s_i', s_i'')` for each axis.
fn sine_factors(k: &Vec3, x: &Vec3) -> ([f64; 3], [f64; 3], [f64; 3]) {
    let mut s = [1.0; 3];
    let mut ds = [0.0; 3];
    let mut d2s = [0.0; 3];
    for i in 0..3 {
        if k[i] != 0.0 {
            let (sn, cs) = (k[i] * x[i]).sin_cos();
            s[i] = sn;
            ds[i] = k[i] * cs;
            d2s[i] = -k[i] * k[i] * sn;
        }
    }
    (s, ds, d2s)
}

/// Body force at cell centroids and exact displacement at boundary-face
/// centroids.
#[derive(Debug, Clone, PartialEq)]
pub struct MmsData {
    pub body_force: BodyForceField,
    /// One value per boundary face.
    pub boundary_values: Vec<Vec3>,
}

pub fn mms_body_force(
    solution: &ManufacturedSolution,
    material: &LinearElasticMaterial,
    mesh: &PolyMesh,
    geom: &MeshGeometry,
) -> MmsData {
    let n_int = mesh.internal_face_count();
    MmsData {
        body_force: BodyForceField {
            cells: geom.cell_centroid.iter().map(|x| solution.body_force(x, material)).collect(),
        },
        boundary_values: (n_int..mesh.face_count())
            .map(|f| solution.displacement(&geom.face_centroid[f]))
            .collect(),
    }
}
