use std::f64::consts::FRAC_PI_2;

use crate::material::LinearElasticMaterial;
use crate::mesh::{build_block_mesh, PolyMesh};
use crate::{Error, Result, Vec3};

/// Closed-form plane-strain solution of a thick cylinder under internal
/// pressure with a free outer surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LameCylinder {
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub pressure: f64,
    pub material: LinearElasticMaterial,
}

pub fn lame_thick_cylinder(
    inner_radius: f64,
    outer_radius: f64,
    pressure: f64,
    material: LinearElasticMaterial,
) -> Result<LameCylinder> {
    if !(inner_radius > 0.0 && outer_radius > inner_radius) {
        return Err(Error::InvalidArgument(format!(
            "radii must satisfy 0 < a < b, got a = {inner_radius}, b = {outer_radius}"
        )));
    }
    if !(pressure > 0.0) {
        return Err(Error::InvalidArgument(format!("pressure must be positive, got {pressure}")));
    }
    Ok(LameCylinder {
        inner_radius,
        outer_radius,
        pressure,
        material,
    })
}

impl LameCylinder {
    /// `p a^2 / (b^2 - a^2)`.
    fn c1(&self) -> f64 {
        let (a2, b2) = (self.inner_radius.powi(2), self.outer_radius.powi(2));
        self.pressure * a2 / (b2 - a2)
    }

    pub fn radial_stress(&self, r: f64) -> f64 {
        self.c1() * (1.0 - self.outer_radius.powi(2) / (r * r))
    }

    pub fn hoop_stress(&self, r: f64) -> f64 {
        self.c1() * (1.0 + self.outer_radius.powi(2) / (r * r))
    }

    /// Plane-strain axial stress `nu (sigma_rr + sigma_tt)`.
    pub fn axial_stress(&self, r: f64) -> f64 {
        self.material.poisson_ratio * (self.radial_stress(r) + self.hoop_stress(r))
    }

    /// `(1 + nu)/E * C1 [(1 - 2 nu) r + b^2 / r]`.
    pub fn radial_displacement(&self, r: f64) -> f64 {
        let (e, nu) = (self.material.youngs_modulus, self.material.poisson_ratio);
        (1.0 + nu) / e * self.c1() * ((1.0 - 2.0 * nu) * r + self.outer_radius.powi(2) / r)
    }
}

/// Quarter annulus `a <= r <= b`, `0 <= theta <= pi/2`, `0 <= z <= t`
/// with `nr x ntheta x nz` cells.
///
/// Patches: `inner` (r = a), `outer` (r = b), `bottom` (y = 0),
/// `left` (x = 0), `back` (z = 0) and `front` (z = t).
pub fn quarter_annulus_mesh(a: f64, b: f64, thickness: f64, divisions: [usize; 3]) -> Result<PolyMesh> {
    if !(a > 0.0 && b > a) {
        return Err(Error::InvalidArgument(format!("radii must satisfy 0 < a < b, got {a}, {b}")));
    }
    let mut mesh = build_block_mesh(Vec3::new(a, 0.0, 0.0), Vec3::new(b - a, FRAC_PI_2, thickness), divisions)?;
    let [nr, nt, _] = divisions;
    for (idx, p) in mesh.points.iter_mut().enumerate() {
        // snap the cut planes and arcs exactly
        let i = idx % (nr + 1);
        let j = (idx / (nr + 1)) % (nt + 1);
        let r = if i == nr { b } else { p.x };
        let (s, c) = if j == 0 {
            (0.0, 1.0)
        } else if j == nt {
            (1.0, 0.0)
        } else {
            p.y.sin_cos()
        };
        *p = Vec3::new(r * c, r * s, p.z);
    }
    for (patch, name) in mesh.patches.iter_mut().zip(["inner", "outer", "bottom", "left", "back", "front"]) {
        patch.name = name.to_string();
    }
    Ok(mesh)
}
