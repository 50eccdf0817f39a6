//! Isotropic linear elasticity (Hooke's law).

use crate::{Error, Mat3, Result};

/// Uniform isotropic linear-elastic solid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearElasticMaterial {
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub density: f64,
    /// Shear modulus (second Lamé parameter).
    pub mu: f64,
    /// First Lamé parameter.
    pub lambda: f64,
}

/// Lamé parameters from Young's modulus and Poisson's ratio.
pub fn derived_moduli(youngs_modulus: f64, poisson_ratio: f64) -> Result<(f64, f64)> {
    let (e, nu) = (youngs_modulus, poisson_ratio);
    if !(e > 0.0) || !e.is_finite() {
        return Err(Error::InvalidMaterial(format!("Young's modulus must be positive, got {e}")));
    }
    if !(nu > -1.0 && nu < 0.5) {
        return Err(Error::InvalidMaterial(format!(
            "Poisson's ratio must lie in (-1, 0.5), got {nu}"
        )));
    }
    let mu = e / (2.0 * (1.0 + nu));
    let lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    Ok((mu, lambda))
}

fn check_density(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidMaterial(format!("density must be positive, got {rho}")))
    }
}

impl LinearElasticMaterial {
    pub fn from_youngs(youngs_modulus: f64, poisson_ratio: f64, density: f64) -> Result<Self> {
        let (mu, lambda) = derived_moduli(youngs_modulus, poisson_ratio)?;
        check_density(density)?;
        Ok(LinearElasticMaterial {
            youngs_modulus,
            poisson_ratio,
            density,
            mu,
            lambda,
        })
    }

    pub fn from_lame(mu: f64, lambda: f64, density: f64) -> Result<Self> {
        if !(mu > 0.0) || !lambda.is_finite() || !mu.is_finite() {
            return Err(Error::InvalidMaterial(format!("shear modulus must be positive, got {mu}")));
        }
        // E > 0 and -1 < nu < 0.5 together are equivalent to 3 lambda + 2 mu > 0
        if !(3.0 * lambda + 2.0 * mu > 0.0) {
            return Err(Error::InvalidMaterial(format!(
                "3 lambda + 2 mu must be positive, got lambda = {lambda}, mu = {mu}"
            )));
        }
        check_density(density)?;
        Ok(LinearElasticMaterial {
            youngs_modulus: mu * (3.0 * lambda + 2.0 * mu) / (lambda + mu),
            poisson_ratio: lambda / (2.0 * (lambda + mu)),
            density,
            mu,
            lambda,
        })
    }

    /// `K_f = 2 mu + lambda`, the coefficient of the implicit face diffusion
    /// and the longitudinal (P-wave) modulus.
    pub fn implicit_stiffness(&self) -> f64 {
        2.0 * self.mu + self.lambda
    }

    /// Longitudinal wave speed `sqrt((2 mu + lambda) / rho)`.
    pub fn longitudinal_wave_speed(&self) -> f64 {
        (self.implicit_stiffness() / self.density).sqrt()
    }

    pub fn stress(&self, grad_u: &Mat3) -> Mat3 {
        stress_from_gradient(grad_u, self.mu, self.lambda)
    }
}

/// `mu (G + G^T) + lambda tr(G) I`.
pub fn stress_from_gradient(grad_u: &Mat3, mu: f64, lambda: f64) -> Mat3 {
    mu * (grad_u + grad_u.transpose()) + Mat3::identity() * (lambda * grad_u.trace())
}

/// Von Mises equivalent of a symmetric stress tensor.
pub fn von_mises(sigma: &Mat3) -> f64 {
    let dev = sigma - Mat3::identity() * (sigma.trace() / 3.0);
    (1.5 * dev.component_mul(&dev).sum()).sqrt()
}
