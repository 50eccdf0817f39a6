use super::ManufacturedSolution;
use crate::mesh::MeshGeometry;
use crate::{Error, Result, Vec3};

/// Displacement error of one solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    /// `(total volume / cell count)^(1/3)`.
    pub h: f64,
    /// Volume-weighted root-mean-square error.
    pub l2: f64,
    pub linf: f64,
}

pub fn error_norms(u: &[Vec3], solution: &ManufacturedSolution, geom: &MeshGeometry) -> ErrorReport {
    error_norms_with(u, |x| solution.displacement(x), geom)
}

/// [`error_norms`] against an arbitrary exact field.
pub fn error_norms_with(u: &[Vec3], exact: impl Fn(&Vec3) -> Vec3, geom: &MeshGeometry) -> ErrorReport {
    let mut sq = 0.0;
    let mut linf: f64 = 0.0;
    for ((v, x), vol) in u.iter().zip(&geom.cell_centroid).zip(&geom.cell_volume) {
        let e = (v - exact(x)).norm();
        sq += vol * e * e;
        linf = linf.max(e);
    }
    let total = geom.total_volume();
    ErrorReport {
        h: (total / u.len() as f64).cbrt(),
        l2: (sq / total).sqrt(),
        linf,
    }
}

/// Pairwise L2 orders `ln(e_c / e_f) / ln(h_c / h_f)` for reports ordered
/// coarse to fine. A zero fine error gives `f64::INFINITY`.
pub fn observed_order(reports: &[ErrorReport]) -> Result<Vec<f64>> {
    if reports.len() < 2 {
        return Err(Error::InvalidArgument("observed order needs at least two meshes".into()));
    }
    reports
        .windows(2)
        .map(|w| {
            let (c, f) = (&w[0], &w[1]);
            if !(f.h < c.h) {
                return Err(Error::InvalidArgument(format!(
                    "mesh spacing must strictly decrease, got {} then {}",
                    c.h, f.h
                )));
            }
            if f.l2 == 0.0 {
                return Ok(f64::INFINITY);
            }
            Ok((c.l2 / f.l2).ln() / (c.h / f.h).ln())
        })
        .collect()
}
