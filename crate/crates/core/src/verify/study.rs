use std::fmt::Write as _;

use super::{error_norms, mms_body_force, observed_order, ErrorReport, ManufacturedSolution};
use crate::discretisation::{Discretisation, MomentumSystem};
use crate::fields::{initialise_field, BoundaryCondition, BoundaryConditions, TensorField, TimeState};
use crate::material::LinearElasticMaterial;
use crate::mesh::{build_block_mesh, MeshGeometry};
use crate::solver::{solve_time_step_observed, ConvergenceRecord, SolverControls};
use crate::{Result, Vec3};

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub divisions: usize,
    pub report: ErrorReport,
    pub record: ConvergenceRecord,
}

/// Mesh-refinement study of one manufactured solution.
#[derive(Debug, Clone, PartialEq)]
pub struct MmsStudy {
    pub solution: &'static str,
    pub rows: Vec<StudyRow>,
    /// Pairwise L2 orders, one fewer than rows.
    pub orders: Vec<f64>,
    /// Largest exact displacement magnitude at centroids on any mesh.
    pub scale: f64,
}

impl MmsStudy {
    /// Whether every mesh reproduces the field to `1e-8` relative.
    pub fn is_exact(&self) -> bool {
        self.rows.iter().all(|r| r.report.l2 <= 1e-8 * self.scale && r.report.linf <= 1e-8 * self.scale)
    }

    /// Passes when the field is reproduced exactly or the last pairwise
    /// order reaches `threshold`.
    pub fn passes(&self, threshold: f64) -> bool {
        self.is_exact() || self.orders.last().is_some_and(|&p| p >= threshold)
    }

    /// `h L2 Linf order` table.
    pub fn table(&self) -> String {
        let mut s = format!("# {} manufactured solution\n{:>12} {:>12} {:>12} {:>8}\n", self.solution, "h", "L2", "Linf", "order");
        let exact = self.is_exact();
        for (i, row) in self.rows.iter().enumerate() {
            let order = match i {
                0 => "-".to_string(),
                _ if exact => "exact".to_string(),
                _ => format!("{:.3}", self.orders[i - 1]),
            };
            let _ = writeln!(s, "{:>12.5e} {:>12.5e} {:>12.5e} {order:>8}", row.report.h, row.report.l2, row.report.linf);
        }
        s
    }
}

/// Solves `solution` on unit-cube meshes of `n^3` cells for each `n` in
/// `sizes` with all-Dirichlet boundaries.
pub fn mms_study(
    solution: &ManufacturedSolution,
    sizes: &[usize],
    material: LinearElasticMaterial,
    controls: &SolverControls,
) -> Result<MmsStudy> {
    mms_study_observed(solution, sizes, material, controls, |_, _| {})
}

/// [`mms_study`] calling `observer` on every assembled system.
pub fn mms_study_observed(
    solution: &ManufacturedSolution,
    sizes: &[usize],
    material: LinearElasticMaterial,
    controls: &SolverControls,
    mut observer: impl FnMut(&Discretisation, &MomentumSystem),
) -> Result<MmsStudy> {
    let mut rows = Vec::with_capacity(sizes.len());
    let mut scale: f64 = 0.0;
    for &n in sizes {
        let mut mesh = build_block_mesh(Vec3::zeros(), Vec3::new(1.0, 1.0, 1.0), [n, n, n])?;
        let list = vec![BoundaryCondition::FixedDisplacement(Vec3::zeros()); mesh.patches.len()];
        let bcs = BoundaryConditions::assign(&mut mesh, list)?;
        let geom = MeshGeometry::compute(&mesh)?;
        let data = mms_body_force(solution, &material, &mesh, &geom);
        let disc = Discretisation::new(&mesh, &geom, material, &bcs, controls.gradient_weighting, controls.execution)?;
        let mut u = initialise_field(&mesh, Vec3::zeros(), &bcs);
        u.boundary = data.boundary_values;
        let mut grads = TensorField::zeros(&mesh);
        let record = solve_time_step_observed(
            &disc,
            &mut u,
            &mut grads,
            &data.body_force,
            &TimeState::steady(),
            controls,
            |system| observer(&disc, system),
        )?;
        let report = error_norms(&u.cells, solution, &geom);
        scale = geom
            .cell_centroid
            .iter()
            .map(|x| solution.displacement(x).norm())
            .fold(scale, f64::max);
        log::info!("{} n = {n}: L2 {:.4e}, {} outer iterations", solution.name(), report.l2, record.outer_iterations());
        rows.push(StudyRow {
            divisions: n,
            report,
            record,
        });
    }
    let reports: Vec<ErrorReport> = rows.iter().map(|r| r.report).collect();
    let orders = if reports.len() >= 2 { observed_order(&reports)? } else { Vec::new() };
    Ok(MmsStudy {
        solution: solution.name(),
        rows,
        orders,
        scale,
    })
}
