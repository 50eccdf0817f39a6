//! Segregated outer iterations, time marching and case execution.

mod run;

pub use run::{run_case, RunSummary, FAILURE_MARKER};

use crate::discretisation::{BodyForceField, Discretisation, GradientWeighting, MomentumSystem};
use crate::fields::{TensorField, TimeState, VectorField};
use crate::linsolve::{cg_solve, Preconditioner};
use crate::{Error, Execution, Result, Vec3};

/// Outer and inner iteration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverControls {
    /// Stop once every normalised component residual is at or below this.
    pub outer_tolerance: f64,
    pub max_outer_iterations: usize,
    /// Relative residual reduction requested from each inner CG solve.
    pub inner_rel_tol: f64,
    pub inner_max_iter: usize,
    /// Field under-relaxation factor in (0, 1].
    pub relaxation_factor: f64,
    pub preconditioner: Preconditioner,
    pub gradient_weighting: GradientWeighting,
    pub execution: Execution,
}

impl Default for SolverControls {
    fn default() -> Self {
        SolverControls {
            outer_tolerance: 1e-6,
            max_outer_iterations: 1000,
            inner_rel_tol: 0.1,
            inner_max_iter: 1000,
            relaxation_factor: 0.95,
            preconditioner: Preconditioner::default(),
            gradient_weighting: GradientWeighting::default(),
            execution: Execution::default(),
        }
    }
}

impl SolverControls {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.relaxation_factor > 0.0 && self.relaxation_factor <= 1.0) {
            return bad(format!("relaxation factor must lie in (0, 1], got {}", self.relaxation_factor));
        }
        if !(self.outer_tolerance > 0.0) || !(self.inner_rel_tol > 0.0) {
            return bad("tolerances must be positive".into());
        }
        if self.max_outer_iterations == 0 || self.inner_max_iter == 0 {
            return bad("iteration limits must be positive".into());
        }
        Ok(())
    }
}

/// One outer iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterIterationRecord {
    /// Normalised residual of x, y and z, measured before the inner solves.
    pub residual: [f64; 3],
    /// CG iterations per component; zero when the iteration only confirmed
    /// convergence.
    pub inner_iterations: [usize; 3],
}

/// History of one time step.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    /// One-based step number.
    pub step: usize,
    pub iterations: Vec<OuterIterationRecord>,
    pub converged: bool,
}

impl ConvergenceRecord {
    pub fn outer_iterations(&self) -> usize {
        self.iterations.len()
    }

    pub fn final_residual(&self) -> Option<[f64; 3]> {
        self.iterations.last().map(|r| r.residual)
    }

    /// Rows of the residual log for this step.
    pub fn log_lines(&self) -> String {
        let mut s = String::new();
        for (i, it) in self.iterations.iter().enumerate() {
            let [rx, ry, rz] = it.residual;
            let [ix, iy, iz] = it.inner_iterations;
            s.push_str(&format!(
                "{} {} {rx:.5e} {ry:.5e} {rz:.5e} {ix} {iy} {iz}\n",
                self.step,
                i + 1
            ));
        }
        s
    }
}

/// Header of the residual log.
pub const RESIDUAL_LOG_HEADER: &str = "# step outerIter resX resY resZ innerItersX innerItersY innerItersZ\n";

/// Solves one time step in place, starting from the current `u`.
///
/// Each outer iteration refreshes boundary values and gradients, assembles
/// the momentum system, measures the normalised residual and, unless it is
/// already within tolerance, solves the x, y and z systems and relaxes the
/// field. On return `grads` holds the gradients of the returned field.
pub fn solve_time_step(
    disc: &Discretisation,
    u: &mut VectorField,
    grads: &mut TensorField,
    body_force: &BodyForceField,
    time: &TimeState,
    controls: &SolverControls,
) -> Result<ConvergenceRecord> {
    solve_time_step_observed(disc, u, grads, body_force, time, controls, |_| {})
}

/// [`solve_time_step`] calling `observer` on every assembled system.
pub fn solve_time_step_observed(
    disc: &Discretisation,
    u: &mut VectorField,
    grads: &mut TensorField,
    body_force: &BodyForceField,
    time: &TimeState,
    controls: &SolverControls,
    mut observer: impl FnMut(&MomentumSystem),
) -> Result<ConvergenceRecord> {
    controls.validate()?;
    let n = disc.cell_count();
    if body_force.cells.len() != n {
        return Err(Error::InvalidArgument(format!(
            "body force has {} values for {} cells",
            body_force.cells.len(),
            n
        )));
    }
    let mut record = ConvergenceRecord {
        step: time.step_index + 1,
        iterations: Vec::new(),
        converged: false,
    };
    let alpha = controls.relaxation_factor;
    for outer in 1..=controls.max_outer_iterations {
        disc.refresh_gradients(u, grads);
        let system = disc.assemble_momentum(u, grads, body_force, time)?;
        observer(&system);
        let residual = system.normalised_residual(disc, &u.cells);
        if residual.iter().all(|&r| r <= controls.outer_tolerance) {
            record.iterations.push(OuterIterationRecord {
                residual,
                inner_iterations: [0; 3],
            });
            record.converged = true;
            log::debug!("step {} converged after {} outer iterations", record.step, outer);
            return Ok(record);
        }

        let matrices = [system.matrix(disc, 0), system.matrix(disc, 1), system.matrix(disc, 2)];
        let solve = |k: usize| {
            let b: Vec<f64> = system.rhs.iter().map(|v| v[k]).collect();
            let x0: Vec<f64> = u.cells.iter().map(|v| v[k]).collect();
            let (x, stats) = cg_solve(
                &matrices[k],
                &b,
                &x0,
                controls.inner_rel_tol,
                controls.inner_max_iter,
                controls.preconditioner,
            );
            if let Some(w) = &stats.warning {
                log::warn!("component {k}: {w}");
            }
            (x, stats.iterations)
        };
        let ((x, ix), (y, iy), (z, iz)) = disc.exec.join3(|| solve(0), || solve(1), || solve(2));
        for (c, v) in u.cells.iter_mut().enumerate() {
            let new = Vec3::new(x[c], y[c], z[c]);
            *v += alpha * (new - *v);
        }
        log::debug!(
            "step {} outer {outer}: residual {:.3e} {:.3e} {:.3e}",
            record.step,
            residual[0],
            residual[1],
            residual[2]
        );
        record.iterations.push(OuterIterationRecord {
            residual,
            inner_iterations: [ix, iy, iz],
        });
    }
    // leave boundary values and gradients consistent with the final field
    disc.refresh_gradients(u, grads);
    Err(Error::StepFailed {
        step: record.step,
        record: Box::new(record),
    })
}
