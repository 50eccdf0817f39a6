use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{solve_time_step, ConvergenceRecord, RESIDUAL_LOG_HEADER};
use crate::case::CaseConfig;
use crate::discretisation::{BodyForceField, Discretisation};
use crate::fields::{advance_time, initialise_field, TensorField, TimeState, VectorField};
use crate::mesh::{validate_mesh, MeshGeometry, PolyMesh};
use crate::vtk::{write_vtk, OutputSet};
use crate::{Error, Result};

/// Outcome of a completed run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub field: VectorField,
    pub gradients: TensorField,
    pub records: Vec<ConvergenceRecord>,
    /// VTK files in write order.
    pub outputs: Vec<PathBuf>,
    pub residual_log: PathBuf,
}

/// Name of the marker file left in the results directory by a failed run.
pub const FAILURE_MARKER: &str = "FAILED";

/// Runs a case and writes `step_<n>.vtk` files and `residuals.log` into
/// `results`. A steady case performs one step. A dynamic case performs
/// `round(endTime / dt)` steps and writes every `writeInterval` steps.
///
/// On failure the files written so far are kept and a `FAILED` marker with
/// the error message is added.
pub fn run_case(config: &CaseConfig, mut mesh: PolyMesh, results: &Path) -> Result<RunSummary> {
    std::fs::create_dir_all(results).map_err(|e| Error::io(results, e))?;
    let marker = results.join(FAILURE_MARKER);
    if marker.exists() {
        std::fs::remove_file(&marker).map_err(|e| Error::io(&marker, e))?;
    }
    let outcome = run_inner(config, &mut mesh, results);
    if let Err(err) = &outcome {
        std::fs::write(&marker, format!("{err}\n")).map_err(|e| Error::io(&marker, e))?;
    }
    outcome
}

fn run_inner(config: &CaseConfig, mesh: &mut PolyMesh, results: &Path) -> Result<RunSummary> {
    let bcs = config.boundary_conditions(mesh)?;
    let mesh = &*mesh;
    let report = validate_mesh(mesh);
    if !report.is_empty() {
        return Err(Error::InvalidMesh(report));
    }
    let geom = MeshGeometry::compute(mesh)?;
    let controls = config.solver;
    let disc = Discretisation::new(
        mesh,
        &geom,
        config.material,
        &bcs,
        controls.gradient_weighting,
        controls.execution,
    )?;

    let mut time = if config.time.steady {
        TimeState::steady()
    } else {
        TimeState::transient(config.time.dt)?
    };
    let mut u = initialise_field(mesh, config.initial_displacement, &bcs);
    if !config.time.steady {
        // u(-dt) from the initial velocity
        for v in &mut u.old_old {
            *v -= config.initial_velocity * config.time.dt;
        }
    }
    let mut grads = TensorField::zeros(mesh);
    let body = BodyForceField::uniform(mesh.cell_count, config.body_force);

    let log_path = results.join("residuals.log");
    let mut log = File::create(&log_path).map_err(|e| Error::io(&log_path, e))?;
    let mut log_write = |s: &str| log.write_all(s.as_bytes()).and_then(|_| log.flush()).map_err(|e| Error::io(&log_path, e));
    log_write(RESIDUAL_LOG_HEADER)?;

    let steps = config.time.step_count();
    let mut records = Vec::with_capacity(steps);
    let mut outputs = Vec::new();
    for step in 1..=steps {
        let record = match solve_time_step(&disc, &mut u, &mut grads, &body, &time, &controls) {
            Ok(r) => r,
            Err(Error::StepFailed { step, record }) => {
                log_write(&record.log_lines())?;
                return Err(Error::StepFailed { step, record });
            }
            Err(e) => return Err(e),
        };
        log_write(&record.log_lines())?;
        log::info!(
            "step {step}/{steps}: {} outer iterations, residual {:?}",
            record.outer_iterations(),
            record.final_residual().unwrap_or_default()
        );
        records.push(record);
        if config.time.steady || step % config.time.write_interval == 0 {
            let path = results.join(format!("step_{step}.vtk"));
            let set = OutputSet::new(&config.material, &u, &grads);
            write_vtk(&path, mesh, &set, &format!("fvsolid step {step} time {}", time.current_time + time.dt))?;
            outputs.push(path);
        }
        if !config.time.steady {
            advance_time(&mut u, &mut time);
        }
    }
    Ok(RunSummary {
        field: u,
        gradients: grads,
        records,
        outputs,
        residual_log: log_path,
    })
}
