use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use fvsolid::case::CaseConfig;
use fvsolid::material::LinearElasticMaterial;
use fvsolid::mesh::{build_block_mesh, validate_mesh, write_mesh};
use fvsolid::solver::{run_case, SolverControls};
use fvsolid::verify::{mms_study, ManufacturedSolution};
use fvsolid::{Error, Execution, Vec3};

/// Finite volume small-strain solid mechanics solver.
#[derive(Debug, Parser)]
#[command(name = "fvsolid", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the case in DIR (reads DIR/case.cfg, writes DIR/results).
    Run {
        dir: PathBuf,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Validate the configuration and mesh of the case in DIR without solving.
    Check { dir: PathBuf },
    /// Mesh generation.
    #[command(subcommand)]
    Mesh(MeshCommand),
    /// Manufactured-solution convergence study on unit-cube meshes.
    Mms {
        /// Catalogue entry: affine, quadratic or sine.
        #[arg(long)]
        solution: String,
        /// Cells per side of each mesh, coarse to fine.
        #[arg(long, num_args = 1.., required = true)]
        sizes: Vec<usize>,
        /// Minimum final observed order for success.
        #[arg(long, default_value_t = 1.9)]
        threshold: f64,
        /// Outer-iteration tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        #[command(flatten)]
        exec: ExecArgs,
    },
}

#[derive(Debug, Subcommand)]
enum MeshCommand {
    /// Structured hexahedral box mesh.
    Block {
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], default_values_t = [0.0, 0.0, 0.0])]
        origin: Vec<f64>,
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], required = true)]
        extent: Vec<f64>,
        #[arg(long, num_args = 3, value_names = ["NX", "NY", "NZ"], required = true)]
        divisions: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct ExecArgs {
    /// Run every loop on the calling thread.
    #[arg(long)]
    serial: bool,
}

impl ExecArgs {
    fn execution(&self) -> Execution {
        if self.serial {
            Execution::Serial
        } else {
            Execution::default()
        }
    }
}

fn init_logging() {
    let level = match std::env::var("FVSOLID_LOG").as_deref() {
        Ok("quiet") => log::LevelFilter::Error,
        Ok("debug") => log::LevelFilter::Debug,
        Ok("info") | Err(_) => log::LevelFilter::Info,
        Ok(other) => {
            eprintln!("warning: FVSOLID_LOG={other} not recognised (quiet, info or debug); using info");
            log::LevelFilter::Info
        }
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .format_target(false)
        .init();
}

fn vec3(v: &[f64]) -> Vec3 {
    Vec3::new(v[0], v[1], v[2])
}

fn load_config(dir: &Path) -> anyhow::Result<CaseConfig> {
    let path = dir.join("case.cfg");
    if !path.is_file() {
        bail!("{} not found", path.display());
    }
    Ok(CaseConfig::read(&path)?)
}

fn run(dir: &Path, exec: Execution) -> anyhow::Result<()> {
    let mut config = load_config(dir)?;
    config.solver.execution = exec;
    let mesh = config.load_mesh()?;
    log::info!("mesh: {} cells, {} faces", mesh.cell_count, mesh.face_count());
    let results = dir.join("results");
    let summary = run_case(&config, mesh, &results)?;
    let outer: usize = summary.records.iter().map(|r| r.outer_iterations()).sum();
    log::info!(
        "finished {} step(s), {outer} outer iterations, {} output file(s) in {}",
        summary.records.len(),
        summary.outputs.len(),
        results.display()
    );
    Ok(())
}

fn check(dir: &Path) -> anyhow::Result<bool> {
    let config = load_config(dir)?;
    println!("config: ok");
    let mut mesh = config.load_mesh()?;
    config.boundary_conditions(&mut mesh)?;
    let report = validate_mesh(&mesh);
    if report.is_empty() {
        println!(
            "mesh: ok ({} points, {} faces, {} cells, {} patches)",
            mesh.points.len(),
            mesh.face_count(),
            mesh.cell_count,
            mesh.patches.len()
        );
        Ok(true)
    } else {
        println!("mesh: {} issue(s)\n{report}", report.len());
        Ok(false)
    }
}

fn mms(solution: &str, sizes: &[usize], threshold: f64, tolerance: f64, exec: Execution) -> anyhow::Result<bool> {
    let solution = ManufacturedSolution::from_name(solution)?;
    if sizes.windows(2).any(|w| w[1] <= w[0]) {
        bail!("--sizes must be strictly increasing");
    }
    let material = LinearElasticMaterial::from_youngs(1.0, 0.3, 1.0)?;
    let controls = SolverControls {
        outer_tolerance: tolerance,
        max_outer_iterations: 10_000,
        execution: exec,
        ..SolverControls::default()
    };
    let study = mms_study(&solution, sizes, material, &controls)?;
    print!("{}", study.table());
    Ok(study.passes(threshold))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging();
    let outcome = match cli.command {
        Command::Run { dir, exec } => run(&dir, exec.execution()).map(|_| true),
        Command::Check { dir } => check(&dir),
        Command::Mesh(MeshCommand::Block {
            origin,
            extent,
            divisions,
            out,
        }) => build_block_mesh(vec3(&origin), vec3(&extent), [divisions[0], divisions[1], divisions[2]])
            .and_then(|mesh| {
                write_mesh(&mesh, &out)?;
                println!(
                    "wrote {}: {} cells, {} internal faces, {} boundary faces",
                    out.display(),
                    mesh.cell_count,
                    mesh.internal_face_count(),
                    mesh.boundary_face_count()
                );
                Ok(true)
            })
            .context("mesh block"),
        Command::Mms {
            solution,
            sizes,
            threshold,
            tolerance,
            exec,
        } => mms(&solution, &sizes, threshold, tolerance, exec.execution()),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            match err.downcast_ref::<Error>() {
                Some(Error::InvalidMesh(report)) => eprintln!("error: mesh rejected ({} issues)\n{report}", report.len()),
                _ => eprintln!("error: {err:#}"),
            }
            ExitCode::FAILURE
        }
    }
}
