//! Case configuration: flat `section.key = value` text.
//!
//! ```text
//! # cantilever
//! material.E = 200e9
//! material.nu = 0.3
//! material.rho = 7800
//! time.steady = true
//! mesh.origin = 0 0 0
//! mesh.extent = 10 1 1
//! mesh.divisions = 20 2 2
//! boundary.minX.kind = fixedDisplacement
//! boundary.minX.value = 0 0 0
//! boundary.maxX.kind = traction
//! boundary.maxX.value = 1e6 0 0
//! ```
//!
//! Vectors are three whitespace-separated numbers. Patches without a
//! `boundary.<name>` entry are traction-free.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::fields::{BoundaryCondition, BoundaryConditions};
use crate::material::LinearElasticMaterial;
use crate::mesh::{build_block_mesh, read_mesh, PatchKind, PolyMesh};
use crate::solver::SolverControls;
use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeControls {
    pub steady: bool,
    pub dt: f64,
    pub end_time: f64,
    pub write_interval: usize,
}

impl TimeControls {
    /// Number of steps a run performs.
    pub fn step_count(&self) -> usize {
        if self.steady {
            1
        } else {
            (self.end_time / self.dt).round() as usize
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeshSource {
    File(PathBuf),
    Block {
        origin: Vec3,
        extent: Vec3,
        divisions: [usize; 3],
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatchSetting {
    pub name: String,
    pub condition: BoundaryCondition,
    /// Line of the `kind` entry, for diagnostics.
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseConfig {
    pub material: LinearElasticMaterial,
    pub time: TimeControls,
    pub solver: SolverControls,
    pub boundaries: Vec<PatchSetting>,
    pub body_force: Vec3,
    pub initial_displacement: Vec3,
    pub initial_velocity: Vec3,
    pub mesh: MeshSource,
}

struct Entry {
    value: String,
    line: usize,
    used: bool,
}

struct Entries(BTreeMap<String, Entry>);

impl Entries {
    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.0.get_mut(key).map(|e| {
            e.used = true;
            (e.value.clone(), e.line)
        })
    }

    fn parse<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<(T, usize)>>
    where
        T::Err: std::fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse::<T>()
                .map(|x| Some((x, line)))
                .map_err(|e| config_err(line, key, format!("cannot parse `{v}`: {e}"))),
        }
    }

    fn number(&mut self, key: &str) -> Result<Option<f64>> {
        Ok(self.parse::<f64>(key)?.map(|(v, _)| v))
    }

    fn vector(&mut self, key: &str) -> Result<Option<Vec3>> {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => parse_triple::<f64>(&v)
                .map(|[x, y, z]| Some(Vec3::new(x, y, z)))
                .map_err(|m| config_err(line, key, m)),
        }
    }

    fn line_of(&self, key: &str) -> usize {
        self.0.get(key).map_or(0, |e| e.line)
    }
}

fn config_err(line: usize, key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        key: key.to_string(),
        message: message.into(),
    }
}

fn parse_triple<T: std::str::FromStr>(s: &str) -> std::result::Result<[T; 3], String> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(format!("expected 3 values, found {}", parts.len()));
    }
    let p = |i: usize| parts[i].parse::<T>().map_err(|_| format!("cannot parse `{}`", parts[i]));
    Ok([p(0)?, p(1)?, p(2)?])
}

const KEYS: &[&str] = &[
    "material.E",
    "material.nu",
    "material.mu",
    "material.lambda",
    "material.rho",
    "time.steady",
    "time.dt",
    "time.endTime",
    "time.writeInterval",
    "solver.outerTolerance",
    "solver.maxOuterIterations",
    "solver.innerRelTol",
    "solver.innerMaxIter",
    "solver.relaxationFactor",
    "solver.preconditioner",
    "solver.gradientWeighting",
    "body.force",
    "initial.displacement",
    "initial.velocity",
    "mesh.file",
    "mesh.origin",
    "mesh.extent",
    "mesh.divisions",
];

const PATCH_KEYS: &[&str] = &["kind", "value", "pressure"];

fn known_key(key: &str) -> bool {
    if KEYS.contains(&key) {
        return true;
    }
    match key.strip_prefix("boundary.").and_then(|r| r.rsplit_once('.')) {
        Some((patch, field)) => !patch.is_empty() && PATCH_KEYS.contains(&field),
        None => false,
    }
}

impl CaseConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_in(text, Path::new("."))
    }

    /// Reads a config file; a relative `mesh.file` resolves against the
    /// file's directory.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_in(&text, path.parent().unwrap_or(Path::new(".")))
    }

    fn parse_in(text: &str, base: &Path) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(config_err(line, content, "expected `section.key = value`"));
            };
            let (key, value) = (key.trim(), value.trim());
            if !known_key(key) {
                return Err(config_err(line, key, "unknown key"));
            }
            if value.is_empty() {
                return Err(config_err(line, key, "missing value"));
            }
            if let Some(prev) = map.insert(
                key.to_string(),
                Entry {
                    value: value.to_string(),
                    line,
                    used: false,
                },
            ) {
                return Err(config_err(line, key, format!("duplicate key (first set on line {})", prev.line)));
            }
        }
        let mut e = Entries(map);

        let material = parse_material(&mut e)?;
        let time = parse_time(&mut e)?;
        let solver = parse_solver(&mut e)?;
        let boundaries = parse_boundaries(&mut e)?;
        let body_force = e.vector("body.force")?.unwrap_or_else(Vec3::zeros);
        let initial_displacement = e.vector("initial.displacement")?.unwrap_or_else(Vec3::zeros);
        let initial_velocity = e.vector("initial.velocity")?.unwrap_or_else(Vec3::zeros);
        let mesh = parse_mesh_source(&mut e, base)?;

        if let Some((key, entry)) = e.0.iter().find(|(_, v)| !v.used) {
            return Err(config_err(entry.line, key, "key is not used by this configuration"));
        }
        Ok(CaseConfig {
            material,
            time,
            solver,
            boundaries,
            body_force,
            initial_displacement,
            initial_velocity,
            mesh,
        })
    }

    pub fn load_mesh(&self) -> Result<PolyMesh> {
        match &self.mesh {
            MeshSource::File(path) => read_mesh(path),
            MeshSource::Block {
                origin,
                extent,
                divisions,
            } => build_block_mesh(*origin, *extent, *divisions),
        }
    }

    /// Boundary conditions for `mesh`, retyping its patches to match.
    pub fn boundary_conditions(&self, mesh: &mut PolyMesh) -> Result<BoundaryConditions> {
        for s in &self.boundaries {
            if mesh.patch_index(&s.name).is_none() {
                let names: Vec<&str> = mesh.patches.iter().map(|p| p.name.as_str()).collect();
                return Err(config_err(
                    s.line,
                    &format!("boundary.{}.kind", s.name),
                    format!("mesh has no patch `{}` (patches: {})", s.name, names.join(", ")),
                ));
            }
        }
        let named: Vec<(&str, BoundaryCondition)> =
            self.boundaries.iter().map(|s| (s.name.as_str(), s.condition)).collect();
        BoundaryConditions::assign_by_name(mesh, &named)
    }
}

fn parse_material(e: &mut Entries) -> Result<LinearElasticMaterial> {
    let youngs = (e.number("material.E")?, e.number("material.nu")?);
    let lame = (e.number("material.mu")?, e.number("material.lambda")?);
    let rho_line = e.line_of("material.rho");
    let rho = e
        .number("material.rho")?
        .ok_or_else(|| config_err(0, "material.rho", "required"))?;
    let wrap = |line: usize, key: &str, err: Error| config_err(line, key, err.to_string());
    match (youngs, lame) {
        ((Some(y), Some(nu)), (None, None)) => LinearElasticMaterial::from_youngs(y, nu, rho)
            .map_err(|err| wrap(e.line_of("material.E"), "material.E", err)),
        ((None, None), (Some(mu), Some(lambda))) => LinearElasticMaterial::from_lame(mu, lambda, rho)
            .map_err(|err| wrap(e.line_of("material.mu"), "material.mu", err)),
        _ => Err(config_err(
            rho_line,
            "material",
            "give either material.E and material.nu, or material.mu and material.lambda",
        )),
    }
}

fn parse_time(e: &mut Entries) -> Result<TimeControls> {
    let steady = e.parse::<bool>("time.steady")?.map_or(true, |(v, _)| v);
    let dt = e.number("time.dt")?;
    let end = e.number("time.endTime")?;
    let interval = e.parse::<usize>("time.writeInterval")?;
    if steady {
        for key in ["time.dt", "time.endTime", "time.writeInterval"] {
            if e.0.contains_key(key) {
                return Err(config_err(e.line_of(key), key, "only valid with time.steady = false"));
            }
        }
        return Ok(TimeControls {
            steady,
            dt: 1.0,
            end_time: 1.0,
            write_interval: 1,
        });
    }
    let dt = dt.ok_or_else(|| config_err(0, "time.dt", "required when time.steady = false"))?;
    let end_time = end.ok_or_else(|| config_err(0, "time.endTime", "required when time.steady = false"))?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(config_err(e.line_of("time.dt"), "time.dt", "must be positive"));
    }
    if !(end_time >= dt) {
        return Err(config_err(e.line_of("time.endTime"), "time.endTime", "must be at least time.dt"));
    }
    let write_interval = interval.map_or(1, |(v, _)| v);
    if write_interval == 0 {
        return Err(config_err(e.line_of("time.writeInterval"), "time.writeInterval", "must be positive"));
    }
    Ok(TimeControls {
        steady,
        dt,
        end_time,
        write_interval,
    })
}

fn parse_solver(e: &mut Entries) -> Result<SolverControls> {
    let mut c = SolverControls::default();
    if let Some(v) = e.number("solver.outerTolerance")? {
        c.outer_tolerance = v;
    }
    if let Some((v, _)) = e.parse::<usize>("solver.maxOuterIterations")? {
        c.max_outer_iterations = v;
    }
    if let Some(v) = e.number("solver.innerRelTol")? {
        c.inner_rel_tol = v;
    }
    if let Some((v, _)) = e.parse::<usize>("solver.innerMaxIter")? {
        c.inner_max_iter = v;
    }
    if let Some(v) = e.number("solver.relaxationFactor")? {
        c.relaxation_factor = v;
    }
    if let Some((v, _)) = e.parse("solver.preconditioner")? {
        c.preconditioner = v;
    }
    if let Some((v, _)) = e.parse("solver.gradientWeighting")? {
        c.gradient_weighting = v;
    }
    c.validate().map_err(|err| config_err(0, "solver", err.to_string()))?;
    Ok(c)
}

fn parse_boundaries(e: &mut Entries) -> Result<Vec<PatchSetting>> {
    let names: Vec<String> = e
        .0
        .keys()
        .filter_map(|k| k.strip_prefix("boundary.")?.rsplit_once('.').map(|(p, _)| p.to_string()))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut out = Vec::new();
    for name in names {
        let key = |f: &str| format!("boundary.{name}.{f}");
        let kind_key = key("kind");
        let Some((kind, line)) = e.parse::<PatchKind>(&kind_key)? else {
            let other = if e.0.contains_key(&key("value")) { key("value") } else { key("pressure") };
            return Err(config_err(e.line_of(&other), &kind_key, "missing"));
        };
        let value = e.vector(&key("value"))?;
        let pressure = e.number(&key("pressure"))?;
        let condition = match kind {
            PatchKind::FixedDisplacement => {
                if pressure.is_some() {
                    return Err(config_err(e.line_of(&key("pressure")), &key("pressure"), "only valid for traction"));
                }
                BoundaryCondition::FixedDisplacement(value.unwrap_or_else(Vec3::zeros))
            }
            PatchKind::Traction => BoundaryCondition::Traction {
                traction: value.unwrap_or_else(Vec3::zeros),
                pressure: pressure.unwrap_or(0.0),
            },
            PatchKind::Symmetry => {
                for f in ["value", "pressure"] {
                    if e.0.contains_key(&key(f)) {
                        return Err(config_err(e.line_of(&key(f)), &key(f), "not valid for symmetry"));
                    }
                }
                BoundaryCondition::Symmetry
            }
        };
        out.push(PatchSetting { name, condition, line });
    }
    Ok(out)
}

fn parse_mesh_source(e: &mut Entries, base: &Path) -> Result<MeshSource> {
    let file = e.take("mesh.file");
    let origin = e.vector("mesh.origin")?;
    let extent = e.vector("mesh.extent")?;
    let divisions = match e.take("mesh.divisions") {
        None => None,
        Some((v, line)) => Some(parse_triple::<usize>(&v).map_err(|m| config_err(line, "mesh.divisions", m))?),
    };
    match (file, extent, divisions) {
        (Some((f, line)), None, None) => {
            if origin.is_some() {
                return Err(config_err(line, "mesh.origin", "not valid with mesh.file"));
            }
            Ok(MeshSource::File(base.join(f)))
        }
        (None, Some(extent), Some(divisions)) => Ok(MeshSource::Block {
            origin: origin.unwrap_or_else(Vec3::zeros),
            extent,
            divisions,
        }),
        (Some((_, line)), _, _) => Err(config_err(line, "mesh.file", "give either mesh.file or mesh.extent and mesh.divisions")),
        _ => Err(config_err(0, "mesh", "give either mesh.file or mesh.extent and mesh.divisions")),
    }
}
