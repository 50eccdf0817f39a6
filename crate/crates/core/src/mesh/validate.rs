use std::fmt;

use super::{MeshGeometry, PolyMesh};

/// Relative tolerance for the per-cell closedness check.
const CLOSEDNESS_TOL: f64 = 1e-10;
/// Faces with area below this fraction of their longest edge squared are
/// reported as zero-area.
const ZERO_AREA_TOL: f64 = 1e-14;
const PARALLEL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Issue {
    PointOutOfRange { face: usize, point: usize },
    TooFewPoints { face: usize, count: usize },
    DegenerateFace { face: usize },
    ZeroAreaFace { face: usize, area: f64 },
    OwnerLength { faces: usize, owners: usize },
    NeighbourTooLong { neighbours: usize, faces: usize },
    CellOutOfRange { face: usize, cell: usize },
    OwnerNotBelowNeighbour { face: usize, owner: usize, neighbour: usize },
    PatchInInternalRange { patch: String, start: usize },
    EmptyPatch { patch: String },
    PatchOverlap { face: usize },
    UncoveredBoundaryFace { face: usize },
    PatchBeyondFaces { patch: String },
    TooFewFaces { cell: usize, count: usize },
    NotClosed { cell: usize, relative: f64 },
    NonPositiveVolume { cell: usize, volume: f64 },
    GammaOutOfRange { face: usize, gamma: f64 },
    SplitNotParallel { face: usize },
    InvertedFace { face: usize, dot: f64 },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Issue::*;
        match self {
            PointOutOfRange { face, point } => write!(f, "face {face}: point index {point} out of range"),
            TooFewPoints { face, count } => write!(f, "face {face}: only {count} points"),
            DegenerateFace { face } => write!(f, "face {face}: degenerate (coincident vertices)"),
            ZeroAreaFace { face, area } => write!(f, "face {face}: zero area ({area:e})"),
            OwnerLength { faces, owners } => write!(f, "owner has {owners} entries for {faces} faces"),
            NeighbourTooLong { neighbours, faces } => {
                write!(f, "neighbour has {neighbours} entries but there are only {faces} faces")
            }
            CellOutOfRange { face, cell } => write!(f, "face {face}: cell index {cell} out of range"),
            OwnerNotBelowNeighbour { face, owner, neighbour } => {
                write!(f, "face {face}: owner {owner} is not below neighbour {neighbour}")
            }
            PatchInInternalRange { patch, start } => {
                write!(f, "patch {patch}: start face {start} lies among internal faces")
            }
            EmptyPatch { patch } => write!(f, "patch {patch}: no faces"),
            PatchOverlap { face } => write!(f, "boundary face {face} belongs to more than one patch"),
            UncoveredBoundaryFace { face } => write!(f, "boundary face {face} belongs to no patch"),
            PatchBeyondFaces { patch } => write!(f, "patch {patch}: extends past the last face"),
            TooFewFaces { cell, count } => write!(f, "cell {cell}: only {count} faces"),
            NotClosed { cell, relative } => write!(f, "cell {cell}: not closed (relative mismatch {relative:e})"),
            NonPositiveVolume { cell, volume } => write!(f, "cell {cell}: non-positive volume {volume:e}"),
            GammaOutOfRange { face, gamma } => write!(f, "face {face}: interpolation weight {gamma} outside (0,1)"),
            SplitNotParallel { face } => write!(f, "face {face}: orthogonal component not parallel to delta"),
            InvertedFace { face, dot } => write!(f, "face {face}: inverted (d.Gamma = {dot:e})"),
        }
    }
}

/// Every invariant violation found in a mesh. Empty iff the solver accepts
/// the mesh.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn len(&self) -> usize {
        self.issues.len()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return writeln!(f, "mesh OK");
        }
        for issue in &self.issues {
            writeln!(f, "  {issue}")?;
        }
        Ok(())
    }
}

/// Checks topology and, when the topology is sound enough to measure,
/// every geometric invariant.
pub fn validate_mesh(mesh: &PolyMesh) -> ValidationReport {
    let mut issues = topology_issues(mesh);
    let indices_ok = !issues.iter().any(|i| {
        matches!(
            i,
            Issue::PointOutOfRange { .. }
                | Issue::CellOutOfRange { .. }
                | Issue::OwnerLength { .. }
                | Issue::NeighbourTooLong { .. }
        )
    });
    if indices_ok {
        let geom = MeshGeometry::compute_unchecked(mesh);
        issues.extend(validate_geometry(mesh, &geom).issues);
    }
    ValidationReport { issues }
}

fn topology_issues(mesh: &PolyMesh) -> Vec<Issue> {
    let mut issues = Vec::new();
    let nf = mesh.face_count();
    let n_int = mesh.internal_face_count();
    let np = mesh.points.len();
    let nc = mesh.cell_count;

    for (f, face) in mesh.faces.iter().enumerate() {
        if face.len() < 3 {
            issues.push(Issue::TooFewPoints { face: f, count: face.len() });
        }
        for &p in face {
            if p >= np {
                issues.push(Issue::PointOutOfRange { face: f, point: p });
            }
        }
    }
    if mesh.owner.len() != nf {
        issues.push(Issue::OwnerLength { faces: nf, owners: mesh.owner.len() });
    }
    if n_int > nf {
        issues.push(Issue::NeighbourTooLong { neighbours: n_int, faces: nf });
    }
    for (f, &c) in mesh.owner.iter().enumerate() {
        if c >= nc {
            issues.push(Issue::CellOutOfRange { face: f, cell: c });
        }
    }
    for (f, (&o, &n)) in mesh.owner.iter().zip(&mesh.neighbour).enumerate() {
        if n >= nc {
            issues.push(Issue::CellOutOfRange { face: f, cell: n });
        }
        if o >= n {
            issues.push(Issue::OwnerNotBelowNeighbour { face: f, owner: o, neighbour: n });
        }
    }

    let mut cover = vec![0usize; nf.saturating_sub(n_int)];
    for patch in &mesh.patches {
        if patch.face_count == 0 {
            issues.push(Issue::EmptyPatch { patch: patch.name.clone() });
        }
        if patch.start_face < n_int {
            issues.push(Issue::PatchInInternalRange {
                patch: patch.name.clone(),
                start: patch.start_face,
            });
        }
        if patch.start_face + patch.face_count > nf {
            issues.push(Issue::PatchBeyondFaces { patch: patch.name.clone() });
        }
        for f in patch.faces().filter(|&f| f >= n_int && f < nf) {
            cover[f - n_int] += 1;
        }
    }
    for (i, &c) in cover.iter().enumerate() {
        match c {
            0 => issues.push(Issue::UncoveredBoundaryFace { face: n_int + i }),
            1 => {}
            _ => issues.push(Issue::PatchOverlap { face: n_int + i }),
        }
    }

    if mesh.owner.len() == nf {
        let mut counts = vec![0usize; nc];
        for &c in mesh.owner.iter().chain(&mesh.neighbour) {
            if c < nc {
                counts[c] += 1;
            }
        }
        for (cell, &count) in counts.iter().enumerate() {
            if count < 4 {
                issues.push(Issue::TooFewFaces { cell, count });
            }
        }
    }
    issues
}

/// Geometric invariants of already-computed metrics.
pub fn validate_geometry(mesh: &PolyMesh, geom: &MeshGeometry) -> ValidationReport {
    let mut issues = Vec::new();
    let n_int = mesh.internal_face_count();

    for (f, face) in mesh.faces.iter().enumerate() {
        if face.iter().any(|&p| p >= mesh.points.len()) || face.len() < 3 {
            continue;
        }
        let edges: Vec<f64> = (0..face.len())
            .map(|i| (mesh.points[face[(i + 1) % face.len()]] - mesh.points[face[i]]).norm())
            .collect();
        let longest = edges.iter().cloned().fold(0.0, f64::max);
        let mut sorted = face.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != face.len() || edges.iter().any(|&e| e <= 1e-12 * longest) {
            issues.push(Issue::DegenerateFace { face: f });
        }
        let area = geom.face_area[f].norm();
        if !(area > ZERO_AREA_TOL * longest * longest) {
            issues.push(Issue::ZeroAreaFace { face: f, area });
        }
    }

    for (cell, faces) in geom.cell_faces.iter().enumerate() {
        let mut sum = crate::Vec3::zeros();
        let mut total = 0.0;
        for &f in faces {
            let s = geom.outward_area(mesh, f, cell);
            sum += s;
            total += s.norm();
        }
        if !(sum.norm() <= CLOSEDNESS_TOL * total) {
            issues.push(Issue::NotClosed {
                cell,
                relative: sum.norm() / total,
            });
        }
        let volume = geom.cell_volume[cell];
        if !(volume > 0.0) {
            issues.push(Issue::NonPositiveVolume { cell, volume });
        }
    }

    for (f, &gamma) in geom.gamma.iter().enumerate().take(n_int) {
        if !(gamma > 0.0 && gamma < 1.0) {
            issues.push(Issue::GammaOutOfRange { face: f, gamma });
        }
    }
    for f in 0..mesh.face_count() {
        let d = geom.delta[f];
        let big = geom.ortho[f];
        if !(d.cross(&big).norm() <= PARALLEL_TOL * d.norm() * big.norm()) {
            issues.push(Issue::SplitNotParallel { face: f });
        }
        let dot = d.dot(&geom.face_area[f]);
        if !(dot > 0.0) {
            issues.push(Issue::InvertedFace { face: f, dot });
        }
    }
    ValidationReport { issues }
}
