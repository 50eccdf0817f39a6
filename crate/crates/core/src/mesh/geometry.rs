use super::PolyMesh;
use crate::{Error, Result, Vec3};

/// Derived metrics of a [`PolyMesh`]. Per-face arrays cover all faces unless
/// noted; `gamma` covers internal faces only.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshGeometry {
    /// Area vector, owner to neighbour (outward on boundary faces).
    pub face_area: Vec<Vec3>,
    pub face_centroid: Vec<Vec3>,
    pub cell_centroid: Vec<Vec3>,
    pub cell_volume: Vec<f64>,
    /// `x_N - x_P` on internal faces, `x_f - x_P` on boundary faces.
    pub delta: Vec<Vec3>,
    /// Owner-side interpolation weight of each internal face.
    pub gamma: Vec<f64>,
    /// Component of the area vector along `delta`.
    pub ortho: Vec<Vec3>,
    /// Remainder `face_area - ortho`.
    pub non_ortho: Vec<Vec3>,
    /// Faces of each cell, ascending.
    pub cell_faces: Vec<Vec<usize>>,
}

/// Area vector and centroid of a polygon.
///
/// Triangle fan about the vertex mean; the centroid is the area-weighted
/// mean of the fan triangle centroids. The area vector does not depend on
/// the fan centre.
pub fn polygon_metrics(pts: &[Vec3]) -> (Vec3, Vec3) {
    let n = pts.len();
    if n == 0 {
        return (Vec3::zeros(), Vec3::zeros());
    }
    let mean = pts.iter().sum::<Vec3>() / n as f64;
    if n == 3 {
        let area = 0.5 * (pts[1] - pts[0]).cross(&(pts[2] - pts[0]));
        return (area, mean);
    }
    let mut area = Vec3::zeros();
    let mut weighted = Vec3::zeros();
    let mut total = 0.0;
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        let tri = 0.5 * (a - mean).cross(&(b - mean));
        let mag = tri.norm();
        area += tri;
        weighted += mag * (mean + a + b) / 3.0;
        total += mag;
    }
    let centroid = if total > 0.0 { weighted / total } else { mean };
    (area, centroid)
}

impl MeshGeometry {
    /// Computes all metrics and rejects non-positive cell volumes and
    /// faces whose area vector opposes `delta`.
    pub fn compute(mesh: &PolyMesh) -> Result<Self> {
        let geom = Self::compute_unchecked(mesh);
        if let Some((cell, &volume)) = geom
            .cell_volume
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0))
        {
            return Err(Error::DegenerateCell { cell, volume });
        }
        for f in 0..mesh.face_count() {
            let dot = geom.delta[f].dot(&geom.face_area[f]);
            if !(dot > 0.0) {
                return Err(Error::InvertedFace { face: f, dot });
            }
        }
        Ok(geom)
    }

    /// Computes metrics without rejecting anything. Point and cell indices
    /// must be in range; invalid geometry shows up as non-finite or
    /// negative values.
    pub fn compute_unchecked(mesh: &PolyMesh) -> Self {
        let nf = mesh.face_count();
        let nc = mesh.cell_count;
        let mut face_area = Vec::with_capacity(nf);
        let mut face_centroid = Vec::with_capacity(nf);
        let mut face_pts: Vec<Vec3> = Vec::new();
        for face in &mesh.faces {
            face_pts.clear();
            face_pts.extend(face.iter().map(|&p| mesh.points[p]));
            let (a, c) = polygon_metrics(&face_pts);
            face_area.push(a);
            face_centroid.push(c);
        }

        let cell_faces = mesh.cell_faces();
        let mut cell_centroid = Vec::with_capacity(nc);
        let mut cell_volume = Vec::with_capacity(nc);
        for (c, faces) in cell_faces.iter().enumerate() {
            if faces.is_empty() {
                cell_centroid.push(Vec3::zeros());
                cell_volume.push(0.0);
                continue;
            }
            let approx = faces.iter().map(|&f| face_centroid[f]).sum::<Vec3>() / faces.len() as f64;
            let mut volume = 0.0;
            let mut moment = Vec3::zeros();
            for &f in faces {
                let xf = face_centroid[f];
                let pts = &mesh.faces[f];
                let sign = if mesh.owner[f] == c { 1.0 } else { -1.0 };
                for i in 0..pts.len() {
                    let a = mesh.points[pts[i]];
                    let b = mesh.points[pts[(i + 1) % pts.len()]];
                    let tri = 0.5 * (a - xf).cross(&(b - xf));
                    let v = sign * tri.dot(&(xf - approx)) / 3.0;
                    volume += v;
                    moment += v * (approx + xf + a + b) / 4.0;
                }
            }
            let centroid = if volume > 0.0 { moment / volume } else { approx };
            cell_centroid.push(centroid);
            cell_volume.push(volume);
        }

        let n_int = mesh.internal_face_count();
        let mut delta = Vec::with_capacity(nf);
        let mut gamma = Vec::with_capacity(n_int);
        let mut ortho = Vec::with_capacity(nf);
        let mut non_ortho = Vec::with_capacity(nf);
        for f in 0..nf {
            let xp = cell_centroid[mesh.owner[f]];
            let xf = face_centroid[f];
            let d = if f < n_int {
                let xn = cell_centroid[mesh.neighbour[f]];
                let dp = (xf - xp).norm();
                let dn = (xn - xf).norm();
                gamma.push(dn / (dp + dn));
                xn - xp
            } else {
                xf - xp
            };
            let s = face_area[f];
            let big_delta = d * (s.norm_squared() / d.dot(&s));
            delta.push(d);
            ortho.push(big_delta);
            non_ortho.push(s - big_delta);
        }

        MeshGeometry {
            face_area,
            face_centroid,
            cell_centroid,
            cell_volume,
            delta,
            gamma,
            ortho,
            non_ortho,
            cell_faces,
        }
    }

    pub fn total_volume(&self) -> f64 {
        self.cell_volume.iter().sum()
    }

    /// Outward area vector of `face` as seen from `cell`.
    pub fn outward_area(&self, mesh: &PolyMesh, face: usize, cell: usize) -> Vec3 {
        if mesh.owner[face] == cell {
            self.face_area[face]
        } else {
            -self.face_area[face]
        }
    }
}
