use super::{BoundaryPatch, PatchKind, PolyMesh};
use crate::{Error, Result, Vec3};

/// Structured hexahedral mesh of an axis-aligned box.
///
/// Patches are named `minX`, `maxX`, `minY`, `maxY`, `minZ`, `maxZ`, all of
/// kind `fixedDisplacement` until a case re-types them.
pub fn build_block_mesh(origin: Vec3, extent: Vec3, divisions: [usize; 3]) -> Result<PolyMesh> {
    if extent.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "block extent must be positive, got ({}, {}, {})",
            extent.x, extent.y, extent.z
        )));
    }
    if divisions.iter().any(|&d| d == 0) {
        return Err(Error::InvalidArgument(format!(
            "block divisions must be at least 1, got {divisions:?}"
        )));
    }
    let [nx, ny, nz] = divisions;
    let pid = |i: usize, j: usize, k: usize| i + (nx + 1) * (j + (ny + 1) * k);
    let cid = |i: usize, j: usize, k: usize| i + nx * (j + ny * k);

    let mut points = Vec::with_capacity((nx + 1) * (ny + 1) * (nz + 1));
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                points.push(Vec3::new(
                    origin.x + extent.x * i as f64 / nx as f64,
                    origin.y + extent.y * j as f64 / ny as f64,
                    origin.z + extent.z * k as f64 / nz as f64,
                ));
            }
        }
    }

    // Quads on the low-index side plane of the point (i, j, k), wound so
    // the normal points in the positive axis direction.
    let x_face = |i, j, k| vec![pid(i, j, k), pid(i, j + 1, k), pid(i, j + 1, k + 1), pid(i, j, k + 1)];
    let y_face = |i, j, k| vec![pid(i, j, k), pid(i, j, k + 1), pid(i + 1, j, k + 1), pid(i + 1, j, k)];
    let z_face = |i, j, k| vec![pid(i, j, k), pid(i + 1, j, k), pid(i + 1, j + 1, k), pid(i, j + 1, k)];
    let reversed = |mut f: Vec<usize>| {
        f.reverse();
        f
    };

    let mut faces = Vec::new();
    let mut owner = Vec::new();
    let mut neighbour = Vec::new();
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let c = cid(i, j, k);
                if i + 1 < nx {
                    faces.push(x_face(i + 1, j, k));
                    owner.push(c);
                    neighbour.push(cid(i + 1, j, k));
                }
                if j + 1 < ny {
                    faces.push(y_face(i, j + 1, k));
                    owner.push(c);
                    neighbour.push(cid(i, j + 1, k));
                }
                if k + 1 < nz {
                    faces.push(z_face(i, j, k + 1));
                    owner.push(c);
                    neighbour.push(cid(i, j, k + 1));
                }
            }
        }
    }

    let mut patches = Vec::with_capacity(6);
    let mut push_patch = |name: &str, list: Vec<(Vec<usize>, usize)>, faces: &mut Vec<Vec<usize>>, owner: &mut Vec<usize>| {
        let start_face = faces.len();
        let face_count = list.len();
        for (f, c) in list {
            faces.push(f);
            owner.push(c);
        }
        patches.push(BoundaryPatch {
            name: name.to_string(),
            start_face,
            face_count,
            kind: PatchKind::FixedDisplacement,
        });
    };

    let mut list = Vec::new();
    for k in 0..nz {
        for j in 0..ny {
            list.push((reversed(x_face(0, j, k)), cid(0, j, k)));
        }
    }
    push_patch("minX", std::mem::take(&mut list), &mut faces, &mut owner);
    for k in 0..nz {
        for j in 0..ny {
            list.push((x_face(nx, j, k), cid(nx - 1, j, k)));
        }
    }
    push_patch("maxX", std::mem::take(&mut list), &mut faces, &mut owner);
    for k in 0..nz {
        for i in 0..nx {
            list.push((reversed(y_face(i, 0, k)), cid(i, 0, k)));
        }
    }
    push_patch("minY", std::mem::take(&mut list), &mut faces, &mut owner);
    for k in 0..nz {
        for i in 0..nx {
            list.push((y_face(i, ny, k), cid(i, ny - 1, k)));
        }
    }
    push_patch("maxY", std::mem::take(&mut list), &mut faces, &mut owner);
    for j in 0..ny {
        for i in 0..nx {
            list.push((reversed(z_face(i, j, 0)), cid(i, j, 0)));
        }
    }
    push_patch("minZ", std::mem::take(&mut list), &mut faces, &mut owner);
    for j in 0..ny {
        for i in 0..nx {
            list.push((z_face(i, j, nz), cid(i, j, nz - 1)));
        }
    }
    push_patch("maxZ", list, &mut faces, &mut owner);

    Ok(PolyMesh {
        points,
        faces,
        owner,
        neighbour,
        patches,
        cell_count: nx * ny * nz,
    })
}
