//! Plain-text mesh file.
//!
//! ```text
//! points <n>      then n lines `x y z`
//! faces <n>       then n lines `k i0 ... i(k-1)`
//! owner <n>       then n cell indices
//! neighbour <n>   then n cell indices
//! patches <n>     then n lines `name kind startFace faceCount`
//! ```
//!
//! Sections appear in this order, indices are 0-based, tokens are separated
//! by any whitespace and `#` starts a comment running to the end of the line.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{BoundaryPatch, PatchKind, PolyMesh};
use crate::{Error, Result, Vec3};

struct Tokens<'a> {
    source: &'a str,
    items: Vec<(&'a str, usize)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str, source: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .flat_map(|(i, line)| {
                let body = line.split('#').next().unwrap_or("");
                body.split_whitespace().map(move |t| (t, i + 1))
            })
            .collect();
        Tokens { source, items, pos: 0 }
    }

    fn line(&self) -> usize {
        self.items
            .get(self.pos)
            .or_else(|| self.items.last())
            .map_or(1, |t| t.1)
    }

    fn error(&self, line: usize, message: String) -> Error {
        Error::Parse {
            path: self.source.to_string(),
            line,
            message,
        }
    }

    fn next(&mut self, what: &str) -> Result<(&'a str, usize)> {
        match self.items.get(self.pos) {
            Some(&t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(self.error(self.line(), format!("unexpected end of file, expected {what}"))),
        }
    }

    fn parse<T: FromStr>(&mut self, what: &str) -> Result<T> {
        let (tok, line) = self.next(what)?;
        tok.parse()
            .map_err(|_| self.error(line, format!("invalid {what}: `{tok}`")))
    }

    fn keyword(&mut self, name: &str) -> Result<usize> {
        let (tok, line) = self.next(&format!("section `{name}`"))?;
        if tok != name {
            return Err(self.error(line, format!("expected section `{name}`, found `{tok}`")));
        }
        self.parse(&format!("{name} count"))
    }
}

pub fn parse_mesh(text: &str, source: &str) -> Result<PolyMesh> {
    let mut t = Tokens::new(text, source);

    let n_points = t.keyword("points")?;
    let mut points = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let what = format!("points[{i}] coordinate");
        points.push(Vec3::new(t.parse(&what)?, t.parse(&what)?, t.parse(&what)?));
    }

    let n_faces = t.keyword("faces")?;
    let mut faces = Vec::with_capacity(n_faces);
    for f in 0..n_faces {
        let k: usize = t.parse(&format!("faces[{f}] size"))?;
        let mut face = Vec::with_capacity(k);
        for _ in 0..k {
            let line = t.line();
            let p: usize = t.parse(&format!("faces[{f}] point index"))?;
            if p >= n_points {
                return Err(t.error(
                    line,
                    format!("faces[{f}]: point index {p} out of range (points has {n_points} entries)"),
                ));
            }
            face.push(p);
        }
        faces.push(face);
    }

    let line = t.line();
    let n_owner = t.keyword("owner")?;
    if n_owner != n_faces {
        return Err(t.error(line, format!("owner has {n_owner} entries but there are {n_faces} faces")));
    }
    let mut owner = Vec::with_capacity(n_owner);
    for i in 0..n_owner {
        owner.push(t.parse(&format!("owner[{i}]"))?);
    }

    let line = t.line();
    let n_neighbour = t.keyword("neighbour")?;
    if n_neighbour > n_faces {
        return Err(t.error(
            line,
            format!("neighbour has {n_neighbour} entries but there are only {n_faces} faces"),
        ));
    }
    let mut neighbour = Vec::with_capacity(n_neighbour);
    for i in 0..n_neighbour {
        neighbour.push(t.parse(&format!("neighbour[{i}]"))?);
    }

    let n_patches = t.keyword("patches")?;
    let mut patches = Vec::with_capacity(n_patches);
    for i in 0..n_patches {
        let (name, _) = t.next(&format!("patches[{i}] name"))?;
        let (kind, line) = t.next(&format!("patches[{i}] kind"))?;
        let kind = PatchKind::from_str(kind).map_err(|e| t.error(line, format!("patches[{i}]: {e}")))?;
        let start_face = t.parse(&format!("patches[{i}] startFace"))?;
        let face_count = t.parse(&format!("patches[{i}] faceCount"))?;
        patches.push(BoundaryPatch {
            name: name.to_string(),
            start_face,
            face_count,
            kind,
        });
    }
    if let Some(first) = patches.iter().map(|p| p.start_face).min() {
        if n_neighbour > first {
            return Err(t.error(
                t.line(),
                format!(
                    "neighbour has {n_neighbour} entries but boundary patches start at face {first}"
                ),
            ));
        }
    }
    if let Some((tok, line)) = t.items.get(t.pos) {
        return Err(t.error(*line, format!("trailing content `{tok}`")));
    }

    Ok(PolyMesh::new(points, faces, owner, neighbour, patches))
}

pub fn format_mesh(mesh: &PolyMesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# fvsolid polyhedral mesh: {} cells", mesh.cell_count);
    let _ = writeln!(s, "points {}", mesh.points.len());
    for p in &mesh.points {
        let _ = writeln!(s, "{} {} {}", p.x, p.y, p.z);
    }
    let _ = writeln!(s, "faces {}", mesh.faces.len());
    for f in &mesh.faces {
        let _ = write!(s, "{}", f.len());
        for p in f {
            let _ = write!(s, " {p}");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "owner {}", mesh.owner.len());
    for o in &mesh.owner {
        let _ = writeln!(s, "{o}");
    }
    let _ = writeln!(s, "neighbour {}", mesh.neighbour.len());
    for n in &mesh.neighbour {
        let _ = writeln!(s, "{n}");
    }
    let _ = writeln!(s, "patches {}", mesh.patches.len());
    for p in &mesh.patches {
        let _ = writeln!(s, "{} {} {} {}", p.name, p.kind, p.start_face, p.face_count);
    }
    s
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<PolyMesh> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_mesh(&text, &path.display().to_string())
}

pub fn write_mesh(mesh: &PolyMesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_mesh(mesh)).map_err(|e| Error::io(path, e))
}
