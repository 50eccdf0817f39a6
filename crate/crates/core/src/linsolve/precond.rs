use super::sparse::SparseSymmetricMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Preconditioner {
    Jacobi,
    /// Zero fill-in incomplete Cholesky on the matrix's own pattern.
    #[default]
    IncompleteCholesky,
}

impl Preconditioner {
    pub fn as_str(self) -> &'static str {
        match self {
            Preconditioner::Jacobi => "jacobi",
            Preconditioner::IncompleteCholesky => "incompleteCholesky",
        }
    }
}

impl std::str::FromStr for Preconditioner {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jacobi" => Ok(Preconditioner::Jacobi),
            "incompleteCholesky" | "ic" | "IC0" => Ok(Preconditioner::IncompleteCholesky),
            other => Err(format!("unknown preconditioner `{other}` (expected jacobi or incompleteCholesky)")),
        }
    }
}

/// IC(0) factor `A ~ U^T U`, with `U` upper triangular on the pattern of A.
#[derive(Debug, Clone)]
pub struct IncompleteCholesky<'a> {
    a: &'a SparseSymmetricMatrix,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl<'a> IncompleteCholesky<'a> {
    /// Returns `Err(row)` at the first non-positive pivot.
    pub fn factor(a: &'a SparseSymmetricMatrix) -> Result<Self, usize> {
        let p = a.pattern();
        let mut diag = a.diag().to_vec();
        let mut upper = a.upper().to_vec();
        for i in 0..a.rows() {
            let pivot = diag[i];
            if !(pivot > 0.0) || !pivot.is_finite() {
                return Err(i);
            }
            let uii = pivot.sqrt();
            diag[i] = uii;
            let row = p.row(i);
            for s in row.clone() {
                upper[s] /= uii;
            }
            for s in row.clone() {
                let j = p.col(s);
                let uij = upper[s];
                diag[j] -= uij * uij;
                for t in s + 1..row.end {
                    if let Some(slot) = p.find(j, p.col(t)) {
                        upper[slot] -= uij * upper[t];
                    }
                }
            }
        }
        Ok(IncompleteCholesky { a, diag, upper })
    }

    /// `z = (U^T U)^-1 r`.
    pub fn apply(&self, r: &[f64], z: &mut [f64]) {
        let p = self.a.pattern();
        let n = r.len();
        z.copy_from_slice(r);
        for i in 0..n {
            z[i] /= self.diag[i];
            let zi = z[i];
            for s in p.row(i) {
                z[p.col(s)] -= self.upper[s] * zi;
            }
        }
        for i in (0..n).rev() {
            let mut acc = z[i];
            for s in p.row(i) {
                acc -= self.upper[s] * z[p.col(s)];
            }
            z[i] = acc / self.diag[i];
        }
    }
}
