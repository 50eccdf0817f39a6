use std::sync::Arc;

use crate::{Error, Result};

/// Strict upper-triangle sparsity in compressed-row form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricPattern {
    n: usize,
    row_start: Vec<usize>,
    cols: Vec<usize>,
}

impl SymmetricPattern {
    /// Builds the pattern of a list of off-diagonal index pairs. Returns the
    /// pattern and, for each input pair, the slot its value accumulates into
    /// (repeated pairs share a slot).
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<(Self, Vec<usize>)> {
        let mut keyed: Vec<(usize, usize, usize)> = Vec::with_capacity(pairs.len());
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if a == b || a >= n || b >= n {
                return Err(Error::InvalidArgument(format!(
                    "off-diagonal pair ({a}, {b}) invalid for {n} rows"
                )));
            }
            keyed.push((a.min(b), a.max(b), k));
        }
        keyed.sort_unstable();
        let mut row_start = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(keyed.len());
        let mut slot = vec![0usize; pairs.len()];
        let mut last = None;
        for &(i, j, k) in &keyed {
            if last != Some((i, j)) {
                cols.push(j);
                row_start[i + 1] += 1;
                last = Some((i, j));
            }
            slot[k] = cols.len() - 1;
        }
        for i in 0..n {
            row_start[i + 1] += row_start[i];
        }
        Ok((SymmetricPattern { n, row_start, cols }, slot))
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn nnz_upper(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, i: usize) -> std::ops::Range<usize> {
        self.row_start[i]..self.row_start[i + 1]
    }

    pub fn col(&self, slot: usize) -> usize {
        self.cols[slot]
    }

    /// Slot of the upper entry `(i, j)`, `i < j`.
    pub fn find(&self, i: usize, j: usize) -> Option<usize> {
        let r = self.row(i);
        self.cols[r.clone()].binary_search(&j).ok().map(|k| r.start + k)
    }
}

/// Symmetric matrix stored as its diagonal plus the strict upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetricMatrix {
    pattern: Arc<SymmetricPattern>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl SparseSymmetricMatrix {
    pub fn new(pattern: Arc<SymmetricPattern>, diag: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if diag.len() != pattern.rows() || upper.len() != pattern.nnz_upper() {
            return Err(Error::InvalidArgument(format!(
                "matrix values ({} diagonal, {} upper) do not fit pattern ({} rows, {} upper)",
                diag.len(),
                upper.len(),
                pattern.rows(),
                pattern.nnz_upper()
            )));
        }
        Ok(SparseSymmetricMatrix { pattern, diag, upper })
    }

    /// From `(row, col, value)` off-diagonal entries; `(i, j)` and `(j, i)`
    /// denote the same entry and repeated entries are summed.
    pub fn from_entries(diag: Vec<f64>, entries: &[(usize, usize, f64)]) -> Result<Self> {
        let pairs: Vec<_> = entries.iter().map(|&(i, j, _)| (i, j)).collect();
        let (pattern, slots) = SymmetricPattern::from_pairs(diag.len(), &pairs)?;
        let mut upper = vec![0.0; pattern.nnz_upper()];
        for (&(_, _, v), &s) in entries.iter().zip(&slots) {
            upper[s] += v;
        }
        Self::new(Arc::new(pattern), diag, upper)
    }

    pub fn rows(&self) -> usize {
        self.diag.len()
    }

    pub fn pattern(&self) -> &SymmetricPattern {
        &self.pattern
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// `y = A x`.
    pub fn mul_into(&self, x: &[f64], y: &mut [f64]) {
        for ((yi, &d), &xi) in y.iter_mut().zip(&self.diag).zip(x) {
            *yi = d * xi;
        }
        for i in 0..self.rows() {
            let xi = x[i];
            let mut acc = 0.0;
            for s in self.pattern.row(i) {
                let j = self.pattern.cols[s];
                let a = self.upper[s];
                acc += a * x[j];
                y[j] += a * xi;
            }
            y[i] += acc;
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.rows()];
        self.mul_into(x, &mut y);
        y
    }

    /// Dense row-major copy, for diagnostics and tests.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.rows();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = self.diag[i];
            for s in self.pattern.row(i) {
                let j = self.pattern.cols[s];
                a[i][j] = self.upper[s];
                a[j][i] = self.upper[s];
            }
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn duplicates_share_a_slot() {
        let (p, slots) = SymmetricPattern::from_pairs(4, &[(2, 0), (0, 2), (1, 3)]).unwrap();
        assert_eq!(p.nnz_upper(), 2);
        assert_eq!(slots[0], slots[1]);
        assert_eq!(p.find(0, 2), Some(slots[0]));
        assert_eq!(p.find(1, 3), Some(slots[2]));
        assert_eq!(p.find(0, 1), None);
        assert!(SymmetricPattern::from_pairs(2, &[(1, 1)]).is_err());
    }

    proptest! {
        #[test]
        fn matvec_matches_dense(
            n in 1usize..30,
            seed_entries in prop::collection::vec((0usize..30, 0usize..30, -5.0f64..5.0), 0..80),
            x in prop::collection::vec(-3.0f64..3.0, 30),
            d in prop::collection::vec(0.5f64..10.0, 30),
        ) {
            let entries: Vec<_> = seed_entries.into_iter()
                .filter(|&(i, j, _)| i < n && j < n && i != j).collect();
            let a = SparseSymmetricMatrix::from_entries(d[..n].to_vec(), &entries).unwrap();
            let dense = a.to_dense();
            let y = a.mul(&x[..n]);
            for i in 0..n {
                let reference: f64 = (0..n).map(|j| dense[i][j] * x[j]).sum();
                let scale: f64 = (0..n).map(|j| (dense[i][j] * x[j]).abs()).sum::<f64>().max(1e-300);
                prop_assert!((y[i] - reference).abs() <= 1e-13 * scale);
            }
        }
    }
}
