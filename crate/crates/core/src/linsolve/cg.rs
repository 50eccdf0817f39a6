use super::precond::{IncompleteCholesky, Preconditioner};
use super::sparse::SparseSymmetricMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    pub initial_residual: f64,
    pub final_residual: f64,
    pub converged: bool,
    /// Set when IC(0) broke down and Jacobi was used instead.
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
}

/// `||b - A x||` in the chosen norm.
pub fn residual_norm(a: &SparseSymmetricMatrix, x: &[f64], b: &[f64], norm: Norm) -> f64 {
    let ax = a.mul(x);
    let r = b.iter().zip(&ax).map(|(bi, ai)| bi - ai);
    match norm {
        Norm::L1 => r.map(f64::abs).sum(),
        Norm::L2 => r.map(|v| v * v).sum::<f64>().sqrt(),
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

enum Precond<'a> {
    Jacobi(&'a [f64]),
    Ic(IncompleteCholesky<'a>),
}

impl Precond<'_> {
    fn apply(&self, r: &[f64], z: &mut [f64]) {
        match self {
            Precond::Jacobi(d) => {
                for ((zi, ri), di) in z.iter_mut().zip(r).zip(d.iter()) {
                    *zi = ri / di;
                }
            }
            Precond::Ic(ic) => ic.apply(r, z),
        }
    }
}

/// Preconditioned conjugate gradient. Stops once
/// `||b - A x||_2 <= rel_tol * ||b - A x0||_2` or after `max_iter`
/// iterations.
pub fn cg_solve(
    a: &SparseSymmetricMatrix,
    b: &[f64],
    x0: &[f64],
    rel_tol: f64,
    max_iter: usize,
    precond: Preconditioner,
) -> (Vec<f64>, SolveStats) {
    let n = a.rows();
    let mut x = x0.to_vec();
    let mut r = a.mul(&x);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let r0 = dot(&r, &r).sqrt();
    let mut stats = SolveStats {
        iterations: 0,
        initial_residual: r0,
        final_residual: r0,
        converged: true,
        warning: None,
    };
    if r0 == 0.0 {
        return (x, stats);
    }

    let m = match precond {
        Preconditioner::Jacobi => Precond::Jacobi(a.diag()),
        Preconditioner::IncompleteCholesky => match IncompleteCholesky::factor(a) {
            Ok(ic) => Precond::Ic(ic),
            Err(row) => {
                let msg = format!("incomplete Cholesky broke down at row {row}; using Jacobi");
                log::warn!("{msg}");
                stats.warning = Some(msg);
                Precond::Jacobi(a.diag())
            }
        },
    };

    let target = rel_tol * r0;
    let mut z = vec![0.0; n];
    m.apply(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut q = vec![0.0; n];
    stats.converged = false;
    while stats.iterations < max_iter {
        a.mul_into(&p, &mut q);
        let pq = dot(&p, &q);
        if !(pq > 0.0) {
            break;
        }
        let alpha = rz / pq;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        stats.iterations += 1;
        let rn = dot(&r, &r).sqrt();
        stats.final_residual = rn;
        if rn <= target {
            stats.converged = true;
            break;
        }
        m.apply(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    (x, stats)
}
