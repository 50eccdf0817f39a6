//! Sparse symmetric linear algebra for the per-component momentum systems.

mod cg;
mod precond;
mod sparse;

pub use cg::{cg_solve, residual_norm, Norm, SolveStats};
pub use precond::{IncompleteCholesky, Preconditioner};
pub use sparse::{SparseSymmetricMatrix, SymmetricPattern};
