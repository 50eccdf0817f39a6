//! Cell-centred finite volume solver for small-strain linear elasticity on
//! unstructured polyhedral meshes.
//!
//! Displacement is stored at cell centroids. Surface forces are evaluated at
//! face centroids from interpolated least-squares gradients, and a
//! Rhie-Chow style third-order diffusion term suppresses checker-board modes.
//! The three Cartesian displacement components are solved as separate scalar
//! systems coupled through outer fixed-point iterations, with each scalar
//! system handed to a preconditioned conjugate gradient solver.
//!
//! Data-parallel inner loops (gradients, face kernels, assembly, component
//! solves) run on rayon when the `parallel` feature is enabled; every
//! reduction has a fixed order so results are bitwise identical for any
//! thread count, including the serial fallback.

pub mod case;
pub mod discretisation;
pub mod error;
pub mod fields;
pub mod linsolve;
pub mod material;
pub mod mesh;
pub mod par;
pub mod solver;
pub mod verify;
pub mod vtk;

pub use error::{Error, Result};
pub use par::Execution;

/// 3-component vector used for positions, displacements and forces.
pub type Vec3 = nalgebra::Vector3<f64>;
/// 3x3 tensor. Displacement gradients are stored as `G[(i, j)] = du_j/dx_i`.
pub type Mat3 = nalgebra::Matrix3<f64>;
