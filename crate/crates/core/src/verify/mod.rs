//! Verification tools: manufactured solutions, error norms, observed order
//! of accuracy and the thick-walled cylinder benchmark.

mod cylinder;
mod mms;
mod norms;
mod study;

pub use cylinder::{lame_thick_cylinder, quarter_annulus_mesh, LameCylinder};
pub use mms::{mms_body_force, ManufacturedSolution, MmsData};
pub use norms::{error_norms, error_norms_with, observed_order, ErrorReport};
pub use study::{mms_study, mms_study_observed, MmsStudy, StudyRow};
