//! Generalized Moore–Penrose inverses for classical matrices, graded classical
//! Lie algebras and the associated Jordan pairs.

pub mod classical;
pub mod complexes;
pub mod error;
pub mod forms;
pub mod graded;
pub mod homform;
pub mod jordan;
pub mod numcore;
pub mod sample;

pub use error::{Error, Result};
pub use numcore::{ComplexMatrix, Quaternion, QuaternionMatrix, RealMatrix, Tolerance, C64};
