//! Dense complex linear algebra: matrices, SVD, Hermitian eigenproblems,
//! factorizations, constrained least squares and quaternion embedding.

pub mod eigen;
pub mod factor;
pub mod lsq;
pub mod matrix;
pub mod quaternion;
pub mod svd;
pub mod tolerance;

pub use eigen::{hermitian_eigen, spectral_map, HermitianEigen};
pub use factor::{expm, expm_nilpotent, inverse, pivoted_qr, Lu, PivotedQr};
pub use lsq::{solve_least_squares_constrained, ConstrainedSolution};
pub use matrix::{c, vec_norm, ComplexMatrix, RealMatrix, C64, I, ONE, ZERO};
pub use quaternion::{Quaternion, QuaternionMatrix};
pub use svd::{adjoint, pinv_svd, rank_decomposition, spectral_norm, svd, RankDecomposition, Svd};
pub use tolerance::Tolerance;
