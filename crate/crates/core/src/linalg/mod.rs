//! Dense complex linear algebra for small operators.

mod basis;
mod density;
mod eigen;
mod matrix;
pub mod random;

pub use basis::{gell_mann_basis, hermitian_basis};
pub use density::{partial_trace, partial_transpose, DensityMatrix, DENSITY_TOL, PSD_SLACK};
pub(crate) use density::{join_index, split_index};
pub use eigen::{eig_hermitian, eigvals_hermitian, expm_hermitian_times, svd, HermitianEigen, Svd, HERMITIAN_TOL};
pub use matrix::{CMatrix, C64};
pub(crate) use matrix::ZERO;
pub use random::{haar_unitary, random_density, RngSeed};
