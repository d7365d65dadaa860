//! SU(2) representation theory: half-integers, Wigner functions, coupling
//! coefficients and irreducible tensor operators.

mod halfint;
mod tensor;
mod wigner;

pub use halfint::{triangle, HalfInt};
pub(crate) use halfint::{check_projection, parity_sign};
pub use tensor::{irreducible_tensor, rotation_matrix, spin_operators, tensor_basis};
pub(crate) use tensor::tensor_unchecked;
pub use wigner::{
    clebsch_gordan, log_factorial, wigner_3j, wigner_6j, wigner_big_d, wigner_small_d, EulerAngles,
};
pub(crate) use wigner::{big_d_unchecked, cg_unchecked, three_j_unchecked, six_j_unchecked};
