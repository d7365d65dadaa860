//! Tomographic symbols: spin and unitary tomograms and the quantizer/dequantizer
//! operator families.

mod quantizer;
mod tomogram;

pub use quantizer::{dequantizer_series, dequantizer_u, quantizer_d, spin_tomogram, QuantizerPair};
pub(crate) use tomogram::{frame_distribution, kron_all};
pub use tomogram::{
    marginal_distribution, product_tomogram, tomogram_marginal, unitary_tomogram, Frame, Outcome, OutcomeSpace,
    Tomogram, FRAME_UNITARITY_TOL, NEGATIVITY_TOL, NORMALIZATION_TOL,
};
