//! Tomographic operator symbols for finite-dimensional quantum systems.
//!
//! ```
//! use tomosym::reconstruction::{make_grid, reconstruct_operator, DEFAULT_OVERSAMPLE};
//! use tomosym::symbols::spin_tomogram;
//! use tomosym::{CMatrix, HalfInt};
//!
//! let j = HalfInt::from_twice(2); // spin 1
//! let grid = make_grid(j, DEFAULT_OVERSAMPLE)?;
//! let a = CMatrix::diag_real(&[0.5, 0.3, 0.2]);
//! let w = spin_tomogram(&a, &grid.frames())?;
//! let back = reconstruct_operator(&w, &grid)?;
//! assert!(back.max_abs_diff(&a) < 1e-12);
//! # Ok::<(), tomosym::Error>(())
//! ```

pub mod channels;
pub mod dynamics;
pub mod entropy;
pub mod error;
pub mod io;
pub mod linalg;
pub mod reconstruction;
pub mod simplex;
pub mod star;
pub mod su2;
pub mod symbols;

pub use error::{Error, Result};

pub use channels::{ChannelKind, ChannelSpec, KrausChannel};
pub use linalg::{CMatrix, DensityMatrix, RngSeed, C64};
pub use reconstruction::QuadratureGrid;
pub use simplex::GroupSpec;
pub use su2::{EulerAngles, HalfInt};
pub use symbols::{Frame, OutcomeSpace, Tomogram};
