//! Analysis on the Sierpinski gasket: vertex addressing, harmonic extension,
//! spectral decimation of Laplacian eigenfunctions, harmonic tangents and
//! gradients at points of `V_*`, and the special functions `Ψ` and `Υ`.
//!
//! The [`oracle`] module holds independent brute-force checks (dense graph
//! spectra, direct tangent limits in double-double arithmetic, the interval
//! analogue) used by the test suites.

pub mod address;
pub mod decimation;
mod error;
pub mod harmonic;
pub mod linalg;
pub mod oracle;
pub mod special;
pub mod tangent;

pub use error::{Result, SgError};
