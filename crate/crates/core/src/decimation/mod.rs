//! Spectral decimation: eigenvalue sequences `λ_m (5 − λ_m) = λ_{m−1}`, the
//! extension matrices `A_i(λ)`, and eigenfunctions built level by level from
//! initial data on `V_{m0}`.

mod eigenfunction;
mod enumerate;
mod matrices;
pub mod seeds;
mod sequence;

pub use eigenfunction::SpectralEigenfunction;
pub use enumerate::{dirichlet_eigenvalues, enumerate_dirichlet, SpectrumEntry};
pub use matrices::{eigen_matrix, extend_eigen};
pub use seeds::{dirichlet_basis, DirichletSeed, Series};
pub use sequence::{lambda_limit, lambda_next, Branch, EigenvalueSequence};
