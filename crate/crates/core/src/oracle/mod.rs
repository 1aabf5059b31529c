//! Independent verifiers: a dense eigensolver, brute-force product limits
//! in extended precision, the normal-derivative limit, and the unit
//! interval in closed form.

mod dense;
mod interval;
mod limits;

pub use crate::harmonic::{normal_derivative_limit, NormalDerivativeEstimate};
pub use dense::{
    dense_dirichlet_spectrum, jacobi_eigen, multiset_gap, shared_dense_spectrum, symmetric_eigen, DenseSpectrum,
    DENSE_LEVEL_CAP,
};
pub use interval::{interval_tangent, sine_fit_tangent};
pub use limits::{
    direct_m0_limit, direct_tangent_limit, truncated_limit_action, truncated_product_action, DirectTangentLimit,
};
