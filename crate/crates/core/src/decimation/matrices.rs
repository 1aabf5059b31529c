use crate::address::{Letter, Word};
use crate::decimation::EigenvalueSequence;
use crate::error::{Result, SgError};
use crate::harmonic::CellTriple;
use crate::linalg::Mat3;

const POLE_TOL: f64 = 1e-12;

/// `A_i(λ)`, mapping `u|V_0` to `u|F_i(V_0)` for an eigenfunction with
/// `λ_1 = λ`. Poles at `λ = 2` and `λ = 5`.
pub fn eigen_matrix(i: Letter, lambda: f64) -> Result<Mat3> {
    if (lambda - 2.0).abs() < POLE_TOL || (lambda - 5.0).abs() < POLE_TOL || !lambda.is_finite() {
        return Err(SgError::SingularMatrix(lambda));
    }
    let d = (5.0 - lambda) * (2.0 - lambda);
    let a = (4.0 - lambda) / d;
    let b = 2.0 / d;
    Ok(match i.index() {
        0 => Mat3([[1.0, 0.0, 0.0], [a, a, b], [a, b, a]]),
        1 => Mat3([[a, a, b], [0.0, 1.0, 0.0], [b, a, a]]),
        _ => Mat3([[a, b, a], [b, a, a], [0.0, 0.0, 1.0]]),
    })
}

/// Applies `A_{s_n}(λ_{L+n}) ⋯ A_{s_1}(λ_{L+1})` to the triple `b` of a cell
/// at level `L = at_level`, giving the triple of the subcell along `suffix`.
pub fn extend_eigen(
    b: CellTriple,
    suffix: &Word,
    seq: &EigenvalueSequence,
    at_level: usize,
) -> Result<CellTriple> {
    if at_level < seq.m0() {
        return Err(SgError::Domain(format!(
            "extension starts at level {at_level}, below m0 = {}",
            seq.m0()
        )));
    }
    let mut v = b.0;
    for (j, &l) in suffix.letters().iter().enumerate() {
        let level = at_level + j + 1;
        let lambda = seq.lambda(level);
        let m = eigen_matrix(l, lambda).map_err(|_| SgError::Singular {
            level,
            value: lambda,
            reason: "A_i(λ_m) is singular",
        })?;
        v = m * v;
    }
    Ok(CellTriple(v))
}
