//! Harmonic tangents of eigenfunctions at points of `V_*`.
//!
//! For an address `w = w_1 … w_{k0} i i i …` the tangent is
//!
//! ```text
//! T_w u = A_{w_1}^{-1} ⋯ A_{w_k}^{-1} · M_i(λ, k) · A_{w_k}(λ_k) ⋯ A_{w_{m0+1}}(λ_{m0+1}) · u|F_{w_1…w_{m0}}(V_0)
//! ```
//!
//! with `k = max(k0, m0)` and `M_i = P_i M_0 P_i`, `P_i` the transposition of
//! coordinates `0` and `i`. `M_0(λ, k)` is the closed-form limit of
//! `A_0^{-n} A_0(λ_{k+n}) ⋯ A_0(λ_{k+1})`.
//!
//! The gradient is the tangent with its mean removed (projection onto the
//! average-zero harmonic functions along constants).

mod pieces;

pub use pieces::{
    assemble_dirichlet_tangent, dirichlet_tangent_seed, piece_eigenfunction, validate_piece_lambda1,
    PieceTangents, TangentPiece,
};

use crate::address::{EventuallyConstantWord, Letter, Word};
use crate::decimation::{EigenvalueSequence, SpectralEigenfunction};
use crate::error::{Result, SgError};
use crate::harmonic::harmonic_inverse;
use crate::linalg::{Mat3, Vec3};
use crate::special::{tau, upsilon, ConvergenceConfig, Estimate};

/// Boundary values of the tangent harmonic function `T_w u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentTriple(pub Vec3);

impl TangentTriple {
    pub fn mean(&self) -> f64 {
        self.0.iter().sum::<f64>() / 3.0
    }

    /// The triple minus its mean.
    pub fn gradient(&self) -> Vec3 {
        let m = self.mean();
        self.0.map(|x| x - m)
    }
}

/// `M_0(λ, k)` together with the data it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentMatrix {
    pub matrix: Mat3,
    pub k: usize,
    pub lambda: f64,
    pub lambda_k: f64,
    /// `τ_k(λ)`; `None` in the harmonic case.
    pub tau: Option<Estimate>,
}

/// The vectors α, β, γ whose limit actions are known, for the letter 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisVector {
    /// `(0, 1, 1)`
    Alpha,
    /// `(0, 1, -1)`
    Beta,
    /// `(4, 4 − λ_m, 4 − λ_m)`
    Gamma,
}

impl BasisVector {
    pub fn at(self, seq: &EigenvalueSequence, m: usize) -> Vec3 {
        match self {
            BasisVector::Alpha => [0.0, 1.0, 1.0],
            BasisVector::Beta => [0.0, 1.0, -1.0],
            BasisVector::Gamma => {
                let l = seq.lambda(m);
                [4.0, 4.0 - l, 4.0 - l]
            }
        }
    }
}

fn cfg() -> ConvergenceConfig {
    ConvergenceConfig::default()
}

/// `λ / (3 · 5^k · λ_k)`.
fn scale_factor(seq: &EigenvalueSequence, k: usize) -> f64 {
    seq.limit() * 5f64.powi(-(k as i32)) / (3.0 * seq.lambda(k))
}

/// `lim_n A_0^{-n} A_0(λ_{m0+n}) ⋯ A_0(λ_{m0+1}) v` for `v` one of α, β,
/// `γ_{m0}`, in closed form.
pub fn limit_action(seq: &EigenvalueSequence, m0: usize, v: BasisVector) -> Result<Vec3> {
    if m0 < seq.m0() {
        return Err(SgError::Domain(format!(
            "limit taken from level {m0}, below the sequence start {}",
            seq.m0()
        )));
    }
    let harmonic = seq.lambda(m0) == 0.0;
    let base = v.at(seq, m0);
    let coefficient = match v {
        BasisVector::Gamma => return Ok([4.0; 3]),
        _ if harmonic => 1.0,
        BasisVector::Alpha => 4.0 * scale_factor(seq, m0) * tau(m0, seq, &cfg())?.value,
        BasisVector::Beta => 2.0 * scale_factor(seq, m0),
    };
    Ok(base.map(|x| coefficient * x))
}

/// `M_0(λ, k)`; the identity when `λ_k = 0` (harmonic case).
pub fn m0_matrix(seq: &EigenvalueSequence, k: usize) -> Result<TangentMatrix> {
    if k < seq.m0() {
        return Err(SgError::Domain(format!("k = {k} is below m0 = {}", seq.m0())));
    }
    let lambda_k = seq.lambda(k);
    if lambda_k == 0.0 {
        return Ok(TangentMatrix {
            matrix: Mat3::IDENTITY,
            k,
            lambda: seq.limit(),
            lambda_k,
            tau: None,
        });
    }
    let t = tau(k, seq, &cfg())?;
    let c = scale_factor(seq, k);
    let first = 1.0 - (4.0 - lambda_k) * c * t.value;
    let plus = c * (2.0 * t.value + 1.0);
    let minus = c * (2.0 * t.value - 1.0);
    Ok(TangentMatrix {
        matrix: Mat3([[1.0, 0.0, 0.0], [first, plus, minus], [first, minus, plus]]),
        k,
        lambda: seq.limit(),
        lambda_k,
        tau: Some(t),
    })
}

/// `M_i(λ, k) = P_i M_0(λ, k) P_i`.
pub fn tail_matrix(seq: &EigenvalueSequence, k: usize, tail: Letter) -> Result<Mat3> {
    let p = Mat3::swap_with_zero(tail.index());
    Ok(p * m0_matrix(seq, k)?.matrix * p)
}

/// `T_w u` with the product cut at `max(|prefix|, m0)`.
pub fn tangent_at(u: &SpectralEigenfunction, w: &EventuallyConstantWord) -> Result<TangentTriple> {
    tangent_at_with_cut(u, w, w.prefix().len().max(u.m0()))
}

/// `T_w u` with the product cut at level `cut >= max(|prefix|, m0)`. The
/// result does not depend on the cut.
pub fn tangent_at_with_cut(
    u: &SpectralEigenfunction,
    w: &EventuallyConstantWord,
    cut: usize,
) -> Result<TangentTriple> {
    let min_cut = w.prefix().len().max(u.m0());
    if cut < min_cut {
        return Err(SgError::Domain(format!("cut {cut} is below {min_cut}")));
    }
    let head: Word = w.truncate(cut);
    let v = u.cell_triple(&head)?.0;
    let v = tail_matrix(u.seq(), cut, w.tail())? * v;
    let v = head
        .letters()
        .iter()
        .rev()
        .fold(v, |acc, &l| harmonic_inverse(l) * acc);
    Ok(TangentTriple(v))
}

/// The mean-subtracted tangent.
pub fn gradient_at(u: &SpectralEigenfunction, w: &EventuallyConstantWord) -> Result<Vec3> {
    Ok(tangent_at(u, w)?.gradient())
}

/// `∂_n u(q_i)`.
///
/// For `m0 = 0` this is the closed form
/// `((4 − λ_0) u(q_i) − 2u(q_{i+1}) − 2u(q_{i+2})) · 2λΥ(λ) / (3λ_0)`, and
/// `2u(q_i) − u(q_{i+1}) − u(q_{i+2})` in the harmonic case `λ_0 = 0`.
/// Otherwise it is read off the tangent at `q_i`, since `u` and `T_w u` have
/// the same normal derivative there.
pub fn normal_derivative(u: &SpectralEigenfunction, i: Letter) -> Result<f64> {
    let idx = [i.index(), i.shifted(1).index(), i.shifted(2).index()];
    if u.m0() > 0 {
        let t = tangent_at(u, &EventuallyConstantWord::constant(i))?.0;
        return Ok(2.0 * t[idx[0]] - t[idx[1]] - t[idx[2]]);
    }
    let b = u.boundary().0;
    let lambda0 = u.seq().lambda(0);
    if lambda0 == 0.0 {
        return Ok(2.0 * b[idx[0]] - b[idx[1]] - b[idx[2]]);
    }
    let lambda = u.lambda();
    let ups = match upsilon(lambda, &cfg()) {
        Ok(e) => e.value,
        // beyond the Ψ argument cap the sequence form τ_0 = Υ(λ) still works
        Err(SgError::Domain(_)) => tau(0, u.seq(), &cfg())?.value,
        Err(e) => return Err(e),
    };
    let bracket = (4.0 - lambda0) * b[idx[0]] - 2.0 * b[idx[1]] - 2.0 * b[idx[2]];
    Ok(bracket * 2.0 * lambda * ups / (3.0 * lambda0))
}
