//! The entire function `Ψ` with `Ψ(5^{-j} λ) = λ_j`, and the infinite
//! product `Υ` entering the tangent matrix and the normal derivative.
//!
//! `Ψ` is evaluated by iterating `ψ(z) = z(5 − z)` on `(2/3) 5^{-n} z`
//! until successive approximants agree. Products are truncated once the
//! remaining factors are provably within `tol` of 1, using the geometric
//! decay `λ_{j+1} ≈ λ_j / 5` of the tail.

use crate::decimation::EigenvalueSequence;
use crate::error::{Result, SgError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceConfig {
    /// Stopping tolerance for `Ψ(z)`, relative to `max(|Ψ(z)|, min(1, |z|))`,
    /// so small arguments keep full relative accuracy; products use it as an
    /// absolute bound on the tail.
    pub tol: f64,
    pub max_iterations: usize,
    /// Assumed bound on `|λ_{j+1} / λ_j|` once the tail is small; used for
    /// the truncation bound of the infinite products.
    pub tail_bound_factor: f64,
    /// Largest `|z|` accepted by [`big_psi`].
    pub max_argument: f64,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            tol: 1e-14,
            max_iterations: 200,
            tail_bound_factor: 0.25,
            max_argument: 100.0,
        }
    }
}

impl ConvergenceConfig {
    pub fn with_tol(tol: f64) -> Self {
        ConvergenceConfig {
            tol,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(SgError::Invalid(format!("tolerance {} must be positive", self.tol)));
        }
        if self.max_iterations < 8 {
            return Err(SgError::Invalid(format!(
                "max_iterations {} must be at least 8",
                self.max_iterations
            )));
        }
        if !(0.0 < self.tail_bound_factor && self.tail_bound_factor < 1.0) {
            return Err(SgError::Invalid("tail_bound_factor must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// A value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// `ψ(z) = z(5 − z)`.
pub fn psi(z: f64) -> f64 {
    z * (5.0 - z)
}

/// `ψ_m(z) = ψ^{∘m}((2/3) 5^{-m} z)`.
pub fn psi_m(z: f64, m: usize) -> Result<f64> {
    let mut x = 2.0 / 3.0 * z * 5f64.powi(-(m as i32));
    for _ in 0..m {
        x = psi(x);
        if !x.is_finite() {
            return Err(SgError::Domain(format!(
                "ψ_{m}({z}) overflowed; |z| is outside the stable region"
            )));
        }
    }
    Ok(x)
}

/// `Ψ(z) = lim_m ψ_m(z)`.
pub fn big_psi(z: f64, cfg: &ConvergenceConfig) -> Result<Estimate> {
    cfg.validate()?;
    if !z.is_finite() || z.abs() > cfg.max_argument {
        return Err(SgError::Domain(format!(
            "Ψ({z}) requested outside |z| <= {}",
            cfg.max_argument
        )));
    }
    if z == 0.0 {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let mut prev = psi_m(z, 0)?;
    for m in 1..=cfg.max_iterations {
        let cur = psi_m(z, m)?;
        let delta = (cur - prev).abs();
        // Ψ(z) ≈ 2z/3 near 0: measure against |z| there, not 1
        let scale = cur.abs().max(z.abs().min(1.0));
        if delta <= cfg.tol * scale {
            return Ok(Estimate {
                value: cur,
                error: delta + 16.0 * f64::EPSILON * scale,
            });
        }
        prev = cur;
    }
    Err(SgError::NonConvergence {
        iterations: cfg.max_iterations,
        what: "Ψ iteration",
    })
}

const POLE_GUARD: f64 = 1e-12;

/// Runs `Π_{j>=2} (1 − x_j / 3)` until the tail bound drops below `tol`.
fn truncated_product(
    mut term: impl FnMut(usize) -> Result<f64>,
    cfg: &ConvergenceConfig,
    what: &'static str,
) -> Result<Estimate> {
    let r = cfg.tail_bound_factor;
    let mut product = 1.0;
    for j in 2..cfg.max_iterations + 2 {
        let x = term(j)?;
        product *= 1.0 - x / 3.0;
        // remaining factors deviate from 1 by at most |x|/3 · r/(1 − r) in log
        let tail = x.abs() / 3.0 * r / (1.0 - r);
        if tail < cfg.tol {
            return Ok(Estimate {
                value: product,
                error: product.abs() * tail * 1.5 + 8.0 * f64::EPSILON * product.abs() * j as f64,
            });
        }
    }
    Err(SgError::NonConvergence {
        iterations: cfg.max_iterations,
        what,
    })
}

/// `Υ(λ) = (2 − Ψ(λ/5))^{-1} Π_{j>=2} (1 − Ψ(5^{-j} λ)/3)`.
pub fn upsilon(lambda: f64, cfg: &ConvergenceConfig) -> Result<Estimate> {
    cfg.validate()?;
    let lead = big_psi(lambda / 5.0, cfg)?;
    let denom = 2.0 - lead.value;
    if denom.abs() < POLE_GUARD {
        return Err(SgError::Domain(format!("Υ has a pole at λ = {lambda} (Ψ(λ/5) = 2)")));
    }
    let prod = truncated_product(
        |j| Ok(big_psi(lambda * 5f64.powi(-(j as i32)), cfg)?.value),
        cfg,
        "Υ product",
    )?;
    let value = prod.value / denom;
    let error = prod.error / denom.abs() + value.abs() * lead.error / denom.abs();
    Ok(Estimate { value, error })
}

/// `τ_k = (2 − λ_{k+1})^{-1} Π_{j>=2} (1 − λ_{k+j}/3)` from an explicit
/// eigenvalue sequence.
pub fn tau(k: usize, seq: &EigenvalueSequence, cfg: &ConvergenceConfig) -> Result<Estimate> {
    cfg.validate()?;
    if k < seq.m0() {
        return Err(SgError::Domain(format!(
            "τ_{k} needs k >= m0 = {}",
            seq.m0()
        )));
    }
    let next = seq.lambda(k + 1);
    let denom = 2.0 - next;
    if denom.abs() < POLE_GUARD {
        return Err(SgError::Singular {
            level: k + 1,
            value: next,
            reason: "τ_k has a pole where λ_{k+1} = 2",
        });
    }
    let prod = truncated_product(|j| Ok(seq.lambda(k + j)), cfg, "τ product")?;
    Ok(Estimate {
        value: prod.value / denom,
        error: prod.error / denom.abs(),
    })
}
