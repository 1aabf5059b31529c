use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::error::{Result, SgError};
use crate::special::{big_psi, psi, ConvergenceConfig};

/// Root choice in `λ_m = (5 ± √(25 − 4 λ_{m−1})) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Minus,
    Plus,
}

impl Branch {
    pub fn symbol(self) -> char {
        match self {
            Branch::Minus => '-',
            Branch::Plus => '+',
        }
    }

    pub fn from_symbol(c: char) -> Result<Self> {
        match c {
            '-' => Ok(Branch::Minus),
            '+' => Ok(Branch::Plus),
            _ => Err(SgError::Invalid(format!("branch symbol {c:?} is not '+' or '-'"))),
        }
    }
}

/// Successor of `prev` under the decimation recursion.
///
/// The minus root is evaluated as `2 prev / (5 + √(25 − 4 prev))` to avoid
/// cancellation when `prev` is small.
pub fn lambda_next(prev: f64, branch: Branch) -> Result<f64> {
    let disc = 25.0 - 4.0 * prev;
    if disc < -1e-12 || !prev.is_finite() {
        return Err(SgError::Domain(format!(
            "λ = {prev} exceeds 25/4 and has no real successor"
        )));
    }
    let s = disc.max(0.0).sqrt();
    Ok(match branch {
        Branch::Minus => 2.0 * prev / (5.0 + s),
        Branch::Plus => (5.0 + s) / 2.0,
    })
}

/// Levels stored eagerly past the last plus branch; `λ_m ~ 5^{-m}` is far
/// below double precision relevance by then.
const STORED_TAIL: usize = 64;
const EXCLUDED: [f64; 3] = [2.0, 5.0, 6.0];
const EXCLUSION_TOL: f64 = 1e-12;

/// `{λ_m}_{m >= m0}` with `λ_m (5 − λ_m) = λ_{m−1}`, finitely many plus
/// branches, and the limit `λ = (3/2) lim 5^m λ_m`.
///
/// Values are precomputed on construction; the limit is computed once and
/// cached, so a sequence can be shared freely between threads.
#[derive(Debug, Clone)]
pub struct EigenvalueSequence {
    m0: usize,
    plus: BTreeSet<usize>,
    values: Vec<f64>,
    limit: OnceLock<f64>,
}

impl PartialEq for EigenvalueSequence {
    fn eq(&self, other: &Self) -> bool {
        self.m0 == other.m0 && self.plus == other.plus && self.values == other.values
    }
}

impl EigenvalueSequence {
    /// Forward sequence from `λ_{m0}`, taking the plus root exactly at the
    /// levels in `plus` (each `> m0`).
    pub fn new(m0: usize, lambda_m0: f64, plus: impl IntoIterator<Item = usize>) -> Result<Self> {
        let plus: BTreeSet<usize> = plus.into_iter().collect();
        if let Some(&bad) = plus.iter().find(|&&p| p <= m0) {
            return Err(SgError::Invalid(format!(
                "plus branch at level {bad} is not above m0 = {m0}"
            )));
        }
        if !lambda_m0.is_finite() {
            return Err(SgError::Invalid(format!("λ_{m0} = {lambda_m0} is not finite")));
        }
        let last = plus.iter().next_back().copied().unwrap_or(m0).max(m0);
        let mut values = vec![lambda_m0];
        for m in m0 + 1..=last + STORED_TAIL {
            let branch = if plus.contains(&m) { Branch::Plus } else { Branch::Minus };
            let prev = *values.last().unwrap();
            let next = lambda_next(prev, branch).map_err(|_| SgError::Singular {
                level: m - 1,
                value: prev,
                reason: "λ_m above 25/4 has no successor",
            })?;
            values.push(next);
        }
        let seq = EigenvalueSequence {
            m0,
            plus,
            values,
            limit: OnceLock::new(),
        };
        seq.check_excluded()?;
        Ok(seq)
    }

    /// The all-zero sequence of a harmonic function.
    pub fn harmonic(m0: usize) -> Self {
        Self::new(m0, 0.0, []).expect("zero sequence is admissible")
    }

    /// The sequence `λ_m = Ψ(5^{-m} λ)` for `m >= m0`, which is the unique
    /// decimation tail with limit `λ`. Branches are read off the values.
    pub fn from_limit(lambda: f64, m0: usize) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(SgError::Invalid(format!("λ = {lambda} is not finite")));
        }
        let cfg = ConvergenceConfig::default();
        // Ψ directly wherever the argument is in range; above that, climb
        // with ψ, which is exactly the recursion λ_{m−1} = ψ(λ_m)
        let arg = |m: usize| lambda * 5f64.powi(-(m as i32));
        let mut deep = m0;
        while arg(deep).abs() > 1e-2 {
            deep += 1;
        }
        let mut head = vec![big_psi(arg(deep), &cfg)?.value];
        for m in (m0..deep).rev() {
            let v = if arg(m).abs() <= cfg.max_argument {
                big_psi(arg(m), &cfg)?.value
            } else {
                psi(*head.last().unwrap())
            };
            if !v.is_finite() {
                return Err(SgError::Domain(format!("Ψ(5^-{m0} · {lambda}) overflowed")));
            }
            head.push(v);
        }
        head.reverse();
        let plus: BTreeSet<usize> = (m0 + 1..=deep)
            .filter(|&m| head[m - m0] > 2.5)
            .collect();
        let mut values = head;
        for _ in 0..STORED_TAIL {
            let prev = *values.last().unwrap();
            values.push(lambda_next(prev, Branch::Minus)?);
        }
        let seq = EigenvalueSequence {
            m0,
            plus,
            values,
            limit: OnceLock::new(),
        };
        seq.check_excluded()?;
        let _ = seq.limit.set(lambda);
        Ok(seq)
    }

    fn check_excluded(&self) -> Result<()> {
        for (offset, &v) in self.values.iter().enumerate().skip(1) {
            if EXCLUDED.iter().any(|e| (v - e).abs() < EXCLUSION_TOL) {
                return Err(SgError::Singular {
                    level: self.m0 + offset,
                    value: v,
                    reason: "λ_m ∈ {2, 5, 6} is not allowed above m0",
                });
            }
        }
        Ok(())
    }

    pub fn m0(&self) -> usize {
        self.m0
    }

    pub fn plus_indices(&self) -> &BTreeSet<usize> {
        &self.plus
    }

    pub fn branch(&self, m: usize) -> Branch {
        if self.plus.contains(&m) {
            Branch::Plus
        } else {
            Branch::Minus
        }
    }

    /// `λ_m` for `m >= m0`.
    ///
    /// # Panics
    /// If `m < m0`.
    pub fn lambda(&self, m: usize) -> f64 {
        assert!(m >= self.m0, "λ_{m} requested below m0 = {}", self.m0);
        let offset = m - self.m0;
        if let Some(&v) = self.values.get(offset) {
            return v;
        }
        let mut v = *self.values.last().unwrap();
        for _ in self.values.len()..=offset {
            v = lambda_next(v, Branch::Minus).expect("tail values are small");
        }
        v
    }

    /// `λ = (3/2) lim 5^m λ_m`, cached.
    pub fn limit(&self) -> f64 {
        *self
            .limit
            .get_or_init(|| lambda_limit(self, 1e-15).expect("stored tail is long enough to converge"))
    }

    /// The sequence of `u ∘ F_v` for a word `v` of length `by <= m0`:
    /// `λ'_j = λ_{j+by}`, so `m0' = m0 − by` and `λ' = λ / 5^by`.
    pub fn shifted(&self, by: usize) -> Result<Self> {
        if by > self.m0 {
            return Err(SgError::Domain(format!(
                "cannot shift by {by} past m0 = {}",
                self.m0
            )));
        }
        let seq = EigenvalueSequence {
            m0: self.m0 - by,
            plus: self.plus.iter().map(|p| p - by).collect(),
            values: self.values.clone(),
            limit: OnceLock::new(),
        };
        let _ = seq.limit.set(self.limit() * 5f64.powi(-(by as i32)));
        Ok(seq)
    }
}

/// Iterates `(3/2) 5^m λ_m` past the last plus branch until successive
/// estimates agree to `tol` (relative to `max(1, |λ|)`).
pub fn lambda_limit(seq: &EigenvalueSequence, tol: f64) -> Result<f64> {
    let start = seq.plus.iter().next_back().copied().unwrap_or(seq.m0).max(seq.m0);
    let estimate = |m: usize| 1.5 * 5f64.powi(m as i32) * seq.lambda(m);
    let mut prev = estimate(start);
    const CAP: usize = 400;
    for m in start + 1..start + CAP {
        let cur = estimate(m);
        if (cur - prev).abs() <= tol * cur.abs().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(SgError::NonConvergence {
        iterations: CAP,
        what: "λ limit",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn successor_examples() {
        assert_eq!(lambda_next(6.0, Branch::Minus).unwrap(), 2.0);
        assert_eq!(lambda_next(6.0, Branch::Plus).unwrap(), 3.0);
        assert_eq!(lambda_next(0.0, Branch::Minus).unwrap(), 0.0);
        let expected = (5.0 - 17f64.sqrt()) / 2.0;
        assert!((lambda_next(2.0, Branch::Minus).unwrap() - expected).abs() < 1e-15);
        assert!((lambda_next(2.0, Branch::Plus).unwrap() - (5.0 + 17f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!(matches!(lambda_next(6.3, Branch::Minus), Err(SgError::Domain(_))));
        assert_eq!(lambda_next(6.25, Branch::Plus).unwrap(), 2.5);
    }

    #[test]
    fn recursion_residual() {
        let seq = EigenvalueSequence::new(1, 2.0, [3, 4]).unwrap();
        for m in 2..40 {
            let l = seq.lambda(m);
            assert!((l * (5.0 - l) - seq.lambda(m - 1)).abs() < 1e-12);
        }
        assert_eq!(seq.branch(3), Branch::Plus);
        assert_eq!(seq.branch(5), Branch::Minus);
    }

    #[test]
    fn excluded_values_are_rejected() {
        // 6 followed by the minus root lands on 2
        let err = EigenvalueSequence::new(1, 6.0, []).unwrap_err();
        assert!(matches!(err, SgError::Singular { level: 2, .. }), "{err:?}");
        assert!(EigenvalueSequence::new(1, 6.0, [2]).is_ok());
        // 0 followed by the plus root lands on 5
        assert!(matches!(
            EigenvalueSequence::new(0, 0.0, [1]),
            Err(SgError::Singular { level: 1, .. })
        ));
        assert!(EigenvalueSequence::new(0, 7.0, []).is_err());
        assert!(EigenvalueSequence::new(2, 1.0, [2]).is_err());
    }

    #[test]
    fn harmonic_limit_is_zero() {
        let seq = EigenvalueSequence::harmonic(0);
        assert_eq!(seq.limit(), 0.0);
        assert_eq!(seq.lambda(30), 0.0);
    }

    #[test]
    fn telescoping_identity() {
        let seq = EigenvalueSequence::new(1, 5.0, [2, 4]).unwrap();
        let m0 = seq.m0();
        for k in 1..=20 {
            let prod: f64 = (1..=k).map(|j| 5.0 - seq.lambda(m0 + j)).product();
            let lhs = seq.lambda(m0 + k) * prod;
            assert!((lhs - seq.lambda(m0)).abs() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn from_limit_reproduces_forward_sequence() {
        let fwd = EigenvalueSequence::new(1, 2.0, [2]).unwrap();
        let lambda = fwd.limit();
        let back = EigenvalueSequence::from_limit(lambda, 1).unwrap();
        assert_eq!(back.plus_indices(), fwd.plus_indices());
        for m in 1..30 {
            assert!((back.lambda(m) - fwd.lambda(m)).abs() < 1e-9, "m={m}");
        }
        assert!((lambda_limit(&back, 1e-15).unwrap() - lambda).abs() < 1e-9 * lambda);
    }

    #[test]
    fn shifted_sequence() {
        let seq = EigenvalueSequence::new(2, 5.0, [3]).unwrap();
        let s = seq.shifted(2).unwrap();
        assert_eq!(s.m0(), 0);
        assert_eq!(s.lambda(1), seq.lambda(3));
        assert!(s.plus_indices().contains(&1));
        assert!((s.limit() - seq.limit() / 25.0).abs() < 1e-12 * seq.limit());
        assert!(seq.shifted(3).is_err());
    }
}
