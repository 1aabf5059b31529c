//! Brute-force matrix-product limits, carried out in double-double
//! arithmetic. Pulling back through `m` inverse harmonic matrices amplifies
//! rounding by up to `5^m`, which leaves nothing of an `f64` computation at
//! `m = 25`; with about 32 significant digits the loss is harmless.

use twofloat::TwoFloat;

use crate::address::{EventuallyConstantWord, Letter};
use crate::decimation::{Branch, EigenvalueSequence, SpectralEigenfunction};
use crate::error::{Result, SgError};
use crate::harmonic::harmonic_inverse_exact;
use crate::linalg::{Mat3, Vec3};
use crate::tangent::{BasisVector, TangentTriple};

type Dd = TwoFloat;
type DVec = [Dd; 3];
type DMat = [[Dd; 3]; 3];

fn dd(x: f64) -> Dd {
    Dd::from(x)
}

/// Long division to double-double accuracy. `Div` for two `TwoFloat`s in
/// twofloat 0.8 drops the correction term and is only `f64`-accurate.
fn div(a: Dd, b: Dd) -> Dd {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    dd(q1) + dd(q2) + dd(q3)
}

fn apply(m: &DMat, v: &DVec) -> DVec {
    [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
}

fn to_f64(v: &DVec) -> Vec3 {
    v.map(|x| x.hi() + x.lo())
}

fn diff(a: &DVec, b: &DVec) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).abs().hi()).fold(0.0, f64::max)
}

fn harmonic_inverse_dd(l: Letter) -> DMat {
    harmonic_inverse_exact(l).map(|row| row.map(|r| div(dd(*r.numer() as f64), dd(*r.denom() as f64))))
}

/// `A_i(λ)` in double-double.
fn eigen_matrix_dd(l: Letter, lambda: Dd) -> Option<DMat> {
    let d = (dd(5.0) - lambda) * (dd(2.0) - lambda);
    if d.hi() == 0.0 {
        return None;
    }
    let f = dd(4.0) - lambda;
    let two = dd(2.0);
    let a0 = [[d, dd(0.0), dd(0.0)], [f, f, two], [f, two, f]].map(|row| row.map(|x| div(x, d)));
    let i = l.index();
    let swap = |k: usize| match k {
        0 => i,
        k if k == i => 0,
        k => k,
    };
    Some([0, 1, 2].map(|r| [0, 1, 2].map(|c| a0[swap(r)][swap(c)])))
}

/// `λ_{start} … λ_{end}` of `seq` recomputed in double-double from the stored
/// `λ_{m0}`, using the stable form of the minus root.
fn sequence_dd(seq: &EigenvalueSequence, end: usize) -> Result<Vec<Dd>> {
    let m0 = seq.m0();
    let mut out = vec![dd(seq.lambda(m0))];
    for j in m0 + 1..=end {
        let prev = *out.last().unwrap();
        let disc = dd(25.0) - dd(4.0) * prev;
        if disc.hi() < 0.0 {
            return Err(SgError::Domain(format!("λ_{} = {} has no real successor", j - 1, prev.hi())));
        }
        let root = disc.sqrt();
        out.push(match seq.branch(j) {
            Branch::Minus => div(dd(2.0) * prev, dd(5.0) + root),
            Branch::Plus => div(dd(5.0) + root, dd(2.0)),
        });
    }
    Ok(out)
}

/// A limit estimated from the last two iterates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectTangentLimit {
    pub triple: TangentTriple,
    /// Max-norm distance to the level `m − 1` iterate.
    pub error: f64,
    pub level: usize,
}

/// `A_{w_1}^{-1} ⋯ A_{w_m}^{-1} u|F_{[w]_m}(V_0)`, the harmonic approximation
/// of `u` on the cell `[w]_m` pulled back to `V_0`.
pub fn direct_tangent_limit(
    u: &SpectralEigenfunction,
    w: &EventuallyConstantWord,
    m: usize,
) -> Result<DirectTangentLimit> {
    let m0 = u.m0();
    if m < m0 {
        return Err(SgError::Domain(format!("direct limit at level {m} below m0 = {m0}")));
    }
    let head = w.truncate(m);
    let letters = head.letters();
    let lambdas = sequence_dd(u.seq(), m)?;
    let cell = |len: usize| -> Result<DVec> { Ok(u.cell_triple(&head.prefix(len))?.0.map(dd)) };

    let mut v = cell(m0)?;
    let mut previous = if m > 0 && m - 1 < m0 { Some(cell(m - 1)?) } else { None };
    for j in m0 + 1..=m {
        if j == m {
            previous = Some(v);
        }
        let a = eigen_matrix_dd(letters[j - 1], lambdas[j - m0]).ok_or(SgError::Singular {
            level: j,
            value: lambdas[j - m0].hi(),
            reason: "extension matrix is singular",
        })?;
        v = apply(&a, &v);
    }
    let pull = |v: DVec, len: usize| {
        letters[..len]
            .iter()
            .rev()
            .fold(v, |acc, &l| apply(&harmonic_inverse_dd(l), &acc))
    };
    let value = pull(v, m);
    let error = match previous {
        Some(p) => diff(&value, &pull(p, m - 1)),
        None => f64::INFINITY,
    };
    Ok(DirectTangentLimit {
        triple: TangentTriple(to_f64(&value)),
        error,
        level: m,
    })
}

/// `A_0^{-n} A_0(λ_{k+n}) ⋯ A_0(λ_{k+1}) v` and its distance to the `n − 1`
/// truncation.
pub fn truncated_product_action(seq: &EigenvalueSequence, k: usize, v: Vec3, n: usize) -> Result<(Vec3, f64)> {
    if k < seq.m0() {
        return Err(SgError::Domain(format!("product starts at {k}, below m0 = {}", seq.m0())));
    }
    if n == 0 {
        return Ok((v, f64::INFINITY));
    }
    let lambdas = sequence_dd(seq, k + n)?;
    let zero = Letter::ALL[0];
    let inverse = harmonic_inverse_dd(zero);
    let pull = |x: DVec, times: usize| (0..times).fold(x, |acc, _| apply(&inverse, &acc));
    let mut x = v.map(dd);
    let mut previous = x;
    for j in 1..=n {
        if j == n {
            previous = x;
        }
        let lambda = lambdas[k + j - seq.m0()];
        let a = eigen_matrix_dd(zero, lambda).ok_or(SgError::Singular {
            level: k + j,
            value: lambda.hi(),
            reason: "extension matrix is singular",
        })?;
        x = apply(&a, &x);
    }
    let value = pull(x, n);
    let error = diff(&value, &pull(previous, n - 1));
    Ok((to_f64(&value), error))
}

/// The truncated product applied to α, β or `γ_{m0}`.
pub fn truncated_limit_action(
    seq: &EigenvalueSequence,
    m0: usize,
    v: BasisVector,
    n: usize,
) -> Result<(Vec3, f64)> {
    truncated_product_action(seq, m0, v.at(seq, m0), n)
}

/// `M_0(λ, k)` as the truncated product with `n` factors, column by column,
/// with the largest column error.
pub fn direct_m0_limit(seq: &EigenvalueSequence, k: usize, n: usize) -> Result<(Mat3, f64)> {
    let mut m = Mat3([[0.0; 3]; 3]);
    let mut error = 0.0f64;
    for c in 0..3 {
        let mut e = [0.0; 3];
        e[c] = 1.0;
        let (col, err) = truncated_product_action(seq, k, e, n)?;
        for r in 0..3 {
            m.0[r][c] = col[r];
        }
        error = error.max(err);
    }
    Ok((m, error))
}
