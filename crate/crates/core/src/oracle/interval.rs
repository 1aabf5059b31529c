//! Harmonic tangents on the unit interval, where `-u'' = λu` is solvable by
//! hand. The tangent at `x0` is the line through `(x0, u(x0))` with slope
//! `u'(x0)`; it is returned by its values at 0 and 1.

use std::f64::consts::PI;

use crate::error::{Result, SgError};

fn check(lambda: f64, x0: f64) -> Result<()> {
    if !lambda.is_finite() || !(0.0..=1.0).contains(&x0) {
        return Err(SgError::Domain(format!("need finite λ and x0 in [0, 1], got λ = {lambda}, x0 = {x0}")));
    }
    if lambda > 0.0 {
        let k = (lambda.sqrt() / PI).round();
        let resonance = PI * PI * k * k;
        if k >= 1.0 && (lambda - resonance).abs() <= 1e-9 * resonance {
            return Err(SgError::Domain(format!("λ = {lambda} is the Dirichlet eigenvalue (πk)² with k = {k}")));
        }
    }
    Ok(())
}

/// The tangent in closed form:
///
/// ```text
/// 1/sin s · [ sin(s(1−x0)) + s x0 cos(s(1−x0))    sin(s x0) − s x0 cos(s x0)     ] (f0)
///           [ sin(s(1−x0)) − s(1−x0) cos(s(1−x0))  sin(s x0) + s(1−x0) cos(s x0) ] (f1)
/// ```
///
/// with `s = √λ`, and `sinh`/`cosh` for `λ < 0`.
pub fn interval_tangent(lambda: f64, x0: f64, f0: f64, f1: f64) -> Result<[f64; 2]> {
    check(lambda, x0)?;
    if lambda == 0.0 {
        return Ok([f0, f1]);
    }
    let (s, sn, cs): (f64, fn(f64) -> f64, fn(f64) -> f64) = if lambda > 0.0 {
        (lambda.sqrt(), f64::sin, f64::cos)
    } else {
        ((-lambda).sqrt(), f64::sinh, f64::cosh)
    };
    let (y, x) = (1.0 - x0, x0);
    let denom = sn(s);
    let m = [
        [sn(s * y) + s * x * cs(s * y), sn(s * x) - s * x * cs(s * x)],
        [sn(s * y) - s * y * cs(s * y), sn(s * x) + s * y * cs(s * x)],
    ];
    Ok([
        (m[0][0] * f0 + m[0][1] * f1) / denom,
        (m[1][0] * f0 + m[1][1] * f1) / denom,
    ])
}

/// The same tangent by fitting `u = c1 sin(sx) + c2 cos(sx)` (or the
/// hyperbolic pair) to the end values and differentiating.
pub fn sine_fit_tangent(lambda: f64, x0: f64, f0: f64, f1: f64) -> Result<[f64; 2]> {
    check(lambda, x0)?;
    if lambda == 0.0 {
        return Ok([f0, f1]);
    }
    let (u, du) = if lambda > 0.0 {
        let s = lambda.sqrt();
        let c2 = f0;
        let c1 = (f1 - c2 * s.cos()) / s.sin();
        (
            c1 * (s * x0).sin() + c2 * (s * x0).cos(),
            s * (c1 * (s * x0).cos() - c2 * (s * x0).sin()),
        )
    } else {
        let s = (-lambda).sqrt();
        let c2 = f0;
        let c1 = (f1 - c2 * s.cosh()) / s.sinh();
        (
            c1 * (s * x0).sinh() + c2 * (s * x0).cosh(),
            s * (c1 * (s * x0).cosh() + c2 * (s * x0).sinh()),
        )
    };
    Ok([u - x0 * du, u + (1.0 - x0) * du])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_example() {
        let a = interval_tangent(1.0, 0.5, 1.0, 1.0).unwrap();
        let b = sine_fit_tangent(1.0, 0.5, 1.0, 1.0).unwrap();
        assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
        // symmetric data, so the tangent at the midpoint is flat
        assert!((a[0] - a[1]).abs() < 1e-15);
    }

    #[test]
    fn endpoint_passes_through_f0() {
        let t = interval_tangent(3.0, 0.0, 0.7, -0.2).unwrap();
        assert!((t[0] - 0.7).abs() < 1e-14);
        let t = interval_tangent(3.0, 1.0, 0.7, -0.2).unwrap();
        assert!((t[1] + 0.2).abs() < 1e-14);
    }

    #[test]
    fn small_lambda_is_linear() {
        for lambda in [1e-8, -1e-8] {
            let t = interval_tangent(lambda, 0.3, 2.0, 5.0).unwrap();
            assert!((t[0] - 2.0).abs() < 1e-6 && (t[1] - 5.0).abs() < 1e-6);
        }
    }

    #[test]
    fn resonance_is_rejected() {
        assert!(interval_tangent(PI * PI, 0.3, 1.0, 0.0).is_err());
        assert!(interval_tangent(4.0 * PI * PI, 0.3, 1.0, 0.0).is_err());
        assert!(interval_tangent(2.0, 1.5, 1.0, 0.0).is_err());
    }
}
