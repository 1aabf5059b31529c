use sg_core::decimation::EigenvalueSequence;
use sg_core::oracle::{interval_tangent, sine_fit_tangent};
use sg_core::special::{big_psi, tau, upsilon, ConvergenceConfig};

fn cfg() -> ConvergenceConfig {
    ConvergenceConfig::default()
}

#[test]
fn psi_at_zero_and_slope() {
    assert_eq!(big_psi(0.0, &cfg()).unwrap().value, 0.0);
    let h = 1e-5;
    let slope = (big_psi(h, &cfg()).unwrap().value - big_psi(-h, &cfg()).unwrap().value) / (2.0 * h);
    assert!((slope - 2.0 / 3.0).abs() < 1e-6, "{slope}");
}

#[test]
fn functional_equation_on_grid() {
    let mut worst = 0.0f64;
    for k in 0..=200 {
        let z = -10.0 + 0.1 * k as f64;
        let p = big_psi(z, &cfg()).unwrap().value;
        let p5 = big_psi(5.0 * z, &cfg()).unwrap().value;
        worst = worst.max((p * (5.0 - p) - p5).abs());
    }
    assert!(worst < 1e-10, "worst residual {worst:e}");
}

#[test]
fn tau_is_upsilon_of_rescaled_lambda() {
    for lambda in [3.0, 17.5, 60.0, 210.0] {
        let seq = EigenvalueSequence::from_limit(lambda, 0).unwrap();
        for k in 1..=6 {
            let t = tau(k, &seq, &cfg()).unwrap().value;
            let u = upsilon(lambda * 5f64.powi(-(k as i32)), &cfg()).unwrap().value;
            assert!((t - u).abs() < 1e-12 * u.abs().max(1.0), "λ={lambda} k={k}: {t} vs {u}");
        }
    }
}

#[test]
fn tighter_tolerance_stays_within_reported_error() {
    let loose = ConvergenceConfig::with_tol(1e-10);
    let tight = ConvergenceConfig::with_tol(5e-11);
    for z in [-7.0, 0.3, 4.0, 19.0, 80.0] {
        let a = big_psi(z, &loose).unwrap();
        let b = big_psi(z, &tight).unwrap();
        assert!((a.value - b.value).abs() <= a.error + b.error + 1e-15, "Ψ({z})");
        let a = upsilon(z, &loose).unwrap();
        let b = upsilon(z, &tight).unwrap();
        assert!((a.value - b.value).abs() <= a.error + b.error + 1e-15, "Υ({z})");
    }
}

#[test]
fn interval_closed_form_matches_sine_fit() {
    let mut checked = 0;
    for lambda in [-30.0, -2.0, 0.5, 1.0, 5.0, 12.0, 25.0, 50.0, 90.0] {
        for k in 0..=10 {
            let x0 = k as f64 / 10.0;
            for (f0, f1) in [(1.0, 1.0), (1.0, 0.0), (-0.3, 2.0)] {
                let a = interval_tangent(lambda, x0, f0, f1).unwrap();
                let b = sine_fit_tangent(lambda, x0, f0, f1).unwrap();
                let scale = a[0].abs().max(a[1].abs()).max(1.0);
                assert!(
                    (a[0] - b[0]).abs() < 1e-10 * scale && (a[1] - b[1]).abs() < 1e-10 * scale,
                    "λ={lambda} x0={x0}: {a:?} vs {b:?}"
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 200);
}
