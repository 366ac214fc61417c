//! Elliptic functions against oracles that share no code with the library:
//! adaptive Simpson quadrature for `K`, and direct integration of the
//! defining ODE for `sn`.

use approx::assert_abs_diff_eq;
use ymscalar::elliptic::{complete_elliptic_k, jacobi_sn_cn_dn, sn_imaginary_unit, EllipticModulus};

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 50)
}

fn k_oracle(m: f64) -> f64 {
    adaptive_simpson(
        &|t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(),
        0.0,
        std::f64::consts::FRAC_PI_2,
        1e-15,
    )
}

/// `sn'' = -(1 + m) sn + 2 m sn^3`, `sn(0) = 0`, `sn'(0) = 1`, integrated
/// with classical RK4 at a fixed tiny step (follows from `sn' = cn dn` and the
/// two quadratic identities).
fn sn_oracle(u: f64, m: f64) -> f64 {
    let n = 20_000;
    let h = u / n as f64;
    let f = |y: [f64; 2]| [y[1], -(1.0 + m) * y[0] + 2.0 * m * y[0].powi(3)];
    let mut y = [0.0, 1.0];
    for _ in 0..n {
        let k1 = f(y);
        let k2 = f([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = f([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y[0]
}

#[test]
fn quadrature_oracle_agrees_with_k() {
    for (m, frozen) in [(-1.0, 1.311_028_777_146_06), (0.5, 1.854_074_677_301_372), (0.0, std::f64::consts::FRAC_PI_2)] {
        let oracle = k_oracle(m);
        let k = complete_elliptic_k(EllipticModulus::new(m).unwrap());
        assert_abs_diff_eq!(oracle, frozen, epsilon = 1e-12);
        assert_abs_diff_eq!(k, oracle, epsilon = 1e-12);
    }
}

#[test]
fn ode_oracle_reaches_one_at_the_quarter_period() {
    // trust check of the oracle itself before using it
    let k = k_oracle(-1.0);
    assert_abs_diff_eq!(sn_oracle(k, -1.0), 1.0, epsilon = 1e-10);
}

#[test]
fn sn_at_imaginary_modulus_matches_the_ode_oracle() {
    let oracle = sn_oracle(0.7, -1.0);
    assert_abs_diff_eq!(oracle, 0.683_522_584_191_792, epsilon = 1e-12);
    let t = jacobi_sn_cn_dn(0.7, EllipticModulus::IMAGINARY_UNIT).unwrap();
    assert_abs_diff_eq!(t.sn, oracle, epsilon = 1e-9);
    assert_abs_diff_eq!(t.cn, 0.729_929_364_322_175, epsilon = 1e-12);
    assert_abs_diff_eq!(t.dn, 1.211_281_603_550_646, epsilon = 1e-12);
    for u in [0.1, 1.0, 2.2, 3.9, 5.5] {
        assert_abs_diff_eq!(sn_imaginary_unit(u), sn_oracle(u, -1.0), epsilon = 1e-9);
    }
}

#[test]
fn sn_at_real_parameter_matches_the_ode_oracle() {
    let m = EllipticModulus::new(0.5).unwrap();
    for u in [0.3, 1.1, 2.7] {
        assert_abs_diff_eq!(jacobi_sn_cn_dn(u, m).unwrap().sn, sn_oracle(u, 0.5), epsilon = 1e-9);
    }
}

#[test]
fn special_values() {
    let i = EllipticModulus::IMAGINARY_UNIT;
    let t = jacobi_sn_cn_dn(0.0, i).unwrap();
    assert_eq!((t.sn, t.cn, t.dn), (0.0, 1.0, 1.0));
    let k = complete_elliptic_k(i);
    let t = jacobi_sn_cn_dn(k, i).unwrap();
    assert_abs_diff_eq!(t.sn, 1.0, epsilon = 1e-14);
    assert_abs_diff_eq!(t.cn, 0.0, epsilon = 1e-14);
    // dn(K | -1) = sqrt(1 - m) = sqrt 2
    assert_abs_diff_eq!(t.dn, std::f64::consts::SQRT_2, epsilon = 1e-14);
}

#[test]
fn domain_errors() {
    assert!(EllipticModulus::new(1.5).is_err());
    assert!(EllipticModulus::new(f64::NAN).is_err());
    assert!(jacobi_sn_cn_dn(f64::INFINITY, EllipticModulus::IMAGINARY_UNIT).is_err());
}
