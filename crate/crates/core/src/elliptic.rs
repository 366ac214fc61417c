//! Jacobi elliptic functions and the complete elliptic integral of the first
//! kind, for real argument and parameter `m <= 1`.
//!
//! Everything is evaluated in real arithmetic. Negative parameters (imaginary
//! modulus, `m = k^2 < 0`) are mapped onto an equivalent positive parameter
//! with the imaginary-modulus transformation
//!
//! ```text
//! sn(u | m) = sd(u s | m1) / s,   cn(u | m) = cd(u s | m1),   dn(u | m) = nd(u s | m1)
//! s = sqrt(1 - m),  m1 = -m / (1 - m)
//! ```
//!
//! after which the descending Landen (AGM) scheme does the work.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// AGM iterations stop once `|c_n| <= AGM_TOL * a_n`.
const AGM_TOL: f64 = 1e-15;
const AGM_MAX_ITER: usize = 40;

/// Elliptic parameter `m = k^2`. `m = -1` is the modulus `k = i`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    /// The imaginary unit modulus `k = i`.
    pub const IMAGINARY_UNIT: EllipticModulus = EllipticModulus(-1.0);

    pub fn new(m: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::domain(format!("elliptic parameter must be finite, got {m}")));
        }
        if m > 1.0 {
            return Err(Error::domain(format!("elliptic parameter must satisfy m <= 1, got {m}")));
        }
        Ok(EllipticModulus(m))
    }

    #[inline]
    pub fn parameter(self) -> f64 {
        self.0
    }

    /// Parameter actually used by the real-modulus evaluation, together with
    /// the argument scale `s` of the imaginary-modulus transformation (`s = 1`
    /// when no transformation is needed).
    pub fn real_equivalent(self) -> (f64, f64) {
        if self.0 < 0.0 {
            let one_minus = 1.0 - self.0;
            (-self.0 / one_minus, one_minus.sqrt())
        } else {
            (self.0, 1.0)
        }
    }
}

/// The three Jacobi functions at one point.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Arithmetic-geometric mean of two non-negative numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..AGM_MAX_ITER {
        let next_a = 0.5 * (a + b);
        let next_b = (a * b).sqrt();
        let converged = (next_a - a).abs() <= AGM_TOL * next_a;
        a = next_a;
        b = next_b;
        if converged {
            break;
        }
    }
    0.5 * (a + b)
}

/// Complete elliptic integral of the first kind,
/// `K(m) = \int_0^{pi/2} d theta / sqrt(1 - m sin^2 theta)`, via the AGM.
///
/// The AGM formula `K = pi / (2 AGM(1, sqrt(1 - m)))` holds for every `m < 1`,
/// negative parameters included. `K(1)` is infinite.
pub fn complete_elliptic_k(m: EllipticModulus) -> f64 {
    let m = m.parameter();
    if m == 1.0 {
        return f64::INFINITY;
    }
    FRAC_PI_2 / agm(1.0, (1.0 - m).sqrt())
}

/// Quarter period `K(i)` of `sn(., i)`.
pub fn quarter_period_imaginary_unit() -> f64 {
    complete_elliptic_k(EllipticModulus::IMAGINARY_UNIT)
}

/// `sn`, `cn` and `dn` at `(u, m)`.
pub fn jacobi_sn_cn_dn(u: f64, m: EllipticModulus) -> Result<JacobiTriple> {
    if !u.is_finite() {
        return Err(Error::domain(format!("argument must be finite, got {u}")));
    }
    let (m_real, scale) = m.real_equivalent();
    if m.parameter() < 0.0 {
        let t = real_parameter_sncndn(u * scale, m_real);
        Ok(JacobiTriple {
            sn: t.sn / (scale * t.dn),
            cn: t.cn / t.dn,
            dn: 1.0 / t.dn,
        })
    } else {
        Ok(real_parameter_sncndn(u, m_real))
    }
}

/// `sn(u, i)`, the snoidal function with imaginary unit modulus.
pub fn sn_imaginary_unit(u: f64) -> f64 {
    jacobi_sn_cn_dn(u, EllipticModulus::IMAGINARY_UNIT)
        .map(|t| t.sn)
        .unwrap_or(f64::NAN)
}

/// Descending Landen / AGM evaluation for `0 <= m <= 1`.
fn real_parameter_sncndn(u: f64, m: f64) -> JacobiTriple {
    debug_assert!((0.0..=1.0).contains(&m));
    if m == 0.0 {
        let (s, c) = u.sin_cos();
        return JacobiTriple { sn: s, cn: c, dn: 1.0 };
    }
    if m == 1.0 {
        let sech = 1.0 / u.cosh();
        return JacobiTriple {
            sn: u.tanh(),
            cn: sech,
            dn: sech,
        };
    }

    let mut a = [0.0; AGM_MAX_ITER + 1];
    let mut c = [0.0; AGM_MAX_ITER + 1];
    a[0] = 1.0;
    c[0] = m.sqrt();
    let mut b = (1.0 - m).sqrt();
    let mut n = 0;
    while n < AGM_MAX_ITER && c[n].abs() > AGM_TOL * a[n] {
        let an = a[n];
        a[n + 1] = 0.5 * (an + b);
        c[n + 1] = 0.5 * (an - b);
        b = (an * b).sqrt();
        n += 1;
    }

    // Back-substitution of the amplitude.
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for k in (1..=n).rev() {
        phi = 0.5 * (phi + (c[k] * phi.sin() / a[k]).asin());
    }
    let (sn, cn) = phi.sin_cos();
    // cos(phi_0) / cos(phi_1 - phi_0) is 0/0 near the quarter period.
    let dn = (1.0 - m * sn * sn).sqrt();
    JacobiTriple { sn, cn, dn }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn k_at_zero_is_half_pi() {
        let k = complete_elliptic_k(EllipticModulus::new(0.0).unwrap());
        assert_abs_diff_eq!(k, FRAC_PI_2, epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(EllipticModulus::new(1.5).is_err());
        assert!(EllipticModulus::new(f64::NAN).is_err());
        assert!(jacobi_sn_cn_dn(f64::INFINITY, EllipticModulus::IMAGINARY_UNIT).is_err());
    }

    #[test]
    fn values_at_origin_and_quarter_period() {
        let m = EllipticModulus::IMAGINARY_UNIT;
        let t = jacobi_sn_cn_dn(0.0, m).unwrap();
        assert_eq!((t.sn, t.cn, t.dn), (0.0, 1.0, 1.0));
        let k = complete_elliptic_k(m);
        let t = jacobi_sn_cn_dn(k, m).unwrap();
        assert_abs_diff_eq!(t.sn, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t.cn, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn limiting_parameters() {
        let t = jacobi_sn_cn_dn(0.3, EllipticModulus::new(0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(t.sn, 0.3f64.sin(), epsilon = 1e-16);
        let t = jacobi_sn_cn_dn(0.3, EllipticModulus::new(1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(t.sn, 0.3f64.tanh(), epsilon = 1e-16);
    }

    #[test]
    fn imaginary_modulus_transformation_is_consistent() {
        // dn^2 - sn^2 = 1 directly at m = -1.
        for &u in &[0.1, 0.7, 2.3, -5.0] {
            let t = jacobi_sn_cn_dn(u, EllipticModulus::IMAGINARY_UNIT).unwrap();
            assert_abs_diff_eq!(t.dn * t.dn - t.sn * t.sn, 1.0, epsilon = 1e-13);
            assert_abs_diff_eq!(t.sn * t.sn + t.cn * t.cn, 1.0, epsilon = 1e-13);
        }
    }
}
