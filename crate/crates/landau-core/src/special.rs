//! Orthogonal polynomials and normalization constants.
//!
//! Everything here is evaluated by upward recurrence (numerically stable for
//! these families) and, for the normalization constants, through log-gamma so
//! that large indices stay finite long after the raw factorials overflow.

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{LandauError, Result};
use crate::setup::MagneticSetup;

/// Physicists' Hermite polynomial `H_n(x)`.
///
/// Upward recurrence `H_{k+1} = 2 x H_k - 2 k H_{k-1}`.
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        (prev, cur) = (cur, 2.0 * x * cur - 2.0 * k as f64 * prev);
    }
    cur
}

/// Scaled Hermite polynomial `G_n(s, w) = s^{n/2} H_n(w / sqrt(s))` for
/// complex argument `w` and real scale `s`, without ever taking the square
/// root: `G_{k+1} = 2 w G_k - 2 k s G_{k-1}`.
///
/// This form stays finite and smooth through `s <= 0`, where the naive
/// `s^{n/2} H_n(w / sqrt(s))` expression has a spurious branch point. It is
/// what analytic Gaussian integrals over a Hermite factor produce naturally.
pub fn hermite_scaled(n: usize, s: f64, w: Complex64) -> Complex64 {
    let (mut prev, mut cur) = (Complex64::new(1.0, 0.0), 2.0 * w);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        (prev, cur) = (cur, 2.0 * w * cur - 2.0 * k as f64 * s * prev);
    }
    cur
}

/// Generalized Laguerre polynomial `L_n^{(alpha)}(x)` for integer `alpha >= 0`.
///
/// Upward recurrence
/// `(k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}`.
pub fn assoc_laguerre(n: usize, alpha: usize, x: f64) -> f64 {
    let a = alpha as f64;
    let (mut prev, mut cur) = (1.0, 1.0 + a - x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let kf = k as f64;
        (prev, cur) = (
            cur,
            ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0),
        );
    }
    cur
}

/// Normalization constants for the eigenstate families at fixed `(n, m)`.
///
/// All three are computed through log-gamma, so they remain finite for
/// `n - m` up to at least 170 even though the underlying factorials overflow
/// `f64` long before that.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormConstants {
    /// `N_n = (sqrt(pi) 2^n n! l_B)^{-1/2}` — normalizes the transverse
    /// oscillator factor of the stripe (plane-wave-labelled) states.
    pub n_n: f64,
    /// `N_nm = (1/l_B) sqrt(n_r! / (n_r + |m|)!)` with `n_r = n - (|m|+m)/2` —
    /// normalizes the radial factor of the circular (angular-momentum-labelled)
    /// states.
    pub n_nm: f64,
    /// `C_nm = sqrt(l_B) (sqrt(pi) 2^{n-m} (n-m)!)^{-1/2}` — the prefactor of
    /// the closed-form overlap kernel between the two families.
    pub c_nm: f64,
}

/// Computes [`NormConstants`] for level `n` and angular momentum `m <= n`.
pub fn norm_constants(setup: &MagneticSetup, n: usize, m: i64) -> Result<NormConstants> {
    if m > n as i64 {
        return Err(LandauError::InvalidQuantumNumbers(format!(
            "m = {m} exceeds n = {n}; the circular family requires m <= n"
        )));
    }
    let lb = setup.magnetic_length;
    let half_ln_pi = 0.25 * std::f64::consts::PI.ln();

    let nf = n as f64;
    let n_n = (-half_ln_pi - 0.5 * (nf * std::f64::consts::LN_2 + ln_gamma(nf + 1.0))
        - 0.5 * lb.ln())
    .exp();

    let n_r = (n as i64 - (m.abs() + m) / 2) as f64;
    let m_abs = m.abs() as f64;
    let n_nm = (0.5 * (ln_gamma(n_r + 1.0) - ln_gamma(n_r + m_abs + 1.0))).exp() / lb;

    let nu = (n as i64 - m) as f64;
    let c_nm = (-half_ln_pi - 0.5 * (nu * std::f64::consts::LN_2 + ln_gamma(nu + 1.0))
        + 0.5 * lb.ln())
    .exp();

    Ok(NormConstants { n_n, n_nm, c_nm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hermite_low_orders() {
        for &x in &[-1.3, 0.0, 0.7, 2.5] {
            assert_relative_eq!(hermite(0, x), 1.0);
            assert_relative_eq!(hermite(1, x), 2.0 * x);
            assert_relative_eq!(hermite(2, x), 4.0 * x * x - 2.0);
            assert_relative_eq!(hermite(3, x), 8.0 * x.powi(3) - 12.0 * x, max_relative = 1e-14);
            assert_relative_eq!(
                hermite(4, x),
                16.0 * x.powi(4) - 48.0 * x * x + 12.0,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn hermite_scaled_reduces_to_hermite() {
        for n in 0..8 {
            for &x in &[-2.0, 0.3, 1.9] {
                let g = hermite_scaled(n, 1.0, Complex64::new(x, 0.0));
                assert_relative_eq!(g.re, hermite(n, x), max_relative = 1e-13, epsilon = 1e-13);
                assert!(g.im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn hermite_scaled_homogeneity() {
        // G_n(s, w) = c^n G_n(s / c^2, w / c) for real c > 0.
        let w = Complex64::new(0.8, -0.4);
        let (s, c) = (0.37, 1.7);
        for n in 0..7 {
            let lhs = hermite_scaled(n, s, w);
            let rhs = hermite_scaled(n, s / (c * c), w / c) * c.powi(n as i32);
            assert_relative_eq!(lhs.re, rhs.re, max_relative = 1e-12, epsilon = 1e-12);
            assert_relative_eq!(lhs.im, rhs.im, max_relative = 1e-12, epsilon = 1e-12);
        }
    }

    #[test]
    fn laguerre_low_orders() {
        for &x in &[0.0, 0.5, 2.2] {
            for alpha in 0..4usize {
                let a = alpha as f64;
                assert_relative_eq!(assoc_laguerre(0, alpha, x), 1.0);
                assert_relative_eq!(assoc_laguerre(1, alpha, x), 1.0 + a - x);
                assert_relative_eq!(
                    assoc_laguerre(2, alpha, x),
                    0.5 * x * x - (a + 2.0) * x + 0.5 * (a + 1.0) * (a + 2.0),
                    max_relative = 1e-14,
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn norm_constants_small_values() {
        let s = MagneticSetup::unit();
        let c = norm_constants(&s, 0, 0).unwrap();
        // N_0 = pi^{-1/4}, N_00 = 1, C_00 = pi^{-1/4}.
        let pi_quarter = std::f64::consts::PI.powf(-0.25);
        assert_relative_eq!(c.n_n, pi_quarter, max_relative = 1e-15);
        assert_relative_eq!(c.n_nm, 1.0, max_relative = 1e-15);
        assert_relative_eq!(c.c_nm, pi_quarter, max_relative = 1e-15);

        // n = 2, m = -1: n_r = 2, N_nm = sqrt(2!/3!) = 1/sqrt(3).
        let c = norm_constants(&s, 2, -1).unwrap();
        assert_relative_eq!(c.n_nm, 3.0f64.sqrt().recip(), max_relative = 1e-14);
    }

    #[test]
    fn norm_constants_scale_with_length() {
        // l_B doubles => N_n and N_nm shrink, C_nm grows, by the right powers.
        let a = MagneticSetup::new(1.0, 1.0).unwrap();
        let b = MagneticSetup::new(0.25, 1.0).unwrap(); // l_B doubled
        let (ca, cb) = (
            norm_constants(&a, 3, 1).unwrap(),
            norm_constants(&b, 3, 1).unwrap(),
        );
        assert_relative_eq!(cb.n_n, ca.n_n / 2.0f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(cb.n_nm, ca.n_nm / 2.0, max_relative = 1e-14);
        assert_relative_eq!(cb.c_nm, ca.c_nm * 2.0f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn norm_constants_finite_at_large_index() {
        let s = MagneticSetup::unit();
        let c = norm_constants(&s, 170, 0).unwrap();
        assert!(c.n_n.is_finite() && c.n_n > 0.0);
        assert!(c.n_nm.is_finite() && c.n_nm > 0.0);
        assert!(c.c_nm.is_finite() && c.c_nm > 0.0);
        let c = norm_constants(&s, 170, -60).unwrap();
        assert!(c.n_nm.is_finite() && c.n_nm > 0.0);
    }

    #[test]
    fn rejects_m_above_n() {
        let s = MagneticSetup::unit();
        assert!(matches!(
            norm_constants(&s, 2, 3),
            Err(LandauError::InvalidQuantumNumbers(_))
        ));
    }
}
