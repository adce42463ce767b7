//! Vector potentials for a uniform magnetic field and the unitary phases that
//! connect them.
//!
//! The charge is absorbed into the field strength: every formula uses the
//! product `eB` (stored in [`MagneticSetup`]), and gauge functions enter
//! physics only through `e * chi`, so the code works in units with `e = 1`.
//!
//! Three standard potentials are provided, together with arbitrary harmonic
//! deformations `A -> A + grad(chi)`:
//!
//! * symmetric (circular): `A = (B/2)(-y, x)`,
//! * first Landau gauge (stripe): `A = B(-y, 0)`,
//! * second Landau gauge: `A = B(0, x)`.
//!
//! All deformation gradients and curls are evaluated analytically; nothing in
//! this module differentiates numerically.

use num_complex::Complex64;

use crate::setup::MagneticSetup;

/// A harmonic gauge function
///
/// ```text
/// chi(x, y) = sum_k [ c_k Re((x+iy)^k) + s_k Im((x+iy)^k) ]  +  c_xy (-B x y / 2)
/// ```
///
/// built from real and imaginary parts of integer powers of `x + iy` plus the
/// distinguished bilinear term that carries the symmetric gauge into the first
/// Landau gauge at `c_xy = +1`. Every basis term is harmonic, so
/// `laplacian(chi) = 0` identically and the deformed potential keeps
/// `curl A = B` exactly.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HarmonicGauge {
    /// Coefficients `c_k` of `Re((x+iy)^k)`, k = 1, 2, ... (index 0 is k = 1).
    pub re_coeffs: Vec<f64>,
    /// Coefficients `s_k` of `Im((x+iy)^k)`, k = 1, 2, ... (index 0 is k = 1).
    pub im_coeffs: Vec<f64>,
    /// Coefficient of the `-B x y / 2` term.
    pub xy_coeff: f64,
}

impl HarmonicGauge {
    /// The zero gauge function (identity deformation).
    pub fn zero() -> Self {
        Self::default()
    }

    /// The pure bilinear term with `chi = -B x y / 2`.
    ///
    /// Deforming a symmetric-gauge state with this function yields the
    /// corresponding first-Landau-gauge state: the potential becomes
    /// `B(-y, 0)` and the amplitude is multiplied by `exp(+i eB x y / 2)`.
    pub fn symmetric_to_landau1() -> Self {
        Self {
            xy_coeff: 1.0,
            ..Self::default()
        }
    }

    /// The inverse of [`Self::symmetric_to_landau1`]: `chi = +B x y / 2`.
    ///
    /// Deforming a first-Landau-gauge state with this function yields the
    /// symmetric-gauge state (amplitude multiplied by `exp(-i eB x y / 2)`).
    pub fn landau1_to_symmetric() -> Self {
        Self {
            xy_coeff: -1.0,
            ..Self::default()
        }
    }

    /// Draws a bounded random deformation from per-degree uniform ranges.
    ///
    /// `uniform` must return independent samples uniform in `[-1, 1]` (the
    /// caller owns the RNG and its seeding). The degree-k polynomial
    /// coefficients are capped at `{0.1, 0.1, 0.02, 0.005}[k-1] * B *
    /// l_B^(2-k)`, so every term's contribution over the magnetic-length
    /// scale stays small against the base potential while remaining large
    /// against numerical tolerances; the bilinear carrier coefficient is
    /// capped at 0.2 to keep the draw well inside a single gauge class.
    pub fn sample(setup: &MagneticSetup, mut uniform: impl FnMut() -> f64) -> Self {
        const CAPS: [f64; 4] = [0.1, 0.1, 0.02, 0.005];
        let lb = setup.magnetic_length;
        let b = setup.eb; // charge absorbed: e = 1
        let family = |uniform: &mut dyn FnMut() -> f64| -> Vec<f64> {
            CAPS.iter()
                .enumerate()
                .map(|(i, cap)| cap * b * lb.powi(2 - (i as i32 + 1)) * uniform())
                .collect()
        };
        Self {
            re_coeffs: family(&mut uniform),
            im_coeffs: family(&mut uniform),
            xy_coeff: 0.2 * uniform(),
        }
    }

    /// Pointwise sum of two gauge functions.
    pub fn compose(&self, other: &Self) -> Self {
        let padded = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        let re_len = self.re_coeffs.len().max(other.re_coeffs.len());
        let im_len = self.im_coeffs.len().max(other.im_coeffs.len());
        Self {
            re_coeffs: (0..re_len)
                .map(|i| padded(&self.re_coeffs, i) + padded(&other.re_coeffs, i))
                .collect(),
            im_coeffs: (0..im_len)
                .map(|i| padded(&self.im_coeffs, i) + padded(&other.im_coeffs, i))
                .collect(),
            xy_coeff: self.xy_coeff + other.xy_coeff,
        }
    }

    /// `e * chi(x, y)` — the gauge function scaled so it is directly a phase.
    pub fn value(&self, setup: &MagneticSetup, x: f64, y: f64) -> f64 {
        let z = Complex64::new(x, y);
        let mut chi = self.xy_coeff * (-0.5 * setup.eb * x * y);
        let mut zk = Complex64::new(1.0, 0.0);
        let terms = self.re_coeffs.len().max(self.im_coeffs.len());
        for k in 0..terms {
            zk *= z;
            if let Some(&c) = self.re_coeffs.get(k) {
                chi += c * zk.re;
            }
            if let Some(&s) = self.im_coeffs.get(k) {
                chi += s * zk.im;
            }
        }
        chi
    }

    /// Analytic gradient `e * grad(chi)` at `(x, y)`.
    ///
    /// Uses `d/dx Re(z^k) = k Re(z^{k-1})`, `d/dy Re(z^k) = -k Im(z^{k-1})`,
    /// `d/dx Im(z^k) = k Im(z^{k-1})`, `d/dy Im(z^k) = k Re(z^{k-1})`.
    pub fn gradient(&self, setup: &MagneticSetup, x: f64, y: f64) -> (f64, f64) {
        let z = Complex64::new(x, y);
        let mut gx = self.xy_coeff * (-0.5 * setup.eb * y);
        let mut gy = self.xy_coeff * (-0.5 * setup.eb * x);
        let mut zk1 = Complex64::new(1.0, 0.0); // z^{k-1}
        let terms = self.re_coeffs.len().max(self.im_coeffs.len());
        for k in 1..=terms {
            let kf = k as f64;
            if let Some(&c) = self.re_coeffs.get(k - 1) {
                gx += c * kf * zk1.re;
                gy -= c * kf * zk1.im;
            }
            if let Some(&s) = self.im_coeffs.get(k - 1) {
                gx += s * kf * zk1.im;
                gy += s * kf * zk1.re;
            }
            zk1 *= z;
        }
        (gx, gy)
    }

    /// Analytic second partials `(d2chi/dx2, d2chi/dy2, d2chi/dxdy)` of
    /// `e * chi`, used by the curl and divergence reports.
    fn second_partials(&self, setup: &MagneticSetup, x: f64, y: f64) -> (f64, f64, f64) {
        let z = Complex64::new(x, y);
        let mut dxx = 0.0;
        let mut dyy = 0.0;
        let mut dxy = self.xy_coeff * (-0.5 * setup.eb);
        let mut zk2 = Complex64::new(1.0, 0.0); // z^{k-2}
        let terms = self.re_coeffs.len().max(self.im_coeffs.len());
        for k in 2..=terms {
            let kk = (k * (k - 1)) as f64;
            if let Some(&c) = self.re_coeffs.get(k - 1) {
                dxx += c * kk * zk2.re;
                dyy -= c * kk * zk2.re;
                dxy -= c * kk * zk2.im;
            }
            if let Some(&s) = self.im_coeffs.get(k - 1) {
                dxx += s * kk * zk2.im;
                dyy -= s * kk * zk2.im;
                dxy += s * kk * zk2.re;
            }
            zk2 *= z;
        }
        (dxx, dyy, dxy)
    }
}

/// The three standard gauges that can serve as the base of a deformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseGauge {
    /// `A = (B/2)(-y, x)`.
    Symmetric,
    /// `A = B(-y, 0)`.
    Landau1,
    /// `A = B(0, x)`.
    Landau2,
}

/// A gauge choice: one of the three standard potentials, or a standard
/// potential deformed by a harmonic gauge function.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeChoice {
    /// `A = (B/2)(-y, x)`.
    Symmetric,
    /// `A = B(-y, 0)`.
    Landau1,
    /// `A = B(0, x)`.
    Landau2,
    /// `A = A_base + grad(chi)`.
    Deformed {
        /// Which standard potential is deformed.
        base: BaseGauge,
        /// The harmonic gauge function added to it.
        chi: HarmonicGauge,
    },
}

impl From<BaseGauge> for GaugeChoice {
    fn from(base: BaseGauge) -> Self {
        match base {
            BaseGauge::Symmetric => GaugeChoice::Symmetric,
            BaseGauge::Landau1 => GaugeChoice::Landau1,
            BaseGauge::Landau2 => GaugeChoice::Landau2,
        }
    }
}

impl GaugeChoice {
    /// The potential `e * A(x, y)` (units of inverse length, since `e` is
    /// folded into the field strength).
    pub fn potential(&self, setup: &MagneticSetup, x: f64, y: f64) -> (f64, f64) {
        let eb = setup.eb;
        match self {
            GaugeChoice::Symmetric => (-0.5 * eb * y, 0.5 * eb * x),
            GaugeChoice::Landau1 => (-eb * y, 0.0),
            GaugeChoice::Landau2 => (0.0, eb * x),
            GaugeChoice::Deformed { base, chi } => {
                let (ax, ay) = GaugeChoice::from(*base).potential(setup, x, y);
                let (gx, gy) = chi.gradient(setup, x, y);
                (ax + gx, ay + gy)
            }
        }
    }

    /// `dAy/dx - dAx/dy - eB` at `(x, y)`, from analytic derivatives.
    ///
    /// Identically zero for the standard gauges; for deformed gauges the two
    /// mixed partials of `chi` are evaluated from the same closed form, so the
    /// result is an exact floating-point zero as well.
    pub fn curl_deviation(&self, setup: &MagneticSetup, x: f64, y: f64) -> f64 {
        let eb = setup.eb;
        match self {
            GaugeChoice::Symmetric | GaugeChoice::Landau1 | GaugeChoice::Landau2 => {
                // dAy/dx - dAx/dy for the linear potentials.
                let (day_dx, dax_dy) = match self {
                    GaugeChoice::Symmetric => (0.5 * eb, -0.5 * eb),
                    GaugeChoice::Landau1 => (0.0, -eb),
                    GaugeChoice::Landau2 => (eb, 0.0),
                    GaugeChoice::Deformed { .. } => unreachable!(),
                };
                day_dx - dax_dy - eb
            }
            GaugeChoice::Deformed { base, chi } => {
                let base_dev = GaugeChoice::from(*base).curl_deviation(setup, x, y);
                // grad(chi) adds d(dchi/dy)/dx - d(dchi/dx)/dy; both mixed
                // partials come from the same closed form.
                let (_, _, dchi_dy_dx) = chi.second_partials(setup, x, y);
                let (_, _, dchi_dx_dy) = chi.second_partials(setup, x, y);
                base_dev + (dchi_dy_dx - dchi_dx_dy)
            }
        }
    }

    /// `div A = dAx/dx + dAy/dy` at `(x, y)`, from analytic derivatives.
    ///
    /// All gauges here are transverse: the standard potentials by inspection,
    /// and harmonic deformations because `laplacian(chi) = 0`. The value is
    /// reported rather than asserted so that configurations can record it.
    pub fn divergence(&self, setup: &MagneticSetup, x: f64, y: f64) -> f64 {
        match self {
            GaugeChoice::Symmetric | GaugeChoice::Landau1 | GaugeChoice::Landau2 => 0.0,
            GaugeChoice::Deformed { base, chi } => {
                let (dxx, dyy, _) = chi.second_partials(setup, x, y);
                GaugeChoice::from(*base).divergence(setup, x, y) + dxx + dyy
            }
        }
    }

    /// Maximum of `|curl A - eB|` over the sample points.
    pub fn curl_check(&self, setup: &MagneticSetup, samples: &[(f64, f64)]) -> f64 {
        samples
            .iter()
            .map(|&(x, y)| self.curl_deviation(setup, x, y).abs())
            .fold(0.0, f64::max)
    }
}

/// The unitary phase `exp(-i e chi(x, y))` that multiplies a wavefunction when
/// its gauge is deformed by `chi`.
pub fn gauge_phase(setup: &MagneticSetup, chi: &HarmonicGauge, x: f64, y: f64) -> Complex64 {
    Complex64::from_polar(1.0, -chi.value(setup, x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn standard_potentials() {
        let s = MagneticSetup::unit();
        assert_eq!(GaugeChoice::Symmetric.potential(&s, 1.0, 2.0), (-1.0, 0.5));
        assert_eq!(GaugeChoice::Landau1.potential(&s, 1.0, 2.0), (-2.0, 0.0));
        assert_eq!(GaugeChoice::Landau2.potential(&s, 1.0, 2.0), (0.0, 1.0));
    }

    #[test]
    fn bilinear_deformation_converts_symmetric_to_landau1() {
        let s = MagneticSetup::new(2.5, 1.0).unwrap();
        let deformed = GaugeChoice::Deformed {
            base: BaseGauge::Symmetric,
            chi: HarmonicGauge::symmetric_to_landau1(),
        };
        for &(x, y) in &[(0.3, -1.2), (2.0, 0.7), (-1.1, -0.4)] {
            let got = deformed.potential(&s, x, y);
            let want = GaugeChoice::Landau1.potential(&s, x, y);
            assert_relative_eq!(got.0, want.0, epsilon = 1e-15);
            assert_relative_eq!(got.1, want.1, epsilon = 1e-15);
        }
    }

    #[test]
    fn gauge_phase_of_bilinear_term() {
        // chi = -B x y / 2 at eB = 1, (x, y) = (1, pi): phase = exp(+i pi/2) = i.
        let s = MagneticSetup::unit();
        let phase = gauge_phase(
            &s,
            &HarmonicGauge::symmetric_to_landau1(),
            1.0,
            std::f64::consts::PI,
        );
        assert_relative_eq!(phase.re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(phase.im, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn gradient_matches_value_by_finite_differences() {
        let s = MagneticSetup::unit();
        let chi = HarmonicGauge {
            re_coeffs: vec![0.4, -0.2, 0.05, 0.01],
            im_coeffs: vec![-0.3, 0.1, 0.0, -0.02],
            xy_coeff: 0.7,
        };
        let h = 1e-6;
        for &(x, y) in &[(0.9, -0.5), (-1.3, 2.1)] {
            let (gx, gy) = chi.gradient(&s, x, y);
            let fd_x = (chi.value(&s, x + h, y) - chi.value(&s, x - h, y)) / (2.0 * h);
            let fd_y = (chi.value(&s, x, y + h) - chi.value(&s, x, y - h)) / (2.0 * h);
            assert_relative_eq!(gx, fd_x, epsilon = 1e-8, max_relative = 1e-8);
            assert_relative_eq!(gy, fd_y, epsilon = 1e-8, max_relative = 1e-8);
        }
    }

    #[test]
    fn curl_and_divergence_vanish_for_deformations() {
        let s = MagneticSetup::unit();
        let gauge = GaugeChoice::Deformed {
            base: BaseGauge::Landau1,
            chi: HarmonicGauge {
                re_coeffs: vec![0.4, -0.2, 0.05, 0.01],
                im_coeffs: vec![-0.3, 0.1, 0.0, -0.02],
                xy_coeff: 0.7,
            },
        };
        let samples: Vec<(f64, f64)> = (0..25)
            .map(|i| ((i % 5) as f64 - 2.0, (i / 5) as f64 - 2.0))
            .collect();
        assert!(gauge.curl_check(&s, &samples) < 1e-12);
        for &(x, y) in &samples {
            assert!(gauge.divergence(&s, x, y).abs() < 1e-12);
        }
    }

    #[test]
    fn composition_adds_phases() {
        let s = MagneticSetup::unit();
        let chi1 = HarmonicGauge {
            re_coeffs: vec![0.2, -0.1],
            im_coeffs: vec![0.3],
            xy_coeff: -0.4,
        };
        let chi2 = HarmonicGauge {
            re_coeffs: vec![-0.05],
            im_coeffs: vec![0.1, 0.2, 0.07],
            xy_coeff: 1.1,
        };
        let sum = chi1.compose(&chi2);
        for &(x, y) in &[(0.8, -1.7), (2.2, 0.1)] {
            let product = gauge_phase(&s, &chi1, x, y) * gauge_phase(&s, &chi2, x, y);
            let direct = gauge_phase(&s, &sum, x, y);
            assert_relative_eq!(product.re, direct.re, epsilon = 1e-14);
            assert_relative_eq!(product.im, direct.im, epsilon = 1e-14);
        }
    }
}
