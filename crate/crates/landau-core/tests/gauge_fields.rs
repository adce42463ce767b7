//! Property tests for the gauge potentials, harmonic deformations, and the
//! transformation phase.

use num_complex::Complex64;
use proptest::prelude::*;

use landau_core::{gauge_phase, BaseGauge, GaugeChoice, HarmonicGauge, MagneticSetup};

/// A bounded random harmonic deformation for property tests.
fn chi_strategy() -> impl Strategy<Value = HarmonicGauge> {
    (
        proptest::collection::vec(-0.3f64..0.3, 0..5),
        proptest::collection::vec(-0.3f64..0.3, 0..5),
        -0.5f64..0.5,
    )
        .prop_map(|(re_coeffs, im_coeffs, xy_coeff)| HarmonicGauge {
            re_coeffs,
            im_coeffs,
            xy_coeff,
        })
}

proptest! {
    /// Every member of every gauge class produces the same magnetic field:
    /// the analytic curl deviation vanishes identically.
    #[test]
    fn all_gauges_share_the_field(
        chi in chi_strategy(),
        x in -5.0f64..5.0,
        y in -5.0f64..5.0,
        eb in 0.3f64..3.0,
    ) {
        let setup = MagneticSetup::new(eb, 1.0).unwrap();
        for base in [BaseGauge::Symmetric, BaseGauge::Landau1, BaseGauge::Landau2] {
            let g = GaugeChoice::Deformed { base, chi: chi.clone() };
            prop_assert!(g.curl_deviation(&setup, x, y).abs() < 1e-12);
        }
    }

    /// The transformation phase has unit modulus everywhere.
    #[test]
    fn phase_is_unimodular(
        chi in chi_strategy(),
        x in -8.0f64..8.0,
        y in -8.0f64..8.0,
    ) {
        let setup = MagneticSetup::unit();
        let p = gauge_phase(&setup, &chi, x, y);
        prop_assert!((p.norm() - 1.0).abs() < 1e-12);
    }

    /// Applying two deformations in sequence multiplies their phases:
    /// the composed deformation carries the sum of the scalar functions.
    #[test]
    fn phases_compose(
        chi1 in chi_strategy(),
        chi2 in chi_strategy(),
        x in -4.0f64..4.0,
        y in -4.0f64..4.0,
    ) {
        let setup = MagneticSetup::unit();
        let combined = chi1.compose(&chi2);
        let lhs = gauge_phase(&setup, &combined, x, y);
        let rhs = gauge_phase(&setup, &chi1, x, y) * gauge_phase(&setup, &chi2, x, y);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    /// The analytic gradient of the deformation matches finite differences.
    #[test]
    fn gradient_is_consistent(
        chi in chi_strategy(),
        x in -3.0f64..3.0,
        y in -3.0f64..3.0,
    ) {
        let setup = MagneticSetup::unit();
        let h = 1e-5;
        let (gx, gy) = chi.gradient(&setup, x, y);
        let fdx = (chi.value(&setup, x + h, y) - chi.value(&setup, x - h, y)) / (2.0 * h);
        let fdy = (chi.value(&setup, x, y + h) - chi.value(&setup, x, y - h)) / (2.0 * h);
        let scale = 1.0 + gx.abs() + gy.abs();
        prop_assert!((gx - fdx).abs() < 1e-7 * scale);
        prop_assert!((gy - fdy).abs() < 1e-7 * scale);
    }
}

#[test]
fn bilinear_deformation_converts_between_standard_gauges() {
    let setup = MagneticSetup::new(1.7, 1.0).unwrap();
    let to_l1 = GaugeChoice::Deformed {
        base: BaseGauge::Symmetric,
        chi: HarmonicGauge::symmetric_to_landau1(),
    };
    let back = GaugeChoice::Deformed {
        base: BaseGauge::Landau1,
        chi: HarmonicGauge::landau1_to_symmetric(),
    };
    for &(x, y) in &[(0.0, 0.0), (1.3, -0.4), (-2.0, 2.5)] {
        let l1 = GaugeChoice::Landau1.potential(&setup, x, y);
        let via = to_l1.potential(&setup, x, y);
        assert!((l1.0 - via.0).abs() < 1e-12 && (l1.1 - via.1).abs() < 1e-12);
        let sym = GaugeChoice::Symmetric.potential(&setup, x, y);
        let via = back.potential(&setup, x, y);
        assert!((sym.0 - via.0).abs() < 1e-12 && (sym.1 - via.1).abs() < 1e-12);
    }
}

#[test]
fn curl_check_samples_the_plane() {
    let setup = MagneticSetup::unit();
    let chi = HarmonicGauge {
        re_coeffs: vec![0.1, -0.05, 0.01],
        im_coeffs: vec![0.0, 0.08],
        xy_coeff: 0.3,
    };
    let g = GaugeChoice::Deformed {
        base: BaseGauge::Landau2,
        chi,
    };
    let samples: Vec<(f64, f64)> = (0..64)
        .map(|i| {
            let t = i as f64 / 8.0;
            (4.0 * (t - 3.5), 3.0 * ((1.7 * t).sin()))
        })
        .collect();
    assert!(g.curl_check(&setup, &samples) < 1e-12);
}

#[test]
fn standard_potentials_at_reference_points() {
    let setup = MagneticSetup::new(2.0, 1.0).unwrap();
    // eB = 2 at the point (1, 1).
    assert_eq!(GaugeChoice::Symmetric.potential(&setup, 1.0, 1.0), (-1.0, 1.0));
    assert_eq!(GaugeChoice::Landau1.potential(&setup, 1.0, 1.0), (-2.0, 0.0));
    assert_eq!(GaugeChoice::Landau2.potential(&setup, 1.0, 1.0), (0.0, 2.0));
}

#[test]
fn divergence_distinguishes_the_gauges() {
    let setup = MagneticSetup::unit();
    // The three standard potentials are divergence-free; harmonic
    // deformations keep them so.
    let chi = HarmonicGauge {
        re_coeffs: vec![0.2, 0.1],
        im_coeffs: vec![-0.1, 0.05, 0.02],
        xy_coeff: -0.4,
    };
    for base in [BaseGauge::Symmetric, BaseGauge::Landau1, BaseGauge::Landau2] {
        let g = GaugeChoice::Deformed {
            base,
            chi: chi.clone(),
        };
        for &(x, y) in &[(0.5, -1.0), (2.0, 3.0)] {
            assert!(g.divergence(&setup, x, y).abs() < 1e-12);
        }
    }
}

#[test]
fn reference_phase_value() {
    // The symmetric-to-stripe deformation multiplies amplitudes by
    // exp(+i eB x y / 2); at eB = 1 and (x, y) = (1, pi) that is
    // exp(+i pi/2) = i.
    let setup = MagneticSetup::unit();
    let p = gauge_phase(&setup, &HarmonicGauge::symmetric_to_landau1(), 1.0, std::f64::consts::PI);
    assert!((p - Complex64::new(0.0, 1.0)).norm() < 1e-12);
}
