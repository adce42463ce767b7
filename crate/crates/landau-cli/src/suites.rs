//! The four verification suites, each producing a sorted [`Report`].
//!
//! Row anchors are stable self-describing paths (`nm/sym/p_can/n1/mr0/mc1/
//! ladder`, `packet/l1/L_mech/n2/kx1.5/sigma0.2`, ...) so a failure names
//! its cell without any external key.

use anyhow::{anyhow, Result};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use landau_core::classical::{
    self, conservation_report, identity_report, integrate, TrajectoryState,
};
use landau_core::{
    closed_form_nm_entry, gcc_build, BasisClass, FockEngine, FockLabel, GaugeChoice, GccBase,
    HarmonicGauge, MagneticSetup, OperatorKind, QuadratureGrid, QuantumState, RealSpaceEngine,
    WavePacketSpec,
};

use crate::config::RunConfig;
use crate::report::{ChiDrawRecord, Report, ReportHeader};

const SIX_OPS: [OperatorKind; 6] = [
    OperatorKind::PCanX,
    OperatorKind::PMechX,
    OperatorKind::PConsX,
    OperatorKind::LCanZ,
    OperatorKind::LMechZ,
    OperatorKind::LConsZ,
];

fn setup_of(config: &RunConfig) -> Result<MagneticSetup> {
    MagneticSetup::new(config.eb, config.mass).map_err(|e| anyhow!(e))
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// Closed-form Gaussian-moment expectation of one observable on a packet.
fn packet_oracle(setup: &MagneticSetup, spec: &WavePacketSpec, class: BasisClass, index: usize) -> f64 {
    let eb = setup.eb;
    let n = spec.n as f64;
    let second_moment = spec.kx_center * spec.kx_center + 0.5 * spec.sigma * spec.sigma;
    let l_cons = n + 0.5 - 0.5 * second_moment / eb - 0.25 * eb / (spec.sigma * spec.sigma);
    let (p_can, l_can) = match class {
        BasisClass::SymNM => (0.5 * spec.kx_center, l_cons),
        BasisClass::L1NM => (spec.kx_center, n + 0.5 - second_moment / eb),
    };
    [p_can, 0.0, spec.kx_center, l_can, 2.0 * n + 1.0, l_cons][index]
}

fn packet_state(
    setup: &MagneticSetup,
    spec: WavePacketSpec,
    class: BasisClass,
) -> Result<QuantumState> {
    match class {
        BasisClass::SymNM => QuantumState::packet_symmetric(setup, spec),
        BasisClass::L1NM => QuantumState::packet_l1(setup, spec),
    }
    .map_err(|e| anyhow!(e))
}

fn distance_to_integers(v: f64) -> f64 {
    (v - v.round()).abs()
}

/// Circular-basis suite: every `<n, m'|O|n, m>` cell by the ladder engine
/// (against the closed form) and by the quadrature engine (against the
/// ladder value) — two rows per cell.
pub fn table2(config: &RunConfig) -> Result<Report> {
    let setup = setup_of(config)?;
    let engine = RealSpaceEngine::new(&setup);
    let fock = FockEngine::for_range(&setup, config.n_max, config.m_min);
    let mut report = Report::new(ReportHeader::new("table2", config));
    for class in BasisClass::ALL {
        let matrices: Vec<_> = SIX_OPS
            .iter()
            .map(|op| fock.build(op, class))
            .collect::<landau_core::Result<_>>()?;
        for n in 0..=config.n_max {
            let ms: Vec<i64> = (config.m_min..=n as i64).collect();
            let widest = ms
                .iter()
                .copied()
                .max_by_key(|m| m.unsigned_abs())
                .unwrap_or(0);
            let grid = config.grid_override(QuadratureGrid::for_nm(n, widest));
            let block = engine.nm_first_order_block(class, n, config.m_min, &SIX_OPS, grid)?;
            for (iop, op) in SIX_OPS.iter().enumerate() {
                for (r, &m_row) in block.ms.iter().enumerate() {
                    for (c, &m_col) in block.ms.iter().enumerate() {
                        let closed = closed_form_nm_entry(&setup, op, class, n, m_row, m_col)?;
                        let ladder = matrices[iop].entry(
                            FockLabel::from_nm(n, m_row)?,
                            FockLabel::from_nm(n, m_col)?,
                        )?;
                        let stem = format!(
                            "nm/{}/{}/n{n}/mr{m_row}/mc{m_col}",
                            class.label(),
                            op.label()
                        );
                        report.push_equality(
                            format!("{stem}/ladder"),
                            ladder,
                            closed,
                            config.tol_ladder,
                        );
                        report.push_equality(
                            format!("{stem}/quadrature"),
                            block.values[iop][r][c],
                            ladder,
                            config.tol_cross,
                        );
                    }
                }
            }
        }
    }
    report.sort_rows();
    Ok(report)
}

/// Stripe-basis suite: the six observables on normalized wave packets in
/// both classes, against their closed-form Gaussian-moment references.
pub fn table1(config: &RunConfig) -> Result<Report> {
    let setup = setup_of(config)?;
    let engine = RealSpaceEngine::new(&setup);
    let mut report = Report::new(ReportHeader::new("table1", config));
    for n in 0..=config.packet_n_max {
        for &kx in &config.kx_list {
            for &sigma in &config.sigma_list {
                let spec = WavePacketSpec::new(n, kx, sigma)?;
                let grid = config.grid_override(QuadratureGrid::for_packet(&setup, &spec));
                for class in BasisClass::ALL {
                    let state = packet_state(&setup, spec, class)?;
                    let slots =
                        engine.expectation_set(&SIX_OPS, Some(&class.gauge()), &state, grid)?;
                    for (index, (op, slot)) in SIX_OPS.iter().zip(&slots).enumerate() {
                        let oracle = packet_oracle(&setup, &spec, class, index);
                        let tolerance = if index < 3 {
                            config.tol_packet_momentum
                        } else {
                            config.tol_packet_oam
                        };
                        report.push_equality(
                            format!(
                                "packet/{}/{}/n{n}/kx{kx}/sigma{sigma}",
                                class.label(),
                                op.label()
                            ),
                            slot.value,
                            real(oracle),
                            tolerance,
                        );
                    }
                }
            }
        }
    }
    report.sort_rows();
    Ok(report)
}

/// Gauge-class suite: seeded covariance draws, the class-separation of the
/// conserved quantities against the class-independence of the mechanical
/// ones, and the designated-potential coincidences.
pub fn gaugeclass(config: &RunConfig) -> Result<Report> {
    let setup = setup_of(config)?;
    let engine = RealSpaceEngine::new(&setup);
    let mut report = Report::new(ReportHeader::new("gaugeclass", config));
    let covariant_ops = [
        OperatorKind::PMechX,
        OperatorKind::PConsX,
        OperatorKind::LMechZ,
        OperatorKind::LConsZ,
    ];

    // Covariance under seeded random deformations: matrix elements between
    // deformed states, taken with the deformed potential, must reproduce the
    // undeformed values.
    let n_probe = config.n_max.min(2);
    let m_ket = (n_probe as i64).min(1);
    let m_bra = (m_ket - 1).max(config.m_min);
    let bra = QuantumState::sym_nm(&setup, n_probe, m_bra)?;
    let ket = QuantumState::sym_nm(&setup, n_probe, m_ket)?;
    let grid = config.grid_override(QuadratureGrid::for_nm(
        n_probe,
        m_bra.unsigned_abs().max(m_ket.unsigned_abs()) as i64,
    ));
    let base: Vec<Complex64> = covariant_ops
        .iter()
        .map(|op| {
            engine
                .matrix_element(&bra, op, Some(&GaugeChoice::Symmetric), &ket, grid)
                .map(|slot| slot.value)
        })
        .collect::<landau_core::Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for draw in 0..20 {
        let chi = HarmonicGauge::sample(&setup, || rng.gen_range(-1.0..=1.0));
        report.header.chi_draws.push(ChiDrawRecord {
            re_coeffs: chi.re_coeffs.clone(),
            im_coeffs: chi.im_coeffs.clone(),
            xy_coeff: chi.xy_coeff,
        });
        let bra_d = QuantumState::deformed(bra.clone(), chi.clone());
        let ket_d = QuantumState::deformed(ket.clone(), chi);
        let gauge = bra_d.gauge().clone();
        let mut worst = 0.0_f64;
        for (op, base_value) in covariant_ops.iter().zip(&base) {
            let slot = engine.matrix_element(&bra_d, op, Some(&gauge), &ket_d, grid)?;
            worst = worst.max((slot.value - base_value).norm());
        }
        report.push_equality(
            format!("covariance/draw{draw:02}"),
            real(worst),
            real(0.0),
            config.tol_covariance,
        );
    }

    // Conserved quantities separate the packet class from the circular
    // class; mechanical ones cannot tell them apart.
    for n in 0..=config.packet_n_max {
        for &kx in &config.kx_list {
            for &sigma in &config.sigma_list {
                let spec = WavePacketSpec::new(n, kx, sigma)?;
                let grid = config.grid_override(QuadratureGrid::for_packet(&setup, &spec));
                for class in BasisClass::ALL {
                    let state = packet_state(&setup, spec, class)?;
                    let slots =
                        engine.expectation_set(&covariant_ops, Some(&class.gauge()), &state, grid)?;
                    let suffix = format!("{}/n{n}/kx{kx}/sigma{sigma}", class.label());
                    report.push_equality(
                        format!("independence/p_mech/{suffix}"),
                        slots[0].value,
                        real(0.0),
                        config.tol_packet_momentum,
                    );
                    report.push_equality(
                        format!("independence/L_mech/{suffix}"),
                        slots[2].value,
                        real((2 * n + 1) as f64),
                        config.tol_packet_oam,
                    );
                    if let BasisClass::L1NM = class {
                        // The circular-family expectations are the integers m
                        // (conserved OAM) and zero (conserved momentum); the
                        // packet value must stay clear of them unless the
                        // configuration lands on one exactly.
                        let l_cons = &slots[3];
                        if distance_to_integers(packet_oracle(&setup, &spec, class, 5)) > 0.1 {
                            report.push_inequality(
                                format!("separation/L_cons/n{n}/kx{kx}/sigma{sigma}"),
                                distance_to_integers(l_cons.value.re),
                                10.0 * (l_cons.error_estimate + config.tol_cross),
                            );
                        }
                        let p_cons = &slots[1];
                        if kx.abs() > 0.1 {
                            report.push_inequality(
                                format!("separation/p_cons/n{n}/kx{kx}/sigma{sigma}"),
                                p_cons.value.norm(),
                                10.0 * (p_cons.error_estimate + config.tol_cross),
                            );
                        }
                    }
                }
            }
        }
    }

    // Designated-potential coincidences, by both engines.
    let pairs = [
        (
            "oam-sym",
            gcc_build(GccBase::Oam, GaugeChoice::Symmetric)?,
            OperatorKind::LConsZ,
        ),
        (
            "momentum-l1",
            gcc_build(GccBase::Momentum, GaugeChoice::Landau1)?,
            OperatorKind::PConsX,
        ),
    ];
    let fock = FockEngine::for_range(&setup, config.n_max, config.m_min);
    let n_gcc = config.n_max.min(2);
    for class in BasisClass::ALL {
        for (name, gcc, partner) in &pairs {
            let difference = fock
                .build(gcc, class)?
                .sub(&fock.build(partner, class)?)?
                .max_interior_abs();
            report.push_equality(
                format!("gcc/ladder/{name}/{}", class.label()),
                real(difference),
                real(0.0),
                config.tol_ladder,
            );
        }
        let ops: Vec<OperatorKind> = pairs
            .iter()
            .flat_map(|(_, gcc, partner)| [gcc.clone(), partner.clone()])
            .collect();
        let ms: Vec<i64> = (config.m_min..=n_gcc as i64).collect();
        let widest = ms
            .iter()
            .copied()
            .max_by_key(|m| m.unsigned_abs())
            .unwrap_or(0);
        let grid = config.grid_override(QuadratureGrid::for_nm(n_gcc, widest));
        let block = engine.nm_first_order_block(class, n_gcc, config.m_min, &ops, grid)?;
        for (pair, (name, ..)) in pairs.iter().enumerate() {
            let mut worst = 0.0_f64;
            for r in 0..block.ms.len() {
                for c in 0..block.ms.len() {
                    worst = worst
                        .max((block.values[2 * pair][r][c] - block.values[2 * pair + 1][r][c]).norm());
                }
            }
            report.push_equality(
                format!("gcc/quadrature/{name}/{}", class.label()),
                real(worst),
                real(0.0),
                config.tol_cross,
            );
        }
    }
    report.sort_rows();
    Ok(report)
}

/// Classical suite: conserved-quantity drift, canonical-momentum identities,
/// and the measured integrator order, plus a plot-ready trajectory export.
pub fn classical(config: &RunConfig) -> Result<(Report, Vec<u8>)> {
    let setup = setup_of(config)?;
    let period = setup.cyclotron_period;
    let initial = TrajectoryState {
        t: 0.0,
        x: 0.3,
        y: -0.2,
        vx: 1.0,
        vy: 0.4,
    };
    let trajectory = integrate(&setup, &initial, 100.0 * period, period / 1000.0)?;
    let mut report = Report::new(ReportHeader::new("classical", config));

    let conservation = conservation_report(&setup, &trajectory)?;
    for (name, drift) in [
        ("p_cons_x", conservation.p_cons_x_drift),
        ("p_cons_y", conservation.p_cons_y_drift),
        ("l_cons", conservation.l_cons_drift),
    ] {
        report.push_equality(
            format!("conservation/{name}"),
            real(drift),
            real(0.0),
            config.tol_drift,
        );
    }
    let identities = identity_report(&setup, &trajectory)?;
    for (name, residual) in [
        ("polar-sym-oam", identities.max_residual[0]),
        ("cartesian-sym-momentum", identities.max_residual[1]),
        ("cartesian-l1-momentum", identities.max_residual[2]),
        ("polar-l1-oam", identities.max_residual[3]),
    ] {
        report.push_equality(
            format!("identity/{name}"),
            real(residual),
            real(0.0),
            config.tol_identity,
        );
    }

    // Integrator order against the closed-form circle through the origin.
    let circle = TrajectoryState {
        t: 0.0,
        x: 0.0,
        y: 0.0,
        vx: 1.0,
        vy: 0.0,
    };
    let error_at = |dt: f64| -> Result<f64> {
        let samples = integrate(&setup, &circle, 2.0 * period, dt)?;
        Ok(samples
            .iter()
            .map(|s| {
                let angle = setup.cyclotron_frequency * s.t;
                let radius = 1.0 / setup.cyclotron_frequency;
                let ex = radius * angle.sin();
                let ey = radius * (1.0 - angle.cos());
                ((s.x - ex).powi(2) + (s.y - ey).powi(2)).sqrt()
            })
            .fold(0.0, f64::max))
    };
    let order = (error_at(period / 200.0)? / error_at(period / 400.0)?).log2();
    report.push_inequality("integrator/order".to_string(), order, 3.9);

    // Downsampled export: every stride-th sample keeps the file plot-ready.
    let stride = (trajectory.len() / 1000).max(1);
    let sampled: Vec<TrajectoryState> = trajectory.iter().copied().step_by(stride).collect();
    let mut csv = Vec::new();
    classical::write_csv(&mut csv, &setup, &sampled)?;

    report.sort_rows();
    Ok((report, csv))
}
