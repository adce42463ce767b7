//! Acceptance suite: the exit criteria of the laboratory, one test per
//! criterion so the harness prints one pass/fail line for each.
//!
//! The two heavy fixtures — the full circular-basis matrix sweep and the
//! wave-packet expectation sweep — are computed once and shared through
//! `OnceLock`. Tests serialize on a mutex: the host has few cores and every
//! test is itself data-parallel, so interleaving them would only blur the
//! per-criterion cost attribution.

use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use landau_core::classical::{
    conservation_report, identity_report, integrate, TrajectoryState,
};
use landau_core::{
    closed_form_nm_entry, commutator_suite, gcc_build, overlap_kernel, psi_l1_nkx,
    reconstruct_l1_nkx, BasisClass, FockEngine, FockLabel, GaugeChoice, GccBase,
    HarmonicGauge, MagneticSetup, MatrixElementResult, OperatorKind, QuantumState,
    RealSpaceEngine, WavePacketSpec,
};

const SIX_OPS: [OperatorKind; 6] = [
    OperatorKind::PCanX,
    OperatorKind::PMechX,
    OperatorKind::PConsX,
    OperatorKind::LCanZ,
    OperatorKind::LMechZ,
    OperatorKind::LConsZ,
];
const I_PMECH: usize = 1;
const I_LMECH: usize = 4;
const I_LCONS: usize = 5;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

/// Summary of the full circular-basis sweep: both classes, levels `n <= 5`,
/// angular labels `-5 <= m, m' <= n`, all six observables, three ways
/// (closed form, ladder matrices, quadrature).
struct NmSweep {
    elapsed: Duration,
    cells: usize,
    max_fock_vs_closed: f64,
    max_real_vs_fock: f64,
    /// Largest |cell| of the mechanical momentum (quadrature engine).
    max_pmech_cell: f64,
    /// Largest deviation of a conserved-OAM diagonal from its integer label.
    max_lcons_diag_dev: f64,
}

fn nm_sweep() -> &'static NmSweep {
    static CELL: OnceLock<NmSweep> = OnceLock::new();
    CELL.get_or_init(|| {
        let start = Instant::now();
        let setup = MagneticSetup::unit();
        let engine = RealSpaceEngine::new(&setup);
        let fock = FockEngine::for_range(&setup, 5, -5);
        let mut sweep = NmSweep {
            elapsed: Duration::ZERO,
            cells: 0,
            max_fock_vs_closed: 0.0,
            max_real_vs_fock: 0.0,
            max_pmech_cell: 0.0,
            max_lcons_diag_dev: 0.0,
        };
        for class in BasisClass::ALL {
            let matrices: Vec<_> = SIX_OPS
                .iter()
                .map(|op| fock.build(op, class).unwrap())
                .collect();
            for n in 0..=5usize {
                let block = engine.nm_first_order_block(class, n, -5, &SIX_OPS, None).unwrap();
                for (iop, op) in SIX_OPS.iter().enumerate() {
                    for (r, &m_row) in block.ms.iter().enumerate() {
                        for (c, &m_col) in block.ms.iter().enumerate() {
                            let exact =
                                closed_form_nm_entry(&setup, op, class, n, m_row, m_col).unwrap();
                            let ladder = matrices[iop]
                                .entry(
                                    FockLabel::from_nm(n, m_row).unwrap(),
                                    FockLabel::from_nm(n, m_col).unwrap(),
                                )
                                .unwrap();
                            let quad = block.values[iop][r][c];
                            sweep.cells += 1;
                            sweep.max_fock_vs_closed =
                                sweep.max_fock_vs_closed.max((ladder - exact).norm());
                            sweep.max_real_vs_fock =
                                sweep.max_real_vs_fock.max((quad - ladder).norm());
                            if iop == I_PMECH {
                                sweep.max_pmech_cell = sweep.max_pmech_cell.max(quad.norm());
                            }
                            if iop == I_LCONS && r == c {
                                let label = Complex64::new(m_col as f64, 0.0);
                                sweep.max_lcons_diag_dev =
                                    sweep.max_lcons_diag_dev.max((quad - label).norm());
                            }
                        }
                    }
                }
            }
        }
        sweep.elapsed = start.elapsed();
        sweep
    })
}

const PACKET_NS: [usize; 4] = [0, 1, 2, 3];
const PACKET_KXS: [f64; 3] = [-2.0, 0.0, 1.5];
const PACKET_SIGMAS: [f64; 3] = [0.2, 1.0, 5.0];

/// One wave-packet configuration with its six observable expectations in
/// both gauge classes (`by_class` follows `BasisClass::ALL` order).
struct PacketCase {
    n: usize,
    kx: f64,
    sigma: f64,
    by_class: Vec<Vec<MatrixElementResult>>,
}

fn packet_sweep() -> &'static Vec<PacketCase> {
    static CELL: OnceLock<Vec<PacketCase>> = OnceLock::new();
    CELL.get_or_init(|| {
        let setup = MagneticSetup::unit();
        let engine = RealSpaceEngine::new(&setup);
        let mut cases = Vec::new();
        for n in PACKET_NS {
            for kx in PACKET_KXS {
                for sigma in PACKET_SIGMAS {
                    let spec = WavePacketSpec::new(n, kx, sigma).unwrap();
                    let by_class = BasisClass::ALL
                        .iter()
                        .map(|class| {
                            let state = match class {
                                BasisClass::SymNM => {
                                    QuantumState::packet_symmetric(&setup, spec).unwrap()
                                }
                                BasisClass::L1NM => {
                                    QuantumState::packet_l1(&setup, spec).unwrap()
                                }
                            };
                            engine
                                .expectation_set(&SIX_OPS, Some(&class.gauge()), &state, None)
                                .unwrap()
                        })
                        .collect();
                    cases.push(PacketCase {
                        n,
                        kx,
                        sigma,
                        by_class,
                    });
                }
            }
        }
        cases
    })
}

/// Gaussian-moment oracles for the six observables on a packet, per class.
fn packet_oracles(setup: &MagneticSetup, case: &PacketCase, class: BasisClass) -> [f64; 6] {
    let eb = setup.eb;
    let n = case.n as f64;
    let second_moment = case.kx * case.kx + 0.5 * case.sigma * case.sigma;
    let l_cons = n + 0.5 - 0.5 * second_moment / eb - 0.25 * eb / (case.sigma * case.sigma);
    let (p_can, l_can) = match class {
        BasisClass::SymNM => (0.5 * case.kx, l_cons),
        BasisClass::L1NM => (case.kx, n + 0.5 - second_moment / eb),
    };
    [p_can, 0.0, case.kx, l_can, 2.0 * n + 1.0, l_cons]
}

fn distance_to_integers(v: f64) -> f64 {
    (v - v.round()).abs()
}

#[test]
fn circular_basis_cells_agree_across_all_three_evaluations() {
    let _guard = serial();
    let sweep = nm_sweep();
    assert_eq!(sweep.cells, 5412, "sweep must cover every cell");
    assert!(
        sweep.max_fock_vs_closed <= 1e-12,
        "ladder vs closed form: {:.3e}",
        sweep.max_fock_vs_closed
    );
    assert!(
        sweep.max_real_vs_fock <= 1e-8,
        "quadrature vs ladder: {:.3e}",
        sweep.max_real_vs_fock
    );
    assert!(
        sweep.elapsed < Duration::from_secs(60),
        "sweep took {:?}",
        sweep.elapsed
    );
    println!(
        "5412 cells: ladder-closed {:.2e}, quad-ladder {:.2e}, {:?}",
        sweep.max_fock_vs_closed, sweep.max_real_vs_fock, sweep.elapsed
    );
}

#[test]
fn packet_mechanical_oam_is_twice_level_plus_one_at_every_width() {
    let _guard = serial();
    let mut worst = 0.0_f64;
    for case in packet_sweep() {
        let value = case.by_class[1][I_LMECH].value;
        let target = (2 * case.n + 1) as f64;
        worst = worst.max((value - Complex64::new(target, 0.0)).norm());
    }
    assert!(worst < 1e-6, "worst deviation from 2n+1: {worst:.3e}");
    println!("36 packets, worst |<L_mech> - (2n+1)| = {worst:.2e}");
}

#[test]
fn mechanical_momentum_matrix_elements_vanish_everywhere() {
    let _guard = serial();
    // Discrete circular families: every cell of both classes.
    let circular = nm_sweep().max_pmech_cell;
    assert!(circular < 1e-8, "circular families: {circular:.3e}");
    // Continuum families enter through their normalized packet
    // regularizations — the only finite form of their matrix elements.
    let mut packet = 0.0_f64;
    for case in packet_sweep() {
        for by_class in &case.by_class {
            packet = packet.max(by_class[I_PMECH].value.norm());
        }
    }
    assert!(packet < 1e-8, "packets: {packet:.3e}");
    // Ladder engine: exact zero within every level (the operator only
    // connects adjacent levels, so its intra-level block vanishes).
    let setup = MagneticSetup::unit();
    let fock = FockEngine::for_range(&setup, 5, -5);
    for class in BasisClass::ALL {
        let matrix = fock.build(&OperatorKind::PMechX, class).unwrap();
        for n in 0..=5usize {
            for m_row in -5..=n as i64 {
                for m_col in -5..=n as i64 {
                    let cell = matrix
                        .entry(
                            FockLabel::from_nm(n, m_row).unwrap(),
                            FockLabel::from_nm(n, m_col).unwrap(),
                        )
                        .unwrap()
                        .norm();
                    assert!(cell <= 1e-13, "ladder cell n={n} {m_row},{m_col}: {cell:.3e}");
                }
            }
        }
    }
    println!("p_mech: circular {circular:.2e}, packets {packet:.2e}");
}

#[test]
fn every_family_and_random_deformation_satisfies_the_energy_equation() {
    let _guard = serial();
    let setup = MagneticSetup::unit();
    let engine = RealSpaceEngine::new(&setup);
    let families = [
        QuantumState::sym_nm(&setup, 0, 0).unwrap(),
        QuantumState::sym_nm(&setup, 3, -2).unwrap(),
        QuantumState::l1_nm(&setup, 2, 1).unwrap(),
        QuantumState::l1_nm(&setup, 1, -3).unwrap(),
        QuantumState::sym_nkx(&setup, 1, 0.8).unwrap(),
        QuantumState::sym_nkx(&setup, 0, -1.3).unwrap(),
        QuantumState::l1_nkx(&setup, 2, -1.1).unwrap(),
        QuantumState::l1_nkx(&setup, 0, 0.0).unwrap(),
    ];
    let mut worst = 0.0_f64;
    for state in &families {
        let residual = engine.eigen_residual(state, None).unwrap();
        assert!(residual < 1e-6, "{}: residual {residual:.3e}", state.label());
        worst = worst.max(residual);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0acc_e704);
    for draw in 0..10 {
        let base = families[draw % families.len()].clone();
        let chi = HarmonicGauge::sample(&setup, || rng.gen_range(-1.0..=1.0));
        let state = QuantumState::deformed(base, chi);
        let residual = engine.eigen_residual(&state, None).unwrap();
        assert!(
            residual < 1e-6,
            "deformation {draw}: residual {residual:.3e}"
        );
        worst = worst.max(residual);
    }
    println!("18 eigen-residuals, worst {worst:.2e}");
}

#[test]
fn packet_expectations_match_the_gaussian_moment_oracles() {
    let _guard = serial();
    let setup = MagneticSetup::unit();
    let mut worst = 0.0_f64;
    for case in packet_sweep() {
        for (ic, class) in BasisClass::ALL.iter().enumerate() {
            let oracles = packet_oracles(&setup, case, *class);
            for (slot, oracle) in case.by_class[ic].iter().zip(oracles) {
                let dev = (slot.value - Complex64::new(oracle, 0.0)).norm();
                assert!(
                    dev < 1e-6,
                    "n={} kx={} sigma={} class {}: dev {dev:.3e} (oracle {oracle})",
                    case.n,
                    case.kx,
                    case.sigma,
                    class.label(),
                );
                worst = worst.max(dev);
            }
        }
    }
    println!("432 oracle comparisons, worst {worst:.2e}");
}

#[test]
fn stripe_circular_overlap_kernel_matches_quadrature_and_resums() {
    let _guard = serial();
    let setup = MagneticSetup::unit();
    let engine = RealSpaceEngine::new(&setup);
    let kxs = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let mut worst_kernel = 0.0_f64;
    for n in 0..=4usize {
        let bras: Vec<QuantumState> = kxs
            .iter()
            .map(|&kx| QuantumState::l1_nkx(&setup, n, kx).unwrap())
            .collect();
        let ms: Vec<i64> = (-4..=n as i64).collect();
        let kets: Vec<QuantumState> = ms
            .iter()
            .map(|&m| QuantumState::l1_nm(&setup, n, m).unwrap())
            .collect();
        let table = engine.inner_products(&bras, &kets, None).unwrap();
        for (row, &kx) in table.iter().zip(&kxs) {
            for (slot, &m) in row.iter().zip(&ms) {
                let closed = overlap_kernel(&setup, n, kx, m).unwrap();
                let dev = (slot.value - closed).norm();
                assert!(dev <= 1e-8, "n={n} kx={kx} m={m}: dev {dev:.3e}");
                worst_kernel = worst_kernel.max(dev);
            }
        }
    }
    let samples = [(0.0, 0.0), (0.3, -0.8), (-1.1, 0.6), (1.7, 2.2)];
    let mut worst_resum = 0.0_f64;
    for n in 0..=4usize {
        for kx in kxs {
            for (x, y) in samples {
                let (resummed, _last_m) = reconstruct_l1_nkx(&setup, n, kx, x, y).unwrap();
                let direct = psi_l1_nkx(&setup, n, kx, x, y).unwrap();
                let dev = (resummed - direct).norm();
                assert!(dev < 1e-6, "n={n} kx={kx} at ({x},{y}): dev {dev:.3e}");
                worst_resum = worst_resum.max(dev);
            }
        }
    }
    println!("kernel worst {worst_kernel:.2e}, resummation worst {worst_resum:.2e}");
}

#[test]
fn conserved_oam_separates_the_packet_class_from_the_circular_class() {
    let _guard = serial();
    let setup = MagneticSetup::unit();
    let circular_dev = nm_sweep().max_lcons_diag_dev;
    let mut degenerate = Vec::new();
    let mut smallest_margin_ratio = f64::INFINITY;
    let mut worst_lmech = 0.0_f64;
    for case in packet_sweep() {
        // Mechanical OAM stays at 2n+1 in both classes — it cannot tell the
        // classes apart.
        let target = Complex64::new((2 * case.n + 1) as f64, 0.0);
        for by_class in &case.by_class {
            worst_lmech = worst_lmech.max((by_class[I_LMECH].value - target).norm());
        }

        // Conserved OAM: the packet expectation must avoid every integer
        // eigenvalue of the circular family — unless the configuration is
        // arranged to land exactly on one, which is a property of the
        // parameters, not a numerical failure.
        let oracle = packet_oracles(&setup, case, BasisClass::L1NM)[I_LCONS];
        if distance_to_integers(oracle) <= 0.1 {
            degenerate.push((case.kx, case.sigma));
            continue;
        }
        let slot = &case.by_class[1][I_LCONS];
        let margin = distance_to_integers(slot.value.re);
        let combined_error = slot.error_estimate + circular_dev;
        assert!(
            margin > 10.0 * combined_error,
            "n={} kx={} sigma={}: margin {margin:.3e} vs error {combined_error:.3e}",
            case.n,
            case.kx,
            case.sigma,
        );
        smallest_margin_ratio = smallest_margin_ratio.min(margin / combined_error);
    }
    assert!(worst_lmech < 1e-6, "L_mech cross-class: {worst_lmech:.3e}");
    // Exactly the configurations whose oracle lands on the integer lattice
    // are excused, and they are known in advance.
    assert_eq!(degenerate.len(), 8, "degenerate sets: {degenerate:?}");
    for (kx, sigma) in degenerate {
        assert!(
            sigma == 1.0 && (kx == 0.0 || kx == -2.0),
            "unexpected degenerate set kx={kx} sigma={sigma}"
        );
    }
    println!(
        "28 separated sets, min margin/error {smallest_margin_ratio:.1}, \
         L_mech cross-class {worst_lmech:.2e}"
    );
}

#[test]
fn designated_potential_operators_coincide_with_the_conserved_ones() {
    let _guard = serial();
    let setup = MagneticSetup::unit();
    let engine = RealSpaceEngine::new(&setup);
    let pairs = [
        (
            gcc_build(GccBase::Oam, GaugeChoice::Symmetric).unwrap(),
            OperatorKind::LConsZ,
        ),
        (
            gcc_build(GccBase::Momentum, GaugeChoice::Landau1).unwrap(),
            OperatorKind::PConsX,
        ),
    ];
    let ops: Vec<OperatorKind> = pairs
        .iter()
        .flat_map(|(a, b)| [a.clone(), b.clone()])
        .collect();
    let mut worst_quad = 0.0_f64;
    for class in BasisClass::ALL {
        for n in [2usize, 4] {
            let block = engine.nm_first_order_block(class, n, -4, &ops, None).unwrap();
            for pair in 0..2 {
                for r in 0..block.ms.len() {
                    for c in 0..block.ms.len() {
                        let dev = (block.values[2 * pair][r][c]
                            - block.values[2 * pair + 1][r][c])
                            .norm();
                        assert!(
                            dev < 1e-8,
                            "{} vs {} class {} n={n}: dev {dev:.3e}",
                            pairs[pair].0.label(),
                            pairs[pair].1.label(),
                            class.label(),
                        );
                        worst_quad = worst_quad.max(dev);
                    }
                }
            }
        }
    }
    let fock = FockEngine::for_range(&setup, 4, -4);
    let mut worst_ladder = 0.0_f64;
    for class in BasisClass::ALL {
        for (gcc, partner) in &pairs {
            let difference = fock
                .build(gcc, class)
                .unwrap()
                .sub(&fock.build(partner, class).unwrap())
                .unwrap();
            worst_ladder = worst_ladder.max(difference.max_interior_abs());
        }
    }
    assert!(worst_ladder <= 1e-12, "ladder coincidence: {worst_ladder:.3e}");
    println!("coincidences: quadrature {worst_quad:.2e}, ladder {worst_ladder:.2e}");
}

#[test]
fn classical_trajectories_conserve_the_pseudomomenta_and_identities() {
    let _guard = serial();
    let setup = MagneticSetup::unit();
    let period = setup.cyclotron_period;
    let initial = TrajectoryState {
        t: 0.0,
        x: 0.3,
        y: -0.2,
        vx: 1.0,
        vy: 0.4,
    };
    let trajectory =
        integrate(&setup, &initial, 100.0 * period, period / 1000.0).unwrap();
    let conservation = conservation_report(&setup, &trajectory).unwrap();
    for (name, drift) in [
        ("p_cons_x", conservation.p_cons_x_drift),
        ("p_cons_y", conservation.p_cons_y_drift),
        ("l_cons", conservation.l_cons_drift),
    ] {
        assert!(drift < 1e-6, "{name} drift {drift:.3e}");
    }
    let identities = identity_report(&setup, &trajectory).unwrap();
    for (k, residual) in identities.max_residual.into_iter().enumerate() {
        assert!(residual < 1e-12, "identity {k}: residual {residual:.3e}");
    }

    // Integrator order, measured against the closed-form circle through the
    // origin: global error ratio between steps T/200 and T/400.
    let circle = TrajectoryState {
        t: 0.0,
        x: 0.0,
        y: 0.0,
        vx: 1.0,
        vy: 0.0,
    };
    let error_at = |dt: f64| -> f64 {
        let samples = integrate(&setup, &circle, 2.0 * period, dt).unwrap();
        samples
            .iter()
            .map(|s| {
                let ex = s.t.sin();
                let ey = 1.0 - s.t.cos();
                ((s.x - ex).powi(2) + (s.y - ey).powi(2)).sqrt()
            })
            .fold(0.0, f64::max)
    };
    let order = (error_at(period / 200.0) / error_at(period / 400.0)).log2();
    assert!(order >= 3.9, "measured order {order:.2}");
    println!(
        "drift {:.2e}/{:.2e}/{:.2e}, identities {:.2e}, order {order:.2}",
        conservation.p_cons_x_drift,
        conservation.p_cons_y_drift,
        conservation.l_cons_drift,
        identities.max_residual.into_iter().fold(0.0, f64::max),
    );
}

#[test]
fn observable_algebra_closes_while_the_conserved_pair_stays_open() {
    let _guard = serial();
    let setup = MagneticSetup::unit();
    for class in BasisClass::ALL {
        let report = commutator_suite(&setup, class, 10, 14).unwrap();
        for (name, dev) in [
            ("mechanical pair", report.mechanical_pair),
            ("conserved pair", report.conserved_pair),
            ("mixed pairs", report.mixed_pairs),
            ("momentum with H", report.momentum_with_h),
            ("OAM with H", report.oam_with_h),
        ] {
            assert!(dev <= 1e-12, "{} {name}: {dev:.3e}", class.label());
        }
        assert!(
            report.momentum_oam_openness > 0.1,
            "{} openness {:.3e}",
            class.label(),
            report.momentum_oam_openness
        );
    }
    println!("algebra closed at 1e-12 in both classes; conserved pair open");
}
