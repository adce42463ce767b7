//! Numerical laboratory for a charged particle in a uniform magnetic field.
//!
//! The crate distinguishes, for both linear and angular momentum, three
//! quantities that coincide for a free particle but split in a magnetic
//! field: the *canonical* one (`-i` times a derivative), the *mechanical*
//! one (mass times velocity, gauge-invariant but not conserved), and the
//! *conserved* one (gauge-invariant generator of the symmetry, commuting
//! with the Hamiltonian). Every claim about them is checked twice, by two
//! engines that share no approximations:
//!
//! * [`ops::RealSpaceEngine`] applies operators to explicit wave functions
//!   with high-order finite differences and integrates matrix elements on
//!   tensorized Gauss-Legendre grids;
//! * [`fock::FockEngine`] assembles the same operators as exact sparse
//!   matrices over a two-oscillator number basis, with certified truncation
//!   interiors.
//!
//! Supporting cast: eigenstate families in several gauges and their
//! harmonic deformations ([`states`]), wave packets that regularize the
//! delta-normalized continuum labels, the overlap kernel between the two
//! families, and the classical trajectories whose conservation laws the
//! operators quantize ([`classical`]).
//!
//! The heavy sweeps are data-parallel over grid rows via `rayon` when the
//! `parallel` feature (default) is enabled; disabling it gives a fully
//! sequential build with bit-identical results.

pub mod classical;
pub mod error;
pub mod fock;
pub mod gauge;
pub mod ops;
pub mod quad;
pub mod setup;
pub mod special;
pub mod states;

pub use error::{LandauError, Result};
pub use gauge::{gauge_phase, BaseGauge, GaugeChoice, HarmonicGauge};
pub use ops::{gcc_build, GccBase, MatrixElementResult, NmBlock, OperatorKind, RealSpaceEngine};
pub use quad::{Parallelism, QuadratureGrid};
pub use setup::MagneticSetup;
pub use states::{
    overlap_kernel, psi_l1_nkx, psi_l1_nm, psi_packet, psi_sym_nm, reconstruct_l1_nkx,
    BasisClass, Family, QuantumState, WavePacketSpec,
};
pub use fock::{closed_form_nm_entry, commutator_suite, FockEngine, FockLabel, SparseLadderOp};
