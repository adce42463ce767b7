//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by state constructors, engines, and report helpers.
#[derive(Debug, Error)]
pub enum LandauError {
    /// Quantum numbers outside the physical family, e.g. `m > n` for the
    /// circular-gauge eigenstates (the second ladder index `n - m` would be
    /// negative) or a negative principal index.
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    /// A physical parameter that must be strictly positive was not
    /// (field strength, mass, packet width, grid spacing, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An inner-product style quantity was requested for a state that is
    /// delta-normalized (continuum-labelled), so the integral diverges.
    #[error(
        "operation undefined for delta-normalized state {0}: \
         plane-wave-labelled states have no finite norm; use a wave packet \
         or the discrete (n, m) family instead"
    )]
    DeltaNormalizedState(String),

    /// A ladder-matrix entry was requested outside the interior region in
    /// which the truncated matrix equals the infinite-dimensional one.
    #[error(
        "truncated ladder matrix is not exact at ({row}, {col}): \
         operator reaches degree {degree} and the cutoffs are ({n_a}, {n_b}); \
         enlarge the basis so the requested entry is interior"
    )]
    TruncationBoundary {
        row: String,
        col: String,
        degree: usize,
        n_a: usize,
        n_b: usize,
    },

    /// The requested operator/state combination is not defined, e.g. a
    /// gauge-fixed operator applied in a basis the engine cannot represent.
    #[error("unsupported combination: {0}")]
    Unsupported(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, LandauError>;
