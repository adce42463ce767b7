//! Tensor-product Gauss–Legendre quadrature on square domains.
//!
//! Grids carry a sizing policy per state family: circular and stripe states
//! decay like `exp(-r^2 / (4 l_B^2))`, so a half-width of a few oscillator
//! widths suffices, while wave packets broaden in `y` with the momentum
//! window and in `x` with its reciprocal. Integration error is estimated by
//! re-evaluating on a grid with 1.5x the points per axis; note that this
//! detects under-resolution but not an under-sized domain, which is why the
//! sizing policies carry generous margins.

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{LandauError, Result};
use crate::setup::MagneticSetup;
use crate::states::{Family, QuantumState, WavePacketSpec};

/// Whether grid reductions run on the calling thread or across a thread pool.
///
/// Results are identical either way: row partial sums are always accumulated
/// in node order and combined in row order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    /// Single-threaded reduction.
    Sequential,
    /// Rows dispatched through the global thread pool (requires the
    /// `parallel` feature; silently equivalent to `Sequential` without it).
    Parallel,
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        }
    }
}

/// A square tensor-product Gauss–Legendre rule, described by its half-width
/// (in units of the magnetic length) and the number of points per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    /// Half-width of the square domain, in units of `l_B`.
    pub half_width: f64,
    /// Gauss–Legendre points along each axis.
    pub points_per_axis: usize,
}

impl QuadratureGrid {
    /// Grid sized for a circular state `(n, m)`: half-width
    /// `max(10, 3.5 sqrt(2n + |m| + 1) + 1)` magnetic lengths, 160 points per
    /// axis. The margin leaves the residual tail mass below 1e-12 so that
    /// matrix elements settle well inside 1e-8 even for the widest states.
    pub fn for_nm(n: usize, m: i64) -> Self {
        let breadth = (2 * n + m.unsigned_abs() as usize + 1) as f64;
        Self {
            half_width: (3.5 * breadth.sqrt() + 1.0).max(10.0),
            points_per_axis: 160,
        }
    }

    /// Grid sized for a stripe state `(n, kx)`: the oscillator breadth plus
    /// the guiding-center offset `|y0| = |kx| l_B^2`.
    pub fn for_stripe(setup: &MagneticSetup, n: usize, kx: f64) -> Self {
        let offset = (kx * setup.magnetic_length * setup.magnetic_length).abs()
            / setup.magnetic_length;
        let breadth = 3.0 * ((2 * n + 1) as f64).sqrt();
        Self {
            half_width: (offset + breadth + 2.0).max(8.0),
            points_per_axis: 160,
        }
    }

    /// Grid sized for a wave packet. The `y` extent grows with the broadened
    /// envelope width `sqrt(1 + sigma^2 l_B^4)` and the guiding-center offset,
    /// the `x` extent with the reciprocal width `1 / sigma`; the point count
    /// scales with the half-width to keep resolution fixed.
    pub fn for_packet(setup: &MagneticSetup, spec: &WavePacketSpec) -> Self {
        let lb = setup.magnetic_length;
        let sig_lb = spec.sigma * lb;
        let offset = (spec.kx_center * lb * lb).abs() / lb;
        let breadth = 3.5 * ((2 * spec.n + 1) as f64).sqrt();
        let broadened = 5.0 * (1.0 + sig_lb * sig_lb * lb * lb).sqrt() + 2.0;
        let half_width = (6.0 / sig_lb + 6.0)
            .max(offset + breadth + broadened)
            .max(8.0);
        Self {
            half_width,
            points_per_axis: ((12.0 * half_width).ceil() as usize).max(160),
        }
    }

    /// Grid sized for an arbitrary state, dispatching on its family
    /// (deformations keep the modulus, so they reuse the inner policy).
    pub fn for_state(state: &QuantumState) -> Self {
        match state.family() {
            Family::SymNM { n, m } | Family::L1NM { n, m } => Self::for_nm(*n, *m),
            Family::SymNKx { n, kx } | Family::L1NKx { n, kx } => {
                Self::for_stripe(state.setup(), *n, *kx)
            }
            Family::PacketL1(spec) => Self::for_packet(state.setup(), spec),
            Family::Deformed { inner, .. } => Self::for_state(inner),
        }
    }

    /// The grid covering both arguments of an inner product: the larger
    /// half-width and point count of the two.
    pub fn covering(a: Self, b: Self) -> Self {
        Self {
            half_width: a.half_width.max(b.half_width),
            points_per_axis: a.points_per_axis.max(b.points_per_axis),
        }
    }

    /// The refinement used for error estimation: 1.5x the points per axis on
    /// the same domain.
    pub fn refined(&self) -> Self {
        Self {
            half_width: self.half_width,
            points_per_axis: (self.points_per_axis * 3).div_ceil(2),
        }
    }

    /// One-dimensional nodes and weights in physical units.
    pub fn nodes(&self, setup: &MagneticSetup) -> Result<GridNodes> {
        if self.points_per_axis < 2 {
            return Err(LandauError::InvalidParameter(format!(
                "quadrature needs at least 2 points per axis, got {}",
                self.points_per_axis
            )));
        }
        let rule = GaussLegendre::new(self.points_per_axis).map_err(|e| {
            LandauError::InvalidParameter(format!("Gauss-Legendre rule: {e}"))
        })?;
        let half = self.half_width * setup.magnetic_length;
        let mut points = Vec::with_capacity(self.points_per_axis);
        let mut weights = Vec::with_capacity(self.points_per_axis);
        // gauss-quad returns nodes on [-1, 1] in descending order; flip so
        // the grid runs left to right.
        for &(node, weight) in rule.as_node_weight_pairs().iter().rev() {
            points.push(node * half);
            weights.push(weight * half);
        }
        Ok(GridNodes { points, weights })
    }
}

/// Realized one-dimensional nodes and weights of a [`QuadratureGrid`],
/// already scaled to the physical domain.
#[derive(Debug, Clone)]
pub struct GridNodes {
    /// Node coordinates, ascending.
    pub points: Vec<f64>,
    /// Matching weights (include the domain scale factor).
    pub weights: Vec<f64>,
}

impl GridNodes {
    /// Number of nodes per axis.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// True when the rule is empty (never produced by the constructors).
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integrates `f(x, y)` over the square via the tensor rule.
    pub fn integrate<F>(&self, mode: Parallelism, f: F) -> Complex64
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        let row = |iy: usize| -> Complex64 {
            let y = self.points[iy];
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, wx) in self.points.iter().zip(&self.weights) {
                acc += *wx * f(*x, y);
            }
            self.weights[iy] * acc
        };
        let rows = self.row_map(mode, row);
        rows.into_iter().sum()
    }

    /// Applies `row` to each y-index, in parallel when requested, returning
    /// results in row order so downstream reductions are deterministic.
    pub fn row_map<T, F>(&self, mode: Parallelism, row: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match mode {
            #[cfg(feature = "parallel")]
            Parallelism::Parallel => (0..self.len()).into_par_iter().map(row).collect(),
            _ => (0..self.len()).map(row).collect(),
        }
    }
}
