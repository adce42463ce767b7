//! Real-space operator application and quadrature matrix elements.
//!
//! Nine operators act on evaluatable states: the canonical, mechanical, and
//! conserved momenta (x-components), the same three orbital angular momenta
//! (z-components), the Hamiltonian, and the two "designated-potential"
//! hybrids built by [`gcc_build`]. Derivatives are 4th-order central finite
//! differences (one code path serves every family, including arbitrary
//! harmonic-gauge deformations, where analytic derivatives would have to be
//! rederived per state). The Hamiltonian is applied as nested first-order
//! factors `(Pi_x^2 + Pi_y^2) / (2m)` rather than a hand-expanded second
//! derivative.
//!
//! Every first-order operator has the pointwise form
//!
//! ```text
//! (O psi)(x, y) = alpha(x, y) d_x psi + beta(x, y) d_y psi + gamma(x, y) psi
//! ```
//!
//! which the batch entry points exploit: one 9-point evaluation star per grid
//! node serves all requested operators and all bra states simultaneously,
//! keeping the full basis sweeps tractable.

use num_complex::Complex64;

use crate::error::{LandauError, Result};
use crate::gauge::GaugeChoice;
use crate::quad::{GridNodes, Parallelism, QuadratureGrid};
use crate::setup::MagneticSetup;
use crate::states::{BasisClass, QuantumState, WavePacketSpec};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The operators the engine can apply.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    /// Canonical momentum `-i d_x` (gauge-independent form, gauge-variant
    /// physics).
    PCanX,
    /// Mechanical momentum `-i d_x + e A_x`.
    PMechX,
    /// Conserved momentum `-i d_x + e A_x + eB y`.
    PConsX,
    /// Canonical angular momentum `-i (x d_y - y d_x)`.
    LCanZ,
    /// Mechanical angular momentum `L_can + e (x A_y - y A_x)`.
    LMechZ,
    /// Conserved angular momentum `L_mech - eB r^2 / 2`.
    LConsZ,
    /// `(Pi_x^2 + Pi_y^2) / (2 m)` with `Pi = -i grad + e A`.
    Hamiltonian,
    /// `p_mech - e A_phys,x` for a designated potential `A_phys`: the
    /// momentum that reduces to the canonical one in the gauge `A = A_phys`.
    GccP(GaugeChoice),
    /// `L_mech - e (x A_phys,y - y A_phys,x)`, the analogous angular
    /// momentum.
    GccL(GaugeChoice),
}

impl OperatorKind {
    /// Whether application requires a gauge for the state's own class.
    pub fn needs_gauge(&self) -> bool {
        !matches!(self, OperatorKind::PCanX | OperatorKind::LCanZ)
    }

    /// Short identifier used in diagnostics and reports.
    pub fn label(&self) -> String {
        fn gauge_tag(g: &GaugeChoice) -> &'static str {
            match g {
                GaugeChoice::Symmetric => "sym",
                GaugeChoice::Landau1 => "l1",
                GaugeChoice::Landau2 => "l2",
                GaugeChoice::Deformed { .. } => "deformed",
            }
        }
        match self {
            OperatorKind::PCanX => "p_can".into(),
            OperatorKind::PMechX => "p_mech".into(),
            OperatorKind::PConsX => "p_cons".into(),
            OperatorKind::LCanZ => "L_can".into(),
            OperatorKind::LMechZ => "L_mech".into(),
            OperatorKind::LConsZ => "L_cons".into(),
            OperatorKind::Hamiltonian => "H".into(),
            OperatorKind::GccP(g) => format!("p_gcc[{}]", gauge_tag(g)),
            OperatorKind::GccL(g) => format!("L_gcc[{}]", gauge_tag(g)),
        }
    }
}

/// Which base quantity a designated-potential operator extends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GccBase {
    /// Linear momentum (x-component).
    Momentum,
    /// Orbital angular momentum (z-component).
    Oam,
}

/// Builds the designated-potential operator for one of the three standard
/// gauges.
///
/// With `A_phys` the symmetric potential the angular variant acts identically
/// to the conserved angular momentum; with `A_phys` the first Landau
/// potential the momentum variant acts identically to the conserved momentum.
pub fn gcc_build(base: GccBase, a_phys: GaugeChoice) -> Result<OperatorKind> {
    if matches!(a_phys, GaugeChoice::Deformed { .. }) {
        return Err(LandauError::Unsupported(
            "designated-potential operators are defined for the three standard gauges only"
                .into(),
        ));
    }
    Ok(match base {
        GccBase::Momentum => OperatorKind::GccP(a_phys),
        GccBase::Oam => OperatorKind::GccL(a_phys),
    })
}

/// A quadrature result together with its refinement-based error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixElementResult {
    /// The integral on `grid_used`.
    pub value: Complex64,
    /// `|value(grid_used) - value(grid_used with 1.5x points)|`.
    pub error_estimate: f64,
    /// The base grid the value was computed on.
    pub grid_used: QuadratureGrid,
}

/// Dense result of [`RealSpaceEngine::nm_first_order_block`]:
/// `values[op][row][col]` is `<n, ms[row] | ops[op] | n, ms[col]>`.
#[derive(Debug, Clone)]
pub struct NmBlock {
    /// Angular labels shared by rows and columns, ascending.
    pub ms: Vec<i64>,
    /// Cell values indexed `[operator][bra row][ket column]`.
    pub values: Vec<Vec<Vec<Complex64>>>,
    /// The single grid every cell of the block was integrated on.
    pub grid_used: QuadratureGrid,
}

/// A first-order operator bound to a physical setup and (when required) a
/// gauge, ready for pointwise evaluation of its coefficients.
#[derive(Debug, Clone)]
struct PreparedOperator {
    setup: MagneticSetup,
    kind: OperatorKind,
    gauge: Option<GaugeChoice>,
}

impl PreparedOperator {
    fn new(
        setup: &MagneticSetup,
        kind: &OperatorKind,
        gauge: Option<&GaugeChoice>,
    ) -> Result<Self> {
        if kind.needs_gauge() && gauge.is_none() {
            return Err(LandauError::InvalidParameter(format!(
                "operator {} requires a gauge choice at application time",
                kind.label()
            )));
        }
        Ok(Self {
            setup: *setup,
            kind: kind.clone(),
            gauge: gauge.cloned(),
        })
    }

    /// Coefficients `(alpha, beta, gamma)` of the operator at `(x, y)`.
    fn terms(&self, x: f64, y: f64) -> (Complex64, Complex64, Complex64) {
        let eb = self.setup.eb;
        let zero = Complex64::new(0.0, 0.0);
        let potential = |g: &Option<GaugeChoice>| {
            g.as_ref()
                .map(|g| g.potential(&self.setup, x, y))
                .unwrap_or((0.0, 0.0))
        };
        match &self.kind {
            OperatorKind::PCanX => (-I, zero, zero),
            OperatorKind::PMechX => {
                let (ax, _) = potential(&self.gauge);
                (-I, zero, ax.into())
            }
            OperatorKind::PConsX => {
                let (ax, _) = potential(&self.gauge);
                (-I, zero, (ax + eb * y).into())
            }
            OperatorKind::LCanZ => (I * y, -I * x, zero),
            OperatorKind::LMechZ => {
                let (ax, ay) = potential(&self.gauge);
                (I * y, -I * x, (x * ay - y * ax).into())
            }
            OperatorKind::LConsZ => {
                let (ax, ay) = potential(&self.gauge);
                (
                    I * y,
                    -I * x,
                    (x * ay - y * ax - 0.5 * eb * (x * x + y * y)).into(),
                )
            }
            OperatorKind::GccP(phys) => {
                let (ax, _) = potential(&self.gauge);
                let (px, _) = phys.potential(&self.setup, x, y);
                (-I, zero, (ax - px).into())
            }
            OperatorKind::GccL(phys) => {
                let (ax, ay) = potential(&self.gauge);
                let (px, py) = phys.potential(&self.setup, x, y);
                (
                    I * y,
                    -I * x,
                    ((x * ay - y * ax) - (x * py - y * px)).into(),
                )
            }
            OperatorKind::Hamiltonian => {
                unreachable!("the Hamiltonian is applied through nested factors")
            }
        }
    }
}

/// 4th-order central first derivative of `f` at `t`.
fn fd4<F: Fn(f64) -> Complex64>(f: F, t: f64, h: f64) -> Complex64 {
    ((f(t - 2.0 * h) - f(t + 2.0 * h)) + 8.0 * (f(t + h) - f(t - h))) / (12.0 * h)
}

#[derive(Clone, Copy)]
enum Axis {
    X,
    Y,
}

/// One factor `Pi_axis f = -i d_axis f + e A_axis f`.
fn pi_axis<F: Fn(f64, f64) -> Complex64>(
    setup: &MagneticSetup,
    gauge: &GaugeChoice,
    axis: Axis,
    f: &F,
    h: f64,
    x: f64,
    y: f64,
) -> Complex64 {
    let d = match axis {
        Axis::X => fd4(|t| f(t, y), x, h),
        Axis::Y => fd4(|t| f(x, t), y, h),
    };
    let (ax, ay) = gauge.potential(setup, x, y);
    let a = match axis {
        Axis::X => ax,
        Axis::Y => ay,
    };
    -I * d + a * f(x, y)
}

enum FieldBody {
    FirstOrder(PreparedOperator),
    Hamiltonian { gauge: GaugeChoice },
}

/// The result of applying an operator to a state: a pure, pointwise
/// evaluatable complex field.
pub struct AppliedField {
    setup: MagneticSetup,
    state: QuantumState,
    body: FieldBody,
    fd_step: f64,
}

impl AppliedField {
    /// `(O psi)(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        match &self.body {
            FieldBody::FirstOrder(prep) => {
                let h = self.fd_step;
                let psi = |x, y| self.state.amplitude(x, y);
                let dx = fd4(|t| psi(t, y), x, h);
                let dy = fd4(|t| psi(x, t), y, h);
                let (alpha, beta, gamma) = prep.terms(x, y);
                alpha * dx + beta * dy + gamma * psi(x, y)
            }
            FieldBody::Hamiltonian { gauge } => {
                let h = self.fd_step;
                let psi = |x, y| self.state.amplitude(x, y);
                let pix = |x, y| pi_axis(&self.setup, gauge, Axis::X, &psi, h, x, y);
                let piy = |x, y| pi_axis(&self.setup, gauge, Axis::Y, &psi, h, x, y);
                let pixx = pi_axis(&self.setup, gauge, Axis::X, &pix, h, x, y);
                let piyy = pi_axis(&self.setup, gauge, Axis::Y, &piy, h, x, y);
                (pixx + piyy) / (2.0 * self.setup.mass)
            }
        }
    }
}

/// The quadrature engine: finite-difference step, parallelism mode, and the
/// physical setup, shared by all its operations.
#[derive(Debug, Clone)]
pub struct RealSpaceEngine {
    setup: MagneticSetup,
    fd_step: f64,
    parallelism: Parallelism,
}

impl RealSpaceEngine {
    /// Engine with the default step `1e-3 * l_B` and default parallelism.
    pub fn new(setup: &MagneticSetup) -> Self {
        Self {
            setup: *setup,
            fd_step: 1e-3 * setup.magnetic_length,
            parallelism: Parallelism::default(),
        }
    }

    /// Overrides the finite-difference step (physical units).
    pub fn with_fd_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self
    }

    /// Overrides the parallelism mode.
    pub fn with_parallelism(mut self, mode: Parallelism) -> Self {
        self.parallelism = mode;
        self
    }

    /// The physical setup the engine was built for.
    pub fn setup(&self) -> &MagneticSetup {
        &self.setup
    }

    /// The finite-difference step in use.
    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    /// Applies an operator to a state, yielding an evaluatable field.
    ///
    /// `gauge` is the potential of the state's own class and is required for
    /// every operator except the two canonical ones.
    pub fn apply(
        &self,
        op: &OperatorKind,
        gauge: Option<&GaugeChoice>,
        state: &QuantumState,
    ) -> Result<AppliedField> {
        let body = match op {
            OperatorKind::Hamiltonian => {
                let gauge = gauge.ok_or_else(|| {
                    LandauError::InvalidParameter(
                        "operator H requires a gauge choice at application time".into(),
                    )
                })?;
                FieldBody::Hamiltonian {
                    gauge: gauge.clone(),
                }
            }
            _ => FieldBody::FirstOrder(PreparedOperator::new(&self.setup, op, gauge)?),
        };
        Ok(AppliedField {
            setup: self.setup,
            state: state.clone(),
            body,
            fd_step: self.fd_step,
        })
    }

    fn reject_delta_normalized(state: &QuantumState) -> Result<()> {
        if state.is_delta_normalized() {
            return Err(LandauError::DeltaNormalizedState(state.label()));
        }
        Ok(())
    }

    /// Evaluates a state on every node of a realized grid, row-major
    /// (y outer, x inner).
    fn state_grid(&self, nodes: &GridNodes, state: &QuantumState) -> Vec<Complex64> {
        let rows = nodes.row_map(self.parallelism, |iy| {
            let y = nodes.points[iy];
            nodes
                .points
                .iter()
                .map(|&x| state.amplitude(x, y))
                .collect::<Vec<_>>()
        });
        rows.concat()
    }

    /// Weighted inner products of one cached grid against many:
    /// `out[j] = sum_nodes w2d * conj(bra[node]) * kets[j][node]`.
    fn weighted_dots(
        &self,
        nodes: &GridNodes,
        bra: &[Complex64],
        kets: &[&[Complex64]],
    ) -> Vec<Complex64> {
        let nx = nodes.len();
        let rows = nodes.row_map(self.parallelism, |iy| {
            let wy = nodes.weights[iy];
            let mut acc = vec![Complex64::new(0.0, 0.0); kets.len()];
            for ix in 0..nx {
                let w = wy * nodes.weights[ix];
                let b = bra[iy * nx + ix].conj() * w;
                for (a, ket) in acc.iter_mut().zip(kets) {
                    *a += b * ket[iy * nx + ix];
                }
            }
            acc
        });
        rows.into_iter()
            .fold(vec![Complex64::new(0.0, 0.0); kets.len()], |mut tot, row| {
                for (t, r) in tot.iter_mut().zip(row) {
                    *t += r;
                }
                tot
            })
    }

    /// Plain overlaps `<bra_i | ket_j>` for every pair, with error estimates.
    ///
    /// Unlike [`Self::matrix_element`] this accepts delta-normalized states:
    /// the caller is responsible for pairing them so the integrand decays
    /// (e.g. one continuum state against a normalizable one).
    pub fn inner_products(
        &self,
        bras: &[QuantumState],
        kets: &[QuantumState],
        grid: Option<QuadratureGrid>,
    ) -> Result<Vec<Vec<MatrixElementResult>>> {
        let grid = grid.unwrap_or_else(|| {
            let mut g = QuadratureGrid::for_nm(0, 0);
            for s in bras.iter().chain(kets) {
                g = QuadratureGrid::covering(g, QuadratureGrid::for_state(s));
            }
            g
        });
        let mut per_grid = Vec::with_capacity(2);
        for g in [grid, grid.refined()] {
            let nodes = g.nodes(&self.setup)?;
            let ket_grids: Vec<Vec<Complex64>> =
                kets.iter().map(|s| self.state_grid(&nodes, s)).collect();
            let ket_refs: Vec<&[Complex64]> = ket_grids.iter().map(|v| v.as_slice()).collect();
            let values: Vec<Vec<Complex64>> = bras
                .iter()
                .map(|b| {
                    let bra_grid = self.state_grid(&nodes, b);
                    self.weighted_dots(&nodes, &bra_grid, &ket_refs)
                })
                .collect();
            per_grid.push(values);
        }
        let (base, refined) = (per_grid.remove(0), per_grid.remove(0));
        Ok(base
            .into_iter()
            .zip(refined)
            .map(|(row_b, row_r)| {
                row_b
                    .into_iter()
                    .zip(row_r)
                    .map(|(vb, vr)| MatrixElementResult {
                        value: vb,
                        error_estimate: (vb - vr).norm(),
                        grid_used: grid,
                    })
                    .collect()
            })
            .collect())
    }

    /// `<bra | O | ket>` by quadrature, with an error estimate from 1.5x
    /// refinement.
    ///
    /// Both states must be normalizable; continuum-labelled states are
    /// rejected and must be wrapped in wave packets first.
    pub fn matrix_element(
        &self,
        bra: &QuantumState,
        op: &OperatorKind,
        gauge: Option<&GaugeChoice>,
        ket: &QuantumState,
        grid: Option<QuadratureGrid>,
    ) -> Result<MatrixElementResult> {
        Self::reject_delta_normalized(bra)?;
        Self::reject_delta_normalized(ket)?;
        let grid = grid.unwrap_or_else(|| {
            QuadratureGrid::covering(
                QuadratureGrid::for_state(bra),
                QuadratureGrid::for_state(ket),
            )
        });
        let field = self.apply(op, gauge, ket)?;
        let mut vals = [Complex64::new(0.0, 0.0); 2];
        for (slot, g) in vals.iter_mut().zip([grid, grid.refined()]) {
            let nodes = g.nodes(&self.setup)?;
            *slot = nodes.integrate(self.parallelism, |x, y| {
                bra.amplitude(x, y).conj() * field.eval(x, y)
            });
        }
        Ok(MatrixElementResult {
            value: vals[0],
            error_estimate: (vals[0] - vals[1]).norm(),
            grid_used: grid,
        })
    }

    /// Expectation values of several first-order operators in one state,
    /// sharing a single evaluation sweep (the Hamiltonian falls back to the
    /// general path).
    pub fn expectation_set(
        &self,
        ops: &[OperatorKind],
        gauge: Option<&GaugeChoice>,
        state: &QuantumState,
        grid: Option<QuadratureGrid>,
    ) -> Result<Vec<MatrixElementResult>> {
        Self::reject_delta_normalized(state)?;
        let grid = grid.unwrap_or_else(|| QuadratureGrid::for_state(state));

        let mut first_order = Vec::new();
        let mut placement = Vec::new(); // index into `first_order` or usize::MAX for H
        for op in ops {
            if matches!(op, OperatorKind::Hamiltonian) {
                placement.push(usize::MAX);
            } else {
                placement.push(first_order.len());
                first_order.push(PreparedOperator::new(&self.setup, op, gauge)?);
            }
        }

        let mut per_grid = Vec::with_capacity(2);
        for g in [grid, grid.refined()] {
            let nodes = g.nodes(&self.setup)?;
            let bra_grid = self.state_grid(&nodes, state);
            let cells =
                self.first_order_cells(&nodes, &first_order, &[&bra_grid], state);
            per_grid.push(cells.into_iter().map(|per_bra| per_bra[0]).collect::<Vec<_>>());
        }

        let mut out = Vec::with_capacity(ops.len());
        for (op, &place) in ops.iter().zip(&placement) {
            if place == usize::MAX {
                out.push(self.matrix_element(state, op, gauge, state, Some(grid))?);
            } else {
                let vb = per_grid[0][place];
                let vr = per_grid[1][place];
                out.push(MatrixElementResult {
                    value: vb,
                    error_estimate: (vb - vr).norm(),
                    grid_used: grid,
                });
            }
        }
        Ok(out)
    }

    /// Every matrix element `<n, m_row | O | n, m_col>` for the given
    /// first-order operators, both indices running over `m_min ..= n`, in the
    /// class's own gauge.
    ///
    /// The block shares one quadrature grid (by default sized for its widest
    /// member) and one finite-difference star per (node, column), so the cost
    /// is one grid pass per column instead of one per cell. Values are
    /// base-grid only; use [`Self::matrix_element`] when a per-cell
    /// refinement estimate is needed.
    pub fn nm_first_order_block(
        &self,
        class: BasisClass,
        n: usize,
        m_min: i64,
        ops: &[OperatorKind],
        grid: Option<QuadratureGrid>,
    ) -> Result<NmBlock> {
        if m_min > n as i64 {
            return Err(LandauError::InvalidQuantumNumbers(format!(
                "rung sweep needs m_min <= n, got m_min = {m_min}, n = {n}"
            )));
        }
        if ops.iter().any(|op| matches!(op, OperatorKind::Hamiltonian)) {
            return Err(LandauError::Unsupported(
                "the rung sweep covers first-order operators only; evaluate H \
                 through matrix_element"
                    .into(),
            ));
        }
        let gauge = class.gauge();
        let prepared: Vec<PreparedOperator> = ops
            .iter()
            .map(|op| PreparedOperator::new(&self.setup, op, Some(&gauge)))
            .collect::<Result<_>>()?;
        let ms: Vec<i64> = (m_min..=n as i64).collect();
        let states: Vec<QuantumState> = ms
            .iter()
            .map(|&m| class.state(&self.setup, n, m))
            .collect::<Result<_>>()?;
        let grid = grid.unwrap_or_else(|| {
            let widest = ms.iter().copied().max_by_key(|m| m.unsigned_abs()).unwrap_or(0);
            QuadratureGrid::for_nm(n, widest)
        });
        let nodes = grid.nodes(&self.setup)?;
        let bra_grids: Vec<Vec<Complex64>> = states
            .iter()
            .map(|s| self.state_grid(&nodes, s))
            .collect();
        let bra_refs: Vec<&[Complex64]> = bra_grids.iter().map(|v| v.as_slice()).collect();
        let zero = Complex64::new(0.0, 0.0);
        let mut values = vec![vec![vec![zero; ms.len()]; ms.len()]; ops.len()];
        for (col, ket) in states.iter().enumerate() {
            let cells = self.first_order_cells(&nodes, &prepared, &bra_refs, ket);
            for (iop, per_bra) in cells.into_iter().enumerate() {
                for (row, v) in per_bra.into_iter().enumerate() {
                    values[iop][row][col] = v;
                }
            }
        }
        Ok(NmBlock {
            ms,
            values,
            grid_used: grid,
        })
    }

    /// Expectation of a single operator in the normalized stripe-state packet
    /// (first Landau gauge). The packet regularizes the continuum label: in
    /// the limit of a narrow momentum window these numbers reproduce the
    /// distribution-valued continuum matrix elements.
    pub fn packet_expectation(
        &self,
        op: &OperatorKind,
        gauge: Option<&GaugeChoice>,
        spec: &WavePacketSpec,
        grid: Option<QuadratureGrid>,
    ) -> Result<MatrixElementResult> {
        let packet = QuantumState::packet_l1(&self.setup, *spec)?;
        Ok(self.expectation_set(std::slice::from_ref(op), gauge, &packet, grid)?[0])
    }

    /// Relative L2 residual of an eigenvalue relation,
    /// `|| (O - lambda) psi || / || psi ||` over the grid.
    ///
    /// Accepts delta-normalized states: over a finite domain their restriction
    /// is square-integrable, which is exactly what a pointwise relation test
    /// needs.
    pub fn relation_residual(
        &self,
        op: &OperatorKind,
        gauge: Option<&GaugeChoice>,
        state: &QuantumState,
        lambda: Complex64,
        grid: Option<QuadratureGrid>,
    ) -> Result<f64> {
        let grid = grid.unwrap_or_else(|| QuadratureGrid::for_state(state));
        let field = self.apply(op, gauge, state)?;
        let nodes = grid.nodes(&self.setup)?;
        let defect = nodes
            .integrate(self.parallelism, |x, y| {
                let d = field.eval(x, y) - lambda * state.amplitude(x, y);
                Complex64::new(d.norm_sqr(), 0.0)
            })
            .re;
        let norm = nodes
            .integrate(self.parallelism, |x, y| {
                Complex64::new(state.amplitude(x, y).norm_sqr(), 0.0)
            })
            .re;
        Ok((defect / norm).sqrt())
    }

    /// Relative L2 residual of the energy eigenvalue equation for a state's
    /// own level and gauge.
    pub fn eigen_residual(&self, state: &QuantumState, grid: Option<QuadratureGrid>) -> Result<f64> {
        self.relation_residual(
            &OperatorKind::Hamiltonian,
            Some(&state.gauge().clone()),
            state,
            Complex64::new(state.energy(), 0.0),
            grid,
        )
    }

    /// Fused sweep kernel: for each first-order operator and each cached bra
    /// grid, the quadrature sum `sum w2d conj(bra) (O ket)` using one 9-point
    /// star per node. Returns `cells[op][bra]`.
    fn first_order_cells(
        &self,
        nodes: &GridNodes,
        ops: &[PreparedOperator],
        bra_grids: &[&[Complex64]],
        ket: &QuantumState,
    ) -> Vec<Vec<Complex64>> {
        let nx = nodes.len();
        let h = self.fd_step;
        let (c1, c2) = (8.0 / (12.0 * h), 1.0 / (12.0 * h));
        let rows = nodes.row_map(self.parallelism, |iy| {
            let y = nodes.points[iy];
            let wy = nodes.weights[iy];
            let mut acc = vec![Complex64::new(0.0, 0.0); ops.len() * bra_grids.len()];
            for ix in 0..nx {
                let x = nodes.points[ix];
                let w = wy * nodes.weights[ix];
                let psi = ket.amplitude(x, y);
                let dx = c1 * (ket.amplitude(x + h, y) - ket.amplitude(x - h, y))
                    - c2 * (ket.amplitude(x + 2.0 * h, y) - ket.amplitude(x - 2.0 * h, y));
                let dy = c1 * (ket.amplitude(x, y + h) - ket.amplitude(x, y - h))
                    - c2 * (ket.amplitude(x, y + 2.0 * h) - ket.amplitude(x, y - 2.0 * h));
                for (iop, prep) in ops.iter().enumerate() {
                    let (alpha, beta, gamma) = prep.terms(x, y);
                    let field = alpha * dx + beta * dy + gamma * psi;
                    let wf = w * field;
                    for (ib, bra) in bra_grids.iter().enumerate() {
                        acc[iop * bra_grids.len() + ib] += bra[iy * nx + ix].conj() * wf;
                    }
                }
            }
            acc
        });
        let flat = rows.into_iter().fold(
            vec![Complex64::new(0.0, 0.0); ops.len() * bra_grids.len()],
            |mut tot, row| {
                for (t, r) in tot.iter_mut().zip(row) {
                    *t += r;
                }
                tot
            },
        );
        flat.chunks(bra_grids.len().max(1))
            .map(|c| c.to_vec())
            .collect()
    }
}
