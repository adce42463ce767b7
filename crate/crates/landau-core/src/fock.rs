//! Ladder-operator engine: exact sparse matrices of the observables on the
//! two-oscillator number basis.
//!
//! The circular family diagonalizes two commuting number operators; in that
//! basis, position and canonical momentum are finite combinations of the four
//! ladder operators, so every observable of interest becomes a banded sparse
//! matrix assembled by exact arithmetic on square roots of integers. This
//! gives a second computation of every matrix element that shares no code or
//! approximation (no grids, no finite differences) with the real-space
//! quadrature engine.
//!
//! Truncation is handled soundly rather than ignored: each operator carries
//! the maximum ladder degree it reaches in either mode, and an entry is only
//! reported when every intermediate state any term could visit lies inside
//! the cutoffs. Requests outside that interior return
//! [`LandauError::TruncationBoundary`] instead of a silently wrong number.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{LandauError, Result};
use crate::gauge::GaugeChoice;
use crate::ops::OperatorKind;
use crate::setup::MagneticSetup;
use crate::states::BasisClass;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Occupation numbers `(n_a, n_b)` of the two commuting oscillator modes.
///
/// The circular label maps as `n = n_a`, `m = n_a - n_b`: the first mode
/// counts the Landau level, the second lowers the angular momentum below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockLabel {
    /// Level-mode occupation.
    pub n_a: usize,
    /// Angular-mode occupation.
    pub n_b: usize,
}

impl FockLabel {
    /// Label of the circular state `(n, m)`; requires `m <= n`.
    pub fn from_nm(n: usize, m: i64) -> Result<Self> {
        if m > n as i64 {
            return Err(LandauError::InvalidQuantumNumbers(format!(
                "m = {m} exceeds n = {n}; the circular family requires m <= n"
            )));
        }
        Ok(Self {
            n_a: n,
            n_b: (n as i64 - m) as usize,
        })
    }

    /// The Landau level `n`.
    pub fn level(&self) -> usize {
        self.n_a
    }

    /// The angular momentum `m = n_a - n_b`.
    pub fn oam(&self) -> i64 {
        self.n_a as i64 - self.n_b as i64
    }
}

impl std::fmt::Display for FockLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(n={}, m={})", self.level(), self.oam())
    }
}

/// A sparse operator on the truncated two-mode number basis, tracking the
/// maximum ladder degree reached per mode so that exact entries can be told
/// apart from truncation artifacts.
#[derive(Debug, Clone)]
pub struct SparseLadderOp {
    n_a_cut: usize,
    n_b_cut: usize,
    deg_a: usize,
    deg_b: usize,
    entries: BTreeMap<(FockLabel, FockLabel), Complex64>,
}

impl SparseLadderOp {
    fn empty(n_a_cut: usize, n_b_cut: usize, deg_a: usize, deg_b: usize) -> Self {
        Self {
            n_a_cut,
            n_b_cut,
            deg_a,
            deg_b,
            entries: BTreeMap::new(),
        }
    }

    fn insert(&mut self, row: FockLabel, col: FockLabel, v: Complex64) {
        if v != Complex64::new(0.0, 0.0) {
            *self.entries.entry((row, col)).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
    }

    /// The identity on the truncated basis.
    pub fn identity(n_a_cut: usize, n_b_cut: usize) -> Self {
        let mut op = Self::empty(n_a_cut, n_b_cut, 0, 0);
        for n_a in 0..=n_a_cut {
            for n_b in 0..=n_b_cut {
                let l = FockLabel { n_a, n_b };
                op.insert(l, l, Complex64::new(1.0, 0.0));
            }
        }
        op
    }

    fn elementary(
        n_a_cut: usize,
        n_b_cut: usize,
        mode_a: bool,
        raising: bool,
    ) -> Self {
        let (deg_a, deg_b) = if mode_a { (1, 0) } else { (0, 1) };
        let mut op = Self::empty(n_a_cut, n_b_cut, deg_a, deg_b);
        for n_a in 0..=n_a_cut {
            for n_b in 0..=n_b_cut {
                let col = FockLabel { n_a, n_b };
                let occ = if mode_a { n_a } else { n_b };
                let (new_occ, factor) = if raising {
                    (occ + 1, ((occ + 1) as f64).sqrt())
                } else if occ == 0 {
                    continue;
                } else {
                    (occ - 1, (occ as f64).sqrt())
                };
                let row = if mode_a {
                    FockLabel { n_a: new_occ, n_b }
                } else {
                    FockLabel { n_a, n_b: new_occ }
                };
                if row.n_a > n_a_cut || row.n_b > n_b_cut {
                    continue;
                }
                op.insert(row, col, Complex64::new(factor, 0.0));
            }
        }
        op
    }

    /// The level-mode lowering operator `a`.
    pub fn lower_a(n_a_cut: usize, n_b_cut: usize) -> Self {
        Self::elementary(n_a_cut, n_b_cut, true, false)
    }

    /// The level-mode raising operator `a^dagger`.
    pub fn raise_a(n_a_cut: usize, n_b_cut: usize) -> Self {
        Self::elementary(n_a_cut, n_b_cut, true, true)
    }

    /// The angular-mode lowering operator `b`.
    pub fn lower_b(n_a_cut: usize, n_b_cut: usize) -> Self {
        Self::elementary(n_a_cut, n_b_cut, false, false)
    }

    /// The angular-mode raising operator `b^dagger`.
    pub fn raise_b(n_a_cut: usize, n_b_cut: usize) -> Self {
        Self::elementary(n_a_cut, n_b_cut, false, true)
    }

    /// The basis cutoffs `(n_a_cut, n_b_cut)`.
    pub fn cuts(&self) -> (usize, usize) {
        (self.n_a_cut, self.n_b_cut)
    }

    /// Maximum ladder degree reached per mode `(deg_a, deg_b)`.
    pub fn degrees(&self) -> (usize, usize) {
        (self.deg_a, self.deg_b)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.cuts() != other.cuts() {
            return Err(LandauError::InvalidParameter(format!(
                "ladder operators live on different truncations: {:?} vs {:?}",
                self.cuts(),
                other.cuts()
            )));
        }
        Ok(())
    }

    /// Scalar multiple.
    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v *= c;
        }
        out
    }

    /// Sum; the degree bound is the elementwise maximum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.deg_a = self.deg_a.max(other.deg_a);
        out.deg_b = self.deg_b.max(other.deg_b);
        for (&k, &v) in &other.entries {
            *out.entries.entry(k).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        Ok(out)
    }

    /// Difference, `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Product `self * other`; degree bounds add.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut by_col: BTreeMap<FockLabel, Vec<(FockLabel, Complex64)>> = BTreeMap::new();
        for (&(r, c), &v) in &self.entries {
            by_col.entry(c).or_default().push((r, v));
        }
        let mut out = Self::empty(
            self.n_a_cut,
            self.n_b_cut,
            self.deg_a + other.deg_a,
            self.deg_b + other.deg_b,
        );
        for (&(k, c), &w) in &other.entries {
            if let Some(rows) = by_col.get(&k) {
                for &(r, v) in rows {
                    out.insert(r, c, v * w);
                }
            }
        }
        Ok(out)
    }

    /// Hermitian adjoint.
    pub fn dagger(&self) -> Self {
        let mut out = Self::empty(self.n_a_cut, self.n_b_cut, self.deg_a, self.deg_b);
        for (&(r, c), &v) in &self.entries {
            out.insert(c, r, v.conj());
        }
        out
    }

    /// `[self, other] = self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    fn interior_label(&self, l: &FockLabel) -> bool {
        l.n_a + self.deg_a <= self.n_a_cut && l.n_b + self.deg_b <= self.n_b_cut
    }

    /// Whether the `(row, col)` entry is certified exact: every state any
    /// term of the operator can visit from either side stays inside the
    /// cutoffs.
    pub fn is_interior(&self, row: &FockLabel, col: &FockLabel) -> bool {
        self.interior_label(row) && self.interior_label(col)
    }

    /// The `(row, col)` entry, or [`LandauError::TruncationBoundary`] when
    /// the truncated value is not certified to match the untruncated
    /// operator.
    pub fn entry(&self, row: FockLabel, col: FockLabel) -> Result<Complex64> {
        if !self.is_interior(&row, &col) {
            return Err(LandauError::TruncationBoundary {
                row: row.to_string(),
                col: col.to_string(),
                degree: self.deg_a.max(self.deg_b),
                n_a: self.n_a_cut,
                n_b: self.n_b_cut,
            });
        }
        Ok(self
            .entries
            .get(&(row, col))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0)))
    }

    /// Largest magnitude among certified-interior entries.
    pub fn max_interior_abs(&self) -> f64 {
        self.entries
            .iter()
            .filter(|((r, c), _)| self.is_interior(r, c))
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }

    /// Largest interior deviation from `c * identity` (use `c = 0` to test
    /// vanishing).
    pub fn max_interior_deviation_from_identity(&self, c: Complex64) -> f64 {
        let mut d = 0.0_f64;
        for n_a in 0..=self.n_a_cut {
            for n_b in 0..=self.n_b_cut {
                let l = FockLabel { n_a, n_b };
                if !self.interior_label(&l) {
                    continue;
                }
                let v = self
                    .entries
                    .get(&(l, l))
                    .copied()
                    .unwrap_or(Complex64::new(0.0, 0.0));
                d = d.max((v - c).norm());
            }
        }
        for ((r, c_), v) in &self.entries {
            if r != c_ && self.is_interior(r, c_) {
                d = d.max(v.norm());
            }
        }
        d
    }
}

/// Builder for observable matrices on a fixed truncation.
#[derive(Debug, Clone, Copy)]
pub struct FockEngine {
    setup: MagneticSetup,
    n_a_cut: usize,
    n_b_cut: usize,
}

impl FockEngine {
    /// Engine with cutoffs sufficient for levels up to `n_max` and angular
    /// momenta down to `m_min`, with margin for operators of ladder degree
    /// up to four (products of two observables, as in the commutator suite).
    pub fn for_range(setup: &MagneticSetup, n_max: usize, m_min: i64) -> Self {
        let n_b_max = (n_max as i64 - m_min).max(0) as usize;
        Self {
            setup: *setup,
            n_a_cut: n_max + 4,
            n_b_cut: n_b_max + 4,
        }
    }

    /// Engine with explicit cutoffs.
    pub fn with_cuts(setup: &MagneticSetup, n_a_cut: usize, n_b_cut: usize) -> Self {
        Self {
            setup: *setup,
            n_a_cut,
            n_b_cut,
        }
    }

    /// The basis cutoffs `(n_a_cut, n_b_cut)`.
    pub fn cuts(&self) -> (usize, usize) {
        (self.n_a_cut, self.n_b_cut)
    }

    fn ladder(&self) -> (SparseLadderOp, SparseLadderOp, SparseLadderOp, SparseLadderOp) {
        (
            SparseLadderOp::lower_a(self.n_a_cut, self.n_b_cut),
            SparseLadderOp::raise_a(self.n_a_cut, self.n_b_cut),
            SparseLadderOp::lower_b(self.n_a_cut, self.n_b_cut),
            SparseLadderOp::raise_b(self.n_a_cut, self.n_b_cut),
        )
    }

    /// Position matrices `(x, y)`.
    pub fn position(&self) -> Result<(SparseLadderOp, SparseLadderOp)> {
        let (a, ad, b, bd) = self.ladder();
        let s = self.setup.magnetic_length / std::f64::consts::SQRT_2;
        let x = a.add(&ad)?.add(&b.add(&bd)?)?.scale(s.into());
        let y = a.sub(&ad)?.sub(&b.sub(&bd)?)?.scale(I * s);
        Ok((x, y))
    }

    /// Canonical momentum matrices `(p_x, p_y)` in the symmetric-gauge
    /// representation.
    fn canonical_momentum_sym(&self) -> Result<(SparseLadderOp, SparseLadderOp)> {
        let (a, ad, b, bd) = self.ladder();
        let s = 1.0 / (2.0 * std::f64::consts::SQRT_2 * self.setup.magnetic_length);
        let px = a.sub(&ad)?.add(&b.sub(&bd)?)?.scale(-I * s);
        let py = a.add(&ad)?.sub(&b.add(&bd)?)?.scale(s.into());
        Ok((px, py))
    }

    /// Canonical momentum matrices in the representation of a basis class.
    ///
    /// Moving the basis from the symmetric to the first Landau gauge is the
    /// unitary bilinear phase, under which the canonical momentum conjugates
    /// to `p_x + eB y / 2`, `p_y + eB x / 2`; positions are untouched.
    pub fn canonical_momentum(
        &self,
        class: BasisClass,
    ) -> Result<(SparseLadderOp, SparseLadderOp)> {
        let (px, py) = self.canonical_momentum_sym()?;
        match class {
            BasisClass::SymNM => Ok((px, py)),
            BasisClass::L1NM => {
                let (x, y) = self.position()?;
                let half_eb = Complex64::new(0.5 * self.setup.eb, 0.0);
                Ok((
                    px.add(&y.scale(half_eb))?,
                    py.add(&x.scale(half_eb))?,
                ))
            }
        }
    }

    fn potential_matrices(
        &self,
        gauge: &GaugeChoice,
    ) -> Result<(SparseLadderOp, SparseLadderOp)> {
        let (x, y) = self.position()?;
        let eb = self.setup.eb;
        match gauge {
            GaugeChoice::Symmetric => Ok((
                y.scale(Complex64::new(-0.5 * eb, 0.0)),
                x.scale(Complex64::new(0.5 * eb, 0.0)),
            )),
            GaugeChoice::Landau1 => Ok((
                y.scale(Complex64::new(-eb, 0.0)),
                x.scale(Complex64::new(0.0, 0.0)),
            )),
            GaugeChoice::Landau2 => Ok((
                x.scale(Complex64::new(0.0, 0.0)),
                x.scale(Complex64::new(eb, 0.0)),
            )),
            GaugeChoice::Deformed { .. } => Err(LandauError::Unsupported(
                "the ladder engine represents the three standard potentials only; \
                 deformed gauges are handled by the real-space engine"
                    .into(),
            )),
        }
    }

    /// The matrix of an operator on the `(n, m)` basis of the given class.
    ///
    /// The class fixes both the basis representation (through the conjugated
    /// canonical momentum) and the gauge entering mechanical quantities.
    pub fn build(&self, op: &OperatorKind, class: BasisClass) -> Result<SparseLadderOp> {
        let (px, py) = self.canonical_momentum(class)?;
        let (x, y) = self.position()?;
        let (eax, eay) = self.potential_matrices(&class.gauge())?;
        let eb = self.setup.eb;
        match op {
            OperatorKind::PCanX => Ok(px),
            OperatorKind::PMechX => px.add(&eax),
            OperatorKind::PConsX => px.add(&eax)?.add(&y.scale(eb.into())),
            OperatorKind::LCanZ => x.mul(&py)?.sub(&y.mul(&px)?),
            OperatorKind::LMechZ => {
                let l_can = x.mul(&py)?.sub(&y.mul(&px)?)?;
                l_can.add(&x.mul(&eay)?.sub(&y.mul(&eax)?)?)
            }
            OperatorKind::LConsZ => {
                let l_mech = self.build(&OperatorKind::LMechZ, class)?;
                let r2 = x.mul(&x)?.add(&y.mul(&y)?)?;
                l_mech.sub(&r2.scale((0.5 * eb).into()))
            }
            OperatorKind::Hamiltonian => {
                let pix = px.add(&eax)?;
                let piy = py.add(&eay)?;
                Ok(pix
                    .mul(&pix)?
                    .add(&piy.mul(&piy)?)?
                    .scale((1.0 / (2.0 * self.setup.mass)).into()))
            }
            OperatorKind::GccP(phys) => {
                let (pax, _) = self.potential_matrices(phys)?;
                px.add(&eax)?.sub(&pax)
            }
            OperatorKind::GccL(phys) => {
                let (pax, pay) = self.potential_matrices(phys)?;
                let l_mech = self.build(&OperatorKind::LMechZ, class)?;
                l_mech.sub(&x.mul(&pay)?.sub(&y.mul(&pax)?)?)
            }
        }
    }

    /// One matrix element `<n_row, m_row | O | n_col, m_col>` on the given
    /// class, building the operator on this engine's truncation.
    pub fn nm_entry(
        &self,
        op: &OperatorKind,
        class: BasisClass,
        row: (usize, i64),
        col: (usize, i64),
    ) -> Result<Complex64> {
        let matrix = self.build(op, class)?;
        matrix.entry(FockLabel::from_nm(row.0, row.1)?, FockLabel::from_nm(col.0, col.1)?)
    }
}

/// Closed-form same-level matrix element `<n, m_row | O | n, m_col>` of the
/// circular family, for the operators that admit one.
///
/// These are short explicit expressions in `sqrt(eB/2)` and the angular
/// ladder index `nu = n - m_col`, independent of both numerical engines, and
/// serve as the reference the engines are compared against.
pub fn closed_form_nm_entry(
    setup: &MagneticSetup,
    op: &OperatorKind,
    class: BasisClass,
    n: usize,
    m_row: i64,
    m_col: i64,
) -> Result<Complex64> {
    for &m in &[m_row, m_col] {
        if m > n as i64 {
            return Err(LandauError::InvalidQuantumNumbers(format!(
                "m = {m} exceeds n = {n}; the circular family requires m <= n"
            )));
        }
    }
    let s = (setup.eb / 2.0).sqrt();
    let nu = (n as i64 - m_col) as f64; // angular-mode occupation of the ket
    let zero = Complex64::new(0.0, 0.0);
    let delta = |d: i64| m_row == m_col + d;
    // Angular-mode ladder profile shared by all momentum entries:
    // sqrt(nu) at m_row = m_col + 1, -sqrt(nu + 1) at m_row = m_col - 1.
    let ladder = if delta(1) {
        Complex64::new(nu.sqrt(), 0.0)
    } else if delta(-1) {
        Complex64::new(-(nu + 1.0).sqrt(), 0.0)
    } else {
        zero
    };
    Ok(match (op, class) {
        (OperatorKind::PCanX, BasisClass::SymNM) => -I * (0.5 * s) * ladder,
        (OperatorKind::PCanX, BasisClass::L1NM) => -I * s * ladder,
        (OperatorKind::PMechX, _) => zero,
        (OperatorKind::PConsX, _) => -I * s * ladder,
        (OperatorKind::LCanZ, BasisClass::SymNM) => {
            if delta(0) {
                Complex64::new(m_col as f64, 0.0)
            } else {
                zero
            }
        }
        (OperatorKind::LCanZ, BasisClass::L1NM) => {
            if delta(0) {
                Complex64::new(m_col as f64, 0.0)
            } else if delta(2) {
                Complex64::new(0.5 * (nu * (nu - 1.0)).sqrt(), 0.0)
            } else if delta(-2) {
                Complex64::new(0.5 * ((nu + 1.0) * (nu + 2.0)).sqrt(), 0.0)
            } else {
                zero
            }
        }
        (OperatorKind::LMechZ, _) => {
            if delta(0) {
                Complex64::new((2 * n + 1) as f64, 0.0)
            } else {
                zero
            }
        }
        (OperatorKind::LConsZ, _) => {
            if delta(0) {
                Complex64::new(m_col as f64, 0.0)
            } else {
                zero
            }
        }
        (OperatorKind::Hamiltonian, _) => {
            if delta(0) {
                Complex64::new(setup.level_energy(n), 0.0)
            } else {
                zero
            }
        }
        (OperatorKind::GccP(_) | OperatorKind::GccL(_), _) => {
            return Err(LandauError::Unsupported(
                "no closed form tabulated for designated-potential operators; \
                 compare them against the conserved quantities instead"
                    .into(),
            ))
        }
    })
}

/// Interior deviations of the algebraic relations the observables must
/// satisfy, evaluated on truncated matrices.
#[derive(Debug, Clone, Copy)]
pub struct CommutatorReport {
    /// `max |[Pi_x, Pi_y] + i eB|` over interior entries.
    pub mechanical_pair: f64,
    /// `max |[Pt_x, Pt_y] - i eB|` for the conserved pair `Pt = (p_cons_x, p_cons_y)`.
    pub conserved_pair: f64,
    /// `max |[Pi_i, Pt_j]|` over the four mixed pairs.
    pub mixed_pairs: f64,
    /// `max |[p_cons_x, H]|` interior.
    pub momentum_with_h: f64,
    /// `max |[L_cons, H]|` interior.
    pub oam_with_h: f64,
    /// `max |[p_cons_x, L_cons]|` interior — must be genuinely nonzero: the
    /// two conserved generators close on each other, not on zero.
    pub momentum_oam_openness: f64,
}

/// Evaluates the commutator relations on the given class representation.
///
/// Requires cutoffs of at least 4 in each mode so that products of two
/// quadratic observables still have a nonempty certified interior.
pub fn commutator_suite(
    setup: &MagneticSetup,
    class: BasisClass,
    n_a_cut: usize,
    n_b_cut: usize,
) -> Result<CommutatorReport> {
    if n_a_cut < 4 || n_b_cut < 4 {
        return Err(LandauError::InvalidParameter(format!(
            "commutator suite needs cutoffs of at least 4 per mode, got ({n_a_cut}, {n_b_cut})"
        )));
    }
    let engine = FockEngine::with_cuts(setup, n_a_cut, n_b_cut);
    let eb = setup.eb;
    let (px, py) = engine.canonical_momentum(class)?;
    let (x, y) = engine.position()?;
    let (eax, eay) = engine.potential_matrices(&class.gauge())?;
    let pix = px.add(&eax)?;
    let piy = py.add(&eay)?;
    let ptx = pix.add(&y.scale(eb.into()))?;
    let pty = piy.sub(&x.scale(eb.into()))?;
    let h = engine.build(&OperatorKind::Hamiltonian, class)?;
    let l_cons = engine.build(&OperatorKind::LConsZ, class)?;

    let mechanical_pair = pix
        .commutator(&piy)?
        .max_interior_deviation_from_identity(-I * eb);
    let conserved_pair = ptx
        .commutator(&pty)?
        .max_interior_deviation_from_identity(I * eb);
    let mixed_pairs = [
        pix.commutator(&ptx)?,
        pix.commutator(&pty)?,
        piy.commutator(&ptx)?,
        piy.commutator(&pty)?,
    ]
    .iter()
    .map(|c| c.max_interior_abs())
    .fold(0.0, f64::max);
    let momentum_with_h = ptx.commutator(&h)?.max_interior_abs();
    let oam_with_h = l_cons.commutator(&h)?.max_interior_abs();
    let momentum_oam_openness = ptx.commutator(&l_cons)?.max_interior_abs();
    Ok(CommutatorReport {
        mechanical_pair,
        conserved_pair,
        mixed_pairs,
        momentum_with_h,
        oam_with_h,
        momentum_oam_openness,
    })
}
