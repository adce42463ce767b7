//! Classical counterpart: cyclotron trajectories and the conservation laws
//! the quantum operators mirror.
//!
//! A classical charge in the same uniform field moves on a circle at the
//! cyclotron frequency. Along any trajectory the mechanical momentum and
//! angular momentum oscillate, while the combinations
//!
//! ```text
//! p_cons = (m vx + eB y,  m vy - eB x),
//! L_cons = m (x vy - y vx) - eB r^2 / 2
//! ```
//!
//! are exactly constant, and encode the orbit center. The integrator is a
//! fixed-step classical Runge-Kutta scheme, deliberately free of any hidden
//! conservation enforcement, so that observed drifts measure the scheme and
//! not the model.

use std::io;

use crate::error::{LandauError, Result};
use crate::setup::MagneticSetup;

/// A phase-space sample along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryState {
    /// Time.
    pub t: f64,
    /// Position.
    pub x: f64,
    /// Position.
    pub y: f64,
    /// Velocity.
    pub vx: f64,
    /// Velocity.
    pub vy: f64,
}

impl TrajectoryState {
    /// Mechanical momentum `(m vx, m vy)`.
    pub fn p_mech(&self, setup: &MagneticSetup) -> (f64, f64) {
        (setup.mass * self.vx, setup.mass * self.vy)
    }

    /// Mechanical angular momentum `m (x vy - y vx)`.
    pub fn l_mech(&self, setup: &MagneticSetup) -> f64 {
        setup.mass * (self.x * self.vy - self.y * self.vx)
    }

    /// The conserved combinations at this sample.
    pub fn conserved(&self, setup: &MagneticSetup) -> ConservedSet {
        let eb = setup.eb;
        let (px, py) = self.p_mech(setup);
        let r2 = self.x * self.x + self.y * self.y;
        ConservedSet {
            p_cons_x: px + eb * self.y,
            p_cons_y: py - eb * self.x,
            l_cons_z: self.l_mech(setup) - 0.5 * eb * r2,
        }
    }

    /// Center of the cyclotron circle this sample lies on.
    ///
    /// Equal to `(-p_cons_y, p_cons_x) / eB`: the conserved momentum is the
    /// orbit-center coordinate in disguise, which is why it commutes with
    /// the Hamiltonian but its two components do not commute with each
    /// other.
    pub fn orbit_center(&self, setup: &MagneticSetup) -> (f64, f64) {
        let wc = setup.cyclotron_frequency;
        (self.x - self.vy / wc, self.y + self.vx / wc)
    }

    /// Radius of the cyclotron circle, `|v| / omega_c`.
    pub fn orbit_radius(&self, setup: &MagneticSetup) -> f64 {
        (self.vx * self.vx + self.vy * self.vy).sqrt() / setup.cyclotron_frequency
    }
}

/// The three exactly conserved quantities of the classical motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedSet {
    /// `m vx + eB y`.
    pub p_cons_x: f64,
    /// `m vy - eB x`.
    pub p_cons_y: f64,
    /// `m (x vy - y vx) - eB r^2 / 2`.
    pub l_cons_z: f64,
}

fn derivative(setup: &MagneticSetup, s: &[f64; 4]) -> [f64; 4] {
    let wc = setup.cyclotron_frequency;
    let [_, _, vx, vy] = *s;
    [vx, vy, -wc * vy, wc * vx]
}

/// Integrates the equation of motion with classical 4th-order Runge-Kutta at
/// a fixed step, returning every sample including the initial one. The final
/// step is shortened so the last sample lands exactly on `t_end`.
pub fn integrate(
    setup: &MagneticSetup,
    initial: &TrajectoryState,
    t_end: f64,
    dt: f64,
) -> Result<Vec<TrajectoryState>> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(LandauError::InvalidParameter(format!(
            "time step must be positive and finite, got {dt}"
        )));
    }
    if !(t_end.is_finite() && t_end > initial.t) {
        return Err(LandauError::InvalidParameter(format!(
            "end time {t_end} must be finite and after the initial time {}",
            initial.t
        )));
    }
    let span = t_end - initial.t;
    let steps = (span / dt).ceil() as usize;
    if steps > 50_000_000 {
        return Err(LandauError::InvalidParameter(format!(
            "requested {steps} integration steps; reduce the span or enlarge the step"
        )));
    }

    let mut out = Vec::with_capacity(steps + 1);
    out.push(*initial);
    let mut s = [initial.x, initial.y, initial.vx, initial.vy];
    let mut t = initial.t;
    for k in 0..steps {
        let h = if k + 1 == steps { t_end - t } else { dt };
        let k1 = derivative(setup, &s);
        let mut s2 = s;
        for i in 0..4 {
            s2[i] = s[i] + 0.5 * h * k1[i];
        }
        let k2 = derivative(setup, &s2);
        let mut s3 = s;
        for i in 0..4 {
            s3[i] = s[i] + 0.5 * h * k2[i];
        }
        let k3 = derivative(setup, &s3);
        let mut s4 = s;
        for i in 0..4 {
            s4[i] = s[i] + h * k3[i];
        }
        let k4 = derivative(setup, &s4);
        for i in 0..4 {
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += h;
        out.push(TrajectoryState {
            t,
            x: s[0],
            y: s[1],
            vx: s[2],
            vy: s[3],
        });
    }
    Ok(out)
}

/// Conservation and oscillation summary of a sampled trajectory.
#[derive(Debug, Clone, Copy)]
pub struct ConservationReport {
    /// `max_t |p_cons_x(t) - p_cons_x(0)| / max(|p_cons_x(0)|, 1)`.
    pub p_cons_x_drift: f64,
    /// Same for the y-component.
    pub p_cons_y_drift: f64,
    /// Same for the conserved angular momentum.
    pub l_cons_drift: f64,
    /// Peak-to-peak swing of the mechanical momentum x-component.
    pub p_mech_x_swing: f64,
    /// Peak-to-peak swing of the mechanical momentum y-component.
    pub p_mech_y_swing: f64,
    /// Peak-to-peak swing of the mechanical angular momentum.
    pub l_mech_swing: f64,
}

/// Measures the conserved-quantity drift and the mechanical-quantity swings
/// over a sampled trajectory.
pub fn conservation_report(
    setup: &MagneticSetup,
    trajectory: &[TrajectoryState],
) -> Result<ConservationReport> {
    let first = trajectory.first().ok_or_else(|| {
        LandauError::InvalidParameter("conservation report needs a nonempty trajectory".into())
    })?;
    let c0 = first.conserved(setup);
    let rel = |q0: f64, q: f64| (q - q0).abs() / q0.abs().max(1.0);
    let mut report = ConservationReport {
        p_cons_x_drift: 0.0,
        p_cons_y_drift: 0.0,
        l_cons_drift: 0.0,
        p_mech_x_swing: 0.0,
        p_mech_y_swing: 0.0,
        l_mech_swing: 0.0,
    };
    let mut min = [f64::INFINITY; 3];
    let mut max = [f64::NEG_INFINITY; 3];
    for s in trajectory {
        let c = s.conserved(setup);
        report.p_cons_x_drift = report.p_cons_x_drift.max(rel(c0.p_cons_x, c.p_cons_x));
        report.p_cons_y_drift = report.p_cons_y_drift.max(rel(c0.p_cons_y, c.p_cons_y));
        report.l_cons_drift = report.l_cons_drift.max(rel(c0.l_cons_z, c.l_cons_z));
        let (px, py) = s.p_mech(setup);
        for (i, q) in [px, py, s.l_mech(setup)].into_iter().enumerate() {
            min[i] = min[i].min(q);
            max[i] = max[i].max(q);
        }
    }
    report.p_mech_x_swing = max[0] - min[0];
    report.p_mech_y_swing = max[1] - min[1];
    report.l_mech_swing = max[2] - min[2];
    Ok(report)
}

/// Residuals of the canonical-momentum identities along a trajectory.
#[derive(Debug, Clone, Copy)]
pub struct IdentityReport {
    /// Largest residual of each identity over the usable samples:
    /// 0: polar-coordinate canonical angular momentum in the symmetric gauge
    ///    equals the conserved angular momentum,
    /// 1: Cartesian canonical momentum in the symmetric gauge plus `eB y / 2`
    ///    equals the conserved momentum,
    /// 2: Cartesian canonical momentum in the first Landau gauge equals the
    ///    conserved momentum outright,
    /// 3: canonical angular momentum in the first Landau gauge minus
    ///    `eB (x^2 - y^2) / 2` equals the conserved angular momentum.
    pub max_residual: [f64; 4],
    /// Samples too close to the coordinate origin for the polar angular
    /// velocity to be formed, skipped by the angular identities.
    pub skipped_samples: usize,
}

/// Checks, sample by sample, that the canonical momenta derived from the
/// Lagrangian in two different gauges both reduce to the same conserved
/// quantities. The angular identities go through the polar angular velocity
/// `phi_dot = (x vy - y vx) / r^2`, which is undefined at the origin; samples
/// with `r < 1e-9 l_B` are skipped and counted.
pub fn identity_report(
    setup: &MagneticSetup,
    trajectory: &[TrajectoryState],
) -> Result<IdentityReport> {
    if trajectory.is_empty() {
        return Err(LandauError::InvalidParameter(
            "identity report needs a nonempty trajectory".into(),
        ));
    }
    let eb = setup.eb;
    let m = setup.mass;
    let mut max_residual = [0.0_f64; 4];
    let mut skipped = 0usize;
    for s in trajectory {
        let c = s.conserved(setup);
        let r2 = s.x * s.x + s.y * s.y;

        // Cartesian identities are origin-safe.
        let p_sym_x = m * s.vx + 0.5 * eb * s.y; // m v - e A in the symmetric gauge
        max_residual[1] = max_residual[1].max((p_sym_x + 0.5 * eb * s.y - c.p_cons_x).abs());
        let p_l1_x = m * s.vx + eb * s.y; // m v - e A in the first Landau gauge
        max_residual[2] = max_residual[2].max((p_l1_x - c.p_cons_x).abs());

        let r_min = 1e-9 * setup.magnetic_length;
        if r2 < r_min * r_min {
            skipped += 1;
            continue;
        }
        let phi_dot = (s.x * s.vy - s.y * s.vx) / r2;
        let p_phi_sym = m * r2 * phi_dot - 0.5 * eb * r2;
        max_residual[0] = max_residual[0].max((p_phi_sym - c.l_cons_z).abs());
        let p_phi_l1 = m * r2 * phi_dot - eb * s.y * s.y;
        max_residual[3] =
            max_residual[3].max((p_phi_l1 - 0.5 * eb * (s.x * s.x - s.y * s.y) - c.l_cons_z).abs());
    }
    Ok(IdentityReport {
        max_residual,
        skipped_samples: skipped,
    })
}

/// Writes a trajectory with its conserved quantities as CSV
/// (`t,x,y,vx,vy,p_cons_x,p_cons_y,l_cons_z`, 17 significant digits).
pub fn write_csv<W: io::Write>(
    w: &mut W,
    setup: &MagneticSetup,
    trajectory: &[TrajectoryState],
) -> io::Result<()> {
    writeln!(w, "t,x,y,vx,vy,p_cons_x,p_cons_y,l_cons_z")?;
    for s in trajectory {
        let c = s.conserved(setup);
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            s.t, s.x, s.y, s.vx, s.vy, c.p_cons_x, c.p_cons_y, c.l_cons_z
        )?;
    }
    Ok(())
}
