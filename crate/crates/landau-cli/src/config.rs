//! Run configuration: defaults, plain-text `key = value` files, and
//! command-line overrides, with validation before any suite runs.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use landau_core::QuadratureGrid;

/// Serialization of the report files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    /// Human-diffable comma-separated rows with a commented header.
    Csv,
    /// One object with a `header` and a `rows` array.
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => bail!("unknown format {other:?}; expected csv or json"),
        }
    }
}

/// Everything a suite run depends on. All physics defaults are the natural
/// units `eB = m_e = 1`; every random draw comes from the single `seed`.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Field strength with the charge absorbed (`eB`).
    pub eb: f64,
    /// Particle mass.
    pub mass: f64,
    /// Highest level of the circular-basis sweeps.
    pub n_max: usize,
    /// Lowest angular label of the circular-basis sweeps.
    pub m_min: i64,
    /// Highest level of the wave-packet sweeps.
    pub packet_n_max: usize,
    /// Momentum-window widths of the wave-packet sweeps.
    pub sigma_list: Vec<f64>,
    /// Momentum-window centers of the wave-packet sweeps.
    pub kx_list: Vec<f64>,
    /// Optional fixed half-width overriding every grid policy.
    pub grid_half_width: Option<f64>,
    /// Optional fixed points-per-axis overriding every grid policy.
    pub grid_points: Option<usize>,
    /// Ladder matrices against closed forms.
    pub tol_ladder: f64,
    /// Quadrature cells against ladder cells.
    pub tol_cross: f64,
    /// Packet momentum expectations against their oracles.
    pub tol_packet_momentum: f64,
    /// Packet angular-momentum expectations against their oracles.
    pub tol_packet_oam: f64,
    /// Matrix-element invariance under random gauge deformations.
    pub tol_covariance: f64,
    /// Relative drift of classical conserved quantities.
    pub tol_drift: f64,
    /// Classical canonical-momentum identities along trajectories.
    pub tol_identity: f64,
    /// Seed of the gauge-function draws (recorded in report headers).
    pub seed: u64,
    pub format: OutputFormat,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            eb: 1.0,
            mass: 1.0,
            n_max: 5,
            m_min: -5,
            packet_n_max: 3,
            sigma_list: vec![0.2, 1.0, 5.0],
            kx_list: vec![-2.0, 0.0, 1.5],
            grid_half_width: None,
            grid_points: None,
            tol_ladder: 1e-12,
            tol_cross: 1e-8,
            tol_packet_momentum: 1e-8,
            tol_packet_oam: 1e-6,
            tol_covariance: 1e-8,
            tol_drift: 1e-6,
            tol_identity: 1e-12,
            seed: 7,
            format: OutputFormat::Json,
            out_dir: PathBuf::from("reports"),
        }
    }
}

fn parse_number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    value
        .parse()
        .with_context(|| format!("key {key:?}: cannot parse {value:?}"))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|item| parse_number(key, item.trim()))
        .collect()
}

impl RunConfig {
    /// Applies a `key = value` file on top of the current values. Blank
    /// lines and `#` comments are ignored; unknown keys are errors.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read configuration file {}", path.display()))?;
        for (index, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').with_context(|| {
                format!(
                    "{}:{}: expected `key = value`, got {raw:?}",
                    path.display(),
                    index + 1
                )
            })?;
            self.set(key.trim(), value.trim())
                .with_context(|| format!("{}:{}", path.display(), index + 1))?;
        }
        Ok(())
    }

    /// Sets one configuration key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "eb" => self.eb = parse_number(key, value)?,
            "mass" | "m_e" => self.mass = parse_number(key, value)?,
            "n_max" => self.n_max = parse_number(key, value)?,
            "m_min" => self.m_min = parse_number(key, value)?,
            "packet_n_max" => self.packet_n_max = parse_number(key, value)?,
            "sigma_list" => self.sigma_list = parse_list(key, value)?,
            "kx_list" => self.kx_list = parse_list(key, value)?,
            "grid_half_width" => self.grid_half_width = Some(parse_number(key, value)?),
            "grid_points" => self.grid_points = Some(parse_number(key, value)?),
            "tol_ladder" => self.tol_ladder = parse_number(key, value)?,
            "tol_cross" => self.tol_cross = parse_number(key, value)?,
            "tol_packet_momentum" => self.tol_packet_momentum = parse_number(key, value)?,
            "tol_packet_oam" => self.tol_packet_oam = parse_number(key, value)?,
            "tol_covariance" => self.tol_covariance = parse_number(key, value)?,
            "tol_drift" => self.tol_drift = parse_number(key, value)?,
            "tol_identity" => self.tol_identity = parse_number(key, value)?,
            "seed" => self.seed = parse_number(key, value)?,
            "format" => self.format = value.parse()?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            other => bail!("unknown configuration key {other:?}"),
        }
        Ok(())
    }

    /// Rejects configurations no suite could run on.
    pub fn validate(&self) -> Result<()> {
        if !(self.eb > 0.0 && self.eb.is_finite()) {
            bail!("eb must be positive and finite, got {}", self.eb);
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            bail!("mass must be positive and finite, got {}", self.mass);
        }
        if self.m_min > self.n_max as i64 {
            bail!(
                "m_min = {} exceeds n_max = {}; the circular family requires m <= n",
                self.m_min,
                self.n_max
            );
        }
        for (name, value) in [
            ("tol_ladder", self.tol_ladder),
            ("tol_cross", self.tol_cross),
            ("tol_packet_momentum", self.tol_packet_momentum),
            ("tol_packet_oam", self.tol_packet_oam),
            ("tol_covariance", self.tol_covariance),
            ("tol_drift", self.tol_drift),
            ("tol_identity", self.tol_identity),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                bail!("{name} must be positive and finite, got {value}");
            }
        }
        if self.sigma_list.is_empty() {
            bail!("sigma_list must not be empty");
        }
        for &sigma in &self.sigma_list {
            if !(sigma > 0.0 && sigma.is_finite()) {
                bail!("sigma_list entries must be positive and finite, got {sigma}");
            }
        }
        if self.kx_list.is_empty() {
            bail!("kx_list must not be empty");
        }
        for &kx in &self.kx_list {
            if !kx.is_finite() {
                bail!("kx_list entries must be finite, got {kx}");
            }
        }
        if let Some(half) = self.grid_half_width {
            if !(half > 0.0 && half.is_finite()) {
                bail!("grid_half_width must be positive and finite, got {half}");
            }
        }
        if let Some(points) = self.grid_points {
            if points < 8 {
                bail!("grid_points must be at least 8, got {points}");
            }
        }
        Ok(())
    }

    /// Applies the optional grid overrides to a policy-chosen grid.
    pub fn grid(&self, policy: QuadratureGrid) -> QuadratureGrid {
        QuadratureGrid {
            half_width: self.grid_half_width.unwrap_or(policy.half_width),
            points_per_axis: self.grid_points.unwrap_or(policy.points_per_axis),
        }
    }

    /// The override grid when any override is set, otherwise `None`
    /// (letting the engine pick its per-state policy grid).
    pub fn grid_override(&self, policy: QuadratureGrid) -> Option<QuadratureGrid> {
        if self.grid_half_width.is_some() || self.grid_points.is_some() {
            Some(self.grid(policy))
        } else {
            None
        }
    }
}
