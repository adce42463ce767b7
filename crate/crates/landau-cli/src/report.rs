//! Report assembly and serialization: fixed-schema rows under a header that
//! records every input a rerun needs, written as JSON or CSV.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::Serialize;

use crate::config::RunConfig;

/// One comparison row. The schema is fixed: `suite, anchor, re, im,
/// expected_re, expected_im, deviation, pass`.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub suite: String,
    pub anchor: String,
    pub re: f64,
    pub im: f64,
    pub expected_re: f64,
    pub expected_im: f64,
    pub deviation: f64,
    pub pass: bool,
}

/// How a row participates in the run's exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// An equality check; a failure fails the run.
    Equality,
    /// A separation check that passes when two quantities stay apart; kept
    /// out of the exit-status gate, which only aggregates equality rows.
    ExpectedInequality,
}

/// One seeded gauge-function draw, echoed so a report is reproducible from
/// its header alone.
#[derive(Debug, Clone, Serialize)]
pub struct ChiDrawRecord {
    pub re_coeffs: Vec<f64>,
    pub im_coeffs: Vec<f64>,
    pub xy_coeff: f64,
}

/// Input echo preceding the rows.
#[derive(Debug, Clone, Serialize)]
pub struct ReportHeader {
    pub suite: String,
    pub seed: u64,
    pub eb: f64,
    pub mass: f64,
    pub n_max: usize,
    pub m_min: i64,
    pub sigma_list: Vec<f64>,
    pub kx_list: Vec<f64>,
    /// Gauge-function draws consumed by this suite, in draw order.
    pub chi_draws: Vec<ChiDrawRecord>,
}

impl ReportHeader {
    pub fn new(suite: &str, config: &RunConfig) -> Self {
        Self {
            suite: suite.to_string(),
            seed: config.seed,
            eb: config.eb,
            mass: config.mass,
            n_max: config.n_max,
            m_min: config.m_min,
            sigma_list: config.sigma_list.clone(),
            kx_list: config.kx_list.clone(),
            chi_draws: Vec::new(),
        }
    }
}

/// A header plus its rows, sorted by key before writing so the output is
/// independent of evaluation order.
#[derive(Debug, Clone)]
pub struct Report {
    pub header: ReportHeader,
    rows: Vec<(ReportRow, RowKind)>,
}

#[derive(Serialize)]
struct ReportView<'a> {
    header: &'a ReportHeader,
    rows: Vec<&'a ReportRow>,
}

impl Report {
    pub fn new(header: ReportHeader) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    /// Adds an equality row: `pass` iff `|value - expected| <= tolerance`.
    pub fn push_equality(
        &mut self,
        anchor: String,
        value: Complex64,
        expected: Complex64,
        tolerance: f64,
    ) {
        let deviation = (value - expected).norm();
        self.rows.push((
            ReportRow {
                suite: self.header.suite.clone(),
                anchor,
                re: value.re,
                im: value.im,
                expected_re: expected.re,
                expected_im: expected.im,
                deviation,
                pass: deviation <= tolerance,
            },
            RowKind::Equality,
        ));
    }

    /// Adds a separation row: `measured` must stay above `required`, so the
    /// recorded deviation is the shortfall `max(0, required - measured)` and
    /// the row passes when there is none.
    pub fn push_inequality(&mut self, anchor: String, measured: f64, required: f64) {
        let deviation = (required - measured).max(0.0);
        self.rows.push((
            ReportRow {
                suite: self.header.suite.clone(),
                anchor,
                re: measured,
                im: 0.0,
                expected_re: required,
                expected_im: 0.0,
                deviation,
                pass: deviation == 0.0,
            },
            RowKind::ExpectedInequality,
        ));
    }

    pub fn sort_rows(&mut self) {
        self.rows
            .sort_by(|(a, _), (b, _)| (&a.suite, &a.anchor).cmp(&(&b.suite, &b.anchor)));
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Rows that decide the exit status: every equality row must pass.
    pub fn gate_passes(&self) -> bool {
        self.rows
            .iter()
            .all(|(row, kind)| *kind == RowKind::ExpectedInequality || row.pass)
    }

    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|(row, _)| !row.pass).count()
    }

    pub fn write_json<W: Write>(&self, w: &mut W) -> io::Result<()> {
        let view = ReportView {
            header: &self.header,
            rows: self.rows.iter().map(|(row, _)| row).collect(),
        };
        serde_json::to_writer_pretty(&mut *w, &view)?;
        writeln!(w)
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        let h = &self.header;
        writeln!(w, "# suite: {}", h.suite)?;
        writeln!(w, "# seed: {}", h.seed)?;
        writeln!(
            w,
            "# eb: {} mass: {} n_max: {} m_min: {}",
            h.eb, h.mass, h.n_max, h.m_min
        )?;
        writeln!(w, "# sigma_list: {}", join(&h.sigma_list))?;
        writeln!(w, "# kx_list: {}", join(&h.kx_list))?;
        for (index, draw) in h.chi_draws.iter().enumerate() {
            writeln!(
                w,
                "# chi_draw {index}: re = {}; im = {}; xy = {}",
                join(&draw.re_coeffs),
                join(&draw.im_coeffs),
                draw.xy_coeff
            )?;
        }
        writeln!(w, "suite,anchor,re,im,expected_re,expected_im,deviation,pass")?;
        for (row, _) in &self.rows {
            writeln!(
                w,
                "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                row.suite,
                row.anchor,
                row.re,
                row.im,
                row.expected_re,
                row.expected_im,
                row.deviation,
                row.pass
            )?;
        }
        Ok(())
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
