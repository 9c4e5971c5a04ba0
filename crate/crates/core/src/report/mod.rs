//! Scenario files, presets, CSV emission and run summaries.
//!
//! CSV output is locale-independent: `,` separator, `.` decimal point, dB
//! values to 4 decimals, times to 6. Missing values are empty cells.

mod figures;
mod presets;
mod scenario_file;
pub mod svg;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::engine::{EngineError, TimeSeries};
use crate::jammer::{per_channel_density_dbm, JammerError};
use crate::model::{
    DecibelGain, JammerKind, ModelError, Scenario, NOMINAL_PROCESSING_GAIN_DB,
    REPRESENTATIVE_FREQ_MHZ,
};
use crate::propagation::{effective_range_m, jamming_threshold_dbm, PropagationError};

pub use figures::{distance_grid, emit_figure_series, Column, FigureId, FigureSeries};
pub use presets::{preset, preset_by_name, Preset, PresetError, PresetScenario, PRESET_POWERS_W};
pub use scenario_file::{
    format_scenario, kind_name, mode_name, parse_mode, parse_scenario, ParseError, KEYS,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    FigureInput(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
    #[error(transparent)]
    Jammer(#[from] JammerError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl ReportError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        ReportError::Io {
            path: path.into(),
            source,
        }
    }
}

fn db(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:.4}")
    }
}

fn secs(x: f64) -> String {
    format!("{x:.6}")
}

fn frac(x: f64) -> String {
    format!("{x:.6}")
}

/// Column formatting: dB-like columns get 4 decimals, everything else 6.
fn cell(column: &str, x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else if column.ends_with("_db") || column.ends_with("_dbm") {
        db(x)
    } else if column.ends_with("_m") {
        format!("{x:.4}")
    } else {
        frac(x)
    }
}

pub fn write_figure_csv<W: Write>(series: &FigureSeries, out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(series.columns.iter().map(|c| c.name.as_str()))?;
    for row in 0..series.rows() {
        w.write_record(series.columns.iter().map(|c| cell(&c.name, c.values[row])))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub const TIMESERIES_HEADER: [&str; 9] = [
    "slot",
    "time_s",
    "channel",
    "occupied",
    "j_rx_dbm",
    "threshold_dbm",
    "jammed",
    "n_active",
    "pg_db",
];

/// One row per slot.
pub fn write_timeseries_csv<W: Write>(ts: &TimeSeries, out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TIMESERIES_HEADER)?;
    for o in &ts.outcomes {
        w.write_record([
            o.slot.to_string(),
            secs(o.time_s),
            o.channel.to_string(),
            u8::from(o.occupied).to_string(),
            o.j_rx.map_or(String::new(), |p| db(p.value())),
            db(o.threshold.value()),
            u8::from(o.jammed).to_string(),
            o.n_active.to_string(),
            db(o.pg.value()),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub const WINDOWS_HEADER: [&str; 7] = [
    "start_slot",
    "slots",
    "jammed_fraction",
    "mean_pg_db",
    "n_active_end",
    "threshold_end_dbm",
    "mean_j_rx_on_hit_dbm",
];

pub fn write_windows_csv<W: Write>(ts: &TimeSeries, out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(WINDOWS_HEADER)?;
    for a in &ts.windowed {
        w.write_record([
            a.start_slot.to_string(),
            a.slots.to_string(),
            frac(a.jammed_fraction),
            db(a.mean_pg_db),
            a.n_active_end.to_string(),
            db(a.threshold_end.value()),
            a.mean_j_rx_on_hit.map_or(String::new(), db),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, ReportError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| ReportError::io(path, e))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<(), ReportError> {
    w.flush().map_err(|e| ReportError::io(path, e))
}

/// Writes the per-slot CSV to `path`.
pub fn emit_timeseries_csv(ts: &TimeSeries, path: &Path) -> Result<(), ReportError> {
    let mut f = create(path)?;
    write_timeseries_csv(ts, &mut f)?;
    finish(f, path)
}

pub fn emit_figure_csv(series: &FigureSeries, path: &Path) -> Result<(), ReportError> {
    let mut f = create(path)?;
    write_figure_csv(series, &mut f)?;
    finish(f, path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// No slot was jammed.
    NoEffect,
    /// Some slots jammed, map above its floor at the end.
    Degraded,
    /// Active set pinned at `min_active` at the end.
    Floored,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NoEffect => "no-effect",
            Verdict::Degraded => "degraded",
            Verdict::Floored => "floored",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub label: String,
    pub kind: JammerKind,
    pub power_w: f64,
    pub mode: crate::model::PropagationMode,
    pub max_j_rx_dbm: Option<f64>,
    pub threshold_end_dbm: f64,
    pub jammed_fraction: f64,
    pub final_n_active: usize,
    /// Distance inside which the jammer beats the full-band threshold.
    pub effective_range_m: f64,
    pub verdict: Verdict,
}

pub fn verdict(scenario: &Scenario, ts: &TimeSeries) -> Verdict {
    if ts.jammed_slots() == 0 {
        Verdict::NoEffect
    } else if ts.final_n_active <= scenario.afh.min_active {
        Verdict::Floored
    } else {
        Verdict::Degraded
    }
}

pub fn summarize(
    label: impl Into<String>,
    scenario: &Scenario,
    ts: &TimeSeries,
) -> Result<SummaryRow, ReportError> {
    let density = per_channel_density_dbm(&scenario.jammer, scenario.link.channel_bw_mhz)?;
    let full_threshold = jamming_threshold_dbm(
        scenario.link.sensitivity,
        DecibelGain(NOMINAL_PROCESSING_GAIN_DB),
        scenario.margin,
    );
    Ok(SummaryRow {
        label: label.into(),
        kind: scenario.jammer.kind,
        power_w: scenario.jammer.total_power_w,
        mode: scenario.propagation,
        max_j_rx_dbm: ts.max_j_rx().map(|p| p.value()),
        threshold_end_dbm: ts.final_threshold.value(),
        jammed_fraction: ts.jammed_fraction(),
        final_n_active: ts.final_n_active,
        effective_range_m: effective_range_m(
            density,
            full_threshold,
            REPRESENTATIVE_FREQ_MHZ,
            scenario.propagation,
        ),
        verdict: verdict(scenario, ts),
    })
}

pub const SUMMARY_HEADER: [&str; 10] = [
    "scenario",
    "kind",
    "power_w",
    "mode",
    "max_j_rx_dbm",
    "threshold_end_dbm",
    "jammed_fraction",
    "final_n_active",
    "effective_range_m",
    "verdict",
];

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], out: W) -> Result<(), ReportError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record([
            r.label.clone(),
            kind_name(r.kind).to_string(),
            r.power_w.to_string(),
            mode_name(r.mode).to_string(),
            r.max_j_rx_dbm.map_or(String::new(), db),
            db(r.threshold_end_dbm),
            frac(r.jammed_fraction),
            r.final_n_active.to_string(),
            format!("{:.4}", r.effective_range_m),
            r.verdict.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn emit_summary(rows: &[SummaryRow], path: &Path) -> Result<(), ReportError> {
    let mut f = create(path)?;
    write_summary_csv(rows, &mut f)?;
    finish(f, path)
}
