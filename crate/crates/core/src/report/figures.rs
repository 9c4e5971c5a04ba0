//! Data series behind the link-budget and AFH-dynamics plots.
//!
//! | id     | columns                                                          |
//! |--------|------------------------------------------------------------------|
//! | fig2   | distance_m, pl_db                                                |
//! | fig3   | distance_m, j_rx_1w_dbm, j_rx_2w_dbm, j_rx_5w_dbm, threshold_dbm |
//! | fig4   | time_s, pg_db                                                    |
//! | fig5_7 | time_s, threshold_dbm, windowed_jammed_fraction, j_rx_on_hit_dbm |

use std::fmt;
use std::str::FromStr;

use crate::engine::TimeSeries;
use crate::jammer::per_channel_density_dbm;
use crate::model::{DecibelGain, Scenario, NOMINAL_PROCESSING_GAIN_DB, REPRESENTATIVE_FREQ_MHZ};
use crate::propagation::{jamming_threshold_dbm, path_loss_db, PathLossInput};

use super::presets::PRESET_POWERS_W;
use super::scenario_file::{kind_name, mode_name};
use super::ReportError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5_7,
}

impl FigureId {
    /// Whether the figure needs a simulated time series.
    pub fn needs_run(self) -> bool {
        matches!(self, FigureId::Fig4 | FigureId::Fig5_7)
    }

    pub fn file_stem(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5_7 => "fig5",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5_7 => "fig5_7",
        })
    }
}

impl FromStr for FigureId {
    type Err = ReportError;

    /// Accepts `2`..`7` or the `figN` / `fig5_7` spellings; 5, 6 and 7 share one schema.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let n = s.strip_prefix("fig").unwrap_or(s);
        match n {
            "2" => Ok(FigureId::Fig2),
            "3" => Ok(FigureId::Fig3),
            "4" => Ok(FigureId::Fig4),
            "5" | "6" | "7" | "5_7" => Ok(FigureId::Fig5_7),
            _ => Err(ReportError::FigureInput(format!("unknown figure `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    /// NaN marks a missing value.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSeries {
    pub figure_id: FigureId,
    pub columns: Vec<Column>,
    pub meta: Vec<(String, String)>,
}

impl FigureSeries {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }
}

/// Distance grid for the analytic figures: 0.5 m to 20 m in 0.5 m steps.
pub fn distance_grid() -> Vec<f64> {
    (1..=40).map(|i| f64::from(i) * 0.5).collect()
}

fn col(name: impl Into<String>, values: Vec<f64>) -> Column {
    Column {
        name: name.into(),
        values,
    }
}

fn meta(s: &Scenario) -> Vec<(String, String)> {
    vec![
        ("jammer.kind".into(), kind_name(s.jammer.kind).into()),
        ("jammer.power_w".into(), s.jammer.total_power_w.to_string()),
        (
            "jammer.bandwidth_mhz".into(),
            s.jammer.bandwidth_mhz.to_string(),
        ),
        ("jammer.distance_m".into(), s.jammer.distance_m.to_string()),
        ("propagation.mode".into(), mode_name(s.propagation).into()),
        ("run.seed".into(), s.seed.to_string()),
    ]
}

/// Builds the series for `id`. Run-based figures need `ts` from a
/// completed run of `scenario`; analytic ones ignore it.
pub fn emit_figure_series(
    id: FigureId,
    scenario: &Scenario,
    ts: Option<&TimeSeries>,
) -> Result<FigureSeries, ReportError> {
    let columns = match id {
        FigureId::Fig2 => fig2(scenario)?,
        FigureId::Fig3 => fig3(scenario)?,
        FigureId::Fig4 | FigureId::Fig5_7 => {
            let ts = ts.ok_or_else(|| {
                ReportError::FigureInput(format!("{id} needs a completed time series"))
            })?;
            if id == FigureId::Fig4 {
                fig4(ts)
            } else {
                fig5_7(ts)
            }
        }
    };
    Ok(FigureSeries {
        figure_id: id,
        columns,
        meta: meta(scenario),
    })
}

fn loss(d: f64, s: &Scenario) -> Result<f64, ReportError> {
    Ok(path_loss_db(PathLossInput::new(
        d,
        REPRESENTATIVE_FREQ_MHZ,
        s.propagation,
    ))?
    .value())
}

fn fig2(s: &Scenario) -> Result<Vec<Column>, ReportError> {
    let d = distance_grid();
    let pl = d.iter().map(|&d| loss(d, s)).collect::<Result<_, _>>()?;
    Ok(vec![col("distance_m", d), col("pl_db", pl)])
}

fn fig3(s: &Scenario) -> Result<Vec<Column>, ReportError> {
    let d = distance_grid();
    let mut columns = Vec::new();
    for w in PRESET_POWERS_W {
        let mut spec = s.jammer.clone();
        spec.total_power_w = f64::from(w);
        let density = per_channel_density_dbm(&spec, s.link.channel_bw_mhz)?;
        let rx = d
            .iter()
            .map(|&d| Ok(density.value() - loss(d, s)?))
            .collect::<Result<_, ReportError>>()?;
        columns.push(col(format!("j_rx_{w}w_dbm"), rx));
    }
    let threshold = jamming_threshold_dbm(
        s.link.sensitivity,
        DecibelGain(NOMINAL_PROCESSING_GAIN_DB),
        s.margin,
    );
    let n = d.len();
    columns.insert(0, col("distance_m", d));
    columns.push(col("threshold_dbm", vec![threshold.value(); n]));
    Ok(columns)
}

fn fig4(ts: &TimeSeries) -> Vec<Column> {
    vec![
        col("time_s", ts.outcomes.iter().map(|o| o.time_s).collect()),
        col("pg_db", ts.outcomes.iter().map(|o| o.pg.value()).collect()),
    ]
}

fn fig5_7(ts: &TimeSeries) -> Vec<Column> {
    let slot_s = ts.slot_duration.as_secs_f64();
    let ends: Vec<f64> = ts
        .windowed
        .iter()
        .map(|w| (w.start_slot + w.slots) as f64 * slot_s)
        .collect();
    vec![
        col("time_s", ends),
        col(
            "threshold_dbm",
            ts.windowed
                .iter()
                .map(|w| w.threshold_end.value())
                .collect(),
        ),
        col(
            "windowed_jammed_fraction",
            ts.windowed.iter().map(|w| w.jammed_fraction).collect(),
        ),
        col(
            "j_rx_on_hit_dbm",
            ts.windowed
                .iter()
                .map(|w| w.mean_j_rx_on_hit.unwrap_or(f64::NAN))
                .collect(),
        ),
    ]
}
