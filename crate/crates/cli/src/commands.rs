use std::fmt;
use std::fs;
use std::path::Path;

use fhjam_core::report::{
    emit_figure_csv, emit_summary, emit_timeseries_csv, parse_mode, summarize, svg,
    write_windows_csv,
};
use fhjam_core::{
    emit_figure_series, format_scenario, parse_scenario, preset, preset_by_name, run as simulate,
    BlacklistTimeout, EngineError, FigureId, ParseError, Preset, PresetScenario, PropagationMode,
    ReportError, Scenario, SummaryRow, TimeSeries,
};
use rayon::prelude::*;

use crate::ScenarioArgs;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: scenario file, preset name, or a scenario failing validation.
    Invalid(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Io { .. } | ReportError::Csv(_) => CliError::Io(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

/// Slots in the AFH demonstration runs (100 s).
const DEMO_SLOTS: u64 = 160_000;

/// Sweep preset in free-space mode with no blacklist timeout. At 10 m the
/// literal formula never reaches the threshold, so the AFH figures default
/// to this variant.
fn demo_scenario(power_w: u32) -> Scenario {
    let mut s = preset(Preset {
        scenario: PresetScenario::Scenario3,
        power_w,
    });
    s.propagation = PropagationMode::PhysicalFspl;
    s.afh.blacklist_timeout = BlacklistTimeout::Never;
    s.duration_slots = DEMO_SLOTS;
    s
}

fn has_source(args: &ScenarioArgs) -> bool {
    args.scenario.is_some() || args.preset.is_some()
}

/// Resolves the scenario from file or preset, then applies flag overrides.
fn load(args: &ScenarioArgs, fallback: impl FnOnce() -> Scenario) -> Result<Scenario, CliError> {
    let mut s = if let Some(path) = &args.scenario {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        parse_scenario(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?
    } else if let Some(name) = &args.preset {
        preset_by_name(name).map_err(|e| CliError::Invalid(e.to_string()))?
    } else {
        fallback()
    };
    apply_overrides(&mut s, args)?;
    Ok(s)
}

fn apply_overrides(s: &mut Scenario, args: &ScenarioArgs) -> Result<(), CliError> {
    if let Some(n) = args.slots {
        s.duration_slots = n;
    }
    if let Some(seed) = args.seed {
        s.seed = seed;
    }
    if let Some(m) = &args.mode {
        s.propagation =
            parse_mode(m).ok_or_else(|| CliError::Invalid(format!("unknown mode `{m}`")))?;
    }
    Ok(())
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_windows(ts: &TimeSeries, path: &Path) -> Result<(), CliError> {
    let file =
        fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    write_windows_csv(ts, std::io::BufWriter::new(file))?;
    Ok(())
}

fn print_row(r: &SummaryRow) {
    println!(
        "{}: verdict {}, jammed {:.4}, final active {}, max j_rx {}",
        r.label,
        r.verdict,
        r.jammed_fraction,
        r.final_n_active,
        r.max_j_rx_dbm
            .map_or("n/a".to_string(), |v| format!("{v:.4} dBm")),
    );
}

fn label_for(args: &ScenarioArgs) -> String {
    if let Some(p) = &args.preset {
        p.clone()
    } else if let Some(path) = &args.scenario {
        path.file_stem()
            .map_or("scenario".into(), |s| s.to_string_lossy().into_owned())
    } else {
        "default".into()
    }
}

pub fn run(args: &ScenarioArgs, out: &Path, svg_out: bool) -> Result<(), CliError> {
    let s = load(args, Scenario::default)?;
    ensure_dir(out)?;
    let ts = simulate(&s)?;

    write_text(&out.join("scenario.scn"), &format_scenario(&s))?;
    emit_timeseries_csv(&ts, &out.join("timeseries.csv"))?;
    write_windows(&ts, &out.join("windows.csv"))?;
    for id in [FigureId::Fig4, FigureId::Fig5_7] {
        let series = emit_figure_series(id, &s, Some(&ts))?;
        emit_figure_csv(&series, &out.join(format!("{}.csv", id.file_stem())))?;
        if svg_out {
            write_text(
                &out.join(format!("{}.svg", id.file_stem())),
                &svg::render_svg(&series, &id.to_string()),
            )?;
        }
    }
    let row = summarize(label_for(args), &s, &ts)?;
    emit_summary(std::slice::from_ref(&row), &out.join("summary.csv"))?;
    print_row(&row);
    Ok(())
}

pub fn figure(
    number: &str,
    args: &ScenarioArgs,
    out: &Path,
    svg_out: bool,
) -> Result<(), CliError> {
    let id: FigureId = number.parse()?;
    let demo_power = match number {
        "5" => 1,
        "6" => 2,
        _ => 5,
    };
    let s = if id.needs_run() && !has_source(args) {
        load(args, || demo_scenario(demo_power))?
    } else {
        load(args, Scenario::default)?
    };
    ensure_dir(out)?;
    let ts = if id.needs_run() {
        Some(simulate(&s)?)
    } else {
        None
    };
    let series = emit_figure_series(id, &s, ts.as_ref())?;
    let stem = format!("fig{number}");
    emit_figure_csv(&series, &out.join(format!("{stem}.csv")))?;
    if svg_out {
        write_text(
            &out.join(format!("{stem}.svg")),
            &svg::render_svg(&series, &stem),
        )?;
    }
    println!("wrote {}", out.join(format!("{stem}.csv")).display());
    Ok(())
}

pub fn summary(grid: bool, args: &ScenarioArgs, out: &Path) -> Result<(), CliError> {
    ensure_dir(out)?;
    let rows: Vec<SummaryRow> = if grid {
        if has_source(args) {
            return Err(CliError::Invalid(
                "--grid runs the built-in presets; drop --scenario/--preset".into(),
            ));
        }
        let presets: Vec<Preset> = Preset::grid().collect();
        let results: Result<Vec<SummaryRow>, CliError> = presets
            .par_iter()
            .map(|p| {
                let mut s = preset(*p);
                apply_overrides(&mut s, args)?;
                let ts = simulate(&s)?;
                emit_timeseries_csv(&ts, &out.join(format!("{}.csv", p.label())))?;
                Ok(summarize(p.to_string(), &s, &ts)?)
            })
            .collect();
        results?
    } else {
        let s = load(args, Scenario::default)?;
        let ts = simulate(&s)?;
        vec![summarize(label_for(args), &s, &ts)?]
    };
    emit_summary(&rows, &out.join("summary.csv"))?;
    for r in &rows {
        print_row(r);
    }
    Ok(())
}
