//! Line-oriented `key = value` scenario files.
//!
//! `#` starts a comment, blank lines are ignored, unknown keys are rejected
//! and missing keys fall back to the link defaults and the full-band
//! barrage jammer. [`format_scenario`] writes every key, so its output
//! parses back to the same scenario.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Duration;

use thiserror::Error;

use crate::afh::{AfhConfig, BlacklistTimeout, PgMode};
use crate::model::{
    default_sweep_dwell, validate_scenario, BluetoothLinkSpec, DecibelGain, JammerKind, JammerSpec,
    PowerDbm, PropagationMode, Scenario, SubBandAnchor, ValidationReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: invalid value `{value}` for `{key}`: expected {expected}")]
    InvalidValue {
        line: usize,
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("scenario fails validation: {0}")]
    Validation(ValidationReport),
}

pub const KEYS: &[&str] = &[
    "link.tx_dbm",
    "link.sensitivity_dbm",
    "link.channels",
    "link.channel_bw_mhz",
    "link.base_freq_mhz",
    "link.slot_us",
    "link.equipment_distance_m",
    "jammer.kind",
    "jammer.power_w",
    "jammer.bandwidth_mhz",
    "jammer.distance_m",
    "jammer.sweep_dwell_ms",
    "jammer.anchor",
    "propagation.mode",
    "propagation.per_channel",
    "afh.window",
    "afh.threshold",
    "afh.min_active",
    "afh.timeout_slots",
    "afh.pg_mode",
    "run.slots",
    "run.seed",
    "run.window_slots",
    "margin_db",
];

pub fn kind_name(kind: JammerKind) -> &'static str {
    match kind {
        JammerKind::BarrageFull => "barrage",
        JammerKind::SubBandBarrage => "subband",
        JammerKind::Sweep => "sweep",
    }
}

pub fn mode_name(mode: PropagationMode) -> &'static str {
    match mode {
        PropagationMode::PaperLiteral => "paper",
        PropagationMode::PhysicalFspl => "physical",
    }
}

pub fn parse_mode(s: &str) -> Option<PropagationMode> {
    match s {
        "paper" => Some(PropagationMode::PaperLiteral),
        "physical" => Some(PropagationMode::PhysicalFspl),
        _ => None,
    }
}

fn parse_kind(s: &str) -> Option<JammerKind> {
    match s {
        "barrage" => Some(JammerKind::BarrageFull),
        "subband" => Some(JammerKind::SubBandBarrage),
        "sweep" => Some(JammerKind::Sweep),
        _ => None,
    }
}

/// Decimal string in units of `10^-scale_digits` of `nanos`' unit, e.g.
/// `scale_digits = 6` renders nanoseconds as milliseconds.
fn format_scaled(nanos: u128, scale_digits: u32) -> String {
    let unit = 10u128.pow(scale_digits);
    let whole = nanos / unit;
    let frac = nanos % unit;
    if frac == 0 {
        return whole.to_string();
    }
    let frac = format!("{:0width$}", frac, width = scale_digits as usize);
    format!("{whole}.{}", frac.trim_end_matches('0'))
}

fn parse_scaled(value: &str, scale: f64) -> Option<Duration> {
    let x = f64::from_str(value).ok()?;
    if !x.is_finite() || x < 0.0 {
        return None;
    }
    let ns = (x * scale).round();
    (ns <= u64::MAX as f64).then(|| Duration::from_nanos(ns as u64))
}

struct Entry<'a> {
    line: usize,
    value: &'a str,
}

struct Fields<'a> {
    entries: BTreeMap<&'a str, Entry<'a>>,
}

impl<'a> Fields<'a> {
    fn get<T>(
        &self,
        key: &str,
        expected: &'static str,
        parse: impl Fn(&str) -> Option<T>,
    ) -> Result<Option<T>, ParseError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(e) => parse(e.value)
                .map(Some)
                .ok_or_else(|| ParseError::InvalidValue {
                    line: e.line,
                    key: key.to_string(),
                    value: e.value.to_string(),
                    expected,
                }),
        }
    }

    fn num<T: FromStr>(&self, key: &str, expected: &'static str) -> Result<Option<T>, ParseError> {
        self.get(key, expected, |v| v.parse().ok())
    }

    fn real(&self, key: &str) -> Result<Option<f64>, ParseError> {
        self.get(key, "a finite number", |v| {
            v.parse::<f64>().ok().filter(|x| x.is_finite())
        })
    }
}

/// Parses a scenario file. The result always passes validation.
pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let mut entries = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ParseError::Syntax {
                line,
                message: "expected `key = value`".into(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(ParseError::Syntax {
                line,
                message: "missing key".into(),
            });
        }
        if !KEYS.contains(&key) {
            return Err(ParseError::UnknownKey {
                line,
                key: key.to_string(),
            });
        }
        if entries.insert(key, Entry { line, value }).is_some() {
            return Err(ParseError::DuplicateKey {
                line,
                key: key.to_string(),
            });
        }
    }
    let f = Fields { entries };

    let defaults = Scenario::default();
    let mut link = BluetoothLinkSpec::default();
    if let Some(v) = f.real("link.tx_dbm")? {
        link.tx_power = PowerDbm(v);
    }
    if let Some(v) = f.real("link.sensitivity_dbm")? {
        link.sensitivity = PowerDbm(v);
    }
    if let Some(v) = f.num("link.channels", "an integer channel count")? {
        link.num_channels = v;
    }
    if let Some(v) = f.real("link.channel_bw_mhz")? {
        link.channel_bw_mhz = v;
    }
    if let Some(v) = f.real("link.base_freq_mhz")? {
        link.base_freq_mhz = v;
    }
    if let Some(v) = f.get(
        "link.slot_us",
        "a non-negative duration in microseconds",
        |v| parse_scaled(v, 1e3),
    )? {
        link.slot_duration = v;
    }
    if let Some(v) = f.real("link.equipment_distance_m")? {
        link.equipment_distance_m = v;
    }

    let kind = f
        .get("jammer.kind", "one of barrage, subband, sweep", parse_kind)?
        .unwrap_or(defaults.jammer.kind);
    let power = f
        .real("jammer.power_w")?
        .unwrap_or(defaults.jammer.total_power_w);
    let mut jammer = JammerSpec::new(kind, power, &link);
    if let Some(v) = f.real("jammer.bandwidth_mhz")? {
        jammer.bandwidth_mhz = v;
        if jammer.bandwidth_mhz > 0.0 {
            jammer.sweep_dwell = default_sweep_dwell(&link, v);
        }
    }
    if let Some(v) = f.real("jammer.distance_m")? {
        jammer.distance_m = v;
    }
    if let Some(v) = f.get(
        "jammer.sweep_dwell_ms",
        "a non-negative duration in milliseconds",
        |v| parse_scaled(v, 1e6),
    )? {
        jammer.sweep_dwell = v;
    }
    if let Some(v) = f.get("jammer.anchor", "`center` or a channel number", |v| {
        if v == "center" {
            Some(SubBandAnchor::Center)
        } else {
            v.parse().ok().map(SubBandAnchor::Lowest)
        }
    })? {
        jammer.anchor = v;
    }

    let propagation = f
        .get("propagation.mode", "`paper` or `physical`", parse_mode)?
        .unwrap_or(defaults.propagation);
    let per_channel_path_loss = f
        .num("propagation.per_channel", "`true` or `false`")?
        .unwrap_or(defaults.per_channel_path_loss);

    let mut afh = AfhConfig::default();
    if let Some(v) = f.num("afh.window", "an integer visit count")? {
        afh.ber_window = v;
    }
    if let Some(v) = f.real("afh.threshold")? {
        afh.bad_threshold = v;
    }
    if let Some(v) = f.num("afh.min_active", "an integer channel count")? {
        afh.min_active = v;
    }
    if let Some(v) = f.get(
        "afh.timeout_slots",
        "`never` or an integer slot count",
        |v| {
            if v == "never" {
                Some(BlacklistTimeout::Never)
            } else {
                v.parse().ok().map(BlacklistTimeout::After)
            }
        },
    )? {
        afh.blacklist_timeout = v;
    }
    if let Some(v) = f.get("afh.pg_mode", "`dynamic` or `static`", |v| match v {
        "dynamic" => Some(PgMode::Dynamic),
        "static" => Some(PgMode::Static19dB),
        _ => None,
    })? {
        afh.pg_mode = v;
    }

    let scenario = Scenario {
        link,
        jammer,
        propagation,
        per_channel_path_loss,
        duration_slots: f
            .num("run.slots", "an integer slot count")?
            .unwrap_or(defaults.duration_slots),
        seed: f
            .num("run.seed", "an unsigned 64-bit integer")?
            .unwrap_or(defaults.seed),
        afh,
        margin: f
            .real("margin_db")?
            .map(DecibelGain)
            .unwrap_or(defaults.margin),
        window_slots: f
            .num("run.window_slots", "an integer slot count")?
            .unwrap_or(defaults.window_slots),
    };

    let report = validate_scenario(&scenario);
    if report.is_valid() {
        Ok(scenario)
    } else {
        Err(ParseError::Validation(report))
    }
}

/// Writes every key of `s` in the format [`parse_scenario`] reads.
pub fn format_scenario(s: &Scenario) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    let link = &s.link;
    kv("link.tx_dbm", link.tx_power.0.to_string());
    kv("link.sensitivity_dbm", link.sensitivity.0.to_string());
    kv("link.channels", link.num_channels.to_string());
    kv("link.channel_bw_mhz", link.channel_bw_mhz.to_string());
    kv("link.base_freq_mhz", link.base_freq_mhz.to_string());
    kv(
        "link.slot_us",
        format_scaled(link.slot_duration.as_nanos(), 3),
    );
    kv(
        "link.equipment_distance_m",
        link.equipment_distance_m.to_string(),
    );

    let j = &s.jammer;
    kv("jammer.kind", kind_name(j.kind).to_string());
    kv("jammer.power_w", j.total_power_w.to_string());
    kv("jammer.bandwidth_mhz", j.bandwidth_mhz.to_string());
    kv("jammer.distance_m", j.distance_m.to_string());
    kv(
        "jammer.sweep_dwell_ms",
        format_scaled(j.sweep_dwell.as_nanos(), 6),
    );
    kv(
        "jammer.anchor",
        match j.anchor {
            SubBandAnchor::Center => "center".to_string(),
            SubBandAnchor::Lowest(c) => c.to_string(),
        },
    );

    kv("propagation.mode", mode_name(s.propagation).to_string());
    kv(
        "propagation.per_channel",
        s.per_channel_path_loss.to_string(),
    );

    let a = &s.afh;
    kv("afh.window", a.ber_window.to_string());
    kv("afh.threshold", a.bad_threshold.to_string());
    kv("afh.min_active", a.min_active.to_string());
    kv(
        "afh.timeout_slots",
        match a.blacklist_timeout {
            BlacklistTimeout::Never => "never".to_string(),
            BlacklistTimeout::After(n) => n.to_string(),
        },
    );
    kv(
        "afh.pg_mode",
        match a.pg_mode {
            PgMode::Dynamic => "dynamic",
            PgMode::Static19dB => "static",
        }
        .to_string(),
    );

    kv("run.slots", s.duration_slots.to_string());
    kv("run.seed", s.seed.to_string());
    kv("run.window_slots", s.window_slots.to_string());
    kv("margin_db", s.margin.0.to_string());
    out
}
