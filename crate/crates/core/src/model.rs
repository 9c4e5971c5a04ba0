//! Quantity types, power conversions and the scenario data model.
//!
//! All power levels are carried as [`PowerDbm`] and all ratios (gains,
//! losses, margins) as [`DecibelGain`]. Durations use [`Duration`] so that
//! slot arithmetic is exact.

use std::fmt;
use std::ops::{Add, Sub};
use std::time::Duration;

use thiserror::Error;

use crate::afh::AfhConfig;

/// Number of hop channels in the 2.4 GHz band plan.
pub const BLUETOOTH_CHANNELS: u16 = 79;

/// Representative carrier used for jammer path loss (MHz).
pub const REPRESENTATIVE_FREQ_MHZ: f64 = 2440.0;

/// Fixed processing gain of the full 79-channel hop set (dB).
pub const NOMINAL_PROCESSING_GAIN_DB: f64 = 19.0;

/// Required jamming-to-signal margin (dB).
pub const DEFAULT_MARGIN_DB: f64 = 3.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("power must be positive and finite, got {0} W")]
    NonPositivePower(f64),
    #[error("channel index {index} out of range for {num_channels} channels")]
    ChannelOutOfRange { index: u16, num_channels: u16 },
}

/// Absolute power in dBm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct PowerDbm(pub f64);

impl PowerDbm {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for PowerDbm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4} dBm", self.0)
    }
}

/// A ratio in dB: gains, losses and margins.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct DecibelGain(pub f64);

impl DecibelGain {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for DecibelGain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4} dB", self.0)
    }
}

impl Add<DecibelGain> for PowerDbm {
    type Output = PowerDbm;
    fn add(self, rhs: DecibelGain) -> PowerDbm {
        PowerDbm(self.0 + rhs.0)
    }
}

impl Sub<DecibelGain> for PowerDbm {
    type Output = PowerDbm;
    fn sub(self, rhs: DecibelGain) -> PowerDbm {
        PowerDbm(self.0 - rhs.0)
    }
}

/// A hop channel number, `0..=78` on the standard band plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChannelIndex(u16);

impl ChannelIndex {
    pub fn new(index: u16) -> Result<Self, ModelError> {
        if index < BLUETOOTH_CHANNELS {
            Ok(ChannelIndex(index))
        } else {
            Err(ModelError::ChannelOutOfRange {
                index,
                num_channels: BLUETOOTH_CHANNELS,
            })
        }
    }

    /// Builds an index that is additionally bounded by a link's channel count.
    pub fn on_link(index: u16, link: &BluetoothLinkSpec) -> Result<Self, ModelError> {
        if index < link.num_channels.min(BLUETOOTH_CHANNELS) {
            Ok(ChannelIndex(index))
        } else {
            Err(ModelError::ChannelOutOfRange {
                index,
                num_channels: link.num_channels,
            })
        }
    }

    pub(crate) const fn new_unchecked(index: u16) -> Self {
        ChannelIndex(index)
    }

    pub fn get(self) -> u16 {
        self.0
    }

    pub fn as_usize(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ChannelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Converts a transmit power in watts to dBm.
pub fn watts_to_dbm(watts: f64) -> Result<PowerDbm, ModelError> {
    if !(watts.is_finite() && watts > 0.0) {
        return Err(ModelError::NonPositivePower(watts));
    }
    Ok(PowerDbm(10.0 * (watts * 1000.0).log10()))
}

pub fn dbm_to_mw(power: PowerDbm) -> f64 {
    10f64.powf(power.0 / 10.0)
}

pub fn mw_to_dbm(milliwatts: f64) -> PowerDbm {
    PowerDbm(10.0 * milliwatts.log10())
}

/// The victim link: a frequency-hopping PAN between two nearby devices.
#[derive(Debug, Clone, PartialEq)]
pub struct BluetoothLinkSpec {
    /// Victim transmit power. Reported only, it does not enter the jamming criterion.
    pub tx_power: PowerDbm,
    pub sensitivity: PowerDbm,
    pub num_channels: u16,
    pub channel_bw_mhz: f64,
    pub slot_duration: Duration,
    /// Carrier of channel 0 (MHz).
    pub base_freq_mhz: f64,
    pub equipment_distance_m: f64,
}

impl Default for BluetoothLinkSpec {
    fn default() -> Self {
        BluetoothLinkSpec {
            tx_power: PowerDbm(0.0),
            sensitivity: PowerDbm(-70.0),
            num_channels: BLUETOOTH_CHANNELS,
            channel_bw_mhz: 1.0,
            slot_duration: Duration::from_micros(625),
            base_freq_mhz: 2402.0,
            equipment_distance_m: 0.75,
        }
    }
}

impl BluetoothLinkSpec {
    /// Carrier frequency of channel `ch` in MHz.
    pub fn channel_freq_mhz(&self, ch: ChannelIndex) -> f64 {
        self.base_freq_mhz + f64::from(ch.get()) * self.channel_bw_mhz
    }

    /// Total hop band in MHz.
    pub fn band_mhz(&self) -> f64 {
        f64::from(self.num_channels) * self.channel_bw_mhz
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JammerKind {
    BarrageFull,
    SubBandBarrage,
    Sweep,
}

impl JammerKind {
    /// Table bandwidth for this kind in MHz.
    pub fn default_bandwidth_mhz(self) -> f64 {
        match self {
            JammerKind::BarrageFull => 79.0,
            JammerKind::SubBandBarrage => 20.0,
            JammerKind::Sweep => 5.0,
        }
    }
}

/// Where a sub-band barrage block sits in the hop band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubBandAnchor {
    #[default]
    Center,
    /// Block starts at this channel.
    Lowest(u16),
}

#[derive(Debug, Clone, PartialEq)]
pub struct JammerSpec {
    pub kind: JammerKind,
    pub total_power_w: f64,
    pub bandwidth_mhz: f64,
    pub distance_m: f64,
    /// Time spent at each sweep position. Ignored by barrage kinds.
    pub sweep_dwell: Duration,
    pub anchor: SubBandAnchor,
}

impl JammerSpec {
    /// A jammer of `kind` with its table bandwidth, 10 m away, and a sweep
    /// dwell chosen so one pass over `link` takes one second.
    pub fn new(kind: JammerKind, total_power_w: f64, link: &BluetoothLinkSpec) -> Self {
        let bandwidth_mhz = kind.default_bandwidth_mhz().min(link.band_mhz());
        JammerSpec {
            kind,
            total_power_w,
            bandwidth_mhz,
            distance_m: 10.0,
            sweep_dwell: default_sweep_dwell(link, bandwidth_mhz),
            anchor: SubBandAnchor::Center,
        }
    }

    /// Number of whole channels the jammer band covers (fractional coverage rounds up).
    pub fn width_channels(&self, channel_bw_mhz: f64) -> u16 {
        width_in_channels(self.bandwidth_mhz, channel_bw_mhz)
    }
}

pub(crate) fn width_in_channels(bandwidth_mhz: f64, channel_bw_mhz: f64) -> u16 {
    let ratio = bandwidth_mhz / channel_bw_mhz;
    // absorb representation error so 20.000000000000004 stays 20
    let width = (ratio - 1e-9).ceil().max(1.0);
    width.min(f64::from(u16::MAX)) as u16
}

/// Dwell such that a full pass over all sweep positions lasts one second.
pub fn default_sweep_dwell(link: &BluetoothLinkSpec, bandwidth_mhz: f64) -> Duration {
    let width = width_in_channels(bandwidth_mhz, link.channel_bw_mhz);
    let positions = u32::from(link.num_channels.saturating_sub(width)) + 1;
    Duration::from_secs(1) / positions
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PropagationMode {
    /// Distance in meters and frequency in MHz plugged into the 32.4 dB
    /// formula as-is.
    #[default]
    PaperLiteral,
    /// Standard free-space loss with distance in km.
    PhysicalFspl,
}

/// Complete simulation input.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub link: BluetoothLinkSpec,
    pub jammer: JammerSpec,
    pub propagation: PropagationMode,
    /// Evaluate jammer path loss at each hop channel's own carrier instead
    /// of the representative 2440 MHz.
    pub per_channel_path_loss: bool,
    pub duration_slots: u64,
    pub seed: u64,
    pub afh: AfhConfig,
    pub margin: DecibelGain,
    /// Aggregation window for the time series, in slots.
    pub window_slots: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        let link = BluetoothLinkSpec::default();
        let jammer = JammerSpec::new(JammerKind::BarrageFull, 1.0, &link);
        Scenario {
            link,
            jammer,
            propagation: PropagationMode::PaperLiteral,
            per_channel_path_loss: false,
            duration_slots: 16_000,
            seed: 1,
            afh: AfhConfig::default(),
            margin: DecibelGain(DEFAULT_MARGIN_DB),
            window_slots: 1600,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Invariant violations found in a scenario. Empty means valid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, field: &'static str, message: impl Into<String>) {
        self.violations.push(Violation {
            field,
            message: message.into(),
        });
    }

    pub fn mentions(&self, field: &str) -> bool {
        self.violations.iter().any(|v| v.field == field)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate_scenario(s: &Scenario) -> ValidationReport {
    validate(s, false)
}

/// Like [`validate_scenario`], but also requires the device separation to
/// lie in the tabulated 0.30..=1.2 m range.
pub fn validate_scenario_strict(s: &Scenario) -> ValidationReport {
    validate(s, true)
}

fn finite(x: f64) -> bool {
    x.is_finite()
}

fn validate(s: &Scenario, strict_table1: bool) -> ValidationReport {
    let mut r = ValidationReport::default();
    let link = &s.link;
    let jam = &s.jammer;

    if !finite(link.tx_power.0) {
        r.push("link.tx_power", "must be finite");
    }
    if !finite(link.sensitivity.0) {
        r.push("link.sensitivity", "must be finite");
    }
    if link.num_channels < 1 {
        r.push("link.num_channels", "num_channels must be >= 1");
    } else if link.num_channels > BLUETOOTH_CHANNELS {
        r.push(
            "link.num_channels",
            format!("num_channels must be <= {BLUETOOTH_CHANNELS}"),
        );
    }
    if !(link.channel_bw_mhz.is_finite() && link.channel_bw_mhz > 0.0) {
        r.push("link.channel_bw", "channel_bw must be > 0");
    }
    if link.slot_duration.is_zero() {
        r.push("link.slot_duration", "slot_duration must be > 0");
    }
    if !(link.base_freq_mhz.is_finite() && link.base_freq_mhz > 0.0) {
        r.push("link.base_freq", "base_freq must be > 0");
    }
    if !(link.equipment_distance_m.is_finite() && link.equipment_distance_m > 0.0) {
        r.push("link.equipment_distance", "equipment_distance must be > 0");
    } else if strict_table1 && !(0.30..=1.2).contains(&link.equipment_distance_m) {
        r.push(
            "link.equipment_distance",
            "equipment_distance must lie in 0.30..=1.2 m",
        );
    }

    if !(jam.total_power_w.is_finite() && jam.total_power_w > 0.0) {
        r.push("jammer.total_power", "total_power must be > 0");
    }
    if !(jam.bandwidth_mhz.is_finite() && jam.bandwidth_mhz > 0.0) {
        r.push("jammer.bandwidth", "bandwidth must be > 0");
    } else if link.channel_bw_mhz > 0.0 && jam.bandwidth_mhz > link.band_mhz() * (1.0 + 1e-12) {
        r.push(
            "jammer.bandwidth",
            format!(
                "bandwidth exceeds band ({} MHz > {} MHz)",
                jam.bandwidth_mhz,
                link.band_mhz()
            ),
        );
    } else if jam.kind == JammerKind::SubBandBarrage {
        if let SubBandAnchor::Lowest(start) = jam.anchor {
            let width = jam.width_channels(link.channel_bw_mhz);
            if u32::from(start) + u32::from(width) > u32::from(link.num_channels) {
                r.push(
                    "jammer.anchor",
                    "sub-band block extends past the last channel",
                );
            }
        }
    }
    if !(jam.distance_m.is_finite() && jam.distance_m > 0.0) {
        r.push("jammer.distance", "distance must be > 0");
    }
    if jam.kind == JammerKind::Sweep && jam.sweep_dwell.is_zero() {
        r.push("jammer.sweep_dwell", "sweep requires sweep_dwell > 0");
    }

    if s.duration_slots < 1 {
        r.push("duration_slots", "duration_slots must be >= 1");
    }
    if s.window_slots < 1 {
        r.push("window_slots", "window_slots must be >= 1");
    }
    if !finite(s.margin.0) {
        r.push("margin", "must be finite");
    }

    let afh = &s.afh;
    if afh.ber_window < 1 {
        r.push("afh.ber_window", "ber_window must be >= 1");
    }
    if !(afh.bad_threshold > 0.0 && afh.bad_threshold <= 1.0) {
        r.push("afh.bad_threshold", "bad_threshold must lie in (0, 1]");
    }
    if afh.min_active < 1 || afh.min_active > usize::from(link.num_channels) {
        r.push("afh.min_active", "min_active must lie in 1..=num_channels");
    }

    r
}
