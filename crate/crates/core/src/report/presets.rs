//! The three built-in jammer scenarios at 1, 2 and 5 W.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::DecibelGain;
use crate::model::{JammerKind, JammerSpec, Scenario, DEFAULT_MARGIN_DB};

pub const PRESET_POWERS_W: [u32; 3] = [1, 2, 5];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresetError {
    #[error("unknown preset `{0}`; expected scenario{{1,2,3}}:{{1,2,5}}w")]
    Unknown(String),
}

/// Which of the three tabulated jammers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PresetScenario {
    /// 79 MHz full-band barrage.
    Scenario1,
    /// 20 MHz sub-band barrage.
    Scenario2,
    /// 5 MHz sweep.
    Scenario3,
}

impl PresetScenario {
    pub const ALL: [PresetScenario; 3] = [
        PresetScenario::Scenario1,
        PresetScenario::Scenario2,
        PresetScenario::Scenario3,
    ];

    pub fn kind(self) -> JammerKind {
        match self {
            PresetScenario::Scenario1 => JammerKind::BarrageFull,
            PresetScenario::Scenario2 => JammerKind::SubBandBarrage,
            PresetScenario::Scenario3 => JammerKind::Sweep,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PresetScenario::Scenario1 => "scenario1",
            PresetScenario::Scenario2 => "scenario2",
            PresetScenario::Scenario3 => "scenario3",
        }
    }
}

/// A preset scenario at one of the tabulated powers, written `scenario3:5w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Preset {
    pub scenario: PresetScenario,
    pub power_w: u32,
}

impl Preset {
    /// All nine scenario × power combinations.
    pub fn grid() -> impl Iterator<Item = Preset> {
        PresetScenario::ALL.into_iter().flat_map(|scenario| {
            PRESET_POWERS_W
                .into_iter()
                .map(move |power_w| Preset { scenario, power_w })
        })
    }

    /// File-name friendly label, e.g. `scenario3_5w`.
    pub fn label(&self) -> String {
        format!("{}_{}w", self.scenario.name(), self.power_w)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}w", self.scenario.name(), self.power_w)
    }
}

impl FromStr for Preset {
    type Err = PresetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || PresetError::Unknown(s.to_string());
        let (name, power) = s.split_once(':').ok_or_else(unknown)?;
        let scenario = PresetScenario::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(unknown)?;
        let power_w: u32 = power
            .strip_suffix('w')
            .or_else(|| power.strip_suffix('W'))
            .and_then(|p| p.parse().ok())
            .ok_or_else(unknown)?;
        if !PRESET_POWERS_W.contains(&power_w) {
            return Err(unknown());
        }
        Ok(Preset { scenario, power_w })
    }
}

/// Builds the tabulated scenario: table bandwidth, 10 m, 3 dB margin.
pub fn preset(p: Preset) -> Scenario {
    let mut s = Scenario::default();
    s.jammer = JammerSpec::new(p.scenario.kind(), f64::from(p.power_w), &s.link);
    s.margin = DecibelGain(DEFAULT_MARGIN_DB);
    s
}

pub fn preset_by_name(name: &str) -> Result<Scenario, PresetError> {
    Ok(preset(name.parse()?))
}
