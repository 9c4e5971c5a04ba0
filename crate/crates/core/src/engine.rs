//! Slot-driven simulation loop.
//!
//! Each slot, in order: the sweep advances by one slot duration, a hop
//! channel is drawn from the current map, the jamming threshold is formed
//! from the current processing gain, the received jamming level on the hop
//! channel is compared against it, and the visit is recorded in the map.
//! The emitted outcome carries the pre-update gain and active count.

use std::time::Duration;

use thiserror::Error;

use crate::afh::{
    hop_rng, next_hop, processing_gain_db, record_slot, AfhError, ChannelMap, HopRng,
};
use crate::jammer::{advance_sweep, jammer_rx_dbm_at, JammerError, JammerState};
use crate::model::{
    validate_scenario, ChannelIndex, DecibelGain, JammerKind, PowerDbm, Scenario, ValidationReport,
    REPRESENTATIVE_FREQ_MHZ,
};
use crate::propagation::jamming_threshold_dbm;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("invalid scenario: {0}")]
    Validation(ValidationReport),
    #[error(transparent)]
    Jammer(#[from] JammerError),
    #[error(transparent)]
    Afh(#[from] AfhError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotOutcome {
    pub slot: u64,
    pub time_s: f64,
    pub channel: ChannelIndex,
    pub occupied: bool,
    /// `None` when the jammer does not cover the hop channel.
    pub j_rx: Option<PowerDbm>,
    pub threshold: PowerDbm,
    pub jammed: bool,
    pub n_active: usize,
    pub pg: DecibelGain,
}

/// Aggregates over one window of consecutive slots.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowAggregate {
    pub start_slot: u64,
    pub slots: u64,
    pub jammed_fraction: f64,
    pub mean_pg_db: f64,
    pub n_active_end: usize,
    pub threshold_end: PowerDbm,
    /// Mean received level over slots whose hop landed in the jammer band.
    pub mean_j_rx_on_hit: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub outcomes: Vec<SlotOutcome>,
    pub slot_duration: Duration,
    pub window_slots: u64,
    pub windowed: Vec<WindowAggregate>,
    /// Active channels after the last slot was recorded.
    pub final_n_active: usize,
    pub final_pg: DecibelGain,
    pub final_threshold: PowerDbm,
}

impl TimeSeries {
    pub fn jammed_slots(&self) -> usize {
        self.outcomes.iter().filter(|o| o.jammed).count()
    }

    pub fn jammed_fraction(&self) -> f64 {
        if self.outcomes.is_empty() {
            return 0.0;
        }
        self.jammed_slots() as f64 / self.outcomes.len() as f64
    }

    pub fn max_j_rx(&self) -> Option<PowerDbm> {
        self.outcomes
            .iter()
            .filter_map(|o| o.j_rx)
            .fold(None, |acc, x| match acc {
                Some(a) if a >= x => Some(a),
                _ => Some(x),
            })
    }
}

fn aggregate(outcomes: &[SlotOutcome], window: u64) -> Vec<WindowAggregate> {
    outcomes
        .chunks(window.max(1) as usize)
        .map(|chunk| {
            let n = chunk.len() as f64;
            let last = chunk.last().expect("chunks are non-empty");
            let hits: Vec<f64> = chunk.iter().filter_map(|o| o.j_rx.map(|p| p.0)).collect();
            WindowAggregate {
                start_slot: chunk[0].slot,
                slots: chunk.len() as u64,
                jammed_fraction: chunk.iter().filter(|o| o.jammed).count() as f64 / n,
                mean_pg_db: chunk.iter().map(|o| o.pg.0).sum::<f64>() / n,
                n_active_end: last.n_active,
                threshold_end: last.threshold,
                mean_j_rx_on_hit: if hits.is_empty() {
                    None
                } else {
                    Some(hits.iter().sum::<f64>() / hits.len() as f64)
                },
            }
        })
        .collect()
}

/// Sweep dwell rounded to the nearest whole number of slots, at least one.
pub fn dwell_in_slots(dwell: Duration, slot: Duration) -> u64 {
    let slot_ns = slot.as_nanos();
    let slots = (dwell.as_nanos() + slot_ns / 2) / slot_ns;
    slots.max(1) as u64
}

/// One slot of the simulation. Updates the jammer, map and generator in place.
pub fn step(
    scenario: &Scenario,
    jammer: &mut JammerState,
    map: &mut ChannelMap,
    rng: &mut HopRng,
    slot: u64,
) -> Result<SlotOutcome, EngineError> {
    let link = &scenario.link;
    if jammer.spec().kind == JammerKind::Sweep {
        *jammer = advance_sweep(jammer, link.slot_duration)?;
    }
    let channel = next_hop(rng, map)?;
    let pg = processing_gain_db(map, &scenario.afh);
    let threshold = jamming_threshold_dbm(link.sensitivity, pg, scenario.margin);
    let freq = if scenario.per_channel_path_loss {
        link.channel_freq_mhz(channel)
    } else {
        REPRESENTATIVE_FREQ_MHZ
    };
    let j_rx = jammer_rx_dbm_at(jammer, channel, link, freq, scenario.propagation)?;
    let jammed = j_rx.is_some_and(|j| j >= threshold);
    let n_active = map.n_active();
    record_slot(map, channel, jammed, slot)?;
    Ok(SlotOutcome {
        slot,
        time_s: slot as f64 * link.slot_duration.as_secs_f64(),
        channel,
        occupied: j_rx.is_some(),
        j_rx,
        threshold,
        jammed,
        n_active,
        pg,
    })
}

/// Live simulation state for stepping a scenario slot by slot.
#[derive(Debug, Clone)]
pub struct Simulation {
    scenario: Scenario,
    jammer: JammerState,
    map: ChannelMap,
    rng: HopRng,
    slot: u64,
}

impl Simulation {
    pub fn new(scenario: &Scenario) -> Result<Self, EngineError> {
        let report = validate_scenario(scenario);
        if !report.is_valid() {
            return Err(EngineError::Validation(report));
        }
        let mut spec = scenario.jammer.clone();
        let slot = scenario.link.slot_duration;
        spec.sweep_dwell =
            Duration::from_nanos(slot.as_nanos() as u64 * dwell_in_slots(spec.sweep_dwell, slot));
        Ok(Simulation {
            jammer: JammerState::new(spec, &scenario.link),
            map: ChannelMap::new(scenario.link.num_channels, scenario.afh.clone()),
            rng: hop_rng(scenario.seed),
            slot: 0,
            scenario: scenario.clone(),
        })
    }

    pub fn step(&mut self) -> Result<SlotOutcome, EngineError> {
        let out = step(
            &self.scenario,
            &mut self.jammer,
            &mut self.map,
            &mut self.rng,
            self.slot,
        )?;
        self.slot += 1;
        Ok(out)
    }

    pub fn map(&self) -> &ChannelMap {
        &self.map
    }

    pub fn jammer(&self) -> &JammerState {
        &self.jammer
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn current_pg(&self) -> DecibelGain {
        processing_gain_db(&self.map, &self.scenario.afh)
    }
}

/// Runs `scenario.duration_slots` slots from fresh state.
pub fn run(scenario: &Scenario) -> Result<TimeSeries, EngineError> {
    let mut sim = Simulation::new(scenario)?;
    let mut outcomes = Vec::with_capacity(scenario.duration_slots as usize);
    for _ in 0..scenario.duration_slots {
        outcomes.push(sim.step()?);
    }
    let final_pg = sim.current_pg();
    Ok(TimeSeries {
        windowed: aggregate(&outcomes, scenario.window_slots),
        slot_duration: scenario.link.slot_duration,
        window_slots: scenario.window_slots,
        final_n_active: sim.map.n_active(),
        final_threshold: jamming_threshold_dbm(
            scenario.link.sensitivity,
            final_pg,
            scenario.margin,
        ),
        final_pg,
        outcomes,
    })
}
