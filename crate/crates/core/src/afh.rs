//! Adaptive frequency hopping: hop selection, per-channel error bookkeeping,
//! blacklisting, the minimum-channel floor, and processing gain.
//!
//! The error estimate for a channel is the fraction of jammed visits among
//! its last `ber_window` visits. A channel whose window is full and whose
//! estimate reaches `bad_threshold` leaves the hop set. Blacklisted channels
//! come back when the active set drops below `min_active` (oldest first) or
//! after `blacklist_timeout` slots.

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{ChannelIndex, DecibelGain, NOMINAL_PROCESSING_GAIN_DB};

/// Generator behind the hop sequence.
pub type HopRng = ChaCha8Rng;

pub fn hop_rng(seed: u64) -> HopRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AfhError {
    #[error("no active channels to hop on")]
    EmptyActiveSet,
    #[error("channel {0} is blacklisted")]
    Blacklisted(ChannelIndex),
    #[error("channel {0} is outside the channel map")]
    UnknownChannel(ChannelIndex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlacklistTimeout {
    Never,
    /// Re-admit once more than this many slots have passed since blacklisting.
    After(u64),
}

impl Default for BlacklistTimeout {
    fn default() -> Self {
        BlacklistTimeout::After(Self::DEFAULT_SLOTS)
    }
}

impl BlacklistTimeout {
    pub const DEFAULT_SLOTS: u64 = 20_000;

    pub fn slots(self) -> Option<u64> {
        match self {
            BlacklistTimeout::Never => None,
            BlacklistTimeout::After(n) => Some(n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PgMode {
    /// 10·log10(active channel count).
    #[default]
    Dynamic,
    /// Fixed 19 dB regardless of the map.
    Static19dB,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AfhConfig {
    pub ber_window: usize,
    pub bad_threshold: f64,
    pub min_active: usize,
    pub blacklist_timeout: BlacklistTimeout,
    pub pg_mode: PgMode,
}

impl Default for AfhConfig {
    fn default() -> Self {
        AfhConfig {
            ber_window: 8,
            bad_threshold: 0.5,
            min_active: 20,
            blacklist_timeout: BlacklistTimeout::default(),
            pg_mode: PgMode::Dynamic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChannelStats {
    recent: VecDeque<bool>,
    total_visits: u64,
    total_jammed: u64,
}

impl ChannelStats {
    fn push(&mut self, jammed: bool, window: usize) {
        if self.recent.len() == window {
            self.recent.pop_front();
        }
        self.recent.push_back(jammed);
        self.total_visits += 1;
        self.total_jammed += u64::from(jammed);
    }

    pub fn recent(&self) -> &VecDeque<bool> {
        &self.recent
    }

    pub fn total_visits(&self) -> u64 {
        self.total_visits
    }

    pub fn total_jammed(&self) -> u64 {
        self.total_jammed
    }

    pub fn jammed_in_window(&self) -> usize {
        self.recent.iter().filter(|&&j| j).count()
    }

    /// Jammed fraction over the visits currently in the window.
    pub fn estimated_ber(&self, window: usize) -> f64 {
        let denom = self.total_visits.min(window as u64);
        if denom == 0 {
            0.0
        } else {
            self.jammed_in_window() as f64 / denom as f64
        }
    }
}

/// Active/blacklisted partition of the hop band plus per-channel statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMap {
    config: AfhConfig,
    /// Ascending.
    active: Vec<ChannelIndex>,
    blacklisted: BTreeMap<ChannelIndex, u64>,
    stats: Vec<ChannelStats>,
}

impl ChannelMap {
    /// All `num_channels` channels active, no history.
    pub fn new(num_channels: u16, config: AfhConfig) -> Self {
        ChannelMap {
            config,
            active: (0..num_channels).map(ChannelIndex::new_unchecked).collect(),
            blacklisted: BTreeMap::new(),
            stats: vec![ChannelStats::default(); usize::from(num_channels)],
        }
    }

    pub fn config(&self) -> &AfhConfig {
        &self.config
    }

    pub fn num_channels(&self) -> usize {
        self.stats.len()
    }

    pub fn active(&self) -> &[ChannelIndex] {
        &self.active
    }

    pub fn n_active(&self) -> usize {
        self.active.len()
    }

    /// Blacklisted channels with the slot at which each was removed.
    pub fn blacklisted(&self) -> &BTreeMap<ChannelIndex, u64> {
        &self.blacklisted
    }

    pub fn is_active(&self, ch: ChannelIndex) -> bool {
        self.active.binary_search(&ch).is_ok()
    }

    pub fn stats(&self, ch: ChannelIndex) -> Option<&ChannelStats> {
        self.stats.get(ch.as_usize())
    }

    /// Removes `ch` from the hop set as of `slot`, bypassing the error
    /// estimate. Does not apply the floor.
    pub fn blacklist(&mut self, ch: ChannelIndex, slot: u64) -> Result<(), AfhError> {
        let pos = self.position(ch)?;
        self.active.remove(pos);
        self.blacklisted.insert(ch, slot);
        Ok(())
    }

    fn position(&self, ch: ChannelIndex) -> Result<usize, AfhError> {
        if ch.as_usize() >= self.stats.len() {
            return Err(AfhError::UnknownChannel(ch));
        }
        self.active
            .binary_search(&ch)
            .map_err(|_| AfhError::Blacklisted(ch))
    }

    fn readmit(&mut self, ch: ChannelIndex) {
        self.blacklisted.remove(&ch);
        self.stats[ch.as_usize()].recent.clear();
        if let Err(pos) = self.active.binary_search(&ch) {
            self.active.insert(pos, ch);
        }
    }
}

/// Draws the next hop channel uniformly from the active set.
pub fn next_hop<R: Rng + ?Sized>(rng: &mut R, map: &ChannelMap) -> Result<ChannelIndex, AfhError> {
    if map.active.is_empty() {
        return Err(AfhError::EmptyActiveSet);
    }
    let idx = rng.random_range(0..map.active.len());
    Ok(map.active[idx])
}

/// Records one visit to `ch` and applies the blacklist rule, then the floor
/// and timeout re-admissions.
pub fn record_slot(
    map: &mut ChannelMap,
    ch: ChannelIndex,
    jammed: bool,
    slot: u64,
) -> Result<(), AfhError> {
    map.position(ch)?;
    let window = map.config.ber_window;
    let stats = &mut map.stats[ch.as_usize()];
    stats.push(jammed, window);
    let bad =
        stats.recent.len() == window && stats.estimated_ber(window) >= map.config.bad_threshold;
    if bad {
        map.blacklist(ch, slot)?;
    }
    enforce_min_active(map, slot);
    Ok(())
}

/// Re-admits timed-out channels, then re-admits the oldest blacklisted
/// channels until at least `min_active` are active.
pub fn enforce_min_active(map: &mut ChannelMap, slot: u64) {
    if let Some(timeout) = map.config.blacklist_timeout.slots() {
        let expired: Vec<ChannelIndex> = map
            .blacklisted
            .iter()
            .filter(|(_, &stamp)| slot.saturating_sub(stamp) > timeout)
            .map(|(&ch, _)| ch)
            .collect();
        for ch in expired {
            map.readmit(ch);
        }
    }
    while map.active.len() < map.config.min_active {
        let oldest = map
            .blacklisted
            .iter()
            .min_by_key(|(&ch, &stamp)| (stamp, ch))
            .map(|(&ch, _)| ch);
        match oldest {
            Some(ch) => map.readmit(ch),
            None => break,
        }
    }
}

pub fn processing_gain_db(map: &ChannelMap, cfg: &AfhConfig) -> DecibelGain {
    match cfg.pg_mode {
        PgMode::Dynamic => DecibelGain(10.0 * (map.active.len().max(1) as f64).log10()),
        PgMode::Static19dB => DecibelGain(NOMINAL_PROCESSING_GAIN_DB),
    }
}
