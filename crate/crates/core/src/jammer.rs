//! Spectral occupancy and per-channel power density of noise jammers.
//!
//! Density is flat across the jammer band, so a jammer of total power `P`
//! spread over `B` MHz puts `P·(channel_bw / B)` inside each victim channel it
//! covers. Occupancy is always one contiguous block of whole channels.

use std::time::Duration;

use thiserror::Error;

use crate::model::{
    watts_to_dbm, BluetoothLinkSpec, ChannelIndex, JammerKind, JammerSpec, ModelError, PowerDbm,
    PropagationMode, SubBandAnchor, REPRESENTATIVE_FREQ_MHZ,
};
use crate::propagation::{path_loss_db, PathLossInput, PropagationError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JammerError {
    #[error("advance_sweep called on a {0:?} jammer")]
    NotSweep(JammerKind),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
}

/// A contiguous run of channels `start..start + len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelBlock {
    pub start: u16,
    pub len: u16,
}

impl ChannelBlock {
    pub fn contains(&self, ch: ChannelIndex) -> bool {
        (self.start..self.end()).contains(&ch.get())
    }

    /// One past the last channel.
    pub fn end(&self) -> u16 {
        self.start + self.len
    }

    pub fn len(&self) -> usize {
        usize::from(self.len)
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = ChannelIndex> {
        (self.start..self.end()).map(ChannelIndex::new_unchecked)
    }
}

/// Evolving jammer: a `JammerSpec` plus sweep position and elapsed time.
#[derive(Debug, Clone, PartialEq)]
pub struct JammerState {
    spec: JammerSpec,
    num_channels: u16,
    channel_bw_mhz: f64,
    base_freq_mhz: f64,
    width: u16,
    sweep_position: u16,
    elapsed: Duration,
}

impl JammerState {
    /// Fresh state at time zero, sweep at channel 0. `spec` must already be
    /// valid for `link`.
    pub fn new(spec: JammerSpec, link: &BluetoothLinkSpec) -> Self {
        let width = spec
            .width_channels(link.channel_bw_mhz)
            .min(link.num_channels);
        JammerState {
            spec,
            num_channels: link.num_channels,
            channel_bw_mhz: link.channel_bw_mhz,
            base_freq_mhz: link.base_freq_mhz,
            width,
            sweep_position: 0,
            elapsed: Duration::ZERO,
        }
    }

    pub fn spec(&self) -> &JammerSpec {
        &self.spec
    }

    pub fn sweep_position(&self) -> u16 {
        self.sweep_position
    }

    pub fn elapsed(&self) -> Duration {
        self.elapsed
    }

    pub fn width_channels(&self) -> u16 {
        self.width
    }

    /// Number of legal sweep positions; the block never hangs off the band.
    pub fn sweep_positions(&self) -> u16 {
        self.num_channels - self.width + 1
    }

    /// Places the sweep block at `position` (clamped to the last legal one).
    pub fn with_sweep_position(mut self, position: u16) -> Self {
        self.sweep_position = position.min(self.sweep_positions() - 1);
        self
    }

    /// Center frequency of the occupied block in MHz.
    pub fn carrier_center_mhz(&self) -> f64 {
        let block = occupied_channels(self);
        self.base_freq_mhz
            + (f64::from(block.start) + f64::from(block.len - 1) / 2.0) * self.channel_bw_mhz
    }
}

/// Power inside one victim channel, assuming flat density across the
/// jammer band.
pub fn per_channel_density_dbm(
    spec: &JammerSpec,
    channel_bw_mhz: f64,
) -> Result<PowerDbm, ModelError> {
    let total = watts_to_dbm(spec.total_power_w)?;
    Ok(PowerDbm(
        total.value() - 10.0 * (spec.bandwidth_mhz / channel_bw_mhz).log10(),
    ))
}

pub fn occupied_channels(state: &JammerState) -> ChannelBlock {
    let width = state.width;
    let start = match state.spec.kind {
        JammerKind::BarrageFull => {
            return ChannelBlock {
                start: 0,
                len: state.num_channels,
            }
        }
        JammerKind::SubBandBarrage => match state.spec.anchor {
            SubBandAnchor::Center => (state.num_channels - width).div_ceil(2),
            SubBandAnchor::Lowest(start) => start.min(state.num_channels - width),
        },
        JammerKind::Sweep => state.sweep_position,
    };
    ChannelBlock { start, len: width }
}

/// Moves the sweep forward by `dt`: one channel per completed dwell,
/// ascending, wrapping from the last legal position back to 0.
pub fn advance_sweep(state: &JammerState, dt: Duration) -> Result<JammerState, JammerError> {
    if state.spec.kind != JammerKind::Sweep {
        return Err(JammerError::NotSweep(state.spec.kind));
    }
    let dwell = state.spec.sweep_dwell.as_nanos();
    let before = state.elapsed.as_nanos();
    let after = before + dt.as_nanos();
    let steps = after / dwell - before / dwell;
    let positions = u128::from(state.sweep_positions());
    let position = (u128::from(state.sweep_position) + steps % positions) % positions;

    let mut next = state.clone();
    next.sweep_position = position as u16;
    next.elapsed = state.elapsed + dt;
    Ok(next)
}

/// Received jamming level on `ch` with path loss at the representative
/// 2440 MHz carrier. `None` when the jammer does not cover `ch`.
pub fn jammer_rx_dbm(
    state: &JammerState,
    ch: ChannelIndex,
    link: &BluetoothLinkSpec,
    mode: PropagationMode,
) -> Result<Option<PowerDbm>, JammerError> {
    jammer_rx_dbm_at(state, ch, link, REPRESENTATIVE_FREQ_MHZ, mode)
}

/// As [`jammer_rx_dbm`] with an explicit path-loss frequency.
pub fn jammer_rx_dbm_at(
    state: &JammerState,
    ch: ChannelIndex,
    link: &BluetoothLinkSpec,
    freq_mhz: f64,
    mode: PropagationMode,
) -> Result<Option<PowerDbm>, JammerError> {
    if !occupied_channels(state).contains(ch) {
        return Ok(None);
    }
    let density = per_channel_density_dbm(&state.spec, link.channel_bw_mhz)?;
    let loss = path_loss_db(PathLossInput::new(state.spec.distance_m, freq_mhz, mode))?;
    Ok(Some(density - loss))
}
