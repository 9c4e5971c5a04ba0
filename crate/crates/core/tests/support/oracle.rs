//! Straight-line reimplementation of the slot loop for small instances.
//!
//! Shares only the domain types and the hop generator with the library.
//! Everything else (occupancy, sweep position, link budget, blacklisting,
//! re-admission) is recomputed here from plain arrays and integer slot
//! arithmetic.

use fhjam_core::{
    hop_rng, BlacklistTimeout, ChannelIndex, DecibelGain, JammerKind, PgMode, PowerDbm,
    PropagationMode, Scenario, SlotOutcome, SubBandAnchor,
};
use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRun {
    pub outcomes: Vec<SlotOutcome>,
    pub final_active: usize,
}

pub fn oracle_run(s: &Scenario) -> OracleRun {
    let n = s.link.num_channels as usize;
    assert!(n <= 79);

    // smallest whole channel count covering the jammer band
    let mut width = 1usize;
    while (width as f64) * s.link.channel_bw_mhz < s.jammer.bandwidth_mhz * (1.0 - 1e-12) {
        width += 1;
    }
    let width = width.min(n);
    let positions = n - width + 1;

    let slot_ns = s.link.slot_duration.as_nanos() as f64;
    let dwell_slots = ((s.jammer.sweep_dwell.as_nanos() as f64 / slot_ns).round() as u64).max(1);

    let block_start = |slot: u64| -> usize {
        match s.jammer.kind {
            JammerKind::BarrageFull => 0,
            JammerKind::SubBandBarrage => match s.jammer.anchor {
                SubBandAnchor::Center => (n - width).div_ceil(2),
                SubBandAnchor::Lowest(a) => (a as usize).min(n - width),
            },
            // the sweep has already moved for this slot before the hop
            JammerKind::Sweep => (((slot + 1) / dwell_slots) % positions as u64) as usize,
        }
    };
    let block_len = if s.jammer.kind == JammerKind::BarrageFull {
        n
    } else {
        width
    };

    let power_dbm = 10.0 * (s.jammer.total_power_w * 1000.0).log10();
    let density = power_dbm - 10.0 * (s.jammer.bandwidth_mhz / s.link.channel_bw_mhz).log10();
    let (intercept, unit) = match s.propagation {
        PropagationMode::PaperLiteral => (32.4, 1.0),
        PropagationMode::PhysicalFspl => (32.44, 1000.0),
    };
    let level_at = |freq: f64| {
        let d = s.jammer.distance_m / unit;
        let pl = intercept + 20.0 * d.log10() + 20.0 * freq.log10();
        density - pl
    };

    let window = s.afh.ber_window;
    let mut active = vec![true; n];
    let mut stamp: Vec<Option<u64>> = vec![None; n];
    let mut recent: Vec<Vec<bool>> = vec![Vec::new(); n];
    let mut visits = vec![0u64; n];

    let mut rng = hop_rng(s.seed);
    let mut outcomes = Vec::new();

    for slot in 0..s.duration_slots {
        let list: Vec<usize> = (0..n).filter(|&c| active[c]).collect();
        let ch = list[rng.random_range(0..list.len())];

        let count = list.len();
        let pg = match s.afh.pg_mode {
            PgMode::Dynamic => 10.0 * (count as f64).log10(),
            PgMode::Static19dB => 19.0,
        };
        let threshold = s.link.sensitivity.0 + pg + s.margin.0;

        let start = block_start(slot);
        let occupied = ch >= start && ch < start + block_len;
        let freq = if s.per_channel_path_loss {
            s.link.base_freq_mhz + ch as f64 * s.link.channel_bw_mhz
        } else {
            2440.0
        };
        let j_rx = occupied.then(|| level_at(freq));
        let jammed = j_rx.is_some_and(|j| j >= threshold);

        // bookkeeping for the visited channel
        if recent[ch].len() == window {
            recent[ch].remove(0);
        }
        recent[ch].push(jammed);
        visits[ch] += 1;
        let hits = recent[ch].iter().filter(|&&b| b).count() as f64;
        let denom = visits[ch].min(window as u64) as f64;
        if recent[ch].len() == window && hits / denom >= s.afh.bad_threshold {
            active[ch] = false;
            stamp[ch] = Some(slot);
        }

        if let BlacklistTimeout::After(t) = s.afh.blacklist_timeout {
            for c in 0..n {
                if let Some(at) = stamp[c] {
                    if slot - at > t {
                        active[c] = true;
                        stamp[c] = None;
                        recent[c].clear();
                    }
                }
            }
        }
        while active.iter().filter(|&&a| a).count() < s.afh.min_active {
            let mut pick: Option<(u64, usize)> = None;
            for (c, &entry) in stamp.iter().enumerate() {
                if let Some(at) = entry {
                    if pick.is_none_or(|(best, _)| at < best) {
                        pick = Some((at, c));
                    }
                }
            }
            let Some((_, c)) = pick else { break };
            active[c] = true;
            stamp[c] = None;
            recent[c].clear();
        }

        outcomes.push(SlotOutcome {
            slot,
            time_s: slot as f64 * s.link.slot_duration.as_secs_f64(),
            channel: ChannelIndex::new(ch as u16).unwrap(),
            occupied,
            j_rx: j_rx.map(PowerDbm),
            threshold: PowerDbm(threshold),
            jammed,
            n_active: count,
            pg: DecibelGain(pg),
        });
    }

    OracleRun {
        outcomes,
        final_active: active.iter().filter(|&&a| a).count(),
    }
}
