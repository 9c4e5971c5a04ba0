#![allow(dead_code)]

pub mod oracle;

use std::time::Duration;

use fhjam_core::{
    AfhConfig, BlacklistTimeout, BluetoothLinkSpec, JammerKind, JammerSpec, PropagationMode,
    Scenario,
};

/// 8-channel band with a 3-channel sweep strong enough to jam at full gain.
pub fn small_sweep(seed: u64, slots: u64) -> Scenario {
    let link = BluetoothLinkSpec {
        num_channels: 8,
        ..BluetoothLinkSpec::default()
    };
    let mut jammer = JammerSpec::new(JammerKind::Sweep, 5.0, &link);
    jammer.bandwidth_mhz = 3.0;
    jammer.sweep_dwell = Duration::from_micros(625 * 10);
    Scenario {
        link,
        jammer,
        propagation: PropagationMode::PhysicalFspl,
        duration_slots: slots,
        seed,
        afh: AfhConfig {
            ber_window: 4,
            bad_threshold: 0.5,
            min_active: 3,
            blacklist_timeout: BlacklistTimeout::After(400),
            ..AfhConfig::default()
        },
        ..Scenario::default()
    }
}
