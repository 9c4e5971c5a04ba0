//! Slot-level simulation of a frequency-hopping PAN link under noise jamming.
//!
//! The crate covers the link budget (path loss, the jamming threshold
//! `sensitivity + PG + margin`), three noise-jammer shapes (full-band
//! barrage, sub-band barrage, slow sweep), adaptive channel blacklisting
//! with its shrinking processing gain, and a deterministic slot loop that
//! ties them together.
//!
//! ```
//! use fhjam_core::{preset_by_name, run, PropagationMode};
//!
//! let mut s = preset_by_name("scenario3:5w").unwrap();
//! s.propagation = PropagationMode::PhysicalFspl;
//! s.duration_slots = 1600;
//! let ts = run(&s).unwrap();
//! assert!(ts.jammed_slots() > 0);
//! ```

pub mod afh;
pub mod engine;
pub mod jammer;
pub mod model;
pub mod propagation;
pub mod report;

pub use afh::{
    enforce_min_active, hop_rng, next_hop, processing_gain_db, record_slot, AfhConfig, AfhError,
    BlacklistTimeout, ChannelMap, ChannelStats, HopRng, PgMode,
};
pub use engine::{
    dwell_in_slots, run, step, EngineError, Simulation, SlotOutcome, TimeSeries, WindowAggregate,
};
pub use jammer::{
    advance_sweep, jammer_rx_dbm, jammer_rx_dbm_at, occupied_channels, per_channel_density_dbm,
    ChannelBlock, JammerError, JammerState,
};
pub use model::{
    dbm_to_mw, mw_to_dbm, validate_scenario, validate_scenario_strict, watts_to_dbm,
    BluetoothLinkSpec, ChannelIndex, DecibelGain, JammerKind, JammerSpec, ModelError, PowerDbm,
    PropagationMode, Scenario, SubBandAnchor, ValidationReport, Violation, BLUETOOTH_CHANNELS,
    DEFAULT_MARGIN_DB, NOMINAL_PROCESSING_GAIN_DB, REPRESENTATIVE_FREQ_MHZ,
};
pub use propagation::{
    effective_range_m, jamming_threshold_dbm, path_loss_db, received_power_dbm, PathLossInput,
    PropagationError,
};
pub use report::{
    emit_figure_series, format_scenario, parse_scenario, preset, preset_by_name, FigureId,
    FigureSeries, ParseError, Preset, PresetScenario, ReportError, SummaryRow, Verdict,
};
