//! Path loss, received power, the jamming-effectiveness threshold, and the
//! inverse range solver.
//!
//! Two evaluation modes share the same log-distance form
//! `PL = k + 20·log10(D) + 20·log10(F)` with `F` in MHz:
//!
//! * [`PropagationMode::PaperLiteral`]: `k = 32.4`, `D` in meters.
//! * [`PropagationMode::PhysicalFspl`]: `k = 32.44`, `D` in kilometers.

use thiserror::Error;

use crate::model::{DecibelGain, PowerDbm, PropagationMode};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PropagationError {
    #[error("distance must be positive and finite, got {0} m")]
    Distance(f64),
    #[error("frequency must be positive and finite, got {0} MHz")]
    Frequency(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossInput {
    pub distance_m: f64,
    pub freq_mhz: f64,
    pub mode: PropagationMode,
}

impl PathLossInput {
    pub fn new(distance_m: f64, freq_mhz: f64, mode: PropagationMode) -> Self {
        PathLossInput {
            distance_m,
            freq_mhz,
            mode,
        }
    }
}

fn intercept_db(mode: PropagationMode) -> f64 {
    match mode {
        PropagationMode::PaperLiteral => 32.4,
        PropagationMode::PhysicalFspl => 32.44,
    }
}

/// Meters per distance unit used by the mode's formula.
fn distance_unit_m(mode: PropagationMode) -> f64 {
    match mode {
        PropagationMode::PaperLiteral => 1.0,
        PropagationMode::PhysicalFspl => 1000.0,
    }
}

pub fn path_loss_db(input: PathLossInput) -> Result<DecibelGain, PropagationError> {
    if !(input.distance_m.is_finite() && input.distance_m > 0.0) {
        return Err(PropagationError::Distance(input.distance_m));
    }
    if !(input.freq_mhz.is_finite() && input.freq_mhz > 0.0) {
        return Err(PropagationError::Frequency(input.freq_mhz));
    }
    let d = input.distance_m / distance_unit_m(input.mode);
    Ok(DecibelGain(
        intercept_db(input.mode) + 20.0 * d.log10() + 20.0 * input.freq_mhz.log10(),
    ))
}

pub fn received_power_dbm(
    tx: PowerDbm,
    input: PathLossInput,
) -> Result<PowerDbm, PropagationError> {
    Ok(tx - path_loss_db(input)?)
}

/// Minimum received jamming level that defeats the link:
/// sensitivity + processing gain + margin.
pub fn jamming_threshold_dbm(
    sensitivity: PowerDbm,
    pg: DecibelGain,
    margin: DecibelGain,
) -> PowerDbm {
    sensitivity + pg + margin
}

/// Distance at which a jammer with the given per-channel density is
/// received exactly at `threshold`. Inside that range the link is jammed.
pub fn effective_range_m(
    jammer_channel_density: PowerDbm,
    threshold: PowerDbm,
    freq_mhz: f64,
    mode: PropagationMode,
) -> f64 {
    let excess =
        jammer_channel_density.0 - threshold.0 - intercept_db(mode) - 20.0 * freq_mhz.log10();
    10f64.powf(excess / 20.0) * distance_unit_m(mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::REPRESENTATIVE_FREQ_MHZ;
    use proptest::prelude::*;

    const PAPER: PropagationMode = PropagationMode::PaperLiteral;
    const FSPL: PropagationMode = PropagationMode::PhysicalFspl;

    fn pl(d: f64, f: f64, mode: PropagationMode) -> f64 {
        path_loss_db(PathLossInput::new(d, f, mode))
            .unwrap()
            .value()
    }

    #[test]
    fn path_loss_examples() {
        assert!((pl(1.0, 1.0, PAPER) - 32.4).abs() < 1e-12);
        assert!((pl(10.0, 2440.0, PAPER) - 120.148).abs() < 1e-3);
        assert!((pl(6.0, 2440.0, PAPER) - 115.711).abs() < 1e-3);
        // 32.44 - 40 + 20·log10(2440)
        assert!((pl(10.0, 2440.0, FSPL) - 60.1878).abs() < 1e-3);
    }

    #[test]
    fn path_loss_rejects_bad_inputs() {
        assert_eq!(
            path_loss_db(PathLossInput::new(0.0, 2440.0, PAPER)),
            Err(PropagationError::Distance(0.0))
        );
        assert_eq!(
            path_loss_db(PathLossInput::new(1.0, -5.0, FSPL)),
            Err(PropagationError::Frequency(-5.0))
        );
    }

    #[test]
    fn received_power_examples() {
        let rx = |tx, d, f, m| {
            received_power_dbm(PowerDbm(tx), PathLossInput::new(d, f, m))
                .unwrap()
                .value()
        };
        assert!((rx(30.0, 1.0, 1.0, PAPER) + 2.4).abs() < 1e-12);
        assert!((rx(11.0237, 10.0, 2440.0, PAPER) + 109.124).abs() < 1e-3);
        assert!((rx(30.0, 10.0, 2440.0, FSPL) + 30.1878).abs() < 1e-3);
    }

    #[test]
    fn threshold_examples() {
        let t = jamming_threshold_dbm(PowerDbm(-70.0), DecibelGain(19.0), DecibelGain(3.0));
        assert_eq!(t, PowerDbm(-48.0));
        let zero = jamming_threshold_dbm(PowerDbm(0.0), DecibelGain(0.0), DecibelGain(0.0));
        assert_eq!(zero, PowerDbm(0.0));
        let t20 = jamming_threshold_dbm(PowerDbm(-70.0), DecibelGain(13.01), DecibelGain(3.0));
        assert!((t20.value() + 53.99).abs() < 1e-9);
    }

    #[test]
    fn effective_range_examples() {
        let f = REPRESENTATIVE_FREQ_MHZ;
        let thr = PowerDbm(-48.0);
        let unit = PowerDbm(thr.0 + 32.4 + 20.0 * f.log10());
        assert!((effective_range_m(unit, thr, f, PAPER) - 1.0).abs() < 1e-12);

        // 10^((30 + 48 - 32.4 - 67.7478) / 20)
        let paper = effective_range_m(PowerDbm(30.0), thr, f, PAPER);
        assert!((paper - 0.07809).abs() < 1e-5, "{paper}");
        assert!(paper < 10.0);

        let phys = effective_range_m(PowerDbm(30.0), thr, f, FSPL);
        assert!((phys - 77.73).abs() < 1e-2, "{phys}");
        let back = received_power_dbm(PowerDbm(30.0), PathLossInput::new(phys, f, FSPL)).unwrap();
        assert!((back.value() - thr.value()).abs() < 1e-9);
    }

    fn mode() -> impl Strategy<Value = PropagationMode> {
        prop_oneof![Just(PAPER), Just(FSPL)]
    }

    proptest! {
        #[test]
        fn increasing_in_distance(m in mode(), f in 1.0f64..6000.0, a in 0.01f64..1e4, b in 0.01f64..1e4) {
            prop_assume!(a < b * (1.0 - 1e-9));
            prop_assert!(pl(a, f, m) < pl(b, f, m));
        }

        #[test]
        fn increasing_in_frequency(m in mode(), d in 0.01f64..1e4, a in 1.0f64..6000.0, b in 1.0f64..6000.0) {
            prop_assume!(a < b * (1.0 - 1e-9));
            prop_assert!(pl(d, a, m) < pl(d, b, m));
        }

        #[test]
        fn twenty_db_per_decade(m in mode(), f in 1.0f64..6000.0, d in 0.01f64..1e4) {
            let delta = pl(10.0 * d, f, m) - pl(d, f, m);
            prop_assert!((delta - 20.0).abs() < 1e-9);
        }

        #[test]
        fn range_is_inverse_of_received_power(
            m in mode(),
            density in -20.0f64..60.0,
            thr in -100.0f64..-20.0,
            f in 2402.0f64..2480.0,
        ) {
            let d = effective_range_m(PowerDbm(density), PowerDbm(thr), f, m);
            prop_assert!(d > 0.0);
            let rx = received_power_dbm(PowerDbm(density), PathLossInput::new(d, f, m)).unwrap();
            prop_assert!((rx.value() - thr).abs() < 1e-9);
        }
    }
}
