//! Acceptance criteria. Each criterion is its own test and prints one
//! `[PASS]`/`[FAIL]` line (visible with `--nocapture`).

mod support;

use std::time::Instant;

use fhjam_core::report::{verdict, write_timeseries_csv, Verdict};
use fhjam_core::{
    dbm_to_mw, emit_figure_series, hop_rng, jamming_threshold_dbm, next_hop, occupied_channels,
    path_loss_db, per_channel_density_dbm, preset_by_name, processing_gain_db, run, AfhConfig,
    BlacklistTimeout, BluetoothLinkSpec, ChannelIndex, ChannelMap, DecibelGain, FigureId,
    JammerKind, JammerSpec, JammerState, PathLossInput, PowerDbm, PropagationMode, Scenario,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use support::{oracle::oracle_run, small_sweep};

fn check(id: &str, name: &str, result: Result<String, String>) {
    match result {
        Ok(detail) => println!("[PASS] {id} {name}: {detail}"),
        Err(detail) => {
            println!("[FAIL] {id} {name}: {detail}");
            panic!("{id} {name} failed: {detail}");
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pl(d: f64) -> f64 {
    path_loss_db(PathLossInput::new(d, 2440.0, PropagationMode::PaperLiteral))
        .unwrap()
        .value()
}

#[test]
fn ac01_threshold_identity() {
    let t = jamming_threshold_dbm(PowerDbm(-70.0), DecibelGain(19.0), DecibelGain(3.0));
    check(
        "AC1",
        "threshold identity",
        ensure(t.value() == -48.0, || format!("got {t}")).map(|_| format!("{t}")),
    );
}

#[test]
fn ac02_path_loss_reproduction() {
    let at6 = pl(6.0);
    let at10 = pl(10.0);
    let r = (|| {
        ensure((at6 - 115.711).abs() <= 1e-3, || format!("PL(6 m) = {at6}"))?;
        ensure((at6 - 117.0).abs() <= 2.0, || {
            format!("PL(6 m) = {at6} not within 2 dB of 117")
        })?;
        ensure((at10 - 120.148).abs() <= 1e-3, || {
            format!("PL(10 m) = {at10}")
        })?;
        Ok(format!("PL(6 m) = {at6:.4} dB, PL(10 m) = {at10:.4} dB"))
    })();
    check("AC2", "path-loss reproduction", r);
}

#[test]
fn ac03_processing_gain() {
    let cfg = AfhConfig {
        blacklist_timeout: BlacklistTimeout::Never,
        ..AfhConfig::default()
    };
    let mut map = ChannelMap::new(79, cfg.clone());
    let full = processing_gain_db(&map, &cfg).value();
    for c in 0..59 {
        map.blacklist(ChannelIndex::new(c).unwrap(), 0).unwrap();
    }
    let floor = processing_gain_db(&map, &cfg).value();
    let r = (|| {
        ensure((full - 18.976).abs() <= 1e-3, || {
            format!("full-band PG {full}")
        })?;
        ensure(full.round() == 19.0, || {
            format!("{full} does not round to 19")
        })?;
        ensure(map.n_active() == 20, || "floor map size".into())?;
        ensure((floor - 13.010).abs() <= 1e-3, || {
            format!("floor PG {floor}")
        })?;
        Ok(format!("PG(79) = {full:.4} dB, PG(20) = {floor:.4} dB"))
    })();
    check("AC3", "processing gain", r);
}

#[test]
fn ac04_scenario_one_verdict() {
    let start = Instant::now();
    let mut s = preset_by_name("scenario1:1w").unwrap();
    s.propagation = PropagationMode::PaperLiteral;
    s.duration_slots = 16_000;
    let ts = run(&s).unwrap();
    let v = verdict(&s, &ts);
    let elapsed = start.elapsed();
    let r = (|| {
        ensure(ts.jammed_slots() == 0, || {
            format!("{} jammed slots", ts.jammed_slots())
        })?;
        ensure(v == Verdict::NoEffect, || format!("verdict {v}"))?;
        Ok(format!(
            "0 of 16000 slots jammed, verdict {v}, {elapsed:.2?}"
        ))
    })();
    check("AC4", "scenario-1 verdict", r);
}

#[test]
fn ac05_power_density_tradeoff() {
    let link = BluetoothLinkSpec::default();
    let density = |kind| {
        per_channel_density_dbm(&JammerSpec::new(kind, 1.0, &link), 1.0)
            .unwrap()
            .value()
    };
    let barrage = density(JammerKind::BarrageFull);
    let sub = density(JammerKind::SubBandBarrage);
    let sweep = density(JammerKind::Sweep);
    let r = (|| {
        ensure(barrage < sub && sub < sweep, || "ordering".into())?;
        for (got, want) in [(barrage, 11.024), (sub, 16.990), (sweep, 23.010)] {
            ensure((got - want).abs() <= 1e-3, || format!("{got} != {want}"))?;
        }
        Ok(format!("{barrage:.4} < {sub:.4} < {sweep:.4} dBm"))
    })();
    check("AC5", "power-density tradeoff", r);
}

#[test]
fn ac06_processing_gain_decay_under_sweep() {
    let start = Instant::now();
    let mut s = preset_by_name("scenario3:5w").unwrap();
    s.propagation = PropagationMode::PhysicalFspl;
    s.afh.blacklist_timeout = BlacklistTimeout::Never;
    s.duration_slots = 160_000;
    let ts = run(&s).unwrap();
    let elapsed = start.elapsed();
    let series = emit_figure_series(FigureId::Fig4, &s, Some(&ts)).unwrap();
    let pg = series.column("pg_db").unwrap();
    let r = (|| {
        ensure(pg.windows(2).all(|w| w[1] <= w[0]), || {
            "pg(t) increased".into()
        })?;
        ensure(ts.final_n_active == 20, || {
            format!("final n_active {}", ts.final_n_active)
        })?;
        ensure((ts.final_pg.value() - 13.010).abs() <= 1e-3, || {
            format!("final pg {}", ts.final_pg)
        })?;
        ensure(elapsed.as_secs_f64() < 5.0, || {
            format!("took {elapsed:.2?}")
        })?;
        Ok(format!(
            "pg {:.4} -> {:.4} dB non-increasing, final n_active {}, {elapsed:.2?}",
            pg[0],
            ts.final_pg.value(),
            ts.final_n_active
        ))
    })();
    check("AC6", "fig-4 shape", r);
}

#[test]
fn ac07_power_conservation() {
    let link = BluetoothLinkSpec::default();
    let mut worst = 0f64;
    for kind in [
        JammerKind::BarrageFull,
        JammerKind::SubBandBarrage,
        JammerKind::Sweep,
    ] {
        for w in [1.0, 2.0, 5.0] {
            let st = JammerState::new(JammerSpec::new(kind, w, &link), &link);
            let d = per_channel_density_dbm(st.spec(), link.channel_bw_mhz).unwrap();
            let total: f64 = occupied_channels(&st).iter().map(|_| dbm_to_mw(d)).sum();
            worst = worst.max(((total - w * 1000.0) / (w * 1000.0)).abs());
        }
    }
    check(
        "AC7",
        "power conservation",
        ensure(worst <= 1e-9, || format!("relative error {worst:e}"))
            .map(|_| format!("max relative error {worst:.2e}")),
    );
}

#[test]
fn ac08_oracle_equivalence() {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for seed in 0..10u64 {
        let s = small_sweep(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15), 5000);
        assert_eq!(s.link.num_channels, 8);
        assert_eq!(s.jammer.bandwidth_mhz, 3.0);
        let ts = run(&s).unwrap();
        if ts.outcomes != oracle_run(&s).outcomes {
            mismatches.push(seed);
        }
    }
    let elapsed = start.elapsed();
    check(
        "AC8",
        "oracle equivalence",
        ensure(mismatches.is_empty(), || {
            format!("seeds differ: {mismatches:?}")
        })
        .map(|_| format!("10 seeds x 5000 slots identical, {elapsed:.2?}")),
    );
}

#[test]
fn ac09_determinism() {
    let csv = |s: &Scenario| {
        let mut buf = Vec::new();
        write_timeseries_csv(&run(s).unwrap(), &mut buf).unwrap();
        buf
    };
    let mut bad = Vec::new();
    for name in ["scenario1:1w", "scenario2:2w", "scenario3:5w"] {
        let mut s = preset_by_name(name).unwrap();
        s.propagation = PropagationMode::PhysicalFspl;
        if csv(&s) != csv(&s) {
            bad.push(name);
        }
    }
    check(
        "AC9",
        "determinism",
        ensure(bad.is_empty(), || format!("non-identical CSV for {bad:?}"))
            .map(|_| "byte-identical CSV across repeated runs".into()),
    );
}

#[test]
fn ac10_fig3_structure() {
    let f = emit_figure_series(FigureId::Fig3, &Scenario::default(), None).unwrap();
    let one = f.column("j_rx_1w_dbm").unwrap();
    let two = f.column("j_rx_2w_dbm").unwrap();
    let five = f.column("j_rx_5w_dbm").unwrap();
    let thr = f.column("threshold_dbm").unwrap();
    let r = (|| {
        for c in [one, two, five] {
            ensure(c.windows(2).all(|w| w[1] < w[0]), || {
                "not strictly decreasing".into()
            })?;
        }
        for i in 0..one.len() {
            let d2 = two[i] - one[i];
            let d5 = five[i] - one[i];
            ensure(
                (d2 - 10.0 * 2f64.log10()).abs() < 1e-9 && (d2 - 3.0103).abs() < 1e-4,
                || format!("2 W offset {d2}"),
            )?;
            ensure(
                (d5 - 10.0 * 5f64.log10()).abs() < 1e-9 && (d5 - 6.9897).abs() < 1e-4,
                || format!("5 W offset {d5}"),
            )?;
        }
        ensure(thr.iter().all(|&t| t == -48.0), || {
            "threshold not constant -48".into()
        })?;
        Ok(format!(
            "{} rows, offsets 3.0103 / 6.9897 dB, threshold -48 dBm",
            one.len()
        ))
    })();
    check("AC10", "fig-3 structure", r);
}

#[test]
fn ac11_hop_uniformity() {
    let start = Instant::now();
    let map = ChannelMap::new(79, AfhConfig::default());
    let mut rng = hop_rng(0xB1E7_007B);
    let draws = 1_000_000u64;
    let mut counts = [0u64; 79];
    for _ in 0..draws {
        counts[next_hop(&mut rng, &map).unwrap().as_usize()] += 1;
    }
    let expected = draws as f64 / 79.0;
    let chi2: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let critical = ChiSquared::new(78.0).unwrap().inverse_cdf(0.999);
    let sigma = (draws as f64 * (1.0 / 79.0) * (78.0 / 79.0)).sqrt();
    let within_3sigma = counts
        .iter()
        .all(|&c| (c as f64 - expected).abs() <= 3.0 * sigma);
    let elapsed = start.elapsed();
    let r = (|| {
        ensure(chi2 < critical, || {
            format!("chi2 {chi2:.2} >= {critical:.2}")
        })?;
        ensure(within_3sigma, || {
            "a channel count falls outside 3 sigma".into()
        })?;
        Ok(format!(
            "chi2 = {chi2:.2} < {critical:.2} (df 78, alpha 0.001), {elapsed:.2?}"
        ))
    })();
    check("AC11", "hop uniformity", r);
}
