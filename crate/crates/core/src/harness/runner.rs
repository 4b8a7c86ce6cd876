//! Seeded scenario execution: the gate-ordered protocol loop.

use std::io::Write;

use crate::bb84::{
    alice_emit, bob_receive_faked, bob_receive_quantum, eve_forge, eve_measure, Basis, Bb84Symbol,
    GateRecord, RunStats, StatsAccumulator,
};
use crate::detector::{DetectorState, GateInput, GATE_TIME_SLACK};
use crate::error::Error;
use crate::harness::config::{AttackMode, ScenarioConfig};
use crate::harness::report::{format_event_record, EVENT_LOG_CSV_HEADER};
use crate::optics::{Energy, Power};
use crate::rng::derive_stream;
use crate::scw::{watchdog_check, WatchdogStatus};

/// Where per-gate records go during a run. Stats are identical no matter
/// which sink is used; `Discard` lets arbitrarily long runs execute in
/// constant memory.
pub enum EventSink<'a> {
    Discard,
    Keep,
    Writer(&'a mut dyn Write),
}

/// Result of one run: the aggregate stats, the retained event log (only
/// for [`EventSink::Keep`]), and two attack-diagnostic counters that are
/// not part of the protocol-visible statistics.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub stats: RunStats,
    pub records: Option<Vec<GateRecord>>,
    /// Clicks that occurred although Bob's basis differed from Eve's.
    /// Structurally zero when the trigger energy sits in the perfect
    /// attack window.
    pub wrong_basis_clicks: u64,
    /// Gates during which the watchdog photodiode was saturated past its
    /// own blinding threshold (countermeasure failure).
    pub watchdog_blinded_gates: u64,
}

enum GatePlan {
    Baseline,
    FakedState {
        apd_cw: Power,
        apd_trigger: Energy,
        pulse_ratio: f64,
    },
    InterceptResend,
}

/// Executes a scenario gate by gate. Deterministic for a fixed config:
/// every party and detector draws from its own stream derived from the
/// master seed.
pub fn run(config: &ScenarioConfig, sink: EventSink) -> Result<RunOutput, Error> {
    config.validate()?;

    let det_cfg = &config.detector;
    let gate_frequency = det_cfg.gate_frequency;

    let mut alice_rng = derive_stream(config.seed, "alice", 0);
    let mut eve_rng = derive_stream(config.seed, "eve", 0);
    let mut bob_rng = derive_stream(config.seed, "bob", 0);
    let mut det0_rng = derive_stream(config.seed, "det0", 0);
    let mut det1_rng = derive_stream(config.seed, "det1", 0);

    let mut det0 = DetectorState::new();
    let mut det1 = DetectorState::new();

    let attack = config.attack.filter(|a| a.enabled);
    let plan = match attack {
        None => GatePlan::Baseline,
        Some(a) => match a.mode {
            AttackMode::PlainInterceptResend => GatePlan::InterceptResend,
            AttackMode::BlindingFakedState => {
                // For SCW the attack powers are given at the receiver
                // entrance; scale them down to what the APD sees.
                let factor = match &config.scw {
                    Some(s) => s.chain.carrier_to_apd_factor(),
                    None => 1.0,
                };
                GatePlan::FakedState {
                    apd_cw: a.cw_power * factor,
                    apd_trigger: a.trigger_energy * factor,
                    pulse_ratio: a.forge_rate / gate_frequency,
                }
            }
        },
    };

    // The c.w. illumination is constant over a run, so the watchdog
    // reading and status are too: Eve's carrier under a blinding attack,
    // Alice's nominal carrier otherwise.
    let watchdog_status = config.scw.as_ref().map(|s| {
        let entrance_carrier = match (&plan, attack) {
            (GatePlan::FakedState { .. }, Some(a)) => a.cw_power,
            _ => s.alice_carrier,
        };
        let reading = entrance_carrier * s.chain.carrier_to_watchdog_factor();
        watchdog_check(reading, &s.chain, s.watchdog_blinding_threshold)
    });

    let mut acc = StatsAccumulator::new();
    let mut records = Vec::new();
    let keep = matches!(sink, EventSink::Keep);
    let mut writer = match sink {
        EventSink::Writer(w) => {
            writeln!(w, "{EVENT_LOG_CSV_HEADER}")?;
            Some(w)
        }
        _ => None,
    };

    let mut wrong_basis_clicks = 0u64;
    let mut watchdog_blinded_gates = 0u64;
    // Dead-time cross-check, kept cheap enough to always run.
    let mut last_click = [f64::NEG_INFINITY; 2];

    let received_mean = config.mean_photons * config.channel_transmission;

    for gate_index in 0..config.gates {
        let gate_time = gate_index as f64 / gate_frequency;
        let alice = alice_emit(config.mean_photons, &mut alice_rng);
        let bob_basis = Basis::random(&mut bob_rng);

        let (eve, click0, click1) = match &plan {
            GatePlan::Baseline => {
                let received = Bb84Symbol {
                    mean_photons: received_mean,
                    ..alice
                };
                let (c0, c1) = bob_receive_quantum(
                    &received, bob_basis, gate_time, &mut det0, &mut det1, det_cfg,
                    &mut det0_rng, &mut det1_rng,
                )?;
                (None, c0, c1)
            }
            GatePlan::FakedState {
                apd_cw,
                apd_trigger,
                pulse_ratio,
            } => {
                if is_pulse_gate(gate_index, *pulse_ratio) {
                    let outcome = eve_measure(&alice, &mut eve_rng);
                    let faked = eve_forge(outcome, *apd_trigger, *apd_cw);
                    let (c0, c1) = bob_receive_faked(
                        &faked, bob_basis, gate_time, &mut det0, &mut det1, det_cfg,
                        &mut det0_rng, &mut det1_rng,
                    )?;
                    (Some(outcome), c0, c1)
                } else {
                    // No forged pulse this gate; the blinding light alone
                    // keeps both detectors in linear mode.
                    let input = GateInput {
                        cw_power: *apd_cw,
                        trigger_energy: Energy::ZERO,
                        mean_photons: 0.0,
                        gate_time,
                    };
                    let c0 = det0.process_gate(&input, det_cfg, &mut det0_rng)?;
                    let c1 = det1.process_gate(&input, det_cfg, &mut det1_rng)?;
                    (None, c0, c1)
                }
            }
            GatePlan::InterceptResend => {
                let outcome = eve_measure(&alice, &mut eve_rng);
                let resent = Bb84Symbol {
                    basis: outcome.basis,
                    bit: outcome.bit,
                    mean_photons: received_mean,
                };
                let (c0, c1) = bob_receive_quantum(
                    &resent, bob_basis, gate_time, &mut det0, &mut det1, det_cfg,
                    &mut det0_rng, &mut det1_rng,
                )?;
                (Some(outcome), c0, c1)
            }
        };

        for (det, clicked) in [(0usize, click0), (1usize, click1)] {
            if clicked {
                debug_assert!(
                    gate_time - last_click[det] >= det_cfg.dead_time - GATE_TIME_SLACK,
                    "dead-time violation on detector {det} at gate {gate_index}"
                );
                last_click[det] = gate_time;
            }
        }

        if let Some(eve_rec) = eve {
            if (click0 || click1) && eve_rec.basis != bob_basis {
                wrong_basis_clicks += 1;
            }
        }
        match watchdog_status {
            Some(WatchdogStatus::Alarm) => acc.add_alarm(),
            Some(WatchdogStatus::Blinded) => watchdog_blinded_gates += 1,
            _ => {}
        }

        let record = GateRecord::new(gate_index, alice, eve, bob_basis, click0, click1);
        acc.add(&record);
        if keep {
            records.push(record);
        } else if let Some(w) = writer.as_mut() {
            writeln!(w, "{}", format_event_record(&record))?;
        }
    }

    Ok(RunOutput {
        stats: acc.finish(gate_frequency),
        records: keep.then_some(records),
        wrong_basis_clicks,
        watchdog_blinded_gates,
    })
}

/// Deterministic forged-pulse schedule: gate `i` carries a pulse iff the
/// integer pulse count `floor(i * ratio)` advances at `i`. Pulses start
/// at gate 0 and are spaced at least `floor(1/ratio)` gates apart.
pub fn is_pulse_gate(gate_index: u64, pulse_ratio: f64) -> bool {
    if pulse_ratio <= 0.0 {
        return false;
    }
    if pulse_ratio >= 1.0 || gate_index == 0 {
        return true;
    }
    (gate_index as f64 * pulse_ratio).floor() > ((gate_index - 1) as f64 * pulse_ratio).floor()
}
