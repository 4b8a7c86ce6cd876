//! BB84 protocol engine with three parties: Alice (attenuated-laser
//! source), Eve (intercept-resend, optionally with bright faked states)
//! and Bob (passive 50:50 basis choice, one detector per bit value),
//! plus sifting and QBER/Eve-information accounting.
//!
//! The faked-state mechanics: Eve measures Alice's state, then fires a
//! bright trigger pulse carrying her outcome. If Bob's basis matches
//! Eve's, the detector for her bit receives the full pulse energy; if
//! not, the energy splits 50:50 between the two detectors. With the
//! trigger energy inside `[E_always, 2 E_never]` the matched case always
//! clicks and the mismatched case never does, so every sifted bit is one
//! Eve placed there herself.

use rand::Rng;

use crate::detector::{DetectorConfig, DetectorState, GateInput};
use crate::error::Error;
use crate::optics::{Energy, Power};

/// Measurement / preparation basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Basis {
        if rng.random::<bool>() {
            Basis::Z
        } else {
            Basis::X
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Basis::Z => "Z",
            Basis::X => "X",
        }
    }
}

/// One of Alice's quantum states: basis, bit, and the Poissonian mean
/// photon number of the pulse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bb84Symbol {
    pub basis: Basis,
    pub bit: bool,
    pub mean_photons: f64,
}

/// Eve's measurement outcome for one gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EveRecord {
    pub basis: Basis,
    pub bit: bool,
}

/// A bright forged state: Eve's outcome plus the trigger pulse energy and
/// the c.w. blinding power accompanying the pulse train.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FakedState {
    pub basis: Basis,
    pub bit: bool,
    pub trigger_energy: Energy,
    pub cw_power: Power,
}

/// Draws one of the four BB84 states uniformly; basis and bit are
/// independent and the configured mean photon number is carried through.
pub fn alice_emit<R: Rng + ?Sized>(mean_photons: f64, rng: &mut R) -> Bb84Symbol {
    Bb84Symbol {
        basis: Basis::random(rng),
        bit: rng.random::<bool>(),
        mean_photons,
    }
}

/// Intercept measurement: Eve picks a uniform basis; a matching basis
/// reproduces Alice's bit, a mismatched one yields a uniform bit.
pub fn eve_measure<R: Rng + ?Sized>(symbol: &Bb84Symbol, rng: &mut R) -> EveRecord {
    let basis = Basis::random(rng);
    let bit = if basis == symbol.basis {
        symbol.bit
    } else {
        rng.random::<bool>()
    };
    EveRecord { basis, bit }
}

/// Wraps Eve's outcome into a faked state at the configured trigger
/// energy and blinding power. No clamping: energies outside the perfect
/// attack window are deliberately allowed so failed attacks can be
/// simulated.
pub fn eve_forge(measurement: EveRecord, trigger_energy: Energy, cw_power: Power) -> FakedState {
    FakedState {
        basis: measurement.basis,
        bit: measurement.bit,
        trigger_energy,
        cw_power,
    }
}

/// Bob receives a faked state. On a basis match the detector for the
/// forged bit sees the full trigger energy and the other sees none; on a
/// mismatch each detector sees half. The blinding power reaches both
/// detectors either way. Returns `(click0, click1)`.
#[allow(clippy::too_many_arguments)]
pub fn bob_receive_faked<R: Rng + ?Sized>(
    state: &FakedState,
    bob_basis: Basis,
    gate_time: f64,
    det0: &mut DetectorState,
    det1: &mut DetectorState,
    config: &DetectorConfig,
    rng0: &mut R,
    rng1: &mut R,
) -> Result<(bool, bool), Error> {
    let (e0, e1) = if bob_basis == state.basis {
        if state.bit {
            (Energy::ZERO, state.trigger_energy)
        } else {
            (state.trigger_energy, Energy::ZERO)
        }
    } else {
        let half = state.trigger_energy / 2.0;
        (half, half)
    };
    let gate = |trigger_energy| GateInput {
        cw_power: state.cw_power,
        trigger_energy,
        mean_photons: 0.0,
        gate_time,
    };
    let click0 = det0.process_gate(&gate(e0), config, rng0)?;
    let click1 = det1.process_gate(&gate(e1), config, rng1)?;
    Ok((click0, click1))
}

/// Bob receives a quantum state (no blinding light present). A basis
/// match routes the full mean photon number to the detector for the bit;
/// a mismatch splits it evenly. Both detectors run the Geiger path, dark
/// counts included.
#[allow(clippy::too_many_arguments)]
pub fn bob_receive_quantum<R: Rng + ?Sized>(
    symbol: &Bb84Symbol,
    bob_basis: Basis,
    gate_time: f64,
    det0: &mut DetectorState,
    det1: &mut DetectorState,
    config: &DetectorConfig,
    rng0: &mut R,
    rng1: &mut R,
) -> Result<(bool, bool), Error> {
    let (m0, m1) = if bob_basis == symbol.basis {
        if symbol.bit {
            (0.0, symbol.mean_photons)
        } else {
            (symbol.mean_photons, 0.0)
        }
    } else {
        let half = symbol.mean_photons / 2.0;
        (half, half)
    };
    let gate = |mean_photons| GateInput {
        cw_power: Power::ZERO,
        trigger_energy: Energy::ZERO,
        mean_photons,
        gate_time,
    };
    let click0 = det0.process_gate(&gate(m0), config, rng0)?;
    let click1 = det1.process_gate(&gate(m1), config, rng1)?;
    Ok((click0, click1))
}

/// Per-gate event record. `sifted` and `error` are derived at
/// construction: a gate is sifted iff exactly one detector clicked and
/// Alice's and Bob's bases match; it is an error iff it is sifted and the
/// registered bit differs from Alice's.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateRecord {
    pub gate_index: u64,
    pub alice: Bb84Symbol,
    pub eve: Option<EveRecord>,
    pub bob_basis: Basis,
    pub click0: bool,
    pub click1: bool,
    pub sifted: bool,
    pub error: bool,
}

impl GateRecord {
    pub fn new(
        gate_index: u64,
        alice: Bb84Symbol,
        eve: Option<EveRecord>,
        bob_basis: Basis,
        click0: bool,
        click1: bool,
    ) -> GateRecord {
        let registered = match (click0, click1) {
            (true, false) => Some(false),
            (false, true) => Some(true),
            _ => None, // no click or double click: discarded at sifting
        };
        let sifted = registered.is_some() && alice.basis == bob_basis;
        let error = sifted && registered != Some(alice.bit);
        GateRecord {
            gate_index,
            alice,
            eve,
            bob_basis,
            click0,
            click1,
            sifted,
            error,
        }
    }

    /// The bit Bob registered, when exactly one detector clicked.
    pub fn registered_bit(&self) -> Option<bool> {
        match (self.click0, self.click1) {
            (true, false) => Some(false),
            (false, true) => Some(true),
            _ => None,
        }
    }
}

/// Aggregate statistics of one run.
///
/// `clicks` counts individual detector clicks (a double-click gate
/// contributes two). `qber` and `eve_known_fraction` are undefined when
/// no bits were sifted.
#[derive(Clone, Debug, PartialEq)]
pub struct RunStats {
    pub gates_total: u64,
    pub clicks: u64,
    pub double_clicks: u64,
    pub sifted_bits: u64,
    pub errors: u64,
    pub qber: Option<f64>,
    pub eve_known_fraction: Option<f64>,
    pub raw_click_rate_hz: f64,
    pub alarms: u64,
}

/// Streaming aggregator behind [`sift_and_score`]; lets large runs score
/// gates without retaining the event log.
#[derive(Clone, Debug, Default)]
pub struct StatsAccumulator {
    gates: u64,
    clicks: u64,
    double_clicks: u64,
    sifted: u64,
    errors: u64,
    eve_known: u64,
    alarms: u64,
}

impl StatsAccumulator {
    pub fn new() -> StatsAccumulator {
        StatsAccumulator::default()
    }

    pub fn add(&mut self, record: &GateRecord) {
        self.gates += 1;
        self.clicks += record.click0 as u64 + record.click1 as u64;
        if record.click0 && record.click1 {
            self.double_clicks += 1;
        }
        if record.sifted {
            self.sifted += 1;
            if record.error {
                self.errors += 1;
            }
            if let (Some(eve), Some(bit)) = (record.eve, record.registered_bit()) {
                if eve.bit == bit {
                    self.eve_known += 1;
                }
            }
        }
    }

    pub fn add_alarm(&mut self) {
        self.alarms += 1;
    }

    pub fn finish(&self, gate_frequency: f64) -> RunStats {
        let ratio = |num: u64| {
            if self.sifted == 0 {
                None
            } else {
                Some(num as f64 / self.sifted as f64)
            }
        };
        let raw_click_rate_hz = if self.gates == 0 {
            0.0
        } else {
            self.clicks as f64 * gate_frequency / self.gates as f64
        };
        RunStats {
            gates_total: self.gates,
            clicks: self.clicks,
            double_clicks: self.double_clicks,
            sifted_bits: self.sifted,
            errors: self.errors,
            qber: ratio(self.errors),
            eve_known_fraction: ratio(self.eve_known),
            raw_click_rate_hz,
            alarms: self.alarms,
        }
    }
}

/// Folds a gate log into [`RunStats`]. Double clicks and no-click gates
/// are discarded at sifting; `qber = errors / sifted_bits` is reported as
/// undefined (not zero) for an empty sifted key.
pub fn sift_and_score(records: &[GateRecord], gate_frequency: f64) -> RunStats {
    let mut acc = StatsAccumulator::new();
    for r in records {
        acc.add(r);
    }
    acc.finish(gate_frequency)
}
