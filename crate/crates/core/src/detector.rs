//! Phenomenological model of a gated InGaAs APD single-photon detector
//! (ID210-like) and its response to bright-light control.
//!
//! Two regimes:
//!
//! * **Geiger mode** (c.w. power below the blinding threshold): single
//!   photons and dark counts produce clicks, `p = 1 - (1-p_photon)(1-p_dark)`.
//! * **Blinded / linear mode** (c.w. power at or above the threshold):
//!   dark counts vanish entirely and a trigger pulse produces a click
//!   with probability 0 below `E_never`, 1 above `E_always`, and a
//!   monotone ramp in between.
//!
//! A click starts the dead time; gates inside it never click. The mode is
//! recomputed from the incident c.w. power on every gate (blinding is
//! instantaneous and memoryless here; the hardware recovers as soon as
//! the blinding laser turns off).

use rand::Rng;

use crate::error::Error;
use crate::optics::{mean_photons_to_click_prob, Energy, Power};

/// Comparison slack for gate times, in seconds.
///
/// A trigger train at the dead-time-limited rate puts the next pulse at
/// exactly `click_time + dead_time`; accumulated f64 rounding in the gate
/// clock can land that gate a fraction of an attosecond early. One
/// picosecond is orders of magnitude above any rounding error and orders
/// of magnitude below the gate spacing, so arming decisions stay exact.
pub const GATE_TIME_SLACK: f64 = 1e-12;

/// Steepness of the optional logistic ramp between `E_never` and `E_always`.
const LOGISTIC_STEEPNESS: f64 = 10.0;

/// Shape of the click-probability ramp between `E_never` and `E_always`.
/// The plateaus (0 below `E_never`, 1 above `E_always`) are shape
/// independent; only the interior differs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitionShape {
    Linear,
    Logistic,
}

/// One measured row of the blinded response: at `blinding_power`, pulses
/// up to `e_never` never click and pulses from `e_always` up always click.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResponsePoint {
    pub blinding_power: Power,
    pub e_never: Energy,
    pub e_always: Energy,
}

impl ResponsePoint {
    pub fn new(blinding_power: Power, e_never: Energy, e_always: Energy) -> ResponsePoint {
        ResponsePoint {
            blinding_power,
            e_never,
            e_always,
        }
    }

    /// Width of the 0-to-1 transition.
    pub fn ramp_width(&self) -> Energy {
        Energy::from_joules(self.e_always.joules() - self.e_never.joules())
    }
}

/// Operating parameters of the detector.
///
/// Defaults are the settings used for SCW QKD operation of the ID210:
/// 10% efficiency, 100 MHz gating, 3 ns gates, 100 ns dead time, ~200 Hz
/// dark counts, blinding from 24 nW upward, and the single fully
/// quantified response row (35 nW, 15.4 fJ, 25.8 fJ).
#[derive(Clone, Debug, PartialEq)]
pub struct DetectorConfig {
    /// Quantum efficiency, 0..=1.
    pub efficiency: f64,
    /// Gate repetition rate in Hz.
    pub gate_frequency: f64,
    /// Gate width in seconds. Carried for fidelity; the per-gate click
    /// model does not depend on it.
    pub gate_width: f64,
    /// Dead time after a click, in seconds.
    pub dead_time: f64,
    /// Dark count rate in Hz (Geiger mode only).
    pub dark_count_rate: f64,
    /// C.w. power at and above which the detector is blinded.
    pub blinding_threshold: Power,
    /// Blinded response rows, strictly increasing in blinding power.
    pub response_points: Vec<ResponsePoint>,
    pub transition_shape: TransitionShape,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            efficiency: 0.10,
            gate_frequency: 1e8,
            gate_width: 3e-9,
            dead_time: 100e-9,
            dark_count_rate: 200.0,
            blinding_threshold: Power::from_nanowatts(24.0),
            response_points: vec![ResponsePoint::new(
                Power::from_nanowatts(35.0),
                Energy::from_femtojoules(15.4),
                Energy::from_femtojoules(25.8),
            )],
            transition_shape: TransitionShape::Linear,
        }
    }
}

impl DetectorConfig {
    /// Checks every structural invariant of the configuration.
    ///
    /// Besides the obvious range checks, response rows must be strictly
    /// increasing in blinding power, each must have `0 < e_never <
    /// e_always`, and the ramp width must not grow with blinding power
    /// (the transition gets more abrupt at higher power, never less).
    pub fn validate(&self) -> Result<(), Error> {
        if !self.efficiency.is_finite() || !(0.0..=1.0).contains(&self.efficiency) {
            return Err(Error::invalid(
                "efficiency",
                format!("must be in [0, 1], got {}", self.efficiency),
            ));
        }
        for (name, v) in [
            ("gate_frequency", self.gate_frequency),
            ("gate_width", self.gate_width),
            ("dead_time", self.dead_time),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidArgument {
                    name,
                    reason: format!("must be finite and positive, got {v}"),
                });
            }
        }
        if !self.dark_count_rate.is_finite() || self.dark_count_rate < 0.0 {
            return Err(Error::invalid(
                "dark_count_rate",
                format!("must be finite and nonnegative, got {}", self.dark_count_rate),
            ));
        }
        if self.dark_count_rate > self.gate_frequency {
            return Err(Error::invalid(
                "dark_count_rate",
                "exceeds the gate frequency; per-gate dark probability would exceed 1",
            ));
        }
        if self.response_points.is_empty() {
            return Err(Error::invalid(
                "response_points",
                "at least one blinded response row is required",
            ));
        }
        for (i, p) in self.response_points.iter().enumerate() {
            if !(p.e_never > Energy::ZERO && p.e_never < p.e_always) {
                return Err(Error::invalid(
                    "response_points",
                    format!(
                        "row {i}: requires 0 < e_never < e_always, got {} fJ / {} fJ",
                        p.e_never.femtojoules(),
                        p.e_always.femtojoules()
                    ),
                ));
            }
        }
        for w in self.response_points.windows(2) {
            if w[1].blinding_power <= w[0].blinding_power {
                return Err(Error::invalid(
                    "response_points",
                    "rows must be strictly increasing in blinding power",
                ));
            }
            if w[1].ramp_width() > w[0].ramp_width() {
                return Err(Error::invalid(
                    "response_points",
                    "ramp width must not increase with blinding power",
                ));
            }
        }
        Ok(())
    }

    /// True iff `cw_power` reaches the blinding threshold.
    pub fn is_blinded(&self, cw_power: Power) -> bool {
        cw_power >= self.blinding_threshold
    }

    /// Per-gate dark click probability in Geiger mode.
    pub fn dark_click_probability(&self) -> f64 {
        self.dark_count_rate / self.gate_frequency
    }

    /// `(E_never, E_always)` at the given blinding power, interpolated
    /// linearly between the two bracketing response rows and clamped to
    /// the table ends.
    pub fn thresholds_at(&self, cw_power: Power) -> (Energy, Energy) {
        let pts = &self.response_points;
        debug_assert!(!pts.is_empty());
        if cw_power <= pts[0].blinding_power {
            return (pts[0].e_never, pts[0].e_always);
        }
        let last = &pts[pts.len() - 1];
        if cw_power >= last.blinding_power {
            return (last.e_never, last.e_always);
        }
        // cw_power is strictly inside the table; find the bracketing pair.
        // The strict comparison makes a query exactly on a table row hit
        // t = 0 below, which reproduces the row values bitwise.
        let hi = pts
            .iter()
            .position(|p| p.blinding_power > cw_power)
            .expect("cw_power below table end");
        let (a, b) = (&pts[hi - 1], &pts[hi]);
        let t = (cw_power.watts() - a.blinding_power.watts())
            / (b.blinding_power.watts() - a.blinding_power.watts());
        let lerp = |x: Energy, y: Energy| Energy::from_joules(x.joules() + t * (y.joules() - x.joules()));
        (lerp(a.e_never, b.e_never), lerp(a.e_always, b.e_always))
    }

    /// Click probability of the blinded detector for a trigger pulse of
    /// `trigger_energy` under `cw_power` blinding: 0 up to `E_never`,
    /// 1 from `E_always`, monotone ramp in between.
    ///
    /// Calling this for an unblinded detector is a contract violation.
    pub fn blinded_click_probability(
        &self,
        trigger_energy: Energy,
        cw_power: Power,
    ) -> Result<f64, Error> {
        if !self.is_blinded(cw_power) {
            return Err(Error::Contract(format!(
                "blinded_click_probability called at {} nW, below the {} nW blinding threshold",
                cw_power.nanowatts(),
                self.blinding_threshold.nanowatts()
            )));
        }
        let (e_never, e_always) = self.thresholds_at(cw_power);
        if trigger_energy <= e_never {
            return Ok(0.0);
        }
        if trigger_energy >= e_always {
            return Ok(1.0);
        }
        let x = (trigger_energy.joules() - e_never.joules())
            / (e_always.joules() - e_never.joules());
        Ok(match self.transition_shape {
            TransitionShape::Linear => x,
            TransitionShape::Logistic => logistic_ramp(x),
        })
    }

    /// Geiger-mode click probability:
    /// `1 - (1 - p_photon)(1 - p_dark)` with `p_photon` from the
    /// Poissonian photon statistics and `p_dark = dark_rate / gate_rate`.
    ///
    /// Contract: `input.cw_power` is below the blinding threshold.
    pub fn geiger_click_probability(&self, input: &GateInput) -> f64 {
        debug_assert!(!self.is_blinded(input.cw_power));
        let p_photon = mean_photons_to_click_prob(input.mean_photons, self.efficiency)
            .expect("validated detector config and gate input");
        let p_dark = self.dark_click_probability();
        1.0 - (1.0 - p_photon) * (1.0 - p_dark)
    }
}

/// Logistic S-curve rescaled to pass exactly through (0,0) and (1,1).
fn logistic_ramp(x: f64) -> f64 {
    let s = |v: f64| 1.0 / (1.0 + (-LOGISTIC_STEEPNESS * (v - 0.5)).exp());
    let (s0, s1) = (s(0.0), s(1.0));
    ((s(x) - s0) / (s1 - s0)).clamp(0.0, 1.0)
}

/// Everything incident on the detector during one gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateInput {
    /// Continuous-wave power present during the gate.
    pub cw_power: Power,
    /// Energy of a trigger pulse aligned with the gate; zero if none.
    pub trigger_energy: Energy,
    /// Expected photon number of the single-photon-level signal.
    pub mean_photons: f64,
    /// Start time of the gate, seconds from run start.
    pub gate_time: f64,
}

impl GateInput {
    /// A gate carrying nothing but darkness.
    pub fn dark(gate_time: f64) -> GateInput {
        GateInput {
            cw_power: Power::ZERO,
            trigger_energy: Energy::ZERO,
            mean_photons: 0.0,
            gate_time,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetectorMode {
    Geiger,
    Blinded,
}

/// Sequential state of one detector instance. Calls to
/// [`DetectorState::process_gate`] must be serialized per instance and
/// presented in nondecreasing time order; distinct instances are
/// independent.
#[derive(Clone, Copy, Debug)]
pub struct DetectorState {
    mode: DetectorMode,
    dead_until: f64,
    last_gate_time: f64,
}

impl Default for DetectorState {
    fn default() -> Self {
        Self::new()
    }
}

impl DetectorState {
    pub fn new() -> DetectorState {
        DetectorState {
            mode: DetectorMode::Geiger,
            dead_until: 0.0,
            last_gate_time: f64::NEG_INFINITY,
        }
    }

    pub fn mode(&self) -> DetectorMode {
        self.mode
    }

    /// End of the current dead time, seconds from run start.
    pub fn dead_until(&self) -> f64 {
        self.dead_until
    }

    /// Whether a gate starting at `gate_time` falls inside the dead time.
    pub fn is_dead_at(&self, gate_time: f64) -> bool {
        gate_time + GATE_TIME_SLACK < self.dead_until
    }

    /// Resolves one gate: updates the mode from the incident c.w. power,
    /// suppresses the gate if it falls in the dead time, otherwise draws
    /// the click from the blinded or Geiger click probability. A click
    /// extends the dead time to `gate_time + dead_time`.
    ///
    /// Gate times must be nondecreasing across calls; out-of-order gates
    /// are rejected.
    pub fn process_gate<R: Rng + ?Sized>(
        &mut self,
        input: &GateInput,
        config: &DetectorConfig,
        rng: &mut R,
    ) -> Result<bool, Error> {
        debug_assert!(input.mean_photons >= 0.0 && input.gate_time >= 0.0);
        if input.gate_time < self.last_gate_time {
            return Err(Error::Contract(format!(
                "out-of-order gate: {} s after {} s",
                input.gate_time, self.last_gate_time
            )));
        }
        self.last_gate_time = input.gate_time;

        let blinded = config.is_blinded(input.cw_power);
        self.mode = if blinded {
            DetectorMode::Blinded
        } else {
            DetectorMode::Geiger
        };

        if self.is_dead_at(input.gate_time) {
            return Ok(false);
        }

        let p = if blinded {
            config.blinded_click_probability(input.trigger_energy, input.cw_power)?
        } else {
            config.geiger_click_probability(input)
        };
        let click = bernoulli(rng, p);
        if click {
            self.dead_until = input.gate_time + config.dead_time;
        }
        Ok(click)
    }
}

/// Bernoulli draw that is exact at the endpoints: p <= 0 never clicks and
/// p >= 1 always clicks without consuming randomness, so the plateau
/// regimes of the blinded response are structural rather than statistical.
fn bernoulli<R: Rng + ?Sized>(rng: &mut R, p: f64) -> bool {
    if p <= 0.0 {
        false
    } else if p >= 1.0 {
        true
    } else {
        rng.random::<f64>() < p
    }
}
