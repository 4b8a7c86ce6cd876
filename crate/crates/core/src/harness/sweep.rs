//! Response-curve sweeps: detector click probability vs trigger energy
//! or blinding power, measured the way the lab does it - a c.w. blinding
//! source plus a trigger pulse train at the forge rate, one detector,
//! clicks counted per pulse.

use rayon::prelude::*;

use crate::detector::{DetectorState, GateInput};
use crate::error::Error;
use crate::harness::config::{AttackParams, ScenarioConfig, SweepSpec, SweepVariable};
use crate::harness::runner::is_pulse_gate;
use crate::optics::{Energy, Power};
use crate::rng::derive_stream;

/// One measured point of a sweep. `click_probability` is clicks per
/// trigger pulse with its binomial standard error; `click_rate_hz` also
/// counts clicks on pulse-free gates (dark counts, below the blinding
/// threshold).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub gates: u64,
    pub pulses: u64,
    pub pulse_clicks: u64,
    pub total_clicks: u64,
    pub click_probability: f64,
    pub std_error: f64,
    pub click_rate_hz: f64,
}

/// Runs the sweep. Points execute in parallel, each on its own derived
/// RNG stream, and are returned in point order regardless of completion
/// order.
pub fn sweep(spec: &SweepSpec, base: &ScenarioConfig) -> Result<Vec<SweepPoint>, Error> {
    base.validate()?;
    spec.validate()?;
    let attack = base.attack.as_ref().ok_or_else(|| {
        Error::invalid("attack", "a sweep needs an [attack] section for the base operating point")
    })?;
    let points = spec.points();
    points
        .par_iter()
        .enumerate()
        .map(|(index, &value)| simulate_point(index as u64, value, spec, base, attack))
        .collect()
}

fn simulate_point(
    index: u64,
    value: f64,
    spec: &SweepSpec,
    base: &ScenarioConfig,
    attack: &AttackParams,
) -> Result<SweepPoint, Error> {
    let (cw_power, trigger_energy) = match spec.variable {
        SweepVariable::TriggerEnergyFj => (attack.cw_power, Energy::from_femtojoules(value)),
        SweepVariable::CwPowerNw => (Power::from_nanowatts(value), attack.trigger_energy),
    };
    let det_cfg = &base.detector;
    let gate_frequency = det_cfg.gate_frequency;
    let pulse_ratio = attack.forge_rate / gate_frequency;

    let mut rng = derive_stream(base.seed, "sweep-det", index);
    let mut det = DetectorState::new();
    let gates = spec.gates_per_point;
    let mut pulses = 0u64;
    let mut pulse_clicks = 0u64;
    let mut total_clicks = 0u64;

    for gate_index in 0..gates {
        let pulse = is_pulse_gate(gate_index, pulse_ratio);
        let input = GateInput {
            cw_power,
            trigger_energy: if pulse { trigger_energy } else { Energy::ZERO },
            mean_photons: 0.0,
            gate_time: gate_index as f64 / gate_frequency,
        };
        let click = det.process_gate(&input, det_cfg, &mut rng)?;
        if pulse {
            pulses += 1;
            pulse_clicks += click as u64;
        }
        total_clicks += click as u64;
    }

    let p = if pulses == 0 {
        0.0
    } else {
        pulse_clicks as f64 / pulses as f64
    };
    let std_error = if pulses == 0 {
        0.0
    } else {
        (p * (1.0 - p) / pulses as f64).sqrt()
    };
    Ok(SweepPoint {
        value,
        gates,
        pulses,
        pulse_clicks,
        total_clicks,
        click_probability: p,
        std_error,
        click_rate_hz: total_clicks as f64 * gate_frequency / gates as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::ResponsePoint;

    fn base() -> ScenarioConfig {
        ScenarioConfig::default_attack_demo()
    }

    fn spec(variable: SweepVariable, from: f64, to: f64, steps: usize, gates: u64) -> SweepSpec {
        SweepSpec {
            variable,
            from,
            to,
            steps,
            gates_per_point: gates,
        }
    }

    #[test]
    fn trigger_sweep_reproduces_plateaus() {
        let spec = spec(SweepVariable::TriggerEnergyFj, 10.0, 35.0, 26, 20_000);
        let points = sweep(&spec, &base()).unwrap();
        assert_eq!(points.len(), 26);
        for p in &points {
            assert!(p.pulses > 0);
            if p.value <= 15.4 {
                assert_eq!(p.click_probability, 0.0, "at {} fJ", p.value);
            }
            if p.value >= 25.8 {
                assert_eq!(p.click_probability, 1.0, "at {} fJ", p.value);
            }
        }
        // The ramp region is strictly between the plateaus.
        assert!(points
            .iter()
            .filter(|p| p.value > 15.4 && p.value < 25.8)
            .any(|p| p.click_probability > 0.0 && p.click_probability < 1.0));
    }

    #[test]
    fn plateau_endpoints_exact_on_grid() {
        let spec = spec(SweepVariable::TriggerEnergyFj, 15.4, 25.8, 2, 10_000);
        let points = sweep(&spec, &base()).unwrap();
        assert_eq!(points[0].click_probability, 0.0);
        assert_eq!(points[1].click_probability, 1.0);
    }

    #[test]
    fn higher_power_row_has_narrower_ramp() {
        let mut config = base();
        config.detector.response_points.push(ResponsePoint::new(
            Power::from_nanowatts(2512.0),
            Energy::from_femtojoules(16.0),
            Energy::from_femtojoules(22.0),
        ));
        let ramp_width = |cw_nw: f64| {
            let mut config = config.clone();
            config.attack.as_mut().unwrap().cw_power = Power::from_nanowatts(cw_nw);
            // 0.25 fJ grid over the whole transition region.
            let spec = spec(SweepVariable::TriggerEnergyFj, 10.0, 30.0, 81, 20_000);
            let points = sweep(&spec, &config).unwrap();
            let last_zero = points
                .iter()
                .filter(|p| p.click_probability == 0.0)
                .map(|p| p.value)
                .fold(f64::NEG_INFINITY, f64::max);
            let first_one = points
                .iter()
                .filter(|p| p.click_probability == 1.0)
                .map(|p| p.value)
                .fold(f64::INFINITY, f64::min);
            first_one - last_zero
        };
        let wide = ramp_width(35.0);
        let narrow = ramp_width(2512.0);
        assert!(
            narrow <= wide,
            "ramp at 2512 nW ({narrow} fJ) should not exceed the 35 nW one ({wide} fJ)"
        );
    }

    #[test]
    fn zero_width_sweep_is_single_point() {
        let spec = spec(SweepVariable::TriggerEnergyFj, 20.6, 20.6, 7, 5_000);
        let points = sweep(&spec, &base()).unwrap();
        assert_eq!(points.len(), 1);
        assert_eq!(points[0].value, 20.6);
    }

    #[test]
    fn cw_sweep_counts_dark_rate_below_threshold() {
        let mut config = base();
        config.attack.as_mut().unwrap().trigger_energy = Energy::ZERO;
        let gates = 20_000_000u64;
        let spec = spec(SweepVariable::CwPowerNw, 20.0, 28.0, 5, gates);
        let points = sweep(&spec, &config).unwrap();
        let p_dark = 2e-6;
        let mean = gates as f64 * p_dark;
        let band = 5.0 * (gates as f64 * p_dark * (1.0 - p_dark)).sqrt();
        for p in &points {
            if p.value >= 24.0 {
                assert_eq!(p.total_clicks, 0, "blinded at {} nW", p.value);
            } else {
                // The tighter 1e8-gate version lives in the acceptance suite.
                assert!(
                    (p.total_clicks as f64 - mean).abs() <= band,
                    "darks at {} nW: {} clicks, expected {mean} +/- {band}",
                    p.value,
                    p.total_clicks
                );
            }
        }
    }

    #[test]
    fn sweep_requires_attack_section() {
        let spec = spec(SweepVariable::TriggerEnergyFj, 10.0, 20.0, 3, 1_000);
        let config = ScenarioConfig::default_bb84();
        assert!(sweep(&spec, &config).is_err());
    }

    #[test]
    fn sweep_is_deterministic() {
        let spec = spec(SweepVariable::TriggerEnergyFj, 16.0, 25.0, 10, 10_000);
        let a = sweep(&spec, &base()).unwrap();
        let b = sweep(&spec, &base()).unwrap();
        assert_eq!(a, b);
    }
}
