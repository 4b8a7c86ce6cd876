//! Scenario configuration: domain types, the TOML file format, and
//! validation.
//!
//! The file format spells units in the key names (`cw_power_nw`,
//! `trigger_energy_fj`, `dead_time_ns`) and conversion to internal SI
//! units happens exactly once, here. Validation collects every offending
//! field with a diagnostic before any simulation work starts.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::detector::{DetectorConfig, ResponsePoint, TransitionShape};
use crate::error::{ConfigErrors, Error};
use crate::optics::{Decibel, Energy, Power, NANOSECOND, NANOWATT};
use crate::scw::ScwChain;

pub const DEFAULT_MEAN_PHOTONS: f64 = 0.1;
pub const DEFAULT_FORGE_RATE_HZ: f64 = 1e7;
pub const DEFAULT_ALICE_CARRIER_NW: f64 = 1000.0;
pub const DEFAULT_ALARM_FACTOR: f64 = 3.0;
pub const DEFAULT_WATCHDOG_BLINDING_NW: f64 = 1000.0;
pub const DEFAULT_WATCHDOG_FLOOR_NW: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Protocol {
    Bb84,
    Scw,
}

impl Protocol {
    pub fn key(self) -> &'static str {
        match self {
            Protocol::Bb84 => "bb84",
            Protocol::Scw => "scw",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttackMode {
    /// C.w. blinding plus bright trigger pulses carrying Eve's outcomes.
    BlindingFakedState,
    /// Classic intercept-resend with quantum re-emission, no blinding.
    PlainInterceptResend,
}

impl AttackMode {
    pub fn key(self) -> &'static str {
        match self {
            AttackMode::BlindingFakedState => "blinding_faked_state",
            AttackMode::PlainInterceptResend => "plain_intercept_resend",
        }
    }
}

/// Eve's attack parameters. For the BB84 protocol the powers are what
/// arrives at Bob's detectors; for the SCW protocol they are what Eve
/// injects at the receiver entrance, and the chain scales them down.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AttackParams {
    pub enabled: bool,
    pub cw_power: Power,
    pub trigger_energy: Energy,
    /// Forged-pulse rate in Hz; capped by the dead-time-limited click
    /// rate and by the gate frequency.
    pub forge_rate: f64,
    pub mode: AttackMode,
}

/// SCW-specific scenario parameters around the [`ScwChain`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScwScenario {
    pub chain: ScwChain,
    /// Alice's nominal carrier power at the receiver entrance.
    pub alice_carrier: Power,
    /// Alarm point as a multiple of Alice's nominal watchdog reading;
    /// used when no explicit threshold is configured.
    pub alarm_factor: f64,
    /// Reading at which the watchdog photodiode itself is blinded.
    pub watchdog_blinding_threshold: Power,
    /// Smallest reading the watchdog can resolve.
    pub watchdog_sensitivity_floor: Power,
}

/// A complete, validated experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub protocol: Protocol,
    pub gates: u64,
    pub seed: u64,
    pub detector: DetectorConfig,
    pub attack: Option<AttackParams>,
    pub scw: Option<ScwScenario>,
    /// Source intensity: mean photon number per pulse.
    pub mean_photons: f64,
    /// Single lumped channel transmission applied to the quantum signal.
    pub channel_transmission: f64,
}

impl ScenarioConfig {
    /// BB84 scenario at the measured detector defaults, no attack.
    pub fn default_bb84() -> ScenarioConfig {
        ScenarioConfig {
            protocol: Protocol::Bb84,
            gates: 1_000_000,
            seed: 1,
            detector: DetectorConfig::default(),
            attack: None,
            scw: None,
            mean_photons: DEFAULT_MEAN_PHOTONS,
            channel_transmission: 1.0,
        }
    }

    /// BB84 scenario with the faked-state attack at the measured
    /// operating point: 35 nW blinding, 25.8 fJ triggers at 10 MHz.
    pub fn default_attack_demo() -> ScenarioConfig {
        ScenarioConfig {
            attack: Some(AttackParams {
                enabled: true,
                cw_power: Power::from_nanowatts(35.0),
                trigger_energy: Energy::from_femtojoules(25.8),
                forge_rate: DEFAULT_FORGE_RATE_HZ,
                mode: AttackMode::BlindingFakedState,
            }),
            ..ScenarioConfig::default_bb84()
        }
    }

    /// Domain-level validation; rejects before any simulation work.
    pub fn validate(&self) -> Result<(), Error> {
        let mut errs = ConfigErrors::new();
        if self.gates == 0 {
            errs.push("gates", "must be positive");
        }
        if !self.mean_photons.is_finite() || self.mean_photons < 0.0 {
            errs.push("mean_photons", "must be finite and nonnegative");
        }
        if !self.channel_transmission.is_finite()
            || !(0.0..=1.0).contains(&self.channel_transmission)
        {
            errs.push("channel_transmission", "must be in [0, 1]");
        }
        if let Err(e) = self.detector.validate() {
            errs.push("detector", e.to_string());
        }
        if let Some(attack) = &self.attack {
            if !attack.forge_rate.is_finite() || attack.forge_rate <= 0.0 {
                errs.push("attack.forge_rate_hz", "must be finite and positive");
            } else {
                // Allow a relative slack of 1e-9 so the nominal
                // dead-time-limited rate itself always passes.
                let cap = 1.0 / self.detector.dead_time * (1.0 + 1e-9);
                if attack.forge_rate > cap {
                    errs.push(
                        "attack.forge_rate_hz",
                        format!("exceeds the dead-time-limited click rate {cap:.0} Hz"),
                    );
                }
                if attack.forge_rate > self.detector.gate_frequency * (1.0 + 1e-9) {
                    errs.push("attack.forge_rate_hz", "exceeds the gate frequency");
                }
            }
        }
        match (self.protocol, &self.scw) {
            (Protocol::Scw, None) => {
                errs.push("scw", "required when protocol = \"scw\"");
            }
            (_, Some(scw)) => {
                if let Err(e) = scw.chain.validate() {
                    errs.push("scw", e.to_string());
                }
                if scw.alice_carrier <= Power::ZERO {
                    errs.push("scw.alice_carrier_nw", "must be positive");
                }
                if !scw.alarm_factor.is_finite() || scw.alarm_factor <= 0.0 {
                    errs.push("scw.alarm_factor", "must be finite and positive");
                }
                if scw.watchdog_blinding_threshold <= Power::ZERO {
                    errs.push("scw.watchdog_blinding_threshold_nw", "must be positive");
                }
            }
            (Protocol::Bb84, None) => {}
        }
        errs.into_result()
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(&ScenarioFile::from_config(self))
            .expect("scenario config serializes")
    }

    pub fn from_toml_str(text: &str) -> Result<ScenarioConfig, Error> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| {
            let mut errs = ConfigErrors::new();
            errs.push("<toml>", e.to_string());
            Error::Config(errs)
        })?;
        file.into_config()
    }

    pub fn load(path: &Path) -> Result<ScenarioConfig, Error> {
        let text = std::fs::read_to_string(path)?;
        ScenarioConfig::from_toml_str(&text)
    }
}

// ---------------------------------------------------------------------------
// File format (serde DTOs)
// ---------------------------------------------------------------------------

/// On-disk form of a scenario. Optional keys fall back to the
/// measured defaults; units are spelled in the key names.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    #[serde(default = "default_protocol")]
    pub protocol: String,
    pub gates: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_photons: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel_transmission: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector: Option<DetectorFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attack: Option<AttackFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scw: Option<ScwFile>,
}

fn default_protocol() -> String {
    "bb84".to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct DetectorFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub efficiency: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate_frequency_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate_width_ns: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dead_time_ns: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dark_count_rate_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blinding_threshold_nw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition_shape: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub response_points: Option<Vec<ResponsePointFile>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResponsePointFile {
    pub blinding_power_nw: f64,
    pub e_never_fj: f64,
    pub e_always_fj: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enabled: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    pub cw_power_nw: f64,
    pub trigger_energy_fj: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forge_rate_hz: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct ScwFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulation_index: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter_extinction_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bob_insertion_loss_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub watchdog_attenuation_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alice_carrier_nw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alarm_factor: Option<f64>,
    /// Explicit alarm threshold; overrides `alarm_factor` when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub watchdog_alarm_threshold_nw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub watchdog_blinding_threshold_nw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub watchdog_sensitivity_floor_nw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub include_carrier_leakage: Option<bool>,
}

/// Collects raw numeric checks for one field; pushes a diagnostic and
/// returns the fallback when the value is unusable.
fn checked(
    errs: &mut ConfigErrors,
    field: &str,
    value: Option<f64>,
    fallback: f64,
    ok: impl Fn(f64) -> bool,
    requirement: &str,
) -> f64 {
    match value {
        None => fallback,
        Some(v) if v.is_finite() && ok(v) => v,
        Some(v) => {
            errs.push(field, format!("{requirement}, got {v}"));
            fallback
        }
    }
}

/// Like [`checked`], for keys carrying a presentation unit: a present
/// value is validated and scaled into SI; an absent one falls back to the
/// SI default directly, avoiding a lossy round trip through the file unit.
fn checked_unit(
    errs: &mut ConfigErrors,
    field: &str,
    value: Option<f64>,
    fallback_si: f64,
    scale: f64,
    ok: impl Fn(f64) -> bool,
    requirement: &str,
) -> f64 {
    match value {
        None => fallback_si,
        Some(v) if v.is_finite() && ok(v) => v * scale,
        Some(v) => {
            errs.push(field, format!("{requirement}, got {v}"));
            fallback_si
        }
    }
}

impl ScenarioFile {
    pub fn from_config(config: &ScenarioConfig) -> ScenarioFile {
        let d = &config.detector;
        ScenarioFile {
            protocol: config.protocol.key().to_string(),
            gates: config.gates,
            seed: config.seed,
            mean_photons: Some(config.mean_photons),
            channel_transmission: Some(config.channel_transmission),
            detector: Some(DetectorFile {
                efficiency: Some(d.efficiency),
                gate_frequency_hz: Some(d.gate_frequency),
                gate_width_ns: Some(d.gate_width / NANOSECOND),
                dead_time_ns: Some(d.dead_time / NANOSECOND),
                dark_count_rate_hz: Some(d.dark_count_rate),
                blinding_threshold_nw: Some(d.blinding_threshold.nanowatts()),
                transition_shape: Some(
                    match d.transition_shape {
                        TransitionShape::Linear => "linear",
                        TransitionShape::Logistic => "logistic",
                    }
                    .to_string(),
                ),
                response_points: Some(
                    d.response_points
                        .iter()
                        .map(|p| ResponsePointFile {
                            blinding_power_nw: p.blinding_power.nanowatts(),
                            e_never_fj: p.e_never.femtojoules(),
                            e_always_fj: p.e_always.femtojoules(),
                        })
                        .collect(),
                ),
            }),
            attack: config.attack.as_ref().map(|a| AttackFile {
                enabled: Some(a.enabled),
                mode: Some(a.mode.key().to_string()),
                cw_power_nw: a.cw_power.nanowatts(),
                trigger_energy_fj: a.trigger_energy.femtojoules(),
                forge_rate_hz: Some(a.forge_rate),
            }),
            scw: config.scw.as_ref().map(|s| ScwFile {
                modulation_index: Some(s.chain.modulation_index),
                filter_extinction_db: Some(s.chain.filter_extinction.db()),
                bob_insertion_loss_db: Some(s.chain.bob_insertion_loss.db()),
                watchdog_attenuation_db: Some(s.chain.watchdog_attenuation.db()),
                alice_carrier_nw: Some(s.alice_carrier.nanowatts()),
                alarm_factor: Some(s.alarm_factor),
                watchdog_alarm_threshold_nw: Some(s.chain.watchdog_alarm_threshold.nanowatts()),
                watchdog_blinding_threshold_nw: Some(s.watchdog_blinding_threshold.nanowatts()),
                watchdog_sensitivity_floor_nw: Some(s.watchdog_sensitivity_floor.nanowatts()),
                include_carrier_leakage: Some(s.chain.include_carrier_leakage),
            }),
        }
    }

    /// Validates the raw file and builds the domain config. All field
    /// diagnostics are collected; nothing is simulated on failure.
    pub fn into_config(self) -> Result<ScenarioConfig, Error> {
        let mut errs = ConfigErrors::new();
        let defaults = DetectorConfig::default();

        let protocol = match self.protocol.as_str() {
            "bb84" => Protocol::Bb84,
            "scw" => Protocol::Scw,
            other => {
                errs.push("protocol", format!("expected \"bb84\" or \"scw\", got \"{other}\""));
                Protocol::Bb84
            }
        };
        if self.gates == 0 {
            errs.push("gates", "must be positive");
        }
        let mean_photons = checked(
            &mut errs,
            "mean_photons",
            self.mean_photons,
            DEFAULT_MEAN_PHOTONS,
            |v| v >= 0.0,
            "must be finite and nonnegative",
        );
        let channel_transmission = checked(
            &mut errs,
            "channel_transmission",
            self.channel_transmission,
            1.0,
            |v| (0.0..=1.0).contains(&v),
            "must be in [0, 1]",
        );

        let d = self.detector.unwrap_or_default();
        let positive = |v: f64| v > 0.0;
        let detector = DetectorConfig {
            efficiency: checked(
                &mut errs,
                "detector.efficiency",
                d.efficiency,
                defaults.efficiency,
                |v| (0.0..=1.0).contains(&v),
                "must be in [0, 1]",
            ),
            gate_frequency: checked(
                &mut errs,
                "detector.gate_frequency_hz",
                d.gate_frequency_hz,
                defaults.gate_frequency,
                positive,
                "must be finite and positive",
            ),
            gate_width: checked_unit(
                &mut errs,
                "detector.gate_width_ns",
                d.gate_width_ns,
                defaults.gate_width,
                NANOSECOND,
                positive,
                "must be finite and positive",
            ),
            dead_time: checked_unit(
                &mut errs,
                "detector.dead_time_ns",
                d.dead_time_ns,
                defaults.dead_time,
                NANOSECOND,
                positive,
                "must be finite and positive",
            ),
            dark_count_rate: checked(
                &mut errs,
                "detector.dark_count_rate_hz",
                d.dark_count_rate_hz,
                defaults.dark_count_rate,
                |v| v >= 0.0,
                "must be finite and nonnegative",
            ),
            blinding_threshold: Power::from_watts(checked_unit(
                &mut errs,
                "detector.blinding_threshold_nw",
                d.blinding_threshold_nw,
                defaults.blinding_threshold.watts(),
                NANOWATT,
                |v| v >= 0.0,
                "must be finite and nonnegative",
            )),
            transition_shape: match d.transition_shape.as_deref() {
                None | Some("linear") => TransitionShape::Linear,
                Some("logistic") => TransitionShape::Logistic,
                Some(other) => {
                    errs.push(
                        "detector.transition_shape",
                        format!("expected \"linear\" or \"logistic\", got \"{other}\""),
                    );
                    TransitionShape::Linear
                }
            },
            response_points: match d.response_points {
                None => defaults.response_points.clone(),
                Some(points) => {
                    let mut rows = Vec::with_capacity(points.len());
                    for (i, p) in points.iter().enumerate() {
                        let field = format!("detector.response_points[{i}]");
                        let all_ok = [p.blinding_power_nw, p.e_never_fj, p.e_always_fj]
                            .iter()
                            .all(|v| v.is_finite() && *v >= 0.0);
                        if !all_ok {
                            errs.push(field, "powers and energies must be finite and nonnegative");
                            continue;
                        }
                        rows.push(ResponsePoint::new(
                            Power::from_nanowatts(p.blinding_power_nw),
                            Energy::from_femtojoules(p.e_never_fj),
                            Energy::from_femtojoules(p.e_always_fj),
                        ));
                    }
                    rows
                }
            },
        };
        if errs.is_empty() {
            if let Err(e) = detector.validate() {
                errs.push("detector", e.to_string());
            }
        }

        let attack = self.attack.map(|a| {
            let mode = match a.mode.as_deref() {
                None | Some("blinding_faked_state") => AttackMode::BlindingFakedState,
                Some("plain_intercept_resend") => AttackMode::PlainInterceptResend,
                Some(other) => {
                    errs.push(
                        "attack.mode",
                        format!(
                            "expected \"blinding_faked_state\" or \"plain_intercept_resend\", got \"{other}\""
                        ),
                    );
                    AttackMode::BlindingFakedState
                }
            };
            AttackParams {
                enabled: a.enabled.unwrap_or(true),
                cw_power: Power::from_nanowatts(checked(
                    &mut errs,
                    "attack.cw_power_nw",
                    Some(a.cw_power_nw),
                    0.0,
                    |v| v >= 0.0,
                    "must be finite and nonnegative",
                )),
                trigger_energy: Energy::from_femtojoules(checked(
                    &mut errs,
                    "attack.trigger_energy_fj",
                    Some(a.trigger_energy_fj),
                    0.0,
                    |v| v >= 0.0,
                    "must be finite and nonnegative",
                )),
                forge_rate: checked(
                    &mut errs,
                    "attack.forge_rate_hz",
                    a.forge_rate_hz,
                    DEFAULT_FORGE_RATE_HZ,
                    positive,
                    "must be finite and positive",
                ),
                mode,
            }
        });

        let scw = self.scw.map(|s| {
            let chain_defaults = ScwChain::default();
            let mut chain = ScwChain {
                modulation_index: checked(
                    &mut errs,
                    "scw.modulation_index",
                    s.modulation_index,
                    chain_defaults.modulation_index,
                    |v| v > 1.0,
                    "must be > 1",
                ),
                filter_extinction: Decibel::from_db(checked(
                    &mut errs,
                    "scw.filter_extinction_db",
                    s.filter_extinction_db,
                    chain_defaults.filter_extinction.db(),
                    |v| v >= 0.0,
                    "must be >= 0 dB",
                )),
                bob_insertion_loss: Decibel::from_db(checked(
                    &mut errs,
                    "scw.bob_insertion_loss_db",
                    s.bob_insertion_loss_db,
                    chain_defaults.bob_insertion_loss.db(),
                    |v| v >= 0.0,
                    "must be >= 0 dB",
                )),
                watchdog_attenuation: Decibel::from_db(checked(
                    &mut errs,
                    "scw.watchdog_attenuation_db",
                    s.watchdog_attenuation_db,
                    chain_defaults.watchdog_attenuation.db(),
                    |v| v >= 0.0,
                    "must be >= 0 dB",
                )),
                watchdog_alarm_threshold: chain_defaults.watchdog_alarm_threshold,
                include_carrier_leakage: s.include_carrier_leakage.unwrap_or(false),
            };
            let alice_carrier = Power::from_nanowatts(checked(
                &mut errs,
                "scw.alice_carrier_nw",
                s.alice_carrier_nw,
                DEFAULT_ALICE_CARRIER_NW,
                positive,
                "must be finite and positive",
            ));
            let alarm_factor = checked(
                &mut errs,
                "scw.alarm_factor",
                s.alarm_factor,
                DEFAULT_ALARM_FACTOR,
                positive,
                "must be finite and positive",
            );
            chain.watchdog_alarm_threshold = match s.watchdog_alarm_threshold_nw {
                Some(v) => Power::from_nanowatts(checked(
                    &mut errs,
                    "scw.watchdog_alarm_threshold_nw",
                    Some(v),
                    1.0,
                    positive,
                    "must be finite and positive",
                )),
                // Default alarm point: a multiple of Alice's nominal reading.
                None => alice_carrier * chain.carrier_to_watchdog_factor() * alarm_factor,
            };
            ScwScenario {
                chain,
                alice_carrier,
                alarm_factor,
                watchdog_blinding_threshold: Power::from_nanowatts(checked(
                    &mut errs,
                    "scw.watchdog_blinding_threshold_nw",
                    s.watchdog_blinding_threshold_nw,
                    DEFAULT_WATCHDOG_BLINDING_NW,
                    positive,
                    "must be finite and positive",
                )),
                watchdog_sensitivity_floor: Power::from_nanowatts(checked(
                    &mut errs,
                    "scw.watchdog_sensitivity_floor_nw",
                    s.watchdog_sensitivity_floor_nw,
                    DEFAULT_WATCHDOG_FLOOR_NW,
                    |v| v >= 0.0,
                    "must be finite and nonnegative",
                )),
            }
        });

        if protocol == Protocol::Scw && scw.is_none() {
            errs.push("scw", "required when protocol = \"scw\"");
        }

        errs.into_result()?;
        let config = ScenarioConfig {
            protocol,
            gates: self.gates,
            seed: self.seed,
            detector,
            attack,
            scw,
            mean_photons,
            channel_transmission,
        };
        config.validate()?;
        Ok(config)
    }
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// What a sweep varies, named in the interface units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVariable {
    TriggerEnergyFj,
    CwPowerNw,
}

impl SweepVariable {
    pub fn key(self) -> &'static str {
        match self {
            SweepVariable::TriggerEnergyFj => "trigger_energy_fj",
            SweepVariable::CwPowerNw => "cw_power_nw",
        }
    }

    pub fn parse(s: &str) -> Result<SweepVariable, Error> {
        match s {
            "trigger_energy_fj" => Ok(SweepVariable::TriggerEnergyFj),
            "cw_power_nw" => Ok(SweepVariable::CwPowerNw),
            other => Err(Error::invalid(
                "var",
                format!("expected trigger_energy_fj or cw_power_nw, got {other}"),
            )),
        }
    }
}

/// A response-curve sweep: `steps` evenly spaced points of `variable`
/// over `[from, to]`, each simulated for `gates_per_point` gates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub gates_per_point: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if !self.from.is_finite() || !self.to.is_finite() || self.from < 0.0 {
            return Err(Error::invalid("from/to", "must be finite and nonnegative"));
        }
        if self.from > self.to {
            return Err(Error::invalid("from/to", "requires from <= to"));
        }
        if self.steps == 0 {
            return Err(Error::invalid("steps", "must be positive"));
        }
        if self.from < self.to && self.steps < 2 {
            return Err(Error::invalid("steps", "a nonzero-width sweep needs >= 2 steps"));
        }
        if self.gates_per_point == 0 {
            return Err(Error::invalid("gates", "must be positive"));
        }
        Ok(())
    }

    /// The swept values. A zero-width sweep collapses to a single point.
    pub fn points(&self) -> Vec<f64> {
        if self.from == self.to {
            return vec![self.from];
        }
        let n = self.steps.max(2);
        (0..n)
            .map(|i| self.from + (self.to - self.from) * i as f64 / (n - 1) as f64)
            .collect()
    }
}
