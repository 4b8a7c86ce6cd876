//! Subcarrier-wave QKD receiver model: carrier/sideband power propagation
//! through the phase modulator, spectral filter and insertion losses, the
//! power-budget calculator for detector control through that chain, and
//! the carrier-monitoring watchdog countermeasure.
//!
//! The chain is the lumped model behind the budget arithmetic: a
//! modulation index `m` (carrier-to-sidebands power ratio, 20 by default)
//! converts `1/m` of an incoming carrier into sidebands that pass the
//! spectral filter, and the whole receiver adds a fixed insertion loss
//! (6.4 dB by default). Anything Eve wants at the APD therefore costs
//! `m * 10^(loss/10)` times more at the receiver entrance, which is why
//! a blinding attack shows up as an abnormally strong carrier - exactly
//! what the watchdog photodiode monitors.

use crate::error::Error;
use crate::optics::{db_to_linear, Decibel, Energy, Power};

/// Upper end of the attenuation search range for
/// [`find_attenuation_window`], in dB. Values beyond this are far past
/// any practical fiber attenuator.
pub const ATTENUATION_SEARCH_MAX_DB: f64 = 200.0;

/// Receiver optical parameters plus the watchdog branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScwChain {
    /// Carrier-to-sidebands power ratio of the phase modulator (> 1).
    pub modulation_index: f64,
    /// Spectral filter extinction of the carrier.
    pub filter_extinction: Decibel,
    /// Insertion loss of the whole receiver module.
    pub bob_insertion_loss: Decibel,
    /// Attenuator protecting the watchdog photodiode.
    pub watchdog_attenuation: Decibel,
    /// Watchdog reading above which the run raises an alarm.
    pub watchdog_alarm_threshold: Power,
    /// Include residual carrier leakage past the spectral filter in the
    /// power reaching the APD. The budget arithmetic ignores leakage,
    /// so this defaults to off.
    pub include_carrier_leakage: bool,
}

impl Default for ScwChain {
    fn default() -> Self {
        let chain = ScwChain {
            modulation_index: 20.0,
            filter_extinction: Decibel::from_db(30.0),
            bob_insertion_loss: Decibel::from_db(6.4),
            watchdog_attenuation: Decibel::from_db(20.0),
            watchdog_alarm_threshold: Power::from_watts(f64::MIN_POSITIVE),
            include_carrier_leakage: false,
        };
        // Default alarm point: 3x the watchdog reading of a 1 uW carrier.
        let nominal = Power::from_watts(1e-6) * chain.carrier_to_watchdog_factor();
        ScwChain {
            watchdog_alarm_threshold: nominal * 3.0,
            ..chain
        }
    }
}

impl ScwChain {
    pub fn validate(&self) -> Result<(), Error> {
        if !self.modulation_index.is_finite() || self.modulation_index <= 1.0 {
            return Err(Error::invalid(
                "modulation_index",
                format!("must be > 1, got {}", self.modulation_index),
            ));
        }
        for (name, v) in [
            ("filter_extinction", self.filter_extinction),
            ("bob_insertion_loss", self.bob_insertion_loss),
            ("watchdog_attenuation", self.watchdog_attenuation),
        ] {
            if v.db() < 0.0 {
                return Err(Error::InvalidArgument {
                    name,
                    reason: format!("must be >= 0 dB, got {} dB", v.db()),
                });
            }
        }
        if self.watchdog_alarm_threshold <= Power::ZERO {
            return Err(Error::invalid(
                "watchdog_alarm_threshold",
                "must be positive",
            ));
        }
        Ok(())
    }

    /// Multiplier from a subcarrier requirement at the APD to the power
    /// (or pulse energy) Eve must present at the receiver entrance:
    /// `modulation_index * 10^(insertion_loss/10)`.
    pub fn required_input_factor(&self) -> f64 {
        self.modulation_index * db_to_linear(self.bob_insertion_loss)
    }

    /// Fraction of an entrance carrier that arrives at the APD as
    /// filtered sidebands (plus the optional leakage term).
    pub fn carrier_to_apd_factor(&self) -> f64 {
        let loss = db_to_linear(self.bob_insertion_loss);
        let mut f = 1.0 / (self.modulation_index * loss);
        if self.include_carrier_leakage {
            f += 1.0 / (loss * db_to_linear(self.filter_extinction));
        }
        f
    }

    /// Fraction of an entrance carrier that reaches the watchdog
    /// photodiode behind the insertion loss and the protective attenuator.
    pub fn carrier_to_watchdog_factor(&self) -> f64 {
        1.0 / (db_to_linear(self.bob_insertion_loss) * db_to_linear(self.watchdog_attenuation))
    }
}

/// Scales a requirement at the APD up to the receiver entrance. The same
/// arithmetic applies to blinding powers and trigger pulse energies.
pub fn required_input_for_subcarrier(target_at_apd: f64, chain: &ScwChain) -> f64 {
    target_at_apd * chain.required_input_factor()
}

pub fn required_power_at_bob(target_at_apd: Power, chain: &ScwChain) -> Power {
    target_at_apd * chain.required_input_factor()
}

pub fn required_energy_at_bob(target_at_apd: Energy, chain: &ScwChain) -> Energy {
    target_at_apd * chain.required_input_factor()
}

/// The three stages of the faked-state power budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BudgetStage {
    AtSubcarriersAfterFiltering,
    BeforeModulation,
    EnteringBob,
}

impl BudgetStage {
    /// Stable machine-readable key, used in the CSV output.
    pub fn key(self) -> &'static str {
        match self {
            BudgetStage::AtSubcarriersAfterFiltering => "at_subcarriers_after_filtering",
            BudgetStage::BeforeModulation => "before_modulation",
            BudgetStage::EnteringBob => "entering_bob",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BudgetStage::AtSubcarriersAfterFiltering => "subcarriers after filtering",
            BudgetStage::BeforeModulation => "spectrum before modulation",
            BudgetStage::EnteringBob => "spectrum entering Bob's module",
        }
    }

    /// Decimal places of the displayed table at this stage.
    pub fn display_decimals(self) -> usize {
        match self {
            BudgetStage::AtSubcarriersAfterFiltering => 1,
            _ => 0,
        }
    }
}

/// One row of the budget: what Eve's faked state must carry at a given
/// stage of the chain for the same control at the APD.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BudgetRow {
    pub stage: BudgetStage,
    pub blinding_power: Power,
    pub e_always: Energy,
    pub e_never: Energy,
}

/// Builds the three-stage budget for the detector thresholds measured at
/// the given blinding power. Full precision is retained; rounding
/// happens only at display time.
pub fn table1(
    blinding_power: Power,
    e_always: Energy,
    e_never: Energy,
    chain: &ScwChain,
) -> [BudgetRow; 3] {
    let m = chain.modulation_index;
    let full = chain.required_input_factor();
    let rows = [
        BudgetRow {
            stage: BudgetStage::AtSubcarriersAfterFiltering,
            blinding_power,
            e_always,
            e_never,
        },
        BudgetRow {
            stage: BudgetStage::BeforeModulation,
            blinding_power: blinding_power * m,
            e_always: e_always * m,
            e_never: e_never * m,
        },
        BudgetRow {
            stage: BudgetStage::EnteringBob,
            blinding_power: blinding_power * full,
            e_always: e_always * full,
            e_never: e_never * full,
        },
    ];
    debug_assert!(rows[0].blinding_power < rows[1].blinding_power);
    debug_assert!(rows[1].blinding_power < rows[2].blinding_power);
    rows
}

/// An optical spectrum reduced to two scalar bands.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScwSpectrum {
    pub carrier: Power,
    /// Total power in both sidebands.
    pub sidebands: Power,
}

/// Propagates a spectrum at the receiver entrance through the chain.
/// Returns `(at_apd, at_watchdog)`: the filtered sideband power reaching
/// the APD (carrier converted by `1/m` behind the insertion loss, input
/// sidebands suppressed by the filter extinction) and the attenuated
/// carrier reading at the watchdog photodiode.
pub fn propagate_eve_spectrum(input: &ScwSpectrum, chain: &ScwChain) -> (Power, Power) {
    let at_apd = input.carrier * chain.carrier_to_apd_factor()
        + input.sidebands * (1.0 / db_to_linear(chain.filter_extinction));
    let at_watchdog = input.carrier * chain.carrier_to_watchdog_factor();
    (at_apd, at_watchdog)
}

/// Outcome of one watchdog reading.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WatchdogStatus {
    Ok,
    Alarm,
    /// The reading reaches the watchdog's own blinding threshold: the
    /// countermeasure itself has been defeated.
    Blinded,
}

/// Classifies a watchdog reading. Blinding of the watchdog dominates an
/// alarm; it means the monitor can no longer be trusted at all.
pub fn watchdog_check(
    at_watchdog: Power,
    chain: &ScwChain,
    watchdog_blinding_threshold: Power,
) -> WatchdogStatus {
    if at_watchdog >= watchdog_blinding_threshold {
        WatchdogStatus::Blinded
    } else if at_watchdog > chain.watchdog_alarm_threshold {
        WatchdogStatus::Alarm
    } else {
        WatchdogStatus::Ok
    }
}

/// Solves for the admissible watchdog attenuations, in dB: high enough
/// that Eve's carrier stays below the watchdog's blinding threshold,
/// low enough that Alice's carrier stays detectable above the
/// sensitivity floor. Both carriers are given at the receiver entrance.
///
/// Returns the `(low, high)` dB interval clipped to
/// `[0, ATTENUATION_SEARCH_MAX_DB]`, or `None` when no attenuation
/// satisfies both constraints (the countermeasure is infeasible for
/// those parameters). The lower endpoint is the infimum: at exactly that
/// attenuation Eve's carrier sits on the blinding threshold.
pub fn find_attenuation_window(
    alice_carrier: Power,
    eve_carrier: Power,
    watchdog_sensitivity_floor: Power,
    watchdog_blinding_threshold: Power,
    loss: Decibel,
) -> Result<Option<(Decibel, Decibel)>, Error> {
    if alice_carrier <= Power::ZERO {
        return Err(Error::invalid("alice_carrier", "must be positive"));
    }
    if eve_carrier <= alice_carrier {
        return Err(Error::invalid(
            "eve_carrier",
            "must exceed alice_carrier for the window to be meaningful",
        ));
    }
    if watchdog_blinding_threshold <= Power::ZERO {
        return Err(Error::invalid(
            "watchdog_blinding_threshold",
            "must be positive",
        ));
    }
    let l = db_to_linear(loss);
    // Alice detectable: alice / (L * 10^(A/10)) >= floor.
    let high = if watchdog_sensitivity_floor == Power::ZERO {
        ATTENUATION_SEARCH_MAX_DB
    } else {
        10.0 * (alice_carrier.watts() / (l * watchdog_sensitivity_floor.watts())).log10()
    };
    // Watchdog not blinded: eve / (L * 10^(A/10)) < blinding threshold.
    let low = 10.0 * (eve_carrier.watts() / (l * watchdog_blinding_threshold.watts())).log10();

    let low = low.max(0.0);
    let high = high.min(ATTENUATION_SEARCH_MAX_DB);
    if low > high {
        return Ok(None);
    }
    Ok(Some((Decibel::from_db(low), Decibel::from_db(high))))
}
