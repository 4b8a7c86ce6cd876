//! Unit-safe optical arithmetic shared by all modules.
//!
//! All quantities are stored in SI units (watts, joules, hertz, seconds).
//! The nW/fJ/ns values that appear at the interfaces are converted at the
//! boundary; mixing presentation units into the arithmetic is the easiest
//! way to lose a factor of 10^6 in this domain.

use std::ops::{Add, Div, Mul};

use crate::error::Error;

/// Watts per nanowatt.
pub const NANOWATT: f64 = 1e-9;
/// Joules per femtojoule.
pub const FEMTOJOULE: f64 = 1e-15;
/// Seconds per nanosecond.
pub const NANOSECOND: f64 = 1e-9;

/// Optical power in watts. Always finite and nonnegative.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Power(f64);

impl Power {
    pub const ZERO: Power = Power(0.0);

    /// Panics if `watts` is negative, NaN or infinite.
    pub fn from_watts(watts: f64) -> Power {
        assert!(
            watts.is_finite() && watts >= 0.0,
            "power must be finite and nonnegative, got {watts}"
        );
        Power(watts)
    }

    pub fn from_nanowatts(nanowatts: f64) -> Power {
        Power::from_watts(nanowatts * NANOWATT)
    }

    pub fn watts(self) -> f64 {
        self.0
    }

    pub fn nanowatts(self) -> f64 {
        self.0 / NANOWATT
    }
}

impl Mul<f64> for Power {
    type Output = Power;
    fn mul(self, factor: f64) -> Power {
        Power::from_watts(self.0 * factor)
    }
}

impl Div<f64> for Power {
    type Output = Power;
    fn div(self, divisor: f64) -> Power {
        Power::from_watts(self.0 / divisor)
    }
}

impl Add for Power {
    type Output = Power;
    fn add(self, rhs: Power) -> Power {
        Power::from_watts(self.0 + rhs.0)
    }
}

/// Optical pulse energy in joules. Always finite and nonnegative.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Energy(f64);

impl Energy {
    pub const ZERO: Energy = Energy(0.0);

    /// Panics if `joules` is negative, NaN or infinite.
    pub fn from_joules(joules: f64) -> Energy {
        assert!(
            joules.is_finite() && joules >= 0.0,
            "energy must be finite and nonnegative, got {joules}"
        );
        Energy(joules)
    }

    pub fn from_femtojoules(femtojoules: f64) -> Energy {
        Energy::from_joules(femtojoules * FEMTOJOULE)
    }

    pub fn joules(self) -> f64 {
        self.0
    }

    pub fn femtojoules(self) -> f64 {
        self.0 / FEMTOJOULE
    }
}

impl Mul<f64> for Energy {
    type Output = Energy;
    fn mul(self, factor: f64) -> Energy {
        Energy::from_joules(self.0 * factor)
    }
}

impl Div<f64> for Energy {
    type Output = Energy;
    fn div(self, divisor: f64) -> Energy {
        Energy::from_joules(self.0 / divisor)
    }
}

impl Add for Energy {
    type Output = Energy;
    fn add(self, rhs: Energy) -> Energy {
        Energy::from_joules(self.0 + rhs.0)
    }
}

/// A power ratio expressed in decibels. Finite, may be negative.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Decibel(f64);

impl Decibel {
    pub const ZERO: Decibel = Decibel(0.0);

    /// Panics if `db` is NaN or infinite.
    pub fn from_db(db: f64) -> Decibel {
        assert!(db.is_finite(), "decibel value must be finite, got {db}");
        Decibel(db)
    }

    pub fn db(self) -> f64 {
        self.0
    }
}

impl Add for Decibel {
    type Output = Decibel;
    fn add(self, rhs: Decibel) -> Decibel {
        Decibel::from_db(self.0 + rhs.0)
    }
}

/// Converts a decibel ratio to the dimensionless linear ratio `10^(dB/10)`.
///
/// Strictly positive for any finite input.
pub fn db_to_linear(value: Decibel) -> f64 {
    10f64.powf(value.db() / 10.0)
}

/// Probability that at least one photon of a Poissonian pulse with mean
/// photon number `mean_photons` is detected at quantum efficiency
/// `efficiency`: `1 - exp(-efficiency * mean_photons)`.
///
/// Rejects negative `mean_photons` and `efficiency` outside `[0, 1]`.
pub fn mean_photons_to_click_prob(mean_photons: f64, efficiency: f64) -> Result<f64, Error> {
    if !mean_photons.is_finite() || mean_photons < 0.0 {
        return Err(Error::invalid(
            "mean_photons",
            format!("must be finite and nonnegative, got {mean_photons}"),
        ));
    }
    if !efficiency.is_finite() || !(0.0..=1.0).contains(&efficiency) {
        return Err(Error::invalid(
            "efficiency",
            format!("must be in [0, 1], got {efficiency}"),
        ));
    }
    Ok(1.0 - (-efficiency * mean_photons).exp())
}

/// Pulse energy from the average optical power of a pulse train:
/// `avg_power / rep_rate`. Rejects non-positive repetition rates.
pub fn pulse_energy_from_avg_power(avg_power: Power, rep_rate_hz: f64) -> Result<Energy, Error> {
    if !rep_rate_hz.is_finite() || rep_rate_hz <= 0.0 {
        return Err(Error::invalid(
            "rep_rate_hz",
            format!("must be finite and positive, got {rep_rate_hz}"),
        ));
    }
    Ok(Energy::from_joules(avg_power.watts() / rep_rate_hz))
}
