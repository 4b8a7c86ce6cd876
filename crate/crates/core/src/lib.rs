//! Gate-level simulator of the bright-light detector-blinding attack on
//! quantum key distribution receivers.
//!
//! A gated InGaAs APD can be forced from Geiger mode into linear mode by
//! continuous bright illumination; once blinded it clicks deterministically
//! on trigger pulses above a threshold energy and never below one. An
//! eavesdropper who intercepts the quantum signal and forges such pulses
//! controls every detection outcome without raising the error rate. This
//! crate models that detector, the BB84 protocol around it, the power
//! budget of mounting the same attack through a subcarrier-wave receiver,
//! and a carrier-monitoring watchdog countermeasure.
//!
//! Everything is deterministic under a master seed: same scenario, same
//! byte-for-byte output.
//!
//! Modules:
//! * [`optics`] - unit-safe powers, energies, decibels, photon statistics.
//! * [`detector`] - the gated APD state machine (Geiger vs blinded).
//! * [`bb84`] - Alice/Eve/Bob, sifting and QBER accounting.
//! * [`scw`] - subcarrier-wave receiver chain, budget table, watchdog.
//! * [`harness`] - scenario config, seeded runs, sweeps, reports.
//! * [`rng`] - per-party deterministic stream derivation.

pub mod bb84;
pub mod detector;
pub mod error;
pub mod harness;
pub mod optics;
pub mod rng;
pub mod scw;

pub use error::Error;
