//! Unit conventions, physical constants, and the confinement energy scales
//! `E_w` and `E_sigma`.
//!
//! Internally all energies are angular frequencies (rad/s, hbar = 1), lengths
//! are meters, and masses are kilograms. User-facing configuration and reports
//! use cyclic frequencies (Hz), i.e. values of Omega/2pi.

use crate::error::{Error, Result};
use std::f64::consts::TAU;

/// Reduced Planck constant, J s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Atomic mass unit, kg (CODATA 2018).
pub const AMU: f64 = 1.660_539_066_60e-27;

/// Energy stored as an angular frequency (rad/s, hbar = 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AngularFrequency(f64);

impl AngularFrequency {
    pub const ZERO: AngularFrequency = AngularFrequency(0.0);

    pub fn from_rad_per_sec(value: f64) -> Self {
        AngularFrequency(value)
    }

    /// Converts a cyclic frequency nu (Hz) to omega = 2 pi nu.
    pub fn from_hz(hz: f64) -> Self {
        AngularFrequency(TAU * hz)
    }

    pub fn rad_per_sec(self) -> f64 {
        self.0
    }

    /// The cyclic frequency omega / 2 pi, in Hz.
    pub fn hz(self) -> f64 {
        self.0 / TAU
    }
}

/// A positive length in meters.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Length(f64);

impl Length {
    pub fn from_meters(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(Length(value))
        } else {
            Err(Error::NonPositiveLength(value))
        }
    }

    pub fn meters(self) -> f64 {
        self.0
    }
}

/// An atomic species, identified by label and mass.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomSpecies {
    pub label: String,
    mass: f64,
}

impl AtomSpecies {
    pub fn new(label: impl Into<String>, mass_kg: f64) -> Result<Self> {
        if mass_kg > 0.0 && mass_kg.is_finite() {
            Ok(AtomSpecies { label: label.into(), mass: mass_kg })
        } else {
            Err(Error::NonPositiveMass(mass_kg))
        }
    }

    pub fn from_amu(label: impl Into<String>, mass_amu: f64) -> Result<Self> {
        Self::new(label, mass_amu * AMU)
    }

    /// 171Yb, mass taken as 171 u.
    pub fn yb171() -> Self {
        AtomSpecies { label: "171Yb".into(), mass: 171.0 * AMU }
    }

    pub fn mass_kg(&self) -> f64 {
        self.mass
    }
}

/// Confinement energy scale of a trap of width `w`:
/// `E_w = hbar / (2 m w^2)` as an angular frequency.
pub fn e_w(species: &AtomSpecies, w: Length) -> AngularFrequency {
    AngularFrequency(HBAR / (2.0 * species.mass_kg() * w.meters() * w.meters()))
}

/// Recoil-like energy at the diffraction-limited scale sigma:
/// `E_sigma = hbar / (2 m sigma^2)`. Satisfies `e_w(sigma/s) = s^2 e_sigma`.
pub fn e_sigma(species: &AtomSpecies, sigma: Length) -> AngularFrequency {
    e_w(species, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn len(m: f64) -> Length {
        Length::from_meters(m).unwrap()
    }

    #[test]
    fn ew_matches_trap_table_rows() {
        // 171Yb rows: (w, E_w/2pi) for (1 MHz, lambda/2pi, 100 ms) and
        // (1000 MHz, lambda/2pi, 100 ms).
        let yb = AtomSpecies::yb171();
        let cases = [(164.801e-9, 1088.62), (16.4801e-9, 108_862.0)];
        for (w, ew_hz) in cases {
            let got = e_w(&yb, len(w)).hz();
            assert!(
                (got - ew_hz).abs() / ew_hz < 1e-3,
                "w = {w}: got {got} Hz, want {ew_hz} Hz"
            );
        }
    }

    #[test]
    fn ew_vanishes_at_infinite_width() {
        let yb = AtomSpecies::yb171();
        assert!(e_w(&yb, len(1.0)).rad_per_sec() < 1e-9);
    }

    #[test]
    fn e_sigma_at_control_wavelength() {
        // E_sigma = E_w / s^2 for the anchor row: 1088.62 Hz / 1.91555^2.
        let yb = AtomSpecies::yb171();
        let sigma = len(1983.5e-9 / TAU);
        let want = 1088.62 / (1.91555 * 1.91555);
        let got = e_sigma(&yb, sigma).hz();
        assert!((got - want).abs() / want < 1e-3, "got {got}, want {want}");
    }

    #[test]
    fn e_sigma_inverse_square_scaling() {
        let yb = AtomSpecies::yb171();
        let a = e_sigma(&yb, len(1e-6)).rad_per_sec();
        let b = e_sigma(&yb, len(2e-6)).rad_per_sec();
        assert!((a / b - 4.0).abs() < 1e-12);
    }

    #[test]
    fn ew_equals_s_squared_e_sigma() {
        let yb = AtomSpecies::yb171();
        for s in [1.5, 2.0, 19.1555, 100.0] {
            let sigma = 3e-6;
            let lhs = e_w(&yb, len(sigma / s)).rad_per_sec();
            let rhs = s * s * e_sigma(&yb, len(sigma)).rad_per_sec();
            assert!((lhs - rhs).abs() / rhs < 1e-14);
        }
    }

    #[test]
    fn rejects_nonpositive_length() {
        assert!(Length::from_meters(0.0).is_err());
        assert!(Length::from_meters(-1e-9).is_err());
    }

    #[test]
    fn cyclic_angular_round_trip() {
        let f = AngularFrequency::from_hz(1.0e6);
        assert!((f.rad_per_sec() - TAU * 1.0e6).abs() < 1e-6);
        assert!((f.hz() - 1.0e6).abs() < 1e-9);
    }
}
