//! Design and simulation toolkit for coherent sub-wavelength optical traps.
//!
//! The crate models dark-state (EIT) and AC-Stark trapping schemes for
//! ultracold atoms: closed-form trap shapes, Born-Oppenheimer decomposition
//! with geometric gauge potentials, a coupled-channel bound-state solver,
//! perturbative loss and lifetime estimates, and inversion of the lifetime
//! scaling laws into achievable trap parameters.
//!
//! Conventions: energies are angular frequencies (rad/s, hbar = 1) internally
//! and cyclic frequencies (Hz) at the API edges; lengths are meters. The
//! confinement scale of a trap of width `w` is `E_w = hbar / (2 m w^2)`.

pub mod adiabatic;
pub mod analytic;
pub mod design;
pub mod error;
pub mod losses;
pub mod schemes;
pub mod solver;
pub mod units;

pub use error::{Error, Result};
pub use units::{AngularFrequency, AtomSpecies, Length};
