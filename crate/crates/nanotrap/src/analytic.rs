//! Closed-form trap potentials and scaling relations. These serve both as
//! production formulas and as oracles for the numerical modules.
//!
//! All forms are written in the reduced coordinate `x/w`; the `alpha`/`beta`
//! non-adiabatic couplings are `E_w` times dimensionless shape functions.

use crate::error::{Error, Result};
use crate::schemes::Scheme;
use crate::units::{e_w, AngularFrequency, AtomSpecies, Length};

/// Shape parameters of a single sub-wavelength trap.
#[derive(Debug, Clone)]
pub struct TrapShapeParams {
    pub w: Length,
    pub e_w: AngularFrequency,
    pub omega_p: AngularFrequency,
    pub delta_r: AngularFrequency,
    pub eta: f64,
}

impl TrapShapeParams {
    pub fn new(
        species: &AtomSpecies,
        w: Length,
        omega_p: AngularFrequency,
        delta_r: AngularFrequency,
        eta: f64,
    ) -> Self {
        TrapShapeParams { w, e_w: e_w(species, w), omega_p, delta_r, eta }
    }
}

/// Total effective EIT dark-state potential for a linear control profile:
/// `delta_r / (1 + u^2) + E_w / (1 + u^2)^2` with `u = x/w`.
pub fn v_tot_eit(
    delta_r: AngularFrequency,
    w: Length,
    species: &AtomSpecies,
    x: f64,
) -> AngularFrequency {
    let u2 = (x / w.meters()).powi(2);
    let ew = e_w(species, w).rad_per_sec();
    AngularFrequency::from_rad_per_sec(
        delta_r.rad_per_sec() / (1.0 + u2) + ew / (1.0 + u2).powi(2),
    )
}

/// Light shift of the trapped state in the improved-AC scheme:
/// `Omega_p (u^2/2 - sqrt(1 + u^4/4))` with `u = x/w`. Depth `Omega_p` at the
/// center, `-Omega_p/u^2` tail.
pub fn e0_improved_ac(omega_p: AngularFrequency, w: Length, x: f64) -> AngularFrequency {
    let u2 = (x / w.meters()).powi(2);
    AngularFrequency::from_rad_per_sec(
        omega_p.rad_per_sec() * (0.5 * u2 - (1.0 + 0.25 * u2 * u2).sqrt()),
    )
}

/// Non-adiabatic couplings of the two-level AC schemes, from the local model
/// of the control field. With `u = x/w`:
/// `alpha = E_w 4u^2/(4 + u^4)^2`, `beta = E_w (6u^4 - 8)/(4 + u^4)^2`.
///
/// The full matrix is `[[alpha, -beta], [beta, alpha]]` for the improved-AC
/// scheme and `[[alpha, beta], [-beta, alpha]]` for the red AC-Stark scheme;
/// the returned pair is `(alpha, beta)` and the second element carries the
/// improved-AC sign of the `(0,1)` entry negated, i.e. `beta` as printed.
pub fn alpha_beta(
    species: &AtomSpecies,
    w: Length,
    x: f64,
    scheme: Scheme,
) -> Result<(AngularFrequency, AngularFrequency)> {
    if !matches!(scheme, Scheme::ImprovedAc | Scheme::RedAc) {
        return Err(Error::WrongScheme { expected: "improved_ac or red_ac", got: scheme.to_string() });
    }
    let u = x / w.meters();
    let u2 = u * u;
    let denom = (4.0 + u2 * u2).powi(2);
    let ew = e_w(species, w).rad_per_sec();
    let alpha = ew * 4.0 * u2 / denom;
    let beta = ew * (6.0 * u2 * u2 - 8.0) / denom;
    let sign = if scheme == Scheme::ImprovedAc { 1.0 } else { -1.0 };
    Ok((
        AngularFrequency::from_rad_per_sec(alpha),
        AngularFrequency::from_rad_per_sec(sign * beta),
    ))
}

/// Sub-wavelength enhancement factor `s = sqrt(Omega_0^2 / (|Delta| Omega_p))`
/// of the AC schemes. Returns `(s, enhanced)`; `enhanced` is false for s <= 1.
pub fn enhancement_s(
    omega0: AngularFrequency,
    delta: AngularFrequency,
    omega_p: AngularFrequency,
) -> Result<(f64, bool)> {
    if delta.rad_per_sec() == 0.0 {
        return Err(Error::ZeroDetuning);
    }
    if omega_p.rad_per_sec() <= 0.0 {
        return Err(Error::ZeroProbe);
    }
    let s = (omega0.rad_per_sec().powi(2)
        / (delta.rad_per_sec().abs() * omega_p.rad_per_sec()))
    .sqrt();
    Ok((s, s > 1.0))
}

/// Total potential of the modified-EIT scheme with quadratic control minimum:
/// `delta_r / ((eta + u^2)^2 + 1) + 4 E_w u^2 / ((eta + u^2)^2 + 1)^2`.
///
/// The geometric term vanishes at the center for any `eta > 0`, which is the
/// non-adiabatic suppression mechanism.
pub fn v_tot_modified_eit(
    delta_r: AngularFrequency,
    eta: f64,
    w: Length,
    species: &AtomSpecies,
    x: f64,
) -> AngularFrequency {
    let u2 = (x / w.meters()).powi(2);
    let denom = (eta + u2).powi(2) + 1.0;
    let ew = e_w(species, w).rad_per_sec();
    AngularFrequency::from_rad_per_sec(
        delta_r.rad_per_sec() / denom + 4.0 * ew * u2 / (denom * denom),
    )
}
