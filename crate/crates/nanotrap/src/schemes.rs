//! Control-field profiles and position-dependent atom-light Hamiltonians for
//! the EIT, improved-AC, red AC-Stark, and modified-EIT trapping schemes.
//!
//! Rabi-frequency convention: the stored `Omega` values are the Hamiltonian
//! matrix elements (half the conventional full Rabi frequency).
//!
//! Sign convention for the single-photon detuning `Delta` in the two-level
//! Hamiltonian `[[delta - Omega_c^2/Delta, Omega_p], [Omega_p, 0]]`:
//! the improved-AC scheme uses `Delta < 0` (blue) so the node of the control
//! field traps, the red AC-Stark scheme uses `Delta > 0` (red) together with
//! `delta = Omega_0^2 / Delta`.

use crate::error::{Error, Result};
use crate::units::{e_w, AngularFrequency, AtomSpecies, Length};
use nalgebra::DMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Eit,
    ImprovedAc,
    RedAc,
    ModifiedEit,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Scheme::Eit => "eit",
            Scheme::ImprovedAc => "improved_ac",
            Scheme::RedAc => "red_ac",
            Scheme::ModifiedEit => "modified_eit",
        };
        f.write_str(name)
    }
}

/// Spatial profile of the control Rabi frequency `Omega_c(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControlProfile {
    /// `Omega_0 (1 - e^{-x^2/sigma^2})^{1/2}`: node at the origin, saturates
    /// at `Omega_0`. Small-x limit `Omega_0 |x| / sigma`.
    GaussianDip { omega0: AngularFrequency, sigma: Length },
    /// `Omega_0 e^{-x^2/(2 sigma^2)}`: maximum at the origin, so that
    /// `Omega_c^2` carries `e^{-x^2/sigma^2}`.
    GaussianPeak { omega0: AngularFrequency, sigma: Length },
    /// `Omega_0 (1 + nu - cos kx)`: lattice of near-nodes of depth `nu`.
    CosineLattice { omega0: AngularFrequency, k: f64, nu: f64 },
    /// `Omega_0 x / sigma`: signed local model of a node, smooth at x = 0.
    LinearLocal { omega0: AngularFrequency, sigma: Length },
    /// `Omega_p (eta + (x/w)^2)`: local model of the modified-EIT minimum.
    QuadraticLocal { omega_p: AngularFrequency, eta: f64, w: Length },
}

/// Samples `Omega_c(x)`. Total function; every variant is defined for all x.
pub fn control_field(profile: &ControlProfile, x: f64) -> AngularFrequency {
    let value = match *profile {
        ControlProfile::GaussianDip { omega0, sigma } => {
            let u = x / sigma.meters();
            omega0.rad_per_sec() * (-(-u * u).exp_m1()).sqrt()
        }
        ControlProfile::GaussianPeak { omega0, sigma } => {
            let u = x / sigma.meters();
            omega0.rad_per_sec() * (-0.5 * u * u).exp()
        }
        ControlProfile::CosineLattice { omega0, k, nu } => {
            omega0.rad_per_sec() * (1.0 + nu - (k * x).cos())
        }
        ControlProfile::LinearLocal { omega0, sigma } => {
            omega0.rad_per_sec() * x / sigma.meters()
        }
        ControlProfile::QuadraticLocal { omega_p, eta, w } => {
            let u = x / w.meters();
            omega_p.rad_per_sec() * (eta + u * u)
        }
    };
    AngularFrequency::from_rad_per_sec(value)
}

/// An off-resonant coupling `(Omega, Delta_off)` producing a parasitic light
/// shift `Omega^2 / Delta_off` on one of the trap levels.
#[derive(Debug, Clone, Copy)]
pub struct OffResonantCoupling {
    pub omega: AngularFrequency,
    pub delta_off: AngularFrequency,
}

/// All laser and atom parameters defining one scheme instance.
#[derive(Debug, Clone)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub species: AtomSpecies,
    pub profile: ControlProfile,
    /// Probe Rabi frequency `Omega_p`.
    pub omega_p: AngularFrequency,
    /// Single-photon detuning `Delta` (signed, see module docs).
    pub delta: AngularFrequency,
    /// Two-photon detuning `delta_r` of the EIT schemes.
    pub delta_r: AngularFrequency,
    /// Two-photon detuning `delta` of the AC schemes.
    pub delta_small: AngularFrequency,
    /// Excited-state linewidth `Gamma`.
    pub gamma: AngularFrequency,
    /// Couplings outside the three-level system, for constraint checks.
    pub off_resonant: Vec<OffResonantCoupling>,
    /// Hyperfine splitting bound for the EIT level scheme, if applicable.
    pub delta_hfs: Option<AngularFrequency>,
}

impl SchemeConfig {
    pub fn new(scheme: Scheme, species: AtomSpecies, profile: ControlProfile) -> Self {
        SchemeConfig {
            scheme,
            species,
            profile,
            omega_p: AngularFrequency::ZERO,
            delta: AngularFrequency::ZERO,
            delta_r: AngularFrequency::ZERO,
            delta_small: AngularFrequency::ZERO,
            gamma: AngularFrequency::ZERO,
            off_resonant: Vec::new(),
            delta_hfs: None,
        }
    }

    pub fn control_field(&self, x: f64) -> AngularFrequency {
        control_field(&self.profile, x)
    }

    /// Matrix dimension of the atom-light Hamiltonian for this scheme.
    pub fn channels(&self) -> usize {
        match self.scheme {
            Scheme::Eit | Scheme::ModifiedEit => 3,
            Scheme::ImprovedAc | Scheme::RedAc => 2,
        }
    }

    /// Samples the scheme's atom-light Hamiltonian at `x`.
    pub fn hamiltonian(&self, x: f64) -> Result<DMatrix<f64>> {
        match self.scheme {
            Scheme::Eit | Scheme::ModifiedEit => hamiltonian_eit(self, x),
            Scheme::ImprovedAc | Scheme::RedAc => hamiltonian_two_level(self, x),
        }
    }
}

/// Three-level Hamiltonian in the bare basis `{|r>, |g>, |e>}`:
/// `[[delta_r, 0, Omega_c], [0, 0, Omega_p], [Omega_c, Omega_p, Delta]]`.
pub fn hamiltonian_eit(config: &SchemeConfig, x: f64) -> Result<DMatrix<f64>> {
    if !matches!(config.scheme, Scheme::Eit | Scheme::ModifiedEit) {
        return Err(Error::WrongScheme { expected: "eit or modified_eit", got: config.scheme.to_string() });
    }
    let oc = config.control_field(x).rad_per_sec();
    let op = config.omega_p.rad_per_sec();
    let dr = config.delta_r.rad_per_sec();
    let d = config.delta.rad_per_sec();
    Ok(DMatrix::from_row_slice(3, 3, &[
        dr, 0.0, oc,
        0.0, 0.0, op,
        oc, op, d,
    ]))
}

/// Ratio below which `|Delta|` relative to the other scales voids the
/// adiabatic elimination behind the two-level Hamiltonian.
pub const ELIMINATION_MARGIN: f64 = 10.0;

/// Two-level Hamiltonian after adiabatic elimination of `|e>`, in the
/// `{|r>, |g>}` basis: `[[delta - Omega_c^2/Delta, Omega_p], [Omega_p, 0]]`.
///
/// Returns the matrix together with a perturbative-validity flag: `false`
/// when `|Delta| < 10 max(|Omega_c|, Omega_p, |delta|)` at this point.
pub fn hamiltonian_two_level(config: &SchemeConfig, x: f64) -> Result<DMatrix<f64>> {
    hamiltonian_two_level_checked(config, x).map(|(h, _)| h)
}

pub fn hamiltonian_two_level_checked(config: &SchemeConfig, x: f64) -> Result<(DMatrix<f64>, bool)> {
    if !matches!(config.scheme, Scheme::ImprovedAc | Scheme::RedAc) {
        return Err(Error::WrongScheme { expected: "improved_ac or red_ac", got: config.scheme.to_string() });
    }
    let delta = config.delta.rad_per_sec();
    if delta == 0.0 {
        return Err(Error::ZeroDetuning);
    }
    let oc = config.control_field(x).rad_per_sec();
    let op = config.omega_p.rad_per_sec();
    let ds = config.delta_small.rad_per_sec();
    let valid = delta.abs() >= ELIMINATION_MARGIN * oc.abs().max(op).max(ds.abs());
    let h = DMatrix::from_row_slice(2, 2, &[
        ds - oc * oc / delta, op,
        op, 0.0,
    ]);
    Ok((h, valid))
}

/// One parasitic light-shift check.
#[derive(Debug, Clone, Copy)]
pub struct ShiftCheck {
    pub omega: AngularFrequency,
    pub delta_off: AngularFrequency,
    /// `Omega^2 / Delta_off`.
    pub shift: AngularFrequency,
    /// `0.1 E_w`.
    pub limit: AngularFrequency,
    pub pass: bool,
}

/// Report from [`validate_level_constraints`]. Informational only.
#[derive(Debug, Clone)]
pub struct ConstraintReport {
    pub e_w: AngularFrequency,
    pub shifts: Vec<ShiftCheck>,
    /// `Omega_0 < sqrt(Delta_hfs E_w)`, when `Delta_hfs` is configured.
    pub hyperfine_pass: Option<bool>,
}

impl ConstraintReport {
    pub fn all_pass(&self) -> bool {
        self.shifts.iter().all(|s| s.pass) && self.hyperfine_pass.unwrap_or(true)
    }
}

/// Checks every configured off-resonant coupling against the `0.1 E_w`
/// light-shift bound, and the hyperfine bound `Omega_0 < sqrt(Delta_hfs E_w)`
/// when a splitting is given. Both comparisons are strict.
pub fn validate_level_constraints(config: &SchemeConfig, w: Length) -> ConstraintReport {
    let ew = e_w(&config.species, w);
    let limit = 0.1 * ew.rad_per_sec();
    let shifts = config
        .off_resonant
        .iter()
        .map(|c| {
            let shift = c.omega.rad_per_sec().powi(2) / c.delta_off.rad_per_sec();
            ShiftCheck {
                omega: c.omega,
                delta_off: c.delta_off,
                shift: AngularFrequency::from_rad_per_sec(shift),
                limit: AngularFrequency::from_rad_per_sec(limit),
                pass: shift < limit,
            }
        })
        .collect();
    let hyperfine_pass = config.delta_hfs.map(|hfs| {
        let omega0 = profile_peak(&config.profile).rad_per_sec();
        omega0 * omega0 < hfs.rad_per_sec() * ew.rad_per_sec()
    });
    ConstraintReport { e_w: ew, shifts, hyperfine_pass }
}

/// Peak control Rabi frequency `Omega_0` of a profile.
pub fn profile_peak(profile: &ControlProfile) -> AngularFrequency {
    match *profile {
        ControlProfile::GaussianDip { omega0, .. }
        | ControlProfile::GaussianPeak { omega0, .. }
        | ControlProfile::CosineLattice { omega0, .. }
        | ControlProfile::LinearLocal { omega0, .. } => omega0,
        ControlProfile::QuadraticLocal { omega_p, .. } => omega_p,
    }
}
