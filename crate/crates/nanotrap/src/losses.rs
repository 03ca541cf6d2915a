//! Lifetime and loss-rate estimators: excited-state admixture, non-adiabatic
//! admixture, the s-power scaling laws, and Landau-Zener tunneling.
//!
//! All "~" relations carry prefactor 1 and are order-of-magnitude estimates;
//! the tests check scalings (slopes, ratios), not absolute prefactors.

use crate::analytic::TrapShapeParams;
use crate::error::{Error, Result};
use crate::schemes::{Scheme, SchemeConfig};
use crate::solver::BoundStateResult;
use crate::units::AngularFrequency;

/// Composite loss estimate for one trap configuration.
#[derive(Debug, Clone)]
pub struct LossReport {
    /// Trap-depth admixture loss, `Gamma V^2 / Omega_p^2`.
    pub gamma_d1: AngularFrequency,
    /// Confinement (non-adiabatic) admixture loss, `Gamma E_w^2 / Omega_p^2`.
    pub gamma_d2: AngularFrequency,
    pub gamma_total: AngularFrequency,
    /// Excited-state fraction.
    pub p_e: f64,
    pub gamma_lz: AngularFrequency,
    /// `1 / Gamma_total`; infinite when all rates vanish.
    pub lifetime_s: f64,
}

/// EIT dark-state loss rates: `(Gamma_D1, Gamma_D2, Gamma_total)` with
/// `Gamma_D1 = Gamma V^2 / Omega_p^2` and `Gamma_D2 = Gamma E_w^2 / Omega_p^2`.
pub fn gamma_eit(
    gamma: AngularFrequency,
    v_tot_depth: AngularFrequency,
    e_w: AngularFrequency,
    omega_p: AngularFrequency,
) -> Result<(AngularFrequency, AngularFrequency, AngularFrequency)> {
    let op = omega_p.rad_per_sec();
    if op <= 0.0 {
        return Err(Error::ZeroProbe);
    }
    let g = gamma.rad_per_sec();
    let d1 = g * (v_tot_depth.rad_per_sec() / op).powi(2);
    let d2 = g * (e_w.rad_per_sec() / op).powi(2);
    Ok((
        AngularFrequency::from_rad_per_sec(d1),
        AngularFrequency::from_rad_per_sec(d2),
        AngularFrequency::from_rad_per_sec(d1 + d2),
    ))
}

/// Excited-state fraction of a solved two-level bound state, restored after
/// adiabatic elimination and weighted by the atomic density:
/// `P_e = integral |psi_r(x)|^2 (Omega_c(x) / Delta)^2 dx`.
pub fn pe_admixture_numeric(result: &BoundStateResult, config: &SchemeConfig) -> Result<f64> {
    if !matches!(config.scheme, Scheme::ImprovedAc | Scheme::RedAc) {
        return Err(Error::WrongScheme {
            expected: "improved_ac or red_ac",
            got: config.scheme.to_string(),
        });
    }
    let delta = config.delta.rad_per_sec();
    if delta == 0.0 {
        return Err(Error::ZeroDetuning);
    }
    let state = result
        .states
        .first()
        .ok_or(Error::MissingChannel { channel: 0 })?;
    let psi_r = state
        .channels
        .first()
        .ok_or(Error::MissingChannel { channel: 0 })?;
    let h = result.grid.spacing();
    let mut p_e = 0.0;
    for (i, &amp) in psi_r.iter().enumerate() {
        let oc = config.control_field(result.grid.point(i)).rad_per_sec();
        p_e += amp * amp * (oc / delta).powi(2) * h;
    }
    Ok(p_e)
}

/// Closed-form loss scaling `s^6 (E_sigma/Omega_0)^2` for the EIT and
/// improved-AC schemes, `s^8 (E_sigma/Omega_0)^2` for the red AC-Stark
/// scheme. The returned flag is false when s < 1 (no sub-wavelength
/// enhancement; the value is still the formula's).
pub fn pe_scaling(
    scheme: Scheme,
    s: f64,
    e_sigma: AngularFrequency,
    omega0: AngularFrequency,
) -> (f64, bool) {
    let base = (e_sigma.rad_per_sec() / omega0.rad_per_sec()).powi(2);
    let value = match scheme {
        Scheme::RedAc => s.powi(8) * base,
        Scheme::Eit | Scheme::ImprovedAc | Scheme::ModifiedEit => s.powi(6) * base,
    };
    (value, s >= 1.0)
}

/// Landau-Zener tunneling rate out of the trapped branch:
/// `E_w exp(-nu gap / E_w)` with `nu` an order-unity factor (default 1).
pub fn gamma_lz(
    e_w: AngularFrequency,
    delta_gap: AngularFrequency,
    nu: f64,
) -> Result<AngularFrequency> {
    let gap = delta_gap.rad_per_sec();
    if gap < 0.0 {
        return Err(Error::NegativeGap(gap));
    }
    if !(nu > 0.0) {
        return Err(Error::Config(format!("nu must be positive, got {nu}")));
    }
    let ew = e_w.rad_per_sec();
    if ew == 0.0 {
        return Ok(AngularFrequency::ZERO);
    }
    Ok(AngularFrequency::from_rad_per_sec(ew * (-nu * gap / ew).exp()))
}

/// Landau-Zener gap appropriate to each scheme: the dark-bright splitting
/// `Omega_p` (EIT), the eliminated detuning `|Delta|` (improved-AC), or no
/// channel at all (red AC-Stark: nothing lies below the trapped state).
fn lz_gap(config: &SchemeConfig) -> Option<AngularFrequency> {
    match config.scheme {
        Scheme::Eit | Scheme::ModifiedEit => Some(config.omega_p),
        Scheme::ImprovedAc => Some(AngularFrequency::from_rad_per_sec(
            config.delta.rad_per_sec().abs(),
        )),
        Scheme::RedAc => None,
    }
}

/// Fills a complete [`LossReport`] for a consistent scheme / trap / solved
/// state. `nu` is the Landau-Zener order-unity factor.
pub fn lifetime_report(
    config: &SchemeConfig,
    trap: &TrapShapeParams,
    state: &BoundStateResult,
    nu: f64,
) -> Result<LossReport> {
    let ew = trap.e_w;
    let (gamma_d1, gamma_d2, p_e) = match config.scheme {
        Scheme::Eit | Scheme::ModifiedEit => {
            // Trap depth at the center relative to the asymptote.
            let depth = match config.scheme {
                Scheme::Eit => (trap.delta_r.rad_per_sec() + ew.rad_per_sec()).abs(),
                _ => (trap.delta_r.rad_per_sec() / (trap.eta * trap.eta + 1.0)).abs(),
            };
            let (d1, d2, _) = gamma_eit(
                config.gamma,
                AngularFrequency::from_rad_per_sec(depth),
                ew,
                trap.omega_p,
            )?;
            let op = trap.omega_p.rad_per_sec();
            let p_e = (depth * depth + ew.rad_per_sec().powi(2)) / (op * op);
            (d1, d2, p_e)
        }
        Scheme::ImprovedAc | Scheme::RedAc => {
            let p_e = pe_admixture_numeric(state, config)?;
            (
                AngularFrequency::from_rad_per_sec(config.gamma.rad_per_sec() * p_e),
                AngularFrequency::ZERO,
                p_e,
            )
        }
    };
    let g_lz = match lz_gap(config) {
        Some(gap) => gamma_lz(ew, gap, nu)?,
        None => AngularFrequency::ZERO,
    };
    let total = gamma_d1.rad_per_sec() + gamma_d2.rad_per_sec() + g_lz.rad_per_sec();
    let lifetime_s = if total > 0.0 { 1.0 / total } else { f64::INFINITY };
    Ok(LossReport {
        gamma_d1,
        gamma_d2,
        gamma_total: AngularFrequency::from_rad_per_sec(total),
        p_e,
        gamma_lz: g_lz,
        lifetime_s,
    })
}
