//! Inverts the lifetime scaling laws: given laser power, beam scale, and a
//! target lifetime, finds the achievable trap width and enhancement factor,
//! and regenerates the full design tables.

use crate::error::{Error, Result};
use crate::schemes::Scheme;
use crate::units::{e_sigma, e_w, AngularFrequency, AtomSpecies, Length};
use std::f64::consts::TAU;

/// Control-laser wavelength of the reference design, meters.
pub const LAMBDA_CONTROL_M: f64 = 1983.5e-9;

/// Diffraction-limited beam scale sigma = lambda / 2 pi, meters.
pub const SIGMA_DIFFRACTION_M: f64 = LAMBDA_CONTROL_M / TAU;

/// Enhancement factor of the calibration anchor
/// (Omega_0/2pi = 1 MHz, sigma = lambda/2pi, T = 100 ms).
pub const ANCHOR_S: f64 = 1.91555;

/// One solved trap design point.
#[derive(Debug, Clone)]
pub struct TrapDesign {
    pub scheme: Scheme,
    pub omega0: AngularFrequency,
    pub gamma: AngularFrequency,
    pub sigma: Length,
    /// Target lifetime, seconds.
    pub lifetime_s: f64,
    pub w: Length,
    /// Enhancement factor s = sigma / w.
    pub s: f64,
    pub e_w: AngularFrequency,
    /// True when s^3 < Omega_0 / E_sigma (the perturbative window).
    pub perturbativity_pass: bool,
    /// For the AC schemes: true when the eliminated detuning satisfies
    /// |Delta| > Omega_0, i.e. s^4 < Omega_0 / E_sigma. None for EIT.
    pub detuning_pass: Option<bool>,
}

fn scaling_exponent(scheme: Scheme) -> f64 {
    match scheme {
        Scheme::RedAc => 8.0,
        Scheme::Eit | Scheme::ImprovedAc | Scheme::ModifiedEit => 6.0,
    }
}

/// Back-solves the excited-state linewidth implied by one known table row:
/// `Gamma = (Omega_0 / E_sigma)^2 / (T s^n)` with n the scheme exponent.
pub fn calibrate_gamma(
    scheme: Scheme,
    species: &AtomSpecies,
    omega0: AngularFrequency,
    sigma: Length,
    lifetime_s: f64,
    s_known: f64,
) -> AngularFrequency {
    let e_sig = e_sigma(species, sigma).rad_per_sec();
    let ratio = omega0.rad_per_sec() / e_sig;
    AngularFrequency::from_rad_per_sec(
        ratio * ratio / (lifetime_s * s_known.powf(scaling_exponent(scheme))),
    )
}

/// Linewidth calibrated from the reference anchor row for 171Yb.
pub fn calibrated_gamma_yb() -> AngularFrequency {
    calibrate_gamma(
        Scheme::Eit,
        &AtomSpecies::yb171(),
        AngularFrequency::from_hz(1e6),
        Length::from_meters(SIGMA_DIFFRACTION_M).unwrap(),
        0.1,
        ANCHOR_S,
    )
}

/// Solves `T Gamma pe_scaling(scheme, s) = 1` for the enhancement factor:
/// `s = [(Omega_0/E_sigma)^2 / (T Gamma)]^{1/6}` (s^6 schemes) or `^{1/8}`
/// (red AC-Stark). Returns the width w = sigma/s and validity flags.
pub fn solve_width_for_lifetime(
    scheme: Scheme,
    species: &AtomSpecies,
    omega0: AngularFrequency,
    sigma: Length,
    lifetime_s: f64,
    gamma: AngularFrequency,
) -> Result<TrapDesign> {
    if !(omega0.rad_per_sec() > 0.0)
        || !(lifetime_s > 0.0)
        || !(gamma.rad_per_sec() > 0.0)
    {
        return Err(Error::Config(
            "omega0, lifetime, and gamma must all be positive".into(),
        ));
    }
    let e_sig = e_sigma(species, sigma).rad_per_sec();
    let ratio = omega0.rad_per_sec() / e_sig;
    let s = (ratio * ratio / (lifetime_s * gamma.rad_per_sec()))
        .powf(1.0 / scaling_exponent(scheme));
    if s <= 1.0 {
        return Err(Error::NoEnhancement { s });
    }
    let w = Length::from_meters(sigma.meters() / s)?;
    let ew = e_w(species, w);
    let perturbativity_pass = s.powi(3) < ratio;
    let detuning_pass = match scheme {
        Scheme::ImprovedAc | Scheme::RedAc => Some(s.powi(4) < ratio),
        Scheme::Eit | Scheme::ModifiedEit => None,
    };
    Ok(TrapDesign {
        scheme,
        omega0,
        gamma,
        sigma,
        lifetime_s,
        w,
        s,
        e_w: ew,
        perturbativity_pass,
        detuning_pass,
    })
}

/// One input row of a design table.
pub type DesignRow = (AngularFrequency, Length, f64);

/// Maps [`solve_width_for_lifetime`] over the rows; per-row errors are kept
/// inline so the rest of the table is still produced.
pub fn generate_table(
    scheme: Scheme,
    species: &AtomSpecies,
    rows: &[DesignRow],
    gamma: AngularFrequency,
) -> Vec<Result<TrapDesign>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        rows.par_iter()
            .map(|&(omega0, sigma, t)| {
                solve_width_for_lifetime(scheme, species, omega0, sigma, t, gamma)
            })
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        generate_table_sequential(scheme, species, rows, gamma)
    }
}

/// Single-threaded [`generate_table`]: the fallback used when the `parallel`
/// feature is off, kept available for benchmarking against the data-parallel
/// path.
pub fn generate_table_sequential(
    scheme: Scheme,
    species: &AtomSpecies,
    rows: &[DesignRow],
    gamma: AngularFrequency,
) -> Vec<Result<TrapDesign>> {
    rows.iter()
        .map(|&(omega0, sigma, t)| {
            solve_width_for_lifetime(scheme, species, omega0, sigma, t, gamma)
        })
        .collect()
}

/// Excited-state fraction of the two-level cosine double trap,
/// `s^6 (E_sigma/Omega_0)^2`: the same law as the s^6 schemes, so the
/// double-trap construction matches but does not beat them.
pub fn cosine_double_trap_scaling(
    s: f64,
    e_sig: AngularFrequency,
    omega0: AngularFrequency,
) -> f64 {
    s.powi(6) * (e_sig.rad_per_sec() / omega0.rad_per_sec()).powi(2)
}

/// The reference design grid at lifetime `t`: Omega_0/2pi over
/// {1, 100, 200, 600, 1000, 5000, 16000} MHz, sigma over
/// {lambda/2pi, 3 um}.
pub fn reference_rows(t: f64) -> Vec<DesignRow> {
    let omegas_mhz = [1.0, 100.0, 200.0, 600.0, 1000.0, 5000.0, 16000.0];
    let sigmas = [SIGMA_DIFFRACTION_M, 3e-6];
    let mut rows = Vec::new();
    for &sig in &sigmas {
        for &om in &omegas_mhz {
            rows.push((
                AngularFrequency::from_hz(om * 1e6),
                Length::from_meters(sig).unwrap(),
                t,
            ));
        }
    }
    rows
}

/// CSV rendering with stable headers; error rows carry the message in the
/// `error` column and empty result cells.
pub fn table_to_csv(rows: &[DesignRow], results: &[Result<TrapDesign>]) -> String {
    let mut out = String::from(
        "omega0_hz,sigma_m,T_s,w_m,s,Ew_hz,perturbativity_pass,detuning_pass,error\n",
    );
    for ((omega0, sigma, t), res) in rows.iter().zip(results.iter()) {
        match res {
            Ok(d) => {
                let det = d
                    .detuning_pass
                    .map(|b| b.to_string())
                    .unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},\n",
                    omega0.hz(),
                    sigma.meters(),
                    t,
                    d.w.meters(),
                    d.s,
                    d.e_w.hz(),
                    d.perturbativity_pass,
                    det,
                ));
            }
            Err(e) => {
                out.push_str(&format!(
                    "{},{},{},,,,,,\"{}\"\n",
                    omega0.hz(),
                    sigma.meters(),
                    t,
                    e,
                ));
            }
        }
    }
    out
}
