//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (visible with `--nocapture`; captured output is shown on
//! failure). Reference values are the frozen published design tables.

use nalgebra::DMatrix;
use nanotrap::adiabatic::{diagonalize_grid, geometric_potentials, SpatialGrid};
use nanotrap::analytic::{alpha_beta, e0_improved_ac, v_tot_eit, v_tot_modified_eit};
use nanotrap::design::{
    calibrated_gamma_yb, generate_table, reference_rows, SIGMA_DIFFRACTION_M,
};
use nanotrap::losses::pe_admixture_numeric;
use nanotrap::schemes::{hamiltonian_eit, ControlProfile, Scheme, SchemeConfig};
use nanotrap::solver::{
    density_overlap, solve_multichannel_near, solve_single_channel, BoundState,
};
use nanotrap::units::{e_w, AngularFrequency, AtomSpecies, Length, HBAR};
use std::time::Instant;

fn report(criterion: u32, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn yb() -> AtomSpecies {
    AtomSpecies::yb171()
}

fn meters(m: f64) -> Length {
    Length::from_meters(m).unwrap()
}

fn rad(v: f64) -> AngularFrequency {
    AngularFrequency::from_rad_per_sec(v)
}

/// Published rows: (Omega_0/2pi MHz, w nm, s, E_w kHz), grouped per
/// (T, sigma) block in the same order as `reference_rows`.
const T100_SIGMA_DIFF: [(f64, f64, f64, f64); 7] = [
    (1.0, 164.801, 1.91555, 1.08862),
    (100.0, 35.5052, 8.8912, 23.4536),
    (200.0, 28.1805, 11.2022, 37.2302),
    (600.0, 19.5393, 16.1564, 77.442),
    (1000.0, 16.4801, 19.1555, 108.862),
    (5000.0, 9.63759, 32.7555, 318.314),
    (16000.0, 6.54011, 48.2689, 691.23),
];
const T100_SIGMA_3UM: [(f64, f64, f64, f64); 7] = [
    (1.0, 349.072, 8.59422, 0.24264),
    (100.0, 75.2053, 39.8908, 5.22753),
    (200.0, 59.6905, 50.2593, 8.29819),
    (600.0, 41.3871, 72.4864, 17.2609),
    (1000.0, 34.9072, 85.9422, 24.264),
    (5000.0, 20.4139, 146.959, 70.9485),
    (16000.0, 13.8529, 216.561, 154.067),
];
const T10_SIGMA_DIFF: [(f64, f64, f64, f64); 7] = [
    (1.0, 112.277, 2.81164, 2.34536),
    (100.0, 24.1894, 13.0505, 50.5292),
    (200.0, 19.1991, 16.4426, 80.2101),
    (600.0, 13.3119, 23.7143, 166.844),
    (1000.0, 11.2277, 28.1164, 234.536),
    (5000.0, 6.56602, 48.0784, 685.787),
    (16000.0, 4.45573, 70.849, 1489.21),
];
const T10_SIGMA_3UM: [(f64, f64, f64, f64); 7] = [
    (1.0, 237.82, 12.6146, 0.522753),
    (100.0, 51.2368, 58.5517, 11.2624),
    (200.0, 40.6666, 73.7705, 17.8779),
    (600.0, 28.1967, 106.396, 37.1875),
    (1000.0, 23.782, 126.146, 52.2753),
    (5000.0, 13.9078, 215.706, 152.854),
    (16000.0, 9.43789, 317.868, 331.927),
];

fn all_blocks() -> Vec<(f64, f64, [(f64, f64, f64, f64); 7])> {
    // (T seconds, sigma meters, rows)
    vec![
        (0.1, SIGMA_DIFFRACTION_M, T100_SIGMA_DIFF),
        (0.1, 3e-6, T100_SIGMA_3UM),
        (0.01, SIGMA_DIFFRACTION_M, T10_SIGMA_DIFF),
        (0.01, 3e-6, T10_SIGMA_3UM),
    ]
}

#[test]
fn criterion_1_design_table_reproduction() {
    let start = Instant::now();
    let gamma = calibrated_gamma_yb();
    let species = yb();
    let mut worst: f64 = 0.0;
    let mut rows_checked = 0;
    for (t, _sigma, printed) in all_blocks() {
        // reference_rows(t) lists sigma = lambda/2pi first, then 3 um.
        let rows = reference_rows(t);
        let table = generate_table(Scheme::Eit, &species, &rows, gamma);
        let offset = if _sigma == SIGMA_DIFFRACTION_M { 0 } else { 7 };
        for (i, &(_, w_nm, s, ew_khz)) in printed.iter().enumerate() {
            let d = table[offset + i].as_ref().unwrap();
            let rel = |got: f64, want: f64| (got - want).abs() / want;
            worst = worst
                .max(rel(d.w.meters() * 1e9, w_nm))
                .max(rel(d.s, s))
                .max(rel(d.e_w.hz() / 1e3, ew_khz));
            rows_checked += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = worst < 2e-3 && rows_checked == 28 && elapsed.as_secs_f64() < 1.0;
    report(
        1,
        pass,
        &format!(
            "28 published (w, s, E_w) triples reproduced; worst rel err {worst:.2e} (< 2e-3), {} ms",
            elapsed.as_millis()
        ),
    );
}

#[test]
fn criterion_2_gamma_independent_scalings() {
    // Ratios computed from the printed s values themselves.
    let omega_ratio = 19.1555_f64 / 1.91555;
    let t_ratio = 2.81164_f64 / 1.91555;
    let sigma_ratio = 8.59422_f64 / 1.91555;
    let sigma_quotient = 3e-6 / SIGMA_DIFFRACTION_M;
    let e1 = (omega_ratio - 10.0).abs();
    let e2 = (t_ratio - 10.0f64.powf(1.0 / 6.0)).abs() / t_ratio;
    let e3 = (sigma_ratio - sigma_quotient.powf(2.0 / 3.0)).abs() / sigma_ratio;
    let pass = e1 < 1e-3 && e2 < 1e-3 && e3 < 1e-3;
    report(
        2,
        pass,
        &format!("s ratios follow Omega^(1/3), T^(-1/6), sigma^(2/3): errs {e1:.1e}, {e2:.1e}, {e3:.1e}"),
    );
}

#[test]
fn criterion_3_row_internal_consistency() {
    let species = yb();
    let mut worst: f64 = 0.0;
    for (_t, sigma, printed) in all_blocks() {
        for &(_, w_nm, s, ew_khz) in printed.iter() {
            let w = w_nm * 1e-9;
            let s_implied = sigma / w;
            worst = worst.max((s_implied - s).abs() / s);
            let ew_implied = e_w(&species, meters(w)).hz() / 1e3;
            worst = worst.max((ew_implied - ew_khz).abs() / ew_khz);
        }
    }
    let pass = worst < 1e-3;
    report(
        3,
        pass,
        &format!("s = sigma/w and E_w = hbar/(2 m w^2) on all 28 rows; worst rel err {worst:.2e}"),
    );
}

/// Matched improved-AC trap: width w = sigma/s, probe Omega_p = E_w,
/// detuning from s^2 = Omega_0^2 / (|Delta| Omega_p).
fn improved_ac_trap(s: f64, sigma: f64, omega0_hz: f64) -> (SchemeConfig, Length, AngularFrequency) {
    let species = yb();
    let w = meters(sigma / s);
    let ew = e_w(&species, w);
    let omega0 = AngularFrequency::from_hz(omega0_hz);
    let mut config = SchemeConfig::new(
        Scheme::ImprovedAc,
        species,
        ControlProfile::LinearLocal { omega0, sigma: meters(sigma) },
    );
    config.omega_p = ew;
    config.delta = rad(-omega0.rad_per_sec().powi(2) / (s * s * ew.rad_per_sec()));
    (config, w, ew)
}

#[test]
fn criterion_4_effective_vs_full_ground_state() {
    let species = yb();
    let sigma = 1e-6;
    let mut detail = String::new();
    let mut pass = true;
    for s in [10.0, 20.0, 40.0] {
        let start = Instant::now();
        let (config, w, ew) = improved_ac_trap(s, sigma, 1e9);
        let grid = SpatialGrid::symmetric(10.0 * w.meters(), 4096).unwrap();
        let eff = solve_single_channel(
            |x| e0_improved_ac(ew, w, x).rad_per_sec(),
            &grid,
            &species,
            1,
        )
        .unwrap();
        let full = solve_multichannel_near(
            |x| config.hamiltonian(x),
            &grid,
            &species,
            2,
            eff.states[0].energy,
        )
        .unwrap();
        let overlap =
            density_overlap(&grid, &eff.states[0], &grid, &full.states[0]).unwrap();

        // Adiabatic prediction of the channel components: psi_eff times the
        // trapped-branch frame column, sign-aligned to the full solve.
        let decomp = diagonalize_grid(|x| config.hamiltonian(x), &grid).unwrap();
        let psi_eff = &eff.states[0].channels[0];
        let full0 = &full.states[0];
        let mut align = 0.0;
        for i in 0..grid.n() {
            align += full0.channels[0][i] * psi_eff[i] * decomp.frames[i][(0, 0)];
        }
        let sign = if align < 0.0 { -1.0 } else { 1.0 };
        let peak = full0
            .channels
            .iter()
            .flat_map(|ch| ch.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let mut dev: f64 = 0.0;
        for i in 0..grid.n() {
            for ch in 0..2 {
                let adiabatic = sign * psi_eff[i] * decomp.frames[i][(ch, 0)];
                dev = dev.max((full0.channels[ch][i] - adiabatic).abs());
            }
        }
        let dev_rel = dev / peak;
        let dt = start.elapsed().as_secs_f64();
        pass &= overlap >= 0.99 && dev_rel > 0.05 && dt < 10.0;
        detail.push_str(&format!(
            "s={s}: overlap {overlap:.5}, channel dev {:.1}%, {:.2}s; ",
            100.0 * dev_rel,
            dt
        ));
    }
    report(4, pass, detail.trim_end_matches("; "));
}

#[test]
fn criterion_5_geometric_potential_oracles() {
    let species = yb();
    // (a) EIT with a linear control profile: dark-branch U matches
    // E_w/(1+u^2)^2. Linear node: w = sigma Omega_p / Omega_0.
    let sigma = 1e-6;
    let omega0_hz = 2e6;
    let omegap_hz = 2e5;
    let w = sigma * omegap_hz / omega0_hz;
    let ew = e_w(&species, meters(w)).rad_per_sec();
    let mut config = SchemeConfig::new(
        Scheme::Eit,
        species.clone(),
        ControlProfile::LinearLocal {
            omega0: AngularFrequency::from_hz(omega0_hz),
            sigma: meters(sigma),
        },
    );
    config.omega_p = AngularFrequency::from_hz(omegap_hz);

    let eit_err = |n: usize| -> f64 {
        let grid = SpatialGrid::symmetric(5.0 * w, n).unwrap();
        let decomp = diagonalize_grid(|x| config.hamiltonian(x), &grid).unwrap();
        let pots = geometric_potentials(&decomp, &species).unwrap();
        let mut worst: f64 = 0.0;
        for (i, &x) in grid.points().iter().enumerate() {
            if x.abs() > 3.0 * w {
                continue;
            }
            let u2 = (x / w).powi(2);
            let want = ew / (1.0 + u2).powi(2);
            // Dark branch is index 1 (eigenvalues -Omega, 0, +Omega).
            let got = pots.scalar[i][(1, 1)];
            worst = worst.max((got - want).abs() / want);
        }
        worst
    };

    // (b) Improved-AC: U matches the alpha/beta closed forms. beta crosses
    // zero, so its error is normalized by the maximum magnitude.
    let (ac_config, ac_w, _) = improved_ac_trap(20.0, sigma, 1e9);
    let wac = ac_w.meters();
    let ac_err = |n: usize| -> f64 {
        let grid = SpatialGrid::symmetric(5.0 * wac, n).unwrap();
        let decomp = diagonalize_grid(|x| ac_config.hamiltonian(x), &grid).unwrap();
        let pots = geometric_potentials(&decomp, &species).unwrap();
        // Both alpha and beta pass through zero inside the window, so errors
        // are normalized by the window maxima.
        let ew_ac = e_w(&species, ac_w).rad_per_sec();
        let alpha_max = 0.16 * ew_ac; // max of 4 u^2/(4+u^4)^2 is 4/25
        let beta_max = 0.5 * ew_ac; // |beta(0)| = E_w/2
        let mut worst: f64 = 0.0;
        for (i, &x) in grid.points().iter().enumerate() {
            if x.abs() > 3.0 * wac {
                continue;
            }
            let (alpha, beta) =
                alpha_beta(&species, ac_w, x, Scheme::ImprovedAc).unwrap();
            let a = alpha.rad_per_sec();
            let b = beta.rad_per_sec();
            let m = &pots.scalar[i];
            worst = worst.max((m[(0, 0)] - a).abs() / alpha_max);
            worst = worst.max((m[(1, 1)] - a).abs() / alpha_max);
            worst = worst.max((m[(0, 1)].abs() - b.abs()).abs() / beta_max);
        }
        worst
    };

    let eit_errs: Vec<f64> = [1024, 2048, 4096].iter().map(|&n| eit_err(n)).collect();
    let ac_fine = ac_err(4096);
    let slope = (eit_errs[0] / eit_errs[2]).ln() / 4.0f64.ln();
    let pass = eit_errs[2] < 1e-3 && ac_fine < 1e-3 && (slope - 2.0).abs() < 0.2;
    report(
        5,
        pass,
        &format!(
            "EIT dark U err {:.1e}, improved-AC alpha/beta err {ac_fine:.1e} (< 1e-3 at n=4096); h^2 slope {slope:.2}",
            eit_errs[2]
        ),
    );
}

#[test]
fn criterion_6_loss_scaling_exponents() {
    let species = yb();
    let sigma = 1e-6;
    let omega0 = AngularFrequency::from_hz(1e9);

    let mut improved = Vec::new();
    let mut red = Vec::new();
    for s in [10.0f64, 20.0, 40.0] {
        // Improved-AC: linear control node.
        let (config, w, ew) = improved_ac_trap(s, sigma, 1e9);
        let grid = SpatialGrid::symmetric(10.0 * w.meters(), 2048).unwrap();
        let state = solve_single_channel(
            |x| e0_improved_ac(ew, w, x).rad_per_sec(),
            &grid,
            &species,
            1,
        )
        .unwrap();
        improved.push(pe_admixture_numeric(&state, &config).unwrap());

        // Red AC-Stark: control maximum at the trap, Delta > 0,
        // delta = Omega_0^2/Delta, s^2 = Omega_0^2/(Delta Omega_p).
        let w_red = meters(sigma / s);
        let ew_red = e_w(&species, w_red);
        let delta = omega0.rad_per_sec().powi(2) / (s * s * ew_red.rad_per_sec());
        let mut red_config = SchemeConfig::new(
            Scheme::RedAc,
            species.clone(),
            ControlProfile::GaussianPeak { omega0, sigma: meters(sigma) },
        );
        red_config.omega_p = ew_red;
        red_config.delta = rad(delta);
        red_config.delta_small = rad(omega0.rad_per_sec().powi(2) / delta);
        let lower_branch = |x: f64| {
            let h = red_config.hamiltonian(x).unwrap();
            let a = h[(0, 0)];
            let op = h[(0, 1)];
            0.5 * (a - (a * a + 4.0 * op * op).sqrt())
        };
        let grid_red = SpatialGrid::symmetric(10.0 * w_red.meters(), 2048).unwrap();
        let state_red =
            solve_single_channel(lower_branch, &grid_red, &species, 1).unwrap();
        red.push(pe_admixture_numeric(&state_red, &red_config).unwrap());
    }
    let slope = |p: &[f64]| (p[2] / p[0]).ln() / 4.0f64.ln();
    let s6 = slope(&improved);
    let s8 = slope(&red);
    let gap = s8 - s6;
    let pass = (s6 - 6.0).abs() < 0.3 && (s8 - 8.0).abs() < 0.3 && (gap - 2.0).abs() < 0.4;
    report(
        6,
        pass,
        &format!("P_e exponents: improved-AC {s6:.2} (6 +- 0.3), red AC {s8:.2} (8 +- 0.3), gap {gap:.2} (2 +- 0.4)"),
    );
}

/// Counts trap-localized bound states: below the box-edge asymptote with the
/// majority of their weight within |x| <= 2w. The -1/x^2 potential tails also
/// host shallow box-wide states, which are not sub-wavelength-trapped.
fn localized_count(
    states: &[(f64, Vec<f64>)],
    grid_u: &[f64],
    threshold: f64,
    w: f64,
) -> usize {
    states
        .iter()
        .filter(|(e, psi)| {
            if *e >= threshold {
                return false;
            }
            let total: f64 = psi.iter().map(|p| p * p).sum();
            let inside: f64 = grid_u
                .iter()
                .zip(psi.iter())
                .filter(|(x, _)| x.abs() <= 2.0 * w)
                .map(|(_, p)| p * p)
                .sum();
            inside / total > 0.5
        })
        .count()
}

/// Dense tridiagonal diagonalization oracle: full spectrum at two
/// resolutions, energies Richardson-extrapolated before counting.
fn dense_oracle_count(v: impl Fn(f64) -> f64, species: &AtomSpecies, w: f64) -> usize {
    let solve = |n: usize| -> (Vec<f64>, Vec<Vec<f64>>, Vec<f64>, f64) {
        let grid = SpatialGrid::symmetric(10.0 * w, n).unwrap();
        let h = grid.spacing();
        let hop = HBAR / (2.0 * species.mass_kg() * h * h);
        let mut m = DMatrix::zeros(n, n);
        let points = grid.points();
        for i in 0..n {
            m[(i, i)] = 2.0 * hop + v(points[i]);
            if i + 1 < n {
                m[(i, i + 1)] = -hop;
                m[(i + 1, i)] = -hop;
            }
        }
        let eig = m.symmetric_eigen();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
        let energies: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vecs: Vec<Vec<f64>> = idx
            .iter()
            .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
            .collect();
        let threshold = v(points[0]);
        (energies, vecs, points, threshold)
    };
    let (e_coarse, _, _, _) = solve(513);
    let (e_fine, vecs, points, threshold) = solve(1025);
    // Second-order scheme: E = E_fine + (E_fine - E_coarse)/3.
    let states: Vec<(f64, Vec<f64>)> = e_fine
        .iter()
        .take(8)
        .zip(e_coarse.iter())
        .zip(vecs.iter())
        .map(|((ef, ec), psi)| (ef + (ef - ec) / 3.0, psi.clone()))
        .collect();
    localized_count(&states, &points, threshold, w)
}

#[test]
fn criterion_7_single_bound_state() {
    let species = yb();
    let w = 50e-9;
    let wl = meters(w);
    let ew = e_w(&species, wl);

    // EIT at delta_r = -2 E_w: total potential depth E_w.
    let v_eit = {
        let delta_r = rad(-2.0 * ew.rad_per_sec());
        let species = species.clone();
        move |x: f64| v_tot_eit(delta_r, wl, &species, x).rad_per_sec()
    };
    // Improved-AC at Omega_p = E_w.
    let v_ac = move |x: f64| e0_improved_ac(ew, wl, x).rad_per_sec();

    let oracle_eit = dense_oracle_count(&v_eit, &species, w);
    let oracle_ac = dense_oracle_count(&v_ac, &species, w);

    // Production solver path, same counting convention.
    let production = |v: &dyn Fn(f64) -> f64| -> usize {
        let grid = SpatialGrid::symmetric(10.0 * w, 4096).unwrap();
        let result = solve_single_channel(v, &grid, &species, 4).unwrap();
        let points = grid.points();
        let states: Vec<(f64, Vec<f64>)> = result
            .states
            .iter()
            .map(|s| (s.energy.rad_per_sec(), s.channels[0].clone()))
            .collect();
        localized_count(&states, &points, result.threshold.rad_per_sec(), w)
    };
    let prod_eit = production(&v_eit);
    let prod_ac = production(&v_ac);

    let pass = oracle_eit == 1 && oracle_ac == 1 && prod_eit == 1 && prod_ac == 1;
    report(
        7,
        pass,
        &format!(
            "trap-localized bound states: EIT oracle/solver {oracle_eit}/{prod_eit}, improved-AC {oracle_ac}/{prod_ac} (all 1)"
        ),
    );
}

#[test]
fn criterion_8_modified_eit_suppression() {
    // Matched traps: depth -2 E_w, width w. Linear EIT: delta_r = -3 E_w
    // (V(0) = delta_r + E_w). Modified EIT (eta = 1): delta_r = -4 E_w
    // (V(0) = delta_r / 2). Loss proxy: density-weighted mean squared
    // geometric potential of the trapped state.
    let species = yb();
    let w = 50e-9;
    let wl = meters(w);
    let ew = e_w(&species, wl).rad_per_sec();
    let grid = SpatialGrid::symmetric(10.0 * w, 4096).unwrap();

    let v_linear = move |x: f64| v_tot_eit(rad(-3.0 * ew), wl, &species, x).rad_per_sec();
    let species2 = yb();
    let v_modified =
        move |x: f64| v_tot_modified_eit(rad(-4.0 * ew), 1.0, wl, &species2, x).rad_per_sec();

    let species3 = yb();
    let proxy = |v: &dyn Fn(f64) -> f64, geo: &dyn Fn(f64) -> f64| -> f64 {
        let state = solve_single_channel(v, &grid, &species3, 1).unwrap();
        let psi = &state.states[0].channels[0];
        let h = grid.spacing();
        grid.points()
            .iter()
            .zip(psi.iter())
            .map(|(&x, &p)| p * p * geo(x).powi(2) * h)
            .sum()
    };
    let geo_linear = move |x: f64| {
        let u2 = (x / w).powi(2);
        ew / (1.0 + u2).powi(2)
    };
    let geo_modified = move |x: f64| {
        let u2 = (x / w).powi(2);
        let denom = (1.0 + u2).powi(2) + 1.0;
        4.0 * ew * u2 / (denom * denom)
    };
    let p_lin = proxy(&v_linear, &geo_linear);
    let p_mod = proxy(&v_modified, &geo_modified);
    let ratio = p_mod / p_lin;
    let pass = ratio <= 0.6;
    report(
        8,
        pass,
        &format!("modified-EIT non-adiabatic loss proxy ratio {ratio:.3} (<= 0.6)"),
    );
}

#[test]
fn criterion_9_dark_state_and_normalization() {
    let species = yb();
    // (a) Zero dark eigenvalue at every grid point for delta_r = 0.
    let sigma = 1e-6;
    let mut config = SchemeConfig::new(
        Scheme::Eit,
        species.clone(),
        ControlProfile::GaussianDip {
            omega0: AngularFrequency::from_hz(2e6),
            sigma: meters(sigma),
        },
    );
    config.omega_p = AngularFrequency::from_hz(2e5);
    config.delta = AngularFrequency::from_hz(5e5);
    let w = sigma * 0.1;
    let grid = SpatialGrid::symmetric(10.0 * w, 512).unwrap();
    let mut worst_dark: f64 = 0.0;
    for &x in &grid.points() {
        let h = hamiltonian_eit(&config, x).unwrap();
        let norm = h.norm();
        let eig = h.symmetric_eigen();
        let min_abs = eig
            .eigenvalues
            .iter()
            .map(|e| e.abs())
            .fold(f64::MAX, f64::min);
        worst_dark = worst_dark.max(min_abs / norm);
    }

    // (b) Normalization across a solve suite.
    let mut worst_norm: f64 = 0.0;
    let mut check = |states: &[BoundState], h: f64| {
        for s in states {
            let n: f64 = s
                .channels
                .iter()
                .map(|ch| ch.iter().map(|p| p * p).sum::<f64>())
                .sum::<f64>()
                * h;
            worst_norm = worst_norm.max((n - 1.0).abs());
        }
    };
    let wl = meters(50e-9);
    let ew = e_w(&species, wl).rad_per_sec();
    let g1 = SpatialGrid::symmetric(10.0 * wl.meters(), 2048).unwrap();
    let r1 = solve_single_channel(
        |x| -20.0 * ew / (1.0 + (x / wl.meters()).powi(2)),
        &g1,
        &species,
        3,
    )
    .unwrap();
    check(&r1.states, g1.spacing());
    let (ac_config, ac_w, ac_ew) = improved_ac_trap(20.0, sigma, 1e9);
    let g2 = SpatialGrid::symmetric(10.0 * ac_w.meters(), 2048).unwrap();
    let eff = solve_single_channel(
        |x| e0_improved_ac(ac_ew, ac_w, x).rad_per_sec(),
        &g2,
        &species,
        1,
    )
    .unwrap();
    check(&eff.states, g2.spacing());
    let full = solve_multichannel_near(
        |x| ac_config.hamiltonian(x),
        &g2,
        &species,
        3,
        eff.states[0].energy,
    )
    .unwrap();
    check(&full.states, g2.spacing());

    let pass = worst_dark < 1e-12 && worst_norm < 1e-8;
    report(
        9,
        pass,
        &format!("dark eigenvalue |E_D|/||H|| {worst_dark:.1e} (< 1e-12); worst |norm-1| {worst_norm:.1e} (< 1e-8)"),
    );
}
