//! Command-line front end: config parsing, subcommands, and CSV/JSON output.
//!
//! All frequencies in config files are cyclic (Hz, `_hz` suffix); all lengths
//! are meters (`_m` suffix). Exit codes: 0 success, 2 config error,
//! 3 numerical/domain error.

use clap::{Args, Parser, Subcommand};
use nanotrap::adiabatic::{diagonalize_grid, geometric_potentials, SpatialGrid};
use nanotrap::analytic::{e0_improved_ac, v_tot_eit, v_tot_modified_eit, TrapShapeParams};
use nanotrap::design;
use nanotrap::losses::{lifetime_report, pe_admixture_numeric};
use nanotrap::schemes::{ControlProfile, Scheme, SchemeConfig};
use nanotrap::solver::{
    density_overlap, solve_multichannel_near, solve_single_channel, BoundStateResult,
};
use nanotrap::units::{e_w, AngularFrequency, AtomSpecies, Length};
use nanotrap::{Error, Result};
use serde::Deserialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

const KEY_HELP: &str = "Config keys (flat TOML; --set key=value overrides):
  scheme          eit | improved_ac | red_ac | modified_eit
  atom            species label (default 171Yb)
  mass_amu        atomic mass in u (default 171 for 171Yb)
  omega0_hz       peak control Rabi frequency Omega_0/2pi [Hz]
  omegap_hz       probe Rabi frequency Omega_p/2pi [Hz]
  delta_hz        single-photon detuning Delta/2pi [Hz] (signed)
  deltar_hz       two-photon detuning delta_r/2pi [Hz] (EIT schemes)
  delta_small_hz  two-photon detuning delta/2pi [Hz] (AC schemes)
  gamma_hz        excited-state linewidth Gamma/2pi [Hz]
  sigma_m         beam scale sigma [m]
  lambda_m        control wavelength [m] (sets sigma = lambda/2pi if sigma_m absent)
  profile         gaussian_dip | gaussian_peak | linear | quadratic | cosine
  eta             modified-EIT control minimum (dimensionless)
  nu              Landau-Zener order-unity factor (default 1)
  xspan_w         grid half-span in trap widths (default 10)
  n               grid points (default 4096)
  k_states        bound states to compute (default 1)
  T_s             target lifetime [s] (design/lifetime)
  rows            design rows [[omega0_hz, sigma_m, T_s], ...]
  output_path     output file (default stdout)
  output_format   csv | json (per-subcommand default)";

#[derive(Parser)]
#[command(name = "nanotrap", version, about = "Sub-wavelength optical trap design toolkit", after_help = KEY_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. --set omega0_hz=1e6 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate analytic trap potentials (and adiabatic branches on request).
    Potential {
        #[command(flatten)]
        common: CommonOpts,
        /// Also emit numerical branch energies and geometric U, A entries.
        #[arg(long)]
        adiabatic: bool,
    },
    /// Solve effective and full bound states; report the density overlap.
    Eigen {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Loss rates and lifetime of the configured trap (JSON).
    Lifetime {
        #[command(flatten)]
        common: CommonOpts,
        /// Sweep s in {10, 20, 40} matched traps and fit the P_e exponent.
        #[arg(long)]
        sweep: bool,
    },
    /// Invert the lifetime scaling into (w, s, E_w) design tables (CSV).
    Design {
        #[command(flatten)]
        common: CommonOpts,
        /// Emit the reference grids at T = 100 ms and T = 10 ms.
        #[arg(long = "reference")]
        reference: bool,
    },
}

// ---------------------------------------------------------------------------
// Config.

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    scheme: Option<String>,
    atom: Option<String>,
    mass_amu: Option<f64>,
    omega0_hz: Option<f64>,
    omegap_hz: Option<f64>,
    delta_hz: Option<f64>,
    deltar_hz: Option<f64>,
    delta_small_hz: Option<f64>,
    gamma_hz: Option<f64>,
    sigma_m: Option<f64>,
    lambda_m: Option<f64>,
    profile: Option<String>,
    eta: Option<f64>,
    nu: Option<f64>,
    xspan_w: Option<f64>,
    n: Option<usize>,
    k_states: Option<usize>,
    #[serde(rename = "T_s")]
    t_s: Option<f64>,
    rows: Option<Vec<[f64; 3]>>,
    output_path: Option<String>,
    output_format: Option<String>,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn load_config(common: &CommonOpts) -> Result<RunConfig> {
    let mut table = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            text.parse::<toml::Table>()
                .map_err(|e| config_err(format!("cli: cannot parse {}: {e}", path.display())))?
        }
        None => toml::Table::new(),
    };
    for set in &common.sets {
        let (key, value) = set
            .split_once('=')
            .ok_or_else(|| config_err(format!("cli: --set expects KEY=VALUE, got '{set}'")))?;
        let parsed = if let Ok(i) = value.parse::<i64>() {
            toml::Value::Integer(i)
        } else if let Ok(f) = value.parse::<f64>() {
            toml::Value::Float(f)
        } else if let Ok(b) = value.parse::<bool>() {
            toml::Value::Boolean(b)
        } else {
            toml::Value::String(value.to_string())
        };
        table.insert(key.to_string(), parsed);
    }
    RunConfig::deserialize(table).map_err(|e| config_err(format!("cli: {e}")))
}

struct Trap {
    scheme: Scheme,
    species: AtomSpecies,
    config: SchemeConfig,
    w: Length,
    e_w: AngularFrequency,
    sigma: Length,
}

fn require(opt: Option<f64>, key: &'static str) -> Result<f64> {
    opt.ok_or_else(|| config_err(format!("cli: missing key {key}")))
}

fn parse_scheme(cfg: &RunConfig) -> Result<Scheme> {
    match cfg.scheme.as_deref() {
        Some("eit") => Ok(Scheme::Eit),
        Some("improved_ac") => Ok(Scheme::ImprovedAc),
        Some("red_ac") => Ok(Scheme::RedAc),
        Some("modified_eit") => Ok(Scheme::ModifiedEit),
        Some(other) => Err(config_err(format!(
            "schemes: unknown scheme '{other}' (eit, improved_ac, red_ac, modified_eit)"
        ))),
        None => Err(config_err("cli: missing key scheme")),
    }
}

fn parse_species(cfg: &RunConfig) -> Result<AtomSpecies> {
    match (&cfg.atom, cfg.mass_amu) {
        (None, None) => Ok(AtomSpecies::yb171()),
        (Some(label), None) if label == "171Yb" => Ok(AtomSpecies::yb171()),
        (Some(label), Some(amu)) => AtomSpecies::from_amu(label.clone(), amu),
        (None, Some(amu)) => AtomSpecies::from_amu("custom", amu),
        (Some(label), None) => Err(config_err(format!(
            "units: atom '{label}' needs mass_amu"
        ))),
    }
}

fn sigma_of(cfg: &RunConfig) -> Result<Length> {
    if let Some(s) = cfg.sigma_m {
        return Length::from_meters(s);
    }
    if let Some(l) = cfg.lambda_m {
        return Length::from_meters(l / std::f64::consts::TAU);
    }
    Err(config_err("cli: missing key sigma_m (or lambda_m)"))
}

/// Builds the full scheme instance, deriving the trap width w from the
/// scheme's defining relation.
fn build_trap(cfg: &RunConfig) -> Result<Trap> {
    let scheme = parse_scheme(cfg)?;
    let species = parse_species(cfg)?;
    let sigma = sigma_of(cfg)?;
    let omega0 = AngularFrequency::from_hz(require(cfg.omega0_hz, "omega0_hz")?);
    let omega_p = AngularFrequency::from_hz(require(cfg.omegap_hz, "omegap_hz")?);
    if omega0.rad_per_sec() <= 0.0 {
        return Err(config_err("schemes: omega0_hz must be positive"));
    }
    if omega_p.rad_per_sec() <= 0.0 {
        return Err(Error::ZeroProbe);
    }
    let w = match scheme {
        Scheme::Eit | Scheme::ModifiedEit => {
            // Omega_c(w) = Omega_p for the linearized control node.
            sigma.meters() * omega_p.rad_per_sec() / omega0.rad_per_sec()
        }
        Scheme::ImprovedAc | Scheme::RedAc => {
            let delta = require(cfg.delta_hz, "delta_hz")?;
            if delta == 0.0 {
                return Err(Error::ZeroDetuning);
            }
            let delta = AngularFrequency::from_hz(delta);
            let s2 = omega0.rad_per_sec().powi(2)
                / (delta.rad_per_sec().abs() * omega_p.rad_per_sec());
            sigma.meters() / s2.sqrt()
        }
    };
    let w = Length::from_meters(w)?;
    let eta = cfg.eta.unwrap_or(1.0);
    let profile_name = cfg.profile.as_deref().unwrap_or(match scheme {
        Scheme::ModifiedEit => "quadratic",
        _ => "linear",
    });
    let profile = match profile_name {
        "linear" => ControlProfile::LinearLocal { omega0, sigma },
        "gaussian_dip" => ControlProfile::GaussianDip { omega0, sigma },
        "gaussian_peak" => ControlProfile::GaussianPeak { omega0, sigma },
        "quadratic" => ControlProfile::QuadraticLocal { omega_p, eta, w },
        "cosine" => {
            let lambda = require(cfg.lambda_m, "lambda_m")?;
            ControlProfile::CosineLattice {
                omega0,
                k: std::f64::consts::TAU / lambda,
                nu: cfg.nu.unwrap_or(0.0),
            }
        }
        other => {
            return Err(config_err(format!(
                "schemes: unknown profile '{other}' (linear, gaussian_dip, gaussian_peak, quadratic, cosine)"
            )))
        }
    };
    let mut config = SchemeConfig::new(scheme, species.clone(), profile);
    config.omega_p = omega_p;
    config.delta = AngularFrequency::from_hz(cfg.delta_hz.unwrap_or(0.0));
    config.delta_r = AngularFrequency::from_hz(cfg.deltar_hz.unwrap_or(0.0));
    config.delta_small = AngularFrequency::from_hz(cfg.delta_small_hz.unwrap_or(0.0));
    config.gamma = AngularFrequency::from_hz(cfg.gamma_hz.unwrap_or(0.0));
    let ew = e_w(&species, w);
    Ok(Trap { scheme, species, config, w, e_w: ew, sigma })
}

fn build_grid(cfg: &RunConfig, w: Length) -> Result<SpatialGrid> {
    let span = cfg.xspan_w.unwrap_or(10.0);
    if !(span > 0.0) {
        return Err(config_err("cli: xspan_w must be positive"));
    }
    SpatialGrid::symmetric(span * w.meters(), cfg.n.unwrap_or(4096))
}

/// The closed-form trap potential of each scheme, rad/s.
fn analytic_potential(trap: &Trap, x: f64) -> f64 {
    match trap.scheme {
        Scheme::Eit => {
            v_tot_eit(trap.config.delta_r, trap.w, &trap.species, x).rad_per_sec()
        }
        Scheme::ModifiedEit => v_tot_modified_eit(
            trap.config.delta_r,
            trap_eta(trap),
            trap.w,
            &trap.species,
            x,
        )
        .rad_per_sec(),
        Scheme::ImprovedAc => {
            e0_improved_ac(trap.config.omega_p, trap.w, x).rad_per_sec()
        }
        Scheme::RedAc => {
            // Lower branch of the eliminated two-level Hamiltonian.
            let h = trap
                .config
                .hamiltonian(x)
                .expect("two-level scheme");
            let a = h[(0, 0)];
            let op = h[(0, 1)];
            0.5 * (a - (a * a + 4.0 * op * op).sqrt())
        }
    }
}

fn trap_eta(trap: &Trap) -> f64 {
    match trap.config.profile {
        ControlProfile::QuadraticLocal { eta, .. } => eta,
        _ => 1.0,
    }
}

// ---------------------------------------------------------------------------
// Output plumbing.

fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        None => {
            // Ignore EPIPE so `nanotrap ... | head` exits cleanly.
            use std::io::Write;
            let _ = std::io::stdout().write_all(content.as_bytes());
            Ok(())
        }
        Some(path) => {
            // Atomic: temp file in the same directory, then rename.
            let tmp = path.with_extension("tmp");
            std::fs::write(&tmp, content)?;
            std::fs::rename(&tmp, path)?;
            Ok(())
        }
    }
}

fn out_path<'a>(common: &'a CommonOpts, cfg: &'a RunConfig) -> Option<PathBuf> {
    common
        .output
        .clone()
        .or_else(|| cfg.output_path.as_ref().map(PathBuf::from))
}

fn check_format(cfg: &RunConfig, expected: &str) -> Result<()> {
    match cfg.output_format.as_deref() {
        None => Ok(()),
        Some(f) if f == expected => Ok(()),
        Some(other) => Err(config_err(format!(
            "cli: output_format '{other}' not supported here (use {expected})"
        ))),
    }
}

fn json_rate(out: &mut String, key: &str, value: f64) {
    let _ = writeln!(out, "  \"{key}\": {},", fmt_json_f64(value));
}

fn fmt_json_f64(v: f64) -> String {
    if v.is_infinite() {
        "\"inf\"".to_string()
    } else {
        format!("{v}")
    }
}

// ---------------------------------------------------------------------------
// Subcommands.

fn cmd_potential(common: &CommonOpts, adiabatic: bool) -> Result<()> {
    let cfg = load_config(common)?;
    check_format(&cfg, "csv")?;
    let trap = build_trap(&cfg)?;
    let grid = build_grid(&cfg, trap.w)?;
    let mut out = String::new();
    let dim = trap.config.channels();
    let mut header = String::from("x_m,V_analytic_hz");
    if adiabatic {
        for b in 0..dim {
            let _ = write!(header, ",E{b}_hz");
        }
        for r in 0..dim {
            for c in 0..dim {
                let _ = write!(header, ",U{r}{c}_hz");
            }
        }
        for r in 0..dim {
            for c in 0..dim {
                let _ = write!(header, ",ImA{r}{c}_per_m");
            }
        }
    }
    out.push_str(&header);
    out.push('\n');

    let numeric = if adiabatic {
        let decomp = diagonalize_grid(|x| trap.config.hamiltonian(x), &grid)?;
        let pots = geometric_potentials(&decomp, &trap.species)?;
        Some((decomp, pots))
    } else {
        None
    };
    for (i, &x) in grid.points().iter().enumerate() {
        let _ = write!(
            out,
            "{},{}",
            x,
            AngularFrequency::from_rad_per_sec(analytic_potential(&trap, x)).hz()
        );
        if let Some((decomp, pots)) = &numeric {
            for b in 0..dim {
                let _ = write!(
                    out,
                    ",{}",
                    AngularFrequency::from_rad_per_sec(decomp.energies[i][b]).hz()
                );
            }
            for r in 0..dim {
                for c in 0..dim {
                    let _ = write!(
                        out,
                        ",{}",
                        AngularFrequency::from_rad_per_sec(pots.scalar[i][(r, c)]).hz()
                    );
                }
            }
            for r in 0..dim {
                for c in 0..dim {
                    let _ = write!(out, ",{}", pots.vector[i][(r, c)].im);
                }
            }
        }
        out.push('\n');
    }
    write_output(out_path(common, &cfg).as_deref(), &out)
}

/// Effective single-channel solve plus full multi-channel solve targeted at
/// the effective ground energy (robust for spectra with branches below the
/// trap of interest).
fn solve_both(trap: &Trap, grid: &SpatialGrid, k: usize) -> Result<(BoundStateResult, BoundStateResult)> {
    let eff = solve_single_channel(|x| analytic_potential(trap, x), grid, &trap.species, k)?;
    let target = eff.states[0].energy;
    let full = solve_multichannel_near(
        |x| trap.config.hamiltonian(x),
        grid,
        &trap.species,
        k.max(2),
        target,
    )?;
    Ok((eff, full))
}

fn cmd_eigen(common: &CommonOpts) -> Result<()> {
    let cfg = load_config(common)?;
    check_format(&cfg, "csv")?;
    let trap = build_trap(&cfg)?;
    let grid = build_grid(&cfg, trap.w)?;
    let k = cfg.k_states.unwrap_or(1);
    let (eff, full) = solve_both(&trap, &grid, k)?;
    let eff0 = &eff.states[0];
    let full0 = &full.states[0];
    let overlap = density_overlap(&grid, eff0, &grid, full0)?;
    let dim = trap.config.channels();
    let mut out = String::new();
    let _ = writeln!(out, "# w_m = {}", trap.w.meters());
    let _ = writeln!(out, "# e_w_hz = {}", trap.e_w.hz());
    let _ = writeln!(out, "# energy_eff_hz = {}", eff0.energy.hz());
    let _ = writeln!(out, "# energy_full_hz = {}", full0.energy.hz());
    let _ = writeln!(out, "# overlap = {overlap}");
    let mut header = String::from("x_m,psi_eff,rho_eff");
    for c in 0..dim {
        let _ = write!(header, ",psi_full_ch{c}");
    }
    header.push_str(",rho_full");
    out.push_str(&header);
    out.push('\n');
    let rho_eff = eff0.density();
    let rho_full = full0.density();
    for (i, &x) in grid.points().iter().enumerate() {
        let _ = write!(out, "{},{},{}", x, eff0.channels[0][i], rho_eff[i]);
        for c in 0..dim {
            let _ = write!(out, ",{}", full0.channels[c][i]);
        }
        let _ = writeln!(out, ",{}", rho_full[i]);
    }
    write_output(out_path(common, &cfg).as_deref(), &out)
}

fn cmd_lifetime(common: &CommonOpts, sweep: bool) -> Result<()> {
    let cfg = load_config(common)?;
    check_format(&cfg, "json")?;
    let trap = build_trap(&cfg)?;
    let nu = cfg.nu.unwrap_or(1.0);
    let mut out = String::from("{\n");
    if sweep {
        if trap.scheme != Scheme::ImprovedAc {
            return Err(config_err("cli: --sweep requires scheme = improved_ac"));
        }
        let (s_values, p_values, slope) = sweep_pe(&cfg, &trap)?;
        let _ = writeln!(
            out,
            "  \"s\": [{}],",
            s_values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
        );
        let _ = writeln!(
            out,
            "  \"p_e\": [{}],",
            p_values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
        );
        let _ = writeln!(out, "  \"slope\": {slope}");
        out.push_str("}\n");
        return write_output(out_path(common, &cfg).as_deref(), &out);
    }
    let grid = build_grid(&cfg, trap.w)?;
    let k = cfg.k_states.unwrap_or(1);
    let state = solve_single_channel(|x| analytic_potential(&trap, x), &grid, &trap.species, k)?;
    let shape = TrapShapeParams::new(
        &trap.species,
        trap.w,
        trap.config.omega_p,
        trap.config.delta_r,
        trap_eta(&trap),
    );
    let report = lifetime_report(&trap.config, &shape, &state, nu)?;
    json_rate(&mut out, "gamma_d1_hz", report.gamma_d1.hz());
    json_rate(&mut out, "gamma_d2_hz", report.gamma_d2.hz());
    json_rate(&mut out, "gamma_lz_hz", report.gamma_lz.hz());
    json_rate(&mut out, "gamma_total_hz", report.gamma_total.hz());
    json_rate(&mut out, "p_e", report.p_e);
    let _ = writeln!(out, "  \"lifetime_s\": {}", fmt_json_f64(report.lifetime_s));
    out.push_str("}\n");
    write_output(out_path(common, &cfg).as_deref(), &out)
}

/// Matched single-bound-state improved-AC traps (Omega_p = E_w) at
/// s in {10, 20, 40}; returns the P_e points and the fitted exponent.
fn sweep_pe(cfg: &RunConfig, trap: &Trap) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let sigma = trap.sigma;
    let omega0 = match trap.config.profile {
        ControlProfile::LinearLocal { omega0, .. }
        | ControlProfile::GaussianDip { omega0, .. } => omega0,
        _ => return Err(config_err("cli: --sweep needs a linear or gaussian_dip profile")),
    };
    let n = cfg.n.unwrap_or(4096);
    let span = cfg.xspan_w.unwrap_or(10.0);
    let mut s_values = Vec::new();
    let mut p_values = Vec::new();
    for s in [10.0, 20.0, 40.0] {
        let w = Length::from_meters(sigma.meters() / s)?;
        let ew = e_w(&trap.species, w);
        let mut config = SchemeConfig::new(
            Scheme::ImprovedAc,
            trap.species.clone(),
            ControlProfile::LinearLocal { omega0, sigma },
        );
        config.omega_p = ew;
        config.delta = AngularFrequency::from_rad_per_sec(
            -omega0.rad_per_sec().powi(2) / (s * s * ew.rad_per_sec()),
        );
        let grid = SpatialGrid::symmetric(span * w.meters(), n)?;
        let state = solve_single_channel(
            |x| e0_improved_ac(ew, w, x).rad_per_sec(),
            &grid,
            &trap.species,
            1,
        )?;
        let p_e = pe_admixture_numeric(&state, &config)?;
        s_values.push(s);
        p_values.push(p_e);
    }
    let slope = (p_values[2] / p_values[0]).ln() / (s_values[2] / s_values[0]).ln();
    Ok((s_values, p_values, slope))
}

fn cmd_design(common: &CommonOpts, reference: bool) -> Result<()> {
    let cfg = load_config(common)?;
    check_format(&cfg, "csv")?;
    let scheme = if cfg.scheme.is_some() { parse_scheme(&cfg)? } else { Scheme::Eit };
    let species = parse_species(&cfg)?;
    let gamma = match cfg.gamma_hz {
        Some(hz) => AngularFrequency::from_hz(hz),
        None => design::calibrated_gamma_yb(),
    };
    let rows: Vec<design::DesignRow> = if reference {
        let mut rows = design::reference_rows(0.1);
        rows.extend(design::reference_rows(0.01));
        rows
    } else if let Some(raw) = &cfg.rows {
        raw.iter()
            .map(|&[om, sig, t]| Ok((AngularFrequency::from_hz(om), Length::from_meters(sig)?, t)))
            .collect::<Result<Vec<_>>>()?
    } else {
        let omega0 = AngularFrequency::from_hz(require(cfg.omega0_hz, "omega0_hz")?);
        let sigma = sigma_of(&cfg)?;
        let t = require(cfg.t_s, "T_s")?;
        vec![(omega0, sigma, t)]
    };
    let results = design::generate_table(scheme, &species, &rows, gamma);
    let csv = design::table_to_csv(&rows, &results);
    write_output(out_path(common, &cfg).as_deref(), &csv)
}

// ---------------------------------------------------------------------------

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::NonPositiveLength(_)
        | Error::NonPositiveMass(_)
        | Error::ZeroDetuning
        | Error::ZeroProbe
        | Error::WrongScheme { .. }
        | Error::BadGrid
        | Error::Io(_) => 2,
        _ => 3,
    }
}

fn main() {
    #[cfg(feature = "parallel")]
    if let Ok(threads) = std::env::var("NANOTRAP_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
    }
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Potential { common, adiabatic } => cmd_potential(common, *adiabatic),
        Command::Eigen { common } => cmd_eigen(common),
        Command::Lifetime { common, sweep } => cmd_lifetime(common, *sweep),
        Command::Design { common, reference } => cmd_design(common, *reference),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(exit_code(&err));
    }
}
