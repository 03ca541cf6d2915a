//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length must be positive, got {0} m")]
    NonPositiveLength(f64),

    #[error("mass must be positive, got {0} kg")]
    NonPositiveMass(f64),

    #[error("single-photon detuning must be nonzero")]
    ZeroDetuning,

    #[error("operation requires scheme {expected}, got {got}")]
    WrongScheme { expected: &'static str, got: String },

    #[error("probe and control fields both vanish; dark state direction undefined")]
    UndefinedDirection,

    #[error("degenerate eigenvalues at x = {x} m (gap {gap:e} below tolerance {tol:e})")]
    DegenerateEigenvalues { x: f64, gap: f64, tol: f64 },

    #[error("grid too coarse for converged geometric potentials; try n >= {suggested_n}")]
    GridTooCoarse { suggested_n: usize },

    #[error("grid must have n >= 16 points and x_max > x_min")]
    BadGrid,

    #[error("no bound state below threshold {threshold} rad/s")]
    NoBoundState { threshold: f64 },

    #[error("eigensolver failed to converge after {iterations} iterations")]
    EigensolverStalled { iterations: usize },

    #[error("states live on different grids")]
    MismatchedGrids,

    #[error("state has no channel {channel}")]
    MissingChannel { channel: usize },

    #[error("probe Rabi frequency must be positive")]
    ZeroProbe,

    #[error("enhancement factor s = {s} <= 1: no sub-wavelength gain for these parameters")]
    NoEnhancement { s: f64 },

    #[error("Landau-Zener gap must be nonnegative, got {0} rad/s")]
    NegativeGap(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
