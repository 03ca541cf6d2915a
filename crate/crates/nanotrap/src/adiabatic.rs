//! Born-Oppenheimer decomposition of the atom-light Hamiltonian on a spatial
//! grid, with a smooth gauge, and the geometric scalar and vector potentials
//! derived from the position-dependent eigenframe.
//!
//! The per-point eigensolves are data-parallel (rayon, behind the `parallel`
//! feature); the gauge-fixing pass is a sequential left-to-right sweep.
//!
//! Sign convention: `scalar potentials` returns the Born-Huang matrix
//! `-(hbar/2m) R^T (d^2 R / dx^2)` in angular-frequency units, whose diagonal
//! is the repulsive geometric potential of each dressed branch. The vector
//! potential is `A = i R^T (dR/dx)`, Hermitian with purely imaginary
//! off-diagonals for real Hamiltonians, in units of 1/m.

use crate::error::{Error, Result};
use crate::schemes::{Scheme, SchemeConfig};
use crate::units::{AtomSpecies, HBAR};
use nalgebra::DMatrix;
use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Tolerance (relative to the matrix norm) below which two eigenvalues at a
/// single grid point are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// A uniform grid of at least 16 points.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialGrid {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl SpatialGrid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if n < 16 || !(x_max > x_min) {
            return Err(Error::BadGrid);
        }
        Ok(SpatialGrid { x_min, x_max, n })
    }

    /// Symmetric grid spanning `[-half_span, half_span]`.
    pub fn symmetric(half_span: f64, n: usize) -> Result<Self> {
        Self::new(-half_span, half_span, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    /// Every-other-point subgrid (odd n keeps both endpoints).
    fn coarsened(&self) -> SpatialGrid {
        let n = (self.n + 1) / 2;
        SpatialGrid { x_min: self.x_min, x_max: self.point(2 * (n - 1)), n }
    }
}

/// Gauge-smoothed eigenvalues and eigenframes of the atom-light Hamiltonian
/// sampled on a grid. `energies[i][b]` is branch `b` at point `i`; branch
/// labels follow maximal-overlap continuation, not energy ordering.
#[derive(Debug, Clone)]
pub struct AdiabaticDecomposition {
    pub grid: SpatialGrid,
    pub energies: Vec<Vec<f64>>,
    pub frames: Vec<DMatrix<f64>>,
    pub dim: usize,
}

impl AdiabaticDecomposition {
    /// Energy curve of one branch over the grid, rad/s.
    pub fn branch_energy(&self, branch: usize) -> Vec<f64> {
        self.energies.iter().map(|e| e[branch]).collect()
    }
}

/// Geometric potentials on the same grid as the decomposition they came from.
#[derive(Debug, Clone)]
pub struct GeometricPotentials {
    pub grid: SpatialGrid,
    /// Born-Huang scalar matrix per point, angular frequency (rad/s).
    pub scalar: Vec<DMatrix<f64>>,
    /// Vector potential `A = i R^T R'` per point, 1/m.
    pub vector: Vec<DMatrix<Complex64>>,
}

fn sorted_eigenpairs(h: &DMatrix<f64>, x: f64) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let norm = h.norm();
    let eig = h.clone().symmetric_eigen();
    let dim = h.nrows();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    for pair in values.windows(2) {
        let gap = pair[1] - pair[0];
        if gap < DEGENERACY_TOL * norm {
            return Err(Error::DegenerateEigenvalues { x, gap, tol: DEGENERACY_TOL * norm });
        }
    }
    let mut frame = DMatrix::zeros(dim, dim);
    for (col, &i) in order.iter().enumerate() {
        frame.set_column(col, &eig.eigenvectors.column(i));
    }
    Ok((values, frame))
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            acc.push(v);
            go(rest, acc, out);
            acc.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..d).collect(), &mut Vec::new(), &mut out);
    out
}

/// Diagonalizes the sampled Hamiltonian at every grid point and fixes a
/// smooth gauge: at the first point the largest-magnitude component of each
/// eigenvector is made positive; at each later point branches are matched to
/// their predecessors by maximal overlap and signed so the overlap is
/// positive.
pub fn diagonalize_grid<F>(h_sampler: F, grid: &SpatialGrid) -> Result<AdiabaticDecomposition>
where
    F: Fn(f64) -> Result<DMatrix<f64>> + Sync,
{
    let points = grid.points();

    #[cfg(feature = "parallel")]
    let raw: Result<Vec<(Vec<f64>, DMatrix<f64>)>> = points
        .par_iter()
        .map(|&x| sorted_eigenpairs(&h_sampler(x)?, x))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let raw: Result<Vec<(Vec<f64>, DMatrix<f64>)>> = points
        .iter()
        .map(|&x| sorted_eigenpairs(&h_sampler(x)?, x))
        .collect();

    smooth_gauge(raw?, grid)
}

/// Single-threaded [`diagonalize_grid`]: the fallback used when the
/// `parallel` feature is off, kept available for benchmarking against the
/// data-parallel path.
pub fn diagonalize_grid_sequential<F>(
    h_sampler: F,
    grid: &SpatialGrid,
) -> Result<AdiabaticDecomposition>
where
    F: Fn(f64) -> Result<DMatrix<f64>>,
{
    let raw: Result<Vec<(Vec<f64>, DMatrix<f64>)>> = grid
        .points()
        .iter()
        .map(|&x| sorted_eigenpairs(&h_sampler(x)?, x))
        .collect();
    smooth_gauge(raw?, grid)
}

fn smooth_gauge(
    raw: Vec<(Vec<f64>, DMatrix<f64>)>,
    grid: &SpatialGrid,
) -> Result<AdiabaticDecomposition> {
    let dim = raw[0].1.nrows();
    let perms = permutations(dim);

    let mut energies: Vec<Vec<f64>> = Vec::with_capacity(grid.n());
    let mut frames: Vec<DMatrix<f64>> = Vec::with_capacity(grid.n());

    for (i, (values, mut frame)) in raw.into_iter().enumerate() {
        if frame.nrows() != dim {
            return Err(Error::Config("sampler returned inconsistent dimensions".into()));
        }
        if i == 0 {
            // Anchor gauge: largest-magnitude component of each column positive.
            for c in 0..dim {
                let col = frame.column(c);
                let lead = (0..dim).max_by(|&a, &b| col[a].abs().partial_cmp(&col[b].abs()).unwrap()).unwrap();
                if col[lead] < 0.0 {
                    frame.column_mut(c).neg_mut();
                }
            }
            energies.push(values);
            frames.push(frame);
            continue;
        }
        let prev = &frames[i - 1];
        let overlap = prev.transpose() * &frame;
        let best = perms
            .iter()
            .max_by(|p, q| {
                let sp: f64 = (0..dim).map(|j| overlap[(j, p[j])].abs()).sum();
                let sq: f64 = (0..dim).map(|j| overlap[(j, q[j])].abs()).sum();
                sp.partial_cmp(&sq).unwrap()
            })
            .unwrap();
        let mut new_frame = DMatrix::zeros(dim, dim);
        let mut new_values = vec![0.0; dim];
        for j in 0..dim {
            let src = best[j];
            let sign = if overlap[(j, src)] < 0.0 { -1.0 } else { 1.0 };
            new_frame.set_column(j, &(sign * frame.column(src)));
            new_values[j] = values[src];
        }
        energies.push(new_values);
        frames.push(new_frame);
    }

    Ok(AdiabaticDecomposition { grid: grid.clone(), energies, frames, dim })
}

fn potentials_from_frames(
    grid: &SpatialGrid,
    frames: &[DMatrix<f64>],
    dim: usize,
    species: &AtomSpecies,
) -> (Vec<DMatrix<f64>>, Vec<DMatrix<Complex64>>) {
    let h = grid.spacing();
    let n = grid.n();
    let kin = HBAR / (2.0 * species.mass_kg());
    let mut scalar = Vec::with_capacity(n);
    let mut vector = Vec::with_capacity(n);
    for i in 0..n {
        // Second-order stencils, one-sided at the edges.
        let (dr, d2r) = if i == 0 {
            (
                (-3.0 * &frames[0] + 4.0 * &frames[1] - &frames[2]) / (2.0 * h),
                (2.0 * &frames[0] - 5.0 * &frames[1] + 4.0 * &frames[2] - &frames[3]) / (h * h),
            )
        } else if i == n - 1 {
            (
                (3.0 * &frames[n - 1] - 4.0 * &frames[n - 2] + &frames[n - 3]) / (2.0 * h),
                (2.0 * &frames[n - 1] - 5.0 * &frames[n - 2] + 4.0 * &frames[n - 3]
                    - &frames[n - 4])
                    / (h * h),
            )
        } else {
            (
                (&frames[i + 1] - &frames[i - 1]) / (2.0 * h),
                (&frames[i + 1] - 2.0 * &frames[i] + &frames[i - 1]) / (h * h),
            )
        };
        let w = frames[i].transpose() * dr;
        let u = frames[i].transpose() * d2r;
        scalar.push(-kin * u);
        let mut a = DMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                a[(r, c)] = Complex64::new(0.0, 1.0) * w[(r, c)];
            }
        }
        vector.push(a);
    }
    (scalar, vector)
}

/// Relative coarse-vs-fine disagreement above which the grid is rejected.
pub const CONVERGENCE_TOL: f64 = 0.05;

/// Computes the geometric potentials by central differences of the smoothed
/// eigenframes, with a self-check against the every-other-point subgrid.
pub fn geometric_potentials(
    decomp: &AdiabaticDecomposition,
    species: &AtomSpecies,
) -> Result<GeometricPotentials> {
    let grid = &decomp.grid;
    let (scalar, vector) = potentials_from_frames(grid, &decomp.frames, decomp.dim, species);

    // Richardson self-check: the stride-2 subgrid result should agree to O(h^2).
    let coarse_grid = grid.coarsened();
    let coarse_frames: Vec<DMatrix<f64>> =
        decomp.frames.iter().step_by(2).cloned().collect();
    let (coarse_scalar, _) =
        potentials_from_frames(&coarse_grid, &coarse_frames, decomp.dim, species);

    let scale = scalar
        .iter()
        .map(|m| m.amax())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut worst: f64 = 0.0;
    // Interior shared points only; edge stencils differ by construction.
    for (ci, m_coarse) in coarse_scalar.iter().enumerate().skip(1) {
        let fi = 2 * ci;
        if ci + 1 >= coarse_scalar.len() || fi + 1 >= scalar.len() {
            break;
        }
        let diff = (m_coarse - &scalar[fi]).amax() / scale;
        worst = worst.max(diff);
    }
    if worst > CONVERGENCE_TOL {
        let factor = (worst / CONVERGENCE_TOL).sqrt().ceil() as usize;
        return Err(Error::GridTooCoarse { suggested_n: grid.n() * factor.max(2) });
    }

    Ok(GeometricPotentials { grid: grid.clone(), scalar, vector })
}

/// Normalized dark state `(Omega_c(x)|g> - Omega_p|r>) / sqrt(..)` of the EIT
/// schemes, as `[r, g, e]` components.
pub fn dark_state(config: &SchemeConfig, x: f64) -> Result<[f64; 3]> {
    if !matches!(config.scheme, Scheme::Eit | Scheme::ModifiedEit) {
        return Err(Error::WrongScheme { expected: "eit or modified_eit", got: config.scheme.to_string() });
    }
    let oc = config.control_field(x).rad_per_sec();
    let op = config.omega_p.rad_per_sec();
    let norm = (oc * oc + op * op).sqrt();
    if norm == 0.0 {
        return Err(Error::UndefinedDirection);
    }
    Ok([-op / norm, oc / norm, 0.0])
}
