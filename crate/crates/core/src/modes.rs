//! Hermite-Gaussian transverse modes in normalized units.
//!
//! A mode of index `(n, m)` at normalized distance `z` (Rayleigh lengths)
//! factorizes into per-axis profiles,
//!
//! ```text
//! A_nm(x, y, z) = g_n(x, z) * g_m(y, z),
//! g_n(x, z) = 2^{1/4} / sqrt(w) * h_n(sqrt(2) x / w)
//!             * exp(-i z x^2 / w^2) * exp(i (n + 1/2) atan z),
//! ```
//!
//! with `w = sqrt(1 + z^2)` the normalized beam radius and `h_n` the
//! orthonormal Hermite functions. The product reproduces the usual mode
//! expression: prefactor `sqrt((2/pi) / (2^{n+m} n! m!)) / w`, Hermite
//! factors in `sqrt(2) x / w`, the Gaussian-plus-curvature factor in its
//! singularity-free form `exp(-(x^2+y^2)/(1 - i z))`, and the Gouy phase
//! `exp(i (n + m + 1) atan z)`. The axis profiles carry the real Gaussian
//! inside `h_n`, so nothing here divides by `z`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::{Grid2D, SampledField};
use crate::hermite::hermite_functions;
use crate::interference::overlap_quadrature;

/// Transverse mode index; the combined order is `n + m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub n: u32,
    pub m: u32,
}

impl ModeIndex {
    pub fn new(n: u32, m: u32) -> Self {
        Self { n, m }
    }

    pub fn order(&self) -> u32 {
        self.n + self.m
    }
}

/// All mode indices with `n + m < n_highest`, in a fixed order
/// (outer loop over `n`, inner over `m`). This order also fixes how random
/// phases are assigned to modes.
pub fn mode_list(n_highest: u32) -> Vec<ModeIndex> {
    let mut out = Vec::with_capacity(mode_count(n_highest));
    for n in 0..n_highest {
        for m in 0..(n_highest - n) {
            out.push(ModeIndex::new(n, m));
        }
    }
    out
}

/// Number of modes with `n + m < n_highest`, i.e. `N (N + 1) / 2`.
pub fn mode_count(n_highest: u32) -> usize {
    let n = n_highest as usize;
    n * (n + 1) / 2
}

/// Per-axis mode profiles `g_n(x, z)` for all orders `n <= max_order` at the
/// given sample points; `values[n][i]` is order `n` at `points[i]`.
pub(crate) fn axis_profiles(max_order: usize, points: &[f64], z: f64) -> Vec<Vec<Complex64>> {
    let w_sq = 1.0 + z * z;
    let w = w_sq.sqrt();
    let amplitude = 2f64.powf(0.25) / w.sqrt();
    let gouy_half = 0.5 * z.atan();

    // exp(i (n + 1/2) atan z) per order.
    let gouy: Vec<Complex64> = (0..=max_order)
        .map(|n| Complex64::from_polar(1.0, (2.0 * n as f64 + 1.0) * gouy_half))
        .collect();

    let mut values = vec![vec![Complex64::ZERO; points.len()]; max_order + 1];
    for (i, &x) in points.iter().enumerate() {
        let t = std::f64::consts::SQRT_2 * x / w;
        let h = hermite_functions(max_order, t);
        let base = Complex64::from_polar(amplitude, -z * x * x / w_sq);
        for (n, &hn) in h.iter().enumerate() {
            values[n][i] = base * gouy[n] * hn;
        }
    }
    values
}

/// Single-point mode amplitude `A_nm(x, y, z)`.
pub fn mode_amplitude(idx: ModeIndex, x: f64, y: f64, z: f64) -> Complex64 {
    let gx = axis_profiles(idx.n as usize, &[x], z);
    let gy = axis_profiles(idx.m as usize, &[y], z);
    gx[idx.n as usize][0] * gy[idx.m as usize][0]
}

/// Samples one mode on a grid.
pub fn evaluate_mode(idx: ModeIndex, grid: Grid2D, z: f64) -> SampledField {
    let coords = grid.coords();
    let gx = axis_profiles(idx.n as usize, &coords, z);
    let gy = axis_profiles(idx.m as usize, &coords, z);
    let row_x = &gx[idx.n as usize];
    let row_y = &gy[idx.m as usize];
    let g = grid.samples_per_axis();
    let mut values = vec![Complex64::ZERO; grid.num_samples()];
    for iy in 0..g {
        let fy = row_y[iy];
        let row = &mut values[iy * g..(iy + 1) * g];
        for ix in 0..g {
            row[ix] = row_x[ix] * fy;
        }
    }
    SampledField { grid, z, values }
}

/// Discretized Gram matrix of all modes with `n + m < n_highest` at one `z`,
/// using the same midpoint quadrature as the visibility path. Row/column
/// order matches [`mode_list`]. Orthonormality of the basis makes this the
/// identity up to quadrature error on an adequate grid.
pub fn gram_matrix(
    n_highest: u32,
    grid: Grid2D,
    z: f64,
) -> Result<(Vec<ModeIndex>, Vec<Complex64>)> {
    let modes = mode_list(n_highest);
    let dim = modes.len();
    let mut matrix = vec![Complex64::ZERO; dim * dim];

    // Upper triangle including the diagonal; the rest follows by conjugate
    // symmetry of the overlap.
    let pairs: Vec<(usize, usize)> = (0..dim)
        .flat_map(|i| (i..dim).map(move |j| (i, j)))
        .collect();
    let entries: Result<Vec<((usize, usize), Complex64)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let a = evaluate_mode(modes[i], grid, z);
            let b = if i == j {
                a.clone()
            } else {
                evaluate_mode(modes[j], grid, z)
            };
            // entry (i, j) = ∬ A_i A_j^* dx dy
            let value = overlap_quadrature(&b, &a)?;
            Ok(((i, j), value))
        })
        .collect();
    for ((i, j), value) in entries? {
        matrix[i * dim + j] = value;
        matrix[j * dim + i] = value.conj();
    }
    Ok((modes, matrix))
}
