//! Random multimode beam realizations.
//!
//! A realization includes every mode with `n + m < N` at equal unit
//! amplitude and an independent phase drawn uniformly from `[0, 2 pi)`.
//! Phases come from a ChaCha8 stream seeded with a single 64-bit value, so
//! a realization is a pure function of `(N, seed)`; per-trial seeds derive
//! from a master seed through the SplitMix64 sequence.

use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Grid2D, SampledField};
use crate::modes::{axis_profiles, mode_list, ModeIndex};

/// One random draw of modal coefficients for all modes with `n + m < N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamRealization {
    pub n_highest: u32,
    /// `(mode, coefficient)` pairs in [`mode_list`] order; every
    /// coefficient has unit magnitude.
    pub coefficients: Vec<(ModeIndex, Complex64)>,
    /// Seed the phases were drawn from.
    pub seed: u64,
}

impl BeamRealization {
    pub fn mode_indices(&self) -> Vec<ModeIndex> {
        self.coefficients.iter().map(|&(idx, _)| idx).collect()
    }

    /// Audit export: one `n,m,amplitude,phase` row per mode, phases in
    /// `[0, 2 pi)`.
    pub fn write_coefficients<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,m,amplitude,phase")?;
        for &(idx, c) in &self.coefficients {
            let phase = c.arg().rem_euclid(std::f64::consts::TAU);
            writeln!(out, "{},{},{},{}", idx.n, idx.m, c.norm(), phase)?;
        }
        Ok(())
    }
}

/// `trial`-th element of the SplitMix64 sequence seeded with `master_seed`.
/// Gives well-separated child seeds for independent Monte Carlo trials.
pub fn child_seed(master_seed: u64, trial: u64) -> u64 {
    const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut z = master_seed.wrapping_add(GAMMA.wrapping_mul(trial.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws a beam realization: unit amplitudes, phases i.i.d. uniform on
/// `[0, 2 pi)` in [`mode_list`] order.
pub fn synthesize_beam(n_highest: u32, seed: u64) -> Result<BeamRealization> {
    if n_highest < 1 {
        return Err(Error::InvalidParameter(format!(
            "highest mode order must be at least 1, got {n_highest}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coefficients = mode_list(n_highest)
        .into_iter()
        .map(|idx| {
            let phase = rng.random::<f64>() * std::f64::consts::TAU;
            (idx, Complex64::from_polar(1.0, phase))
        })
        .collect();
    Ok(BeamRealization {
        n_highest,
        coefficients,
        seed,
    })
}

/// Evaluates the superposed field `sum c_nm A_nm(x, y, z)` on a grid.
///
/// The per-axis factorization turns the mode sum into, per row `y`, a set
/// of partial sums over `m` followed by a single contraction over `n`.
/// Rows are independent, so they may be filled in parallel; each value is
/// a pure function of its sample point and the result does not depend on
/// the thread count.
pub fn evaluate_beam(beam: &BeamRealization, grid: Grid2D, z: f64) -> SampledField {
    let n = beam.n_highest as usize;
    let coords = grid.coords();
    let profiles = axis_profiles(n - 1, &coords, z);

    // Dense coefficient table c[n][m], zero where n + m >= N.
    let mut coeff = vec![vec![Complex64::ZERO; n]; n];
    for &(idx, c) in &beam.coefficients {
        coeff[idx.n as usize][idx.m as usize] = c;
    }

    let g = grid.samples_per_axis();
    let mut values = vec![Complex64::ZERO; grid.num_samples()];
    values
        .par_chunks_mut(g)
        .enumerate()
        .for_each(|(iy, row)| {
            // s[n] = sum_m c[n][m] g_m(y)
            let mut partial = vec![Complex64::ZERO; n];
            for (order, sums) in partial.iter_mut().enumerate() {
                let mut acc = Complex64::ZERO;
                for m in 0..(n - order) {
                    acc += coeff[order][m] * profiles[m][iy];
                }
                *sums = acc;
            }
            for (ix, value) in row.iter_mut().enumerate() {
                let mut acc = Complex64::ZERO;
                for (order, s) in partial.iter().enumerate() {
                    acc += profiles[order][ix] * s;
                }
                *value = acc;
            }
        });

    SampledField { grid, z, values }
}
