//! Uniform square sampling grids and complex scalar fields on them.
//!
//! Coordinates are in waist units and cell-centered, so no sample ever sits
//! exactly on an axis and every sample at `+x` has an exact mirror at `-x`.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of samples per axis.
pub const DEFAULT_SAMPLES_PER_AXIS: usize = 512;

/// Square, uniform, cell-centered sampling grid over
/// `[-half_extent, half_extent]^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    half_extent: f64,
    samples_per_axis: usize,
}

impl Grid2D {
    /// `samples_per_axis` must be even and at least 2 so the grid is
    /// mirror-symmetric and FFT-friendly.
    pub fn new(half_extent: f64, samples_per_axis: usize) -> Result<Self> {
        if !(half_extent > 0.0) || !half_extent.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid half extent must be positive, got {half_extent}"
            )));
        }
        if samples_per_axis < 2 || samples_per_axis % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "samples per axis must be even and >= 2, got {samples_per_axis}"
            )));
        }
        Ok(Self {
            half_extent,
            samples_per_axis,
        })
    }

    /// Grid sized for beams up to combined mode order `n_highest` anywhere in
    /// `|z| <= z_max`: half extent `(4 + sqrt(2 N)) * sqrt(1 + z_max^2)` at
    /// the default resolution. Higher modes are wider (radius ~ sqrt(n) w),
    /// hence the order-dependent margin.
    pub fn sized_for(n_highest: u32, z_max: f64) -> Self {
        Self::sized_for_with_samples(n_highest, z_max, DEFAULT_SAMPLES_PER_AXIS)
            .expect("default sample count is valid")
    }

    /// Same sizing rule with an explicit sample count.
    pub fn sized_for_with_samples(n_highest: u32, z_max: f64, samples: usize) -> Result<Self> {
        let n = n_highest.max(1) as f64;
        let scale = 4.0 + (2.0 * n).sqrt();
        let w_max = (1.0 + z_max * z_max).sqrt();
        Self::new(scale * w_max, samples)
    }

    /// Smallest half extent that still holds an order-`n_highest` beam at
    /// `|z| <= z_max`: the outermost classical turning point plus a
    /// three-waist Gaussian tail.
    pub fn min_half_extent(n_highest: u32, z_max: f64) -> f64 {
        let n = n_highest.max(1) as f64;
        let w_max = (1.0 + z_max * z_max).sqrt();
        ((n - 0.5).max(0.5).sqrt() + 3.0) * w_max
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn samples_per_axis(&self) -> usize {
        self.samples_per_axis
    }

    /// Sample spacing `2 L / G`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / self.samples_per_axis as f64
    }

    /// Area element of the midpoint quadrature rule.
    pub fn cell_area(&self) -> f64 {
        let h = self.spacing();
        h * h
    }

    /// Total number of samples `G^2`.
    pub fn num_samples(&self) -> usize {
        self.samples_per_axis * self.samples_per_axis
    }

    /// Cell-centered coordinates `x_i = -L + (i + 1/2) h`, evaluated as
    /// `(i - (G-1)/2) h` so mirror pairs are exact sign flips.
    pub fn coords(&self) -> Vec<f64> {
        let g = self.samples_per_axis;
        let h = self.spacing();
        let center = (g as f64 - 1.0) / 2.0;
        (0..g).map(|i| (i as f64 - center) * h).collect()
    }

    /// Flat index of the sample at column `ix` (x) and row `iy` (y).
    #[inline]
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.samples_per_axis + ix
    }
}

/// Complex scalar field sampled on a [`Grid2D`] at normalized distance `z`.
///
/// Values are stored row-major with y as the slow axis:
/// `values[iy * G + ix]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    pub grid: Grid2D,
    pub z: f64,
    pub values: Vec<Complex64>,
}

impl SampledField {
    pub fn new(grid: Grid2D, z: f64, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.num_samples() {
            return Err(Error::InvalidParameter(format!(
                "field needs {} samples, got {}",
                grid.num_samples(),
                values.len()
            )));
        }
        Ok(Self { grid, z, values })
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Point intensities `|A|^2`, row-major like the field itself.
    pub fn intensity_image(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Debug dump, one `x y re im` line per sample. Not a stable format.
    pub fn write_debug_dump<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let coords = self.grid.coords();
        writeln!(
            out,
            "# field dump: g={} half_extent={} z={}",
            self.grid.samples_per_axis(),
            self.grid.half_extent(),
            self.z
        )?;
        for (iy, y) in coords.iter().enumerate() {
            for (ix, x) in coords.iter().enumerate() {
                let v = self.values[self.grid.index(ix, iy)];
                writeln!(out, "{} {} {} {}", x, y, v.re, v.im)?;
            }
        }
        Ok(())
    }
}
