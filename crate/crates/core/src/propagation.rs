//! Angular-spectrum propagation of sampled waist fields.
//!
//! Independent of the closed-form mode expressions: a field sampled at the
//! waist is propagated by FFT, applying the paraxial free-space transfer
//! phase in the spatial-frequency domain. With transverse coordinates in
//! waist units, `z` in Rayleigh lengths, the plane-wave carrier factored
//! out, and `nu` in cycles per waist as returned by the forward DFT
//! (analysis kernel `exp(-2 pi i nu x)`), the transfer function is
//!
//! ```text
//! H(nu, dz) = exp(+i pi^2 (nu_x^2 + nu_y^2) dz).
//! ```
//!
//! The sign pairs with the mode convention in [`crate::modes`] (curvature
//! phase `exp(-i z rho^2 / (1 + z^2))`): it maps the waist Gaussian
//! `exp(-rho^2)` to `exp(-rho^2 / (1 - i dz)) / (1 - i dz)`, which the
//! tests pin against the sampled fundamental mode.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::SampledField;

/// Fields must carry less than this fraction of their peak intensity in the
/// outermost sample ring before FFT propagation; beyond it, periodic
/// wrap-around pollutes the result.
pub const BOUNDARY_INTENSITY_RATIO_LIMIT: f64 = 1e-8;

/// Propagates a waist field (`z = 0`) by `dz` Rayleigh lengths.
pub fn angular_spectrum_propagate(field: &SampledField, dz: f64) -> Result<SampledField> {
    if field.z != 0.0 {
        return Err(Error::InvalidParameter(format!(
            "angular-spectrum input must be sampled at the waist (z = 0), got z = {}",
            field.z
        )));
    }
    if !dz.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "propagation distance must be finite, got {dz}"
        )));
    }
    check_boundary_energy(field)?;

    let g = field.grid.samples_per_axis();
    let mut values = field.values.clone();

    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(g);
    let inverse = planner.plan_fft_inverse(g);

    fft2(&mut values, g, forward.as_ref());

    // Frequency of DFT bin k in cycles per waist unit.
    let df = 1.0 / (g as f64 * field.grid.spacing());
    let phase_factors: Vec<Complex64> = (0..g)
        .map(|k| {
            let bin = if k <= g / 2 { k as f64 } else { k as f64 - g as f64 };
            let nu = bin * df;
            Complex64::from_polar(1.0, std::f64::consts::PI.powi(2) * nu * nu * dz)
        })
        .collect();
    for iy in 0..g {
        let fy = phase_factors[iy];
        let row = &mut values[iy * g..(iy + 1) * g];
        for (ix, v) in row.iter_mut().enumerate() {
            *v *= fy * phase_factors[ix];
        }
    }

    fft2(&mut values, g, inverse.as_ref());
    let norm = 1.0 / (g * g) as f64;
    for v in &mut values {
        *v *= norm;
    }

    Ok(SampledField {
        grid: field.grid,
        z: dz,
        values,
    })
}

fn check_boundary_energy(field: &SampledField) -> Result<()> {
    let g = field.grid.samples_per_axis();
    let peak = field
        .values
        .iter()
        .map(|v| v.norm_sqr())
        .fold(0.0f64, f64::max);
    if peak == 0.0 {
        return Ok(());
    }
    let mut boundary = 0.0f64;
    for i in 0..g {
        for &idx in &[
            field.grid.index(i, 0),
            field.grid.index(i, g - 1),
            field.grid.index(0, i),
            field.grid.index(g - 1, i),
        ] {
            boundary = boundary.max(field.values[idx].norm_sqr());
        }
    }
    if boundary > BOUNDARY_INTENSITY_RATIO_LIMIT * peak {
        return Err(Error::GridTooSmall(format!(
            "boundary intensity is {:.2e} of the peak (limit {:.0e}); enlarge the grid half \
             extent from {} to at least {:.1}",
            boundary / peak,
            BOUNDARY_INTENSITY_RATIO_LIMIT,
            field.grid.half_extent(),
            field.grid.half_extent() * 1.5,
        )));
    }
    Ok(())
}

/// In-place 2D FFT: rows, transpose, rows, transpose back.
fn fft2(values: &mut [Complex64], g: usize, fft: &dyn rustfft::Fft<f64>) {
    for row in values.chunks_exact_mut(g) {
        fft.process(row);
    }
    transpose(values, g);
    for row in values.chunks_exact_mut(g) {
        fft.process(row);
    }
    transpose(values, g);
}

fn transpose(values: &mut [Complex64], g: usize) {
    for iy in 0..g {
        for ix in (iy + 1)..g {
            values.swap(iy * g + ix, ix * g + iy);
        }
    }
}
