//! Two-arm interference overlaps and fringe visibility.
//!
//! For arm fields `alpha` (short arm) and `beta` (long arm) the fringe
//! visibility is
//!
//! ```text
//! V = 2 |∬ beta alpha* dA| / ∬ (|alpha|^2 + |beta|^2) dA,
//! ```
//!
//! evaluated either by midpoint quadrature on sampled fields or, as an
//! independent cross-check, in mode space where each overlap factorizes
//! into two 1D Gauss-Hermite integrals. All reductions run in a fixed
//! row-major order with compensated summation, so results do not depend on
//! thread count.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::beam::BeamRealization;
use crate::error::{Error, Result};
use crate::grid::{Grid2D, SampledField};
use crate::hermite::GaussHermite;
use crate::modes::axis_profiles;

/// Visibility along with the pieces it was assembled from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VisibilityResult {
    pub visibility: f64,
    /// `∬ beta alpha* dA` (complex; the fringe phase is its argument).
    pub overlap_numerator: Complex64,
    pub power_alpha: f64,
    pub power_beta: f64,
    /// Grid the quadrature ran on; `None` for the mode-space path.
    pub grid: Option<Grid2D>,
}

impl VisibilityResult {
    fn assemble(
        overlap_numerator: Complex64,
        power_alpha: f64,
        power_beta: f64,
        grid: Option<Grid2D>,
    ) -> Result<Self> {
        let total = power_alpha + power_beta;
        if total <= 0.0 {
            return Err(Error::UndefinedVisibility);
        }
        Ok(Self {
            visibility: 2.0 * overlap_numerator.norm() / total,
            overlap_numerator,
            power_alpha,
            power_beta,
            grid,
        })
    }
}

/// Compensated (Kahan) accumulator, one compensation term per component.
#[derive(Default)]
struct KahanComplex {
    sum_re: f64,
    sum_im: f64,
    c_re: f64,
    c_im: f64,
}

impl KahanComplex {
    #[inline]
    fn add(&mut self, v: Complex64) {
        let y = v.re - self.c_re;
        let t = self.sum_re + y;
        self.c_re = (t - self.sum_re) - y;
        self.sum_re = t;

        let y = v.im - self.c_im;
        let t = self.sum_im + y;
        self.c_im = (t - self.sum_im) - y;
        self.sum_im = t;
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.sum_re, self.sum_im)
    }
}

#[derive(Default)]
struct KahanReal {
    sum: f64,
    c: f64,
}

impl KahanReal {
    #[inline]
    fn add(&mut self, v: f64) {
        let y = v - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Midpoint-rule overlap `∬ beta alpha* dA` over a shared grid.
pub fn overlap_quadrature(alpha: &SampledField, beta: &SampledField) -> Result<Complex64> {
    if alpha.grid != beta.grid {
        return Err(Error::GridMismatch(format!(
            "alpha {}x{} L={} vs beta {}x{} L={}",
            alpha.grid.samples_per_axis(),
            alpha.grid.samples_per_axis(),
            alpha.grid.half_extent(),
            beta.grid.samples_per_axis(),
            beta.grid.samples_per_axis(),
            beta.grid.half_extent(),
        )));
    }
    let mut acc = KahanComplex::default();
    for (a, b) in alpha.values.iter().zip(&beta.values) {
        acc.add(b * a.conj());
    }
    Ok(acc.value() * alpha.grid.cell_area())
}

/// Midpoint-rule power `∬ |field|^2 dA`.
pub fn field_power(field: &SampledField) -> f64 {
    let mut acc = KahanReal::default();
    for v in &field.values {
        acc.add(v.norm_sqr());
    }
    acc.sum * field.grid.cell_area()
}

/// Fringe visibility of two sampled arm fields.
pub fn visibility(alpha: &SampledField, beta: &SampledField) -> Result<VisibilityResult> {
    let numerator = overlap_quadrature(alpha, beta)?;
    let power_alpha = field_power(alpha);
    let power_beta = field_power(beta);
    VisibilityResult::assemble(numerator, power_alpha, power_beta, Some(alpha.grid))
}

/// 1D overlap matrix `O[a][b] = ∫ g_a(x, z2) g_b(x, z1)^* dx` over axis
/// orders `a, b < n_highest`, by Gauss-Hermite quadrature rescaled to the
/// combined Gaussian decay of the two profiles.
fn axis_overlap_matrix(n_highest: u32, z1: f64, z2: f64, rule: &GaussHermite) -> Vec<Complex64> {
    let n = n_highest as usize;
    let sigma = 1.0 / (1.0 + z1 * z1) + 1.0 / (1.0 + z2 * z2);
    let scale = 1.0 / sigma.sqrt();
    let points: Vec<f64> = rule.nodes.iter().map(|&u| u * scale).collect();
    let g1 = axis_profiles(n - 1, &points, z1);
    let g2 = axis_profiles(n - 1, &points, z2);

    let mut matrix = vec![Complex64::ZERO; n * n];
    for a in 0..n {
        for b in 0..n {
            let mut acc = KahanComplex::default();
            for (k, &w) in rule.weights.iter().enumerate() {
                acc.add(w * g2[a][k] * g1[b][k].conj());
            }
            matrix[a * n + b] = acc.value() * scale;
        }
    }
    matrix
}

/// Visibility of a beam realization between planes `z1` and `z2`, computed
/// entirely in mode space: the overlap numerator is a double sum of modal
/// coefficients against per-axis overlap integrals, and the powers are the
/// exact coefficient norms (free propagation is unitary).
///
/// Independent of the grid path: no 2D sampling is involved.
pub fn visibility_mode_space(beam: &BeamRealization, z1: f64, z2: f64) -> VisibilityResult {
    assert!(z1.is_finite() && z2.is_finite(), "propagation distances must be finite");
    let modes = beam.mode_indices();
    let coefficient_power: f64 = beam.coefficients.iter().map(|(_, c)| c.norm_sqr()).sum();

    let numerator = if z1 == z2 {
        // Coincident planes: the overlap matrix is the identity by
        // orthonormality, no quadrature needed.
        Complex64::new(coefficient_power, 0.0)
    } else {
        let order = 4 * beam.n_highest as usize + 24;
        let rule = GaussHermite::new(order);
        let axis = axis_overlap_matrix(beam.n_highest, z1, z2, &rule);
        let n = beam.n_highest as usize;
        let mut acc = KahanComplex::default();
        for (i, &idx_i) in modes.iter().enumerate() {
            let c_i = beam.coefficients[i].1;
            for (j, &idx_j) in modes.iter().enumerate() {
                let c_j = beam.coefficients[j].1;
                let o_x = axis[idx_i.n as usize * n + idx_j.n as usize];
                let o_y = axis[idx_i.m as usize * n + idx_j.m as usize];
                acc.add(c_i * c_j.conj() * o_x * o_y);
            }
        }
        acc.value()
    };

    VisibilityResult::assemble(numerator, coefficient_power, coefficient_power, None)
        .expect("beam realizations always carry power")
}

/// Closed-form single-mode visibility `1 / sqrt(1 + (dz/2)^2)`, from the
/// analytic overlap of two fundamental Gaussians diffracted by `dz`.
pub fn fundamental_visibility(dz: f64) -> f64 {
    1.0 / (1.0 + 0.25 * dz * dz).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::synthesize_beam;
    use crate::grid::Grid2D;
    use crate::modes::{evaluate_mode, ModeIndex};
    use proptest::prelude::*;

    #[test]
    fn self_overlap_of_unit_mode_is_one() {
        let grid = Grid2D::sized_for_with_samples(1, 0.0, 256).unwrap();
        let a = evaluate_mode(ModeIndex::new(0, 0), grid, 0.0);
        let overlap = overlap_quadrature(&a, &a).unwrap();
        assert!((overlap.re - 1.0).abs() < 1e-6);
        assert!(overlap.im.abs() < 1e-12);
    }

    #[test]
    fn parity_selection_rule() {
        for &z in &[0.0, 0.9] {
            let grid = Grid2D::sized_for_with_samples(2, z, 256).unwrap();
            let a = evaluate_mode(ModeIndex::new(0, 0), grid, z);
            let b = evaluate_mode(ModeIndex::new(1, 0), grid, z);
            assert!(overlap_quadrature(&a, &b).unwrap().norm() < 1e-10);
        }
    }

    #[test]
    fn fundamental_overlap_matches_closed_form() {
        let grid = Grid2D::sized_for_with_samples(1, 0.2, 512).unwrap();
        let a = evaluate_mode(ModeIndex::new(0, 0), grid, 0.0);
        let b = evaluate_mode(ModeIndex::new(0, 0), grid, 0.2);
        let overlap = overlap_quadrature(&a, &b).unwrap();
        assert!((overlap.norm() - 0.99504).abs() < 1e-4);
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let a = evaluate_mode(ModeIndex::new(0, 0), Grid2D::new(8.0, 64).unwrap(), 0.0);
        let b = evaluate_mode(ModeIndex::new(0, 0), Grid2D::new(8.0, 128).unwrap(), 0.0);
        assert!(matches!(
            overlap_quadrature(&a, &b),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn zero_fields_have_undefined_visibility() {
        let grid = Grid2D::new(4.0, 16).unwrap();
        let zero = SampledField::new(grid, 0.0, vec![Complex64::ZERO; 256]).unwrap();
        assert!(matches!(
            visibility(&zero, &zero.clone()),
            Err(Error::UndefinedVisibility)
        ));
    }

    #[test]
    fn identical_arms_give_unit_visibility() {
        let beam = synthesize_beam(5, 11).unwrap();
        let grid = Grid2D::sized_for_with_samples(5, 0.0, 256).unwrap();
        let field = crate::beam::evaluate_beam(&beam, grid, 0.0);
        let result = visibility(&field, &field.clone()).unwrap();
        assert!((result.visibility - 1.0).abs() < 1e-9);
    }

    #[test]
    fn single_mode_visibility_follows_closed_form() {
        let beam = synthesize_beam(1, 3).unwrap();
        let grid = Grid2D::sized_for_with_samples(1, 0.2, 512).unwrap();
        let alpha = crate::beam::evaluate_beam(&beam, grid, 0.0);
        let beta = crate::beam::evaluate_beam(&beam, grid, 0.2);
        let result = visibility(&alpha, &beta).unwrap();
        assert!((result.visibility - 0.99504).abs() < 1e-4);
    }

    #[test]
    fn mode_space_hits_closed_form_tightly() {
        let beam = synthesize_beam(1, 99).unwrap();
        let result = visibility_mode_space(&beam, 0.0, 0.2);
        assert!((result.visibility - 0.9950371902099892).abs() < 1e-9);
        let exact = visibility_mode_space(&beam, 0.0, 0.0);
        assert_eq!(exact.visibility, 1.0);
    }

    #[test]
    fn mode_space_agrees_with_grid_quadrature() {
        for seed in [1u64, 2] {
            let beam = synthesize_beam(4, seed).unwrap();
            for &dz in &[0.3, 1.5] {
                let grid = Grid2D::sized_for_with_samples(4, dz, 512).unwrap();
                let alpha = crate::beam::evaluate_beam(&beam, grid, 0.0);
                let beta = crate::beam::evaluate_beam(&beam, grid, dz);
                let on_grid = visibility(&alpha, &beta).unwrap().visibility;
                let in_modes = visibility_mode_space(&beam, 0.0, dz).visibility;
                assert!(
                    (on_grid - in_modes).abs() < 1e-3,
                    "seed={seed} dz={dz}: {on_grid} vs {in_modes}"
                );
            }
        }
    }

    #[test]
    fn visibility_depends_only_on_plane_separation() {
        // Free-space propagation operators commute, so sliding both planes
        // by the same amount leaves the overlap matrix unchanged; keeping
        // (z1, z2) in the API makes this checkable.
        let beam = synthesize_beam(3, 17).unwrap();
        let near = visibility_mode_space(&beam, 0.0, 0.4).visibility;
        let far = visibility_mode_space(&beam, 1.0, 1.4).visibility;
        assert!((near - far).abs() < 1e-9, "near={near} far={far}");
    }

    #[test]
    fn visibility_is_symmetric_in_the_arms() {
        let beam = synthesize_beam(3, 5).unwrap();
        let grid = Grid2D::sized_for_with_samples(3, 0.6, 256).unwrap();
        let alpha = crate::beam::evaluate_beam(&beam, grid, 0.0);
        let beta = crate::beam::evaluate_beam(&beam, grid, 0.6);
        let forward = visibility(&alpha, &beta).unwrap();
        let reverse = visibility(&beta, &alpha).unwrap();
        assert_eq!(forward.visibility, reverse.visibility);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        // Multiplying one arm by a global phase leaves visibility unchanged.
        #[test]
        fn global_phase_invariance(theta in 0.0..std::f64::consts::TAU, seed in 0u64..50) {
            let beam = synthesize_beam(3, seed).unwrap();
            let grid = Grid2D::sized_for_with_samples(3, 0.5, 128).unwrap();
            let alpha = crate::beam::evaluate_beam(&beam, grid, 0.0);
            let mut beta = crate::beam::evaluate_beam(&beam, grid, 0.5);
            let baseline = visibility(&alpha, &beta).unwrap().visibility;
            let phase = Complex64::from_polar(1.0, theta);
            for v in &mut beta.values {
                *v *= phase;
            }
            let rotated = visibility(&alpha, &beta).unwrap().visibility;
            prop_assert!((baseline - rotated).abs() <= 1e-12);
        }

        // Cauchy-Schwarz: visibility never exceeds 1 beyond rounding.
        #[test]
        fn visibility_is_bounded(seed in 0u64..100, dz in 0.0f64..2.0) {
            let beam = synthesize_beam(4, seed).unwrap();
            let grid = Grid2D::sized_for_with_samples(4, 2.0, 128).unwrap();
            let alpha = crate::beam::evaluate_beam(&beam, grid, 0.0);
            let beta = crate::beam::evaluate_beam(&beam, grid, dz);
            let result = visibility(&alpha, &beta).unwrap();
            prop_assert!(result.visibility <= 1.0 + 1e-9);
            prop_assert!(result.visibility >= 0.0);
        }
    }
}
