//! Monte Carlo sweep engine.
//!
//! Every sweep draws one beam realization per trial (child seed `t` of the
//! master seed), holds it fixed across the whole abscissa grid — the model
//! of a frozen speckle pattern scanned over delays — and averages the
//! per-trial visibility curves. Trials are independent and may run in
//! parallel; assembly order is fixed, so outputs are identical for any
//! thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beam::{child_seed, evaluate_beam, synthesize_beam};
use crate::error::{Error, Result};
use crate::grid::{Grid2D, SampledField, DEFAULT_SAMPLES_PER_AXIS};
use crate::interference::visibility;
use crate::units::{
    convert_delay, mode_order_for_fiber, DelaySpec, DelayUnit, FiberSpec, OpticalConfig,
};

/// What a sweep scans over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    /// Visibility vs. path difference in Rayleigh units, one curve per `N`.
    DelayRayleigh,
    /// Visibility vs. time delay in seconds for fixed `N`, one curve per waist.
    DelayTime,
    /// Visibility vs. highest mode order, one curve per delay.
    ModeOrder,
    /// Highest mode order vs. wavelength, one curve per fiber.
    WavelengthN,
    /// Intensity cross-sections of individual realizations.
    BeamImage,
}

/// Optional resolution/extent override for the sampling grid.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub samples_per_axis: Option<usize>,
    pub half_extent: Option<f64>,
}

/// Wavelength range for [`run_wavelength_sweep`], in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavelengthScan {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl WavelengthScan {
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.min > 0.0 && self.max >= self.min) || self.points < 1 {
            return Err(Error::Config(format!(
                "wavelength scan needs 0 < min <= max and at least one point, got \
                 min={} max={} points={}",
                self.min, self.max, self.points
            )));
        }
        if self.points == 1 {
            return Ok(vec![self.min]);
        }
        let step = (self.max - self.min) / (self.points - 1) as f64;
        Ok((0..self.points).map(|i| self.min + step * i as f64).collect())
    }
}

/// Declarative description of one sweep run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub kind: SweepKind,
    /// Highest mode order(s); a list for mode-order and multi-`N` delay
    /// sweeps, a single element otherwise.
    pub n_highest: Vec<u32>,
    /// Beam waists in meters (time-delay sweeps).
    pub waists: Vec<f64>,
    /// Wavelength in meters (time-delay sweeps).
    pub wavelength: f64,
    /// Fibers for wavelength sweeps.
    pub fibers: Vec<FiberSpec>,
    pub delays: Vec<DelaySpec>,
    pub trials: u32,
    pub master_seed: u64,
    pub grid: Option<GridSpec>,
    pub wavelength_scan: Option<WavelengthScan>,
}

impl SweepConfig {
    /// Skeleton config with the default trial count.
    pub fn new(kind: SweepKind) -> Self {
        Self {
            kind,
            n_highest: Vec::new(),
            waists: Vec::new(),
            wavelength: 0.0,
            fibers: Vec::new(),
            delays: Vec::new(),
            trials: 20,
            master_seed: 0,
            grid: None,
            wavelength_scan: None,
        }
    }
}

/// Provenance attached to every result: versions, seeds, grid, and the full
/// configuration echo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub code_version: String,
    pub master_seed: u64,
    pub child_seeds: Vec<u64>,
    pub trials: u32,
    pub grid: Option<Grid2D>,
    pub config: SweepConfig,
}

/// One averaged curve plus the per-trial values it was averaged from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveResult {
    pub label: String,
    /// Machine-readable abscissa column name, e.g. `delay_zr`.
    pub abscissa_name: String,
    /// Human-readable axis labels for plots.
    pub abscissa_label: String,
    pub ordinate_label: String,
    pub abscissa: Vec<f64>,
    /// Arithmetic mean over trials per abscissa point.
    pub mean: Vec<f64>,
    /// Sample standard deviation / sqrt(trials); zero for a single trial.
    pub stderr: Vec<f64>,
    /// `per_trial[t][k]` = trial `t` at abscissa point `k`.
    pub per_trial: Vec<Vec<f64>>,
}

impl CurveResult {
    fn from_trials(
        label: String,
        abscissa_name: &str,
        abscissa_label: &str,
        ordinate_label: &str,
        abscissa: Vec<f64>,
        per_trial: Vec<Vec<f64>>,
    ) -> Self {
        let (mean, stderr) = mean_and_stderr(&per_trial, abscissa.len());
        Self {
            label,
            abscissa_name: abscissa_name.to_string(),
            abscissa_label: abscissa_label.to_string(),
            ordinate_label: ordinate_label.to_string(),
            abscissa,
            mean,
            stderr,
            per_trial,
        }
    }
}

/// A full sweep output: metadata plus one or more curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub meta: RunMeta,
    pub curves: Vec<CurveResult>,
}

/// Intensity cross-section of a single beam realization.
#[derive(Debug, Clone)]
pub struct BeamImageResult {
    pub trial: u64,
    pub seed: u64,
    pub grid: Grid2D,
    pub z: f64,
    /// Row-major intensity normalized to its own peak, in `[0, 1]`.
    pub pixels: Vec<f64>,
}

fn mean_and_stderr(per_trial: &[Vec<f64>], points: usize) -> (Vec<f64>, Vec<f64>) {
    let trials = per_trial.len();
    let mut mean = vec![0.0; points];
    let mut stderr = vec![0.0; points];
    for k in 0..points {
        let sum: f64 = per_trial.iter().map(|row| row[k]).sum();
        mean[k] = sum / trials as f64;
        if trials > 1 {
            let var: f64 = per_trial
                .iter()
                .map(|row| (row[k] - mean[k]).powi(2))
                .sum::<f64>()
                / (trials - 1) as f64;
            stderr[k] = (var / trials as f64).sqrt();
        }
    }
    (mean, stderr)
}

fn meta_for(config: &SweepConfig, grid: Option<Grid2D>) -> RunMeta {
    RunMeta {
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        master_seed: config.master_seed,
        child_seeds: (0..u64::from(config.trials))
            .map(|t| child_seed(config.master_seed, t))
            .collect(),
        trials: config.trials,
        grid,
        config: config.clone(),
    }
}

fn resolve_grid(config: &SweepConfig, n_max: u32, z_max: f64) -> Result<Grid2D> {
    let spec = config.grid.unwrap_or_default();
    let samples = spec.samples_per_axis.unwrap_or(DEFAULT_SAMPLES_PER_AXIS);
    let grid = match spec.half_extent {
        Some(half_extent) => Grid2D::new(half_extent, samples)?,
        None => Grid2D::sized_for_with_samples(n_max, z_max, samples)?,
    };
    let required = Grid2D::min_half_extent(n_max, z_max);
    if grid.half_extent() < required {
        return Err(Error::GridTooSmall(format!(
            "half extent {} cannot hold an order-{} beam out to z = {:.3}; use at least {:.1}",
            grid.half_extent(),
            n_max,
            z_max,
            required
        )));
    }
    Ok(grid)
}

fn validate_common(config: &SweepConfig) -> Result<()> {
    if config.trials < 1 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    if config.n_highest.is_empty() {
        return Err(Error::Config("at least one highest mode order is required".into()));
    }
    if config.n_highest.iter().any(|&n| n < 1) {
        return Err(Error::Config("highest mode orders must be at least 1".into()));
    }
    Ok(())
}

fn validate_delays(config: &SweepConfig, expected: DelayUnit, kind: &str) -> Result<()> {
    if config.delays.is_empty() {
        return Err(Error::Config(format!("{kind} sweep needs a non-empty delay grid")));
    }
    for d in &config.delays {
        if d.unit != expected {
            return Err(Error::Config(format!(
                "{kind} sweep expects delays in {expected:?}, got {:?}",
                d.unit
            )));
        }
        if !(d.value >= 0.0) {
            return Err(Error::Config(format!("delays must be non-negative, got {}", d.value)));
        }
    }
    Ok(())
}

/// One planned output curve of a delay-style sweep.
struct CurvePlan {
    label: String,
    n_highest: u32,
    /// Normalized propagation distances of the long arm.
    z_values: Vec<f64>,
    abscissa: Vec<f64>,
}

/// Runs the per-trial visibility matrix for one curve. The short arm is
/// fixed at the waist (`z1 = 0`); the long arm walks the delay grid.
fn run_curve(plan: &CurvePlan, grid: Grid2D, trials: u32, master_seed: u64) -> Result<Vec<Vec<f64>>> {
    (0..u64::from(trials))
        .into_par_iter()
        .map(|trial| {
            let beam = synthesize_beam(plan.n_highest, child_seed(master_seed, trial))?;
            let alpha = evaluate_beam(&beam, grid, 0.0);
            plan.z_values
                .iter()
                .map(|&z2| {
                    let beta: SampledField = evaluate_beam(&beam, grid, z2);
                    Ok(visibility(&alpha, &beta)?.visibility)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect()
}

/// Visibility vs. delay. `DelayRayleigh` emits one curve per entry of
/// `n_highest`; `DelayTime` one curve per waist at the single configured `N`.
pub fn run_delay_sweep(config: &SweepConfig) -> Result<SweepResult> {
    validate_common(config)?;
    let plans: Vec<CurvePlan> = match config.kind {
        SweepKind::DelayRayleigh => {
            validate_delays(config, DelayUnit::RayleighUnits, "delay-rayleigh")?;
            let z_values: Vec<f64> = config.delays.iter().map(|d| d.value).collect();
            config
                .n_highest
                .iter()
                .map(|&n| CurvePlan {
                    label: format!("N={n}"),
                    n_highest: n,
                    z_values: z_values.clone(),
                    abscissa: z_values.clone(),
                })
                .collect()
        }
        SweepKind::DelayTime => {
            validate_delays(config, DelayUnit::Seconds, "delay-time")?;
            if config.n_highest.len() != 1 {
                return Err(Error::Config(
                    "delay-time sweeps use a single highest mode order".into(),
                ));
            }
            if config.waists.is_empty() {
                return Err(Error::Config("delay-time sweeps need at least one waist".into()));
            }
            let n = config.n_highest[0];
            let abscissa: Vec<f64> = config.delays.iter().map(|d| d.value).collect();
            config
                .waists
                .iter()
                .map(|&w0| {
                    let optics = OpticalConfig::new(config.wavelength, w0)?;
                    let z_values = config
                        .delays
                        .iter()
                        .map(|&d| convert_delay(d, &optics).rayleigh_units)
                        .collect();
                    Ok(CurvePlan {
                        label: format!("w0={:.4}mm", w0 * 1e3),
                        n_highest: n,
                        z_values,
                        abscissa: abscissa.clone(),
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
        other => {
            return Err(Error::Config(format!(
                "run_delay_sweep cannot execute a {other:?} configuration"
            )))
        }
    };

    let n_max = plans.iter().map(|p| p.n_highest).max().unwrap();
    let z_max = plans
        .iter()
        .flat_map(|p| p.z_values.iter().copied())
        .fold(0.0f64, f64::max);
    let grid = resolve_grid(config, n_max, z_max)?;

    let (abscissa_name, abscissa_label) = match config.kind {
        SweepKind::DelayRayleigh => ("delay_zr", "path difference (z_R)"),
        _ => ("delay_s", "delay (s)"),
    };
    let curves = plans
        .iter()
        .map(|plan| {
            let per_trial = run_curve(plan, grid, config.trials, config.master_seed)?;
            Ok(CurveResult::from_trials(
                plan.label.clone(),
                abscissa_name,
                abscissa_label,
                "visibility",
                plan.abscissa.clone(),
                per_trial,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepResult {
        meta: meta_for(config, Some(grid)),
        curves,
    })
}

/// Visibility vs. highest mode order at fixed delays (Rayleigh units); one
/// curve per delay.
pub fn run_mode_order_sweep(config: &SweepConfig) -> Result<SweepResult> {
    if config.kind != SweepKind::ModeOrder {
        return Err(Error::Config(format!(
            "run_mode_order_sweep cannot execute a {:?} configuration",
            config.kind
        )));
    }
    validate_common(config)?;
    validate_delays(config, DelayUnit::RayleighUnits, "mode-order")?;

    let n_values = &config.n_highest;
    let n_max = *n_values.iter().max().unwrap();
    let z_max = config.delays.iter().map(|d| d.value).fold(0.0f64, f64::max);
    let grid = resolve_grid(config, n_max, z_max)?;

    // visibilities[trial][n_idx][delay_idx]
    let visibilities: Vec<Vec<Vec<f64>>> = (0..u64::from(config.trials))
        .into_par_iter()
        .map(|trial| {
            n_values
                .iter()
                .map(|&n| {
                    let beam = synthesize_beam(n, child_seed(config.master_seed, trial))?;
                    let alpha = evaluate_beam(&beam, grid, 0.0);
                    config
                        .delays
                        .iter()
                        .map(|d| {
                            let beta = evaluate_beam(&beam, grid, d.value);
                            Ok(visibility(&alpha, &beta)?.visibility)
                        })
                        .collect::<Result<Vec<f64>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let abscissa: Vec<f64> = n_values.iter().map(|&n| f64::from(n)).collect();
    let curves = config
        .delays
        .iter()
        .enumerate()
        .map(|(delay_idx, delay)| {
            let per_trial: Vec<Vec<f64>> = visibilities
                .iter()
                .map(|by_n| by_n.iter().map(|row| row[delay_idx]).collect())
                .collect();
            CurveResult::from_trials(
                format!("dz={}zR", delay.value),
                "n_highest",
                "highest mode order N",
                "visibility",
                abscissa.clone(),
                per_trial,
            )
        })
        .collect();

    Ok(SweepResult {
        meta: meta_for(config, Some(grid)),
        curves,
    })
}

/// Highest mode order vs. wavelength for each fiber; deterministic, no
/// trials involved.
pub fn run_wavelength_sweep(fibers: &[FiberSpec], scan: &WavelengthScan) -> Result<Vec<CurveResult>> {
    if fibers.is_empty() {
        return Err(Error::Config("wavelength sweep needs at least one fiber".into()));
    }
    let wavelengths = scan.values()?;
    fibers
        .iter()
        .map(|fiber| {
            let orders = wavelengths
                .iter()
                .map(|&lambda| Ok(f64::from(mode_order_for_fiber(fiber, lambda)?)))
                .collect::<Result<Vec<f64>>>()?;
            Ok(CurveResult::from_trials(
                format!(
                    "NA={} a={}um {}",
                    fiber.numerical_aperture,
                    fiber.core_radius * 1e6,
                    match fiber.profile {
                        crate::units::IndexProfile::Parabolic => "parabolic",
                        crate::units::IndexProfile::StepIndex => "step-index",
                    }
                ),
                "wavelength_m",
                "wavelength (m)",
                "highest mode order N",
                wavelengths.clone(),
                vec![orders],
            ))
        })
        .collect()
}

/// Wavelength sweep packaged with configuration provenance.
pub fn run_wavelength_sweep_config(config: &SweepConfig) -> Result<SweepResult> {
    if config.kind != SweepKind::WavelengthN {
        return Err(Error::Config(format!(
            "run_wavelength_sweep_config cannot execute a {:?} configuration",
            config.kind
        )));
    }
    let scan = config
        .wavelength_scan
        .ok_or_else(|| Error::Config("wavelength sweep needs a wavelength_scan section".into()))?;
    let curves = run_wavelength_sweep(&config.fibers, &scan)?;
    let mut meta = meta_for(config, None);
    meta.child_seeds.clear();
    meta.trials = 1;
    Ok(SweepResult { meta, curves })
}

/// Renders waist intensity cross-sections for the given trial indices.
pub fn render_beam_images(config: &SweepConfig, trials: &[u64]) -> Result<Vec<BeamImageResult>> {
    if config.kind != SweepKind::BeamImage {
        return Err(Error::Config(format!(
            "render_beam_images cannot execute a {:?} configuration",
            config.kind
        )));
    }
    validate_common(config)?;
    if trials.is_empty() {
        return Err(Error::Config("beam-image runs need at least one trial index".into()));
    }
    let n = config.n_highest[0];
    let grid = resolve_grid(config, n, 0.0)?;
    trials
        .iter()
        .map(|&trial| {
            let seed = child_seed(config.master_seed, trial);
            let beam = synthesize_beam(n, seed)?;
            let field = evaluate_beam(&beam, grid, 0.0);
            let mut pixels = field.intensity_image();
            let peak = pixels.iter().copied().fold(0.0f64, f64::max);
            if peak > 0.0 {
                for p in &mut pixels {
                    *p /= peak;
                }
            }
            Ok(BeamImageResult {
                trial,
                seed,
                grid,
                z: 0.0,
                pixels,
            })
        })
        .collect()
}

/// Normalized cross-correlation of two equally sized images.
pub fn image_cross_correlation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    dot / (na * nb)
}
