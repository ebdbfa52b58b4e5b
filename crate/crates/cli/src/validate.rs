//! Built-in numerical invariant suite behind `mmvis validate`.
//!
//! Fast cross-checks of the physics core: the fiber mode-count chain, delay
//! conversions, mode orthonormality, the closed-form single-mode visibility,
//! the FFT propagation anchor, agreement of the three visibility routes, and
//! thread-count-independent determinism. Prints one PASS/FAIL line per check
//! and returns exit code 3 if anything fails.

use mmvis_core::beam::{child_seed, evaluate_beam, synthesize_beam};
use mmvis_core::emit::curve_csv_string;
use mmvis_core::grid::Grid2D;
use mmvis_core::interference::{
    fundamental_visibility, visibility, visibility_mode_space,
};
use mmvis_core::modes::gram_matrix;
use mmvis_core::propagation::angular_spectrum_propagate;
use mmvis_core::sweep::{run_delay_sweep, GridSpec, SweepConfig, SweepKind};
use mmvis_core::units::{
    convert_delay, guided_mode_count, highest_mode_order, mode_order_for_fiber, v_parameter,
    DelaySpec, FiberSpec, IndexProfile, OpticalConfig,
};

type Check = (&'static str, fn(usize) -> Result<(), String>);

const CHECKS: &[Check] = &[
    ("fiber-mode-chain", check_fiber_chain),
    ("delay-conversion", check_delay_conversion),
    ("mode-orthonormality", check_orthonormality),
    ("closed-form-visibility", check_closed_form),
    ("propagation-anchor", check_propagation),
    ("three-way-agreement", check_three_way),
    ("determinism", check_determinism),
];

pub fn run_suite(grid_samples: usize) -> i32 {
    let mut failures = 0;
    for (name, check) in CHECKS {
        match check(grid_samples) {
            Ok(()) => println!("PASS {name}"),
            Err(msg) => {
                println!("FAIL {name}: {msg}");
                failures += 1;
            }
        }
    }
    if failures == 0 {
        println!("all {} checks passed", CHECKS.len());
        0
    } else {
        println!("{failures} of {} checks failed", CHECKS.len());
        3
    }
}

fn ensure(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg)
    }
}

fn check_fiber_chain(_: usize) -> Result<(), String> {
    let fiber = FiberSpec::new(0.2, 25e-6, IndexProfile::Parabolic).map_err(|e| e.to_string())?;
    let v = v_parameter(&fiber, 1550e-9).map_err(|e| e.to_string())?;
    ensure((v - 20.27).abs() < 0.01, format!("V = {v}, expected 20.27"))?;
    let m = guided_mode_count(v, fiber.profile).map_err(|e| e.to_string())?;
    ensure((m - 51.3).abs() < 0.1, format!("M = {m}, expected 51.3"))?;
    let n = highest_mode_order(m).map_err(|e| e.to_string())?;
    ensure(n == 10, format!("N = {n}, expected 10"))?;

    let jin = FiberSpec::new(0.22, 52.5e-6, IndexProfile::StepIndex).map_err(|e| e.to_string())?;
    let n_jin = mode_order_for_fiber(&jin, 850e-9).map_err(|e| e.to_string())?;
    ensure(n_jin == 60, format!("step-index N = {n_jin}, expected 60"))
}

fn check_delay_conversion(_: usize) -> Result<(), String> {
    let optics = OpticalConfig::new(1550e-9, 1.85e-3).map_err(|e| e.to_string())?;
    let record = convert_delay(
        DelaySpec::mirror_shift_meters(3.75e-2).map_err(|e| e.to_string())?,
        &optics,
    );
    ensure(
        (record.seconds - 0.25e-9).abs() / 0.25e-9 < 5e-3,
        format!("3.75 cm mirror shift maps to {} s", record.seconds),
    )?;
    let back = convert_delay(
        DelaySpec::rayleigh_units(record.rayleigh_units).map_err(|e| e.to_string())?,
        &optics,
    );
    ensure(
        (back.mirror_shift_meters - 3.75e-2).abs() < 1e-12 * 3.75e-2,
        "round trip through Rayleigh units drifted".to_string(),
    )
}

fn check_orthonormality(grid_samples: usize) -> Result<(), String> {
    let grid = Grid2D::sized_for_with_samples(4, 0.5, grid_samples).map_err(|e| e.to_string())?;
    let (modes, matrix) = gram_matrix(4, grid, 0.5).map_err(|e| e.to_string())?;
    let dim = modes.len();
    for i in 0..dim {
        for j in 0..dim {
            let expected = if i == j { 1.0 } else { 0.0 };
            let err = (matrix[i * dim + j] - expected).norm();
            ensure(
                err < 1e-6,
                format!("gram entry ({i},{j}) deviates by {err:.2e}"),
            )?;
        }
    }
    Ok(())
}

fn check_closed_form(grid_samples: usize) -> Result<(), String> {
    let beam = synthesize_beam(1, 0).map_err(|e| e.to_string())?;
    for &dz in &[0.2, 1.0] {
        let grid =
            Grid2D::sized_for_with_samples(1, dz, grid_samples).map_err(|e| e.to_string())?;
        let alpha = evaluate_beam(&beam, grid, 0.0);
        let beta = evaluate_beam(&beam, grid, dz);
        let on_grid = visibility(&alpha, &beta).map_err(|e| e.to_string())?.visibility;
        let expected = fundamental_visibility(dz);
        ensure(
            (on_grid - expected).abs() < 1e-4,
            format!("grid visibility at dz={dz}: {on_grid} vs {expected}"),
        )?;
        let in_modes = visibility_mode_space(&beam, 0.0, dz).visibility;
        ensure(
            (in_modes - expected).abs() < 1e-9,
            format!("mode-space visibility at dz={dz}: {in_modes} vs {expected}"),
        )?;
    }
    Ok(())
}

fn check_propagation(grid_samples: usize) -> Result<(), String> {
    let grid = Grid2D::sized_for_with_samples(1, 1.0, grid_samples).map_err(|e| e.to_string())?;
    let beam = synthesize_beam(1, 0).map_err(|e| e.to_string())?;
    let waist = evaluate_beam(&beam, grid, 0.0);
    let propagated = angular_spectrum_propagate(&waist, 1.0).map_err(|e| e.to_string())?;
    let reference = evaluate_beam(&beam, grid, 1.0);
    let num: f64 = propagated
        .values
        .iter()
        .zip(&reference.values)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    let den: f64 = reference.values.iter().map(|v| v.norm_sqr()).sum();
    let rel = (num / den).sqrt();
    ensure(rel < 1e-3, format!("relative L2 error {rel:.2e}"))
}

fn check_three_way(grid_samples: usize) -> Result<(), String> {
    let dz = 0.5;
    let beam = synthesize_beam(3, child_seed(0, 0)).map_err(|e| e.to_string())?;
    let grid = Grid2D::sized_for_with_samples(3, dz, grid_samples).map_err(|e| e.to_string())?;
    let alpha = evaluate_beam(&beam, grid, 0.0);
    let beta = evaluate_beam(&beam, grid, dz);
    let on_grid = visibility(&alpha, &beta).map_err(|e| e.to_string())?.visibility;
    let in_modes = visibility_mode_space(&beam, 0.0, dz).visibility;
    let via_fft = {
        let propagated = angular_spectrum_propagate(&alpha, dz).map_err(|e| e.to_string())?;
        visibility(&alpha, &propagated).map_err(|e| e.to_string())?.visibility
    };
    ensure(
        (on_grid - in_modes).abs() < 1e-3 && (on_grid - via_fft).abs() < 1e-3,
        format!("routes disagree: grid {on_grid}, modes {in_modes}, fft {via_fft}"),
    )
}

fn check_determinism(_: usize) -> Result<(), String> {
    let mut config = SweepConfig::new(SweepKind::DelayRayleigh);
    config.n_highest = vec![3];
    config.delays = [0.0, 0.4]
        .iter()
        .map(|&v| DelaySpec::rayleigh_units(v).unwrap())
        .collect();
    config.trials = 3;
    config.master_seed = 9;
    config.grid = Some(GridSpec {
        samples_per_axis: Some(128),
        half_extent: None,
    });

    let mut outputs = Vec::new();
    for threads in [1usize, 2] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?;
        let result = pool
            .install(|| run_delay_sweep(&config))
            .map_err(|e| e.to_string())?;
        outputs.push(curve_csv_string(&result.curves[0]));
    }
    ensure(
        outputs[0] == outputs[1],
        "CSV output differs between 1 and 2 rayon threads".to_string(),
    )
}
