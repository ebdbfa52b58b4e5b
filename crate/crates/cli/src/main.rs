//! `mmvis` — multimode delay-interferometer visibility simulator.
//!
//! Subcommands run Monte Carlo sweeps described by a TOML config file and
//! emit CSV/JSON/SVG results; `validate` runs the built-in numerical
//! cross-checks. Exit codes: 0 success, 2 configuration error, 3 numerical
//! precondition failure, 4 I/O failure.

mod config;
mod validate;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::FileConfig;
use mmvis_core::emit::{self, FormatSet};
use mmvis_core::error::Error;
use mmvis_core::sweep::{
    render_beam_images, run_delay_sweep, run_mode_order_sweep, run_wavelength_sweep_config,
    SweepKind, SweepResult,
};
use mmvis_core::Result;

#[derive(Parser)]
#[command(name = "mmvis", version, about = "Multimode delay-interferometer visibility simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Visibility vs. delay (Rayleigh units or seconds, per the config).
    DelaySweep(RunArgs),
    /// Visibility vs. highest mode order at fixed delays.
    ModeSweep(RunArgs),
    /// Highest guided mode order vs. wavelength for the configured fibers.
    WavelengthSweep(RunArgs),
    /// Intensity cross-sections of individual beam realizations.
    BeamImage(BeamImageArgs),
    /// Run the built-in numerical invariant suite.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the trial count.
    #[arg(long)]
    trials: Option<u32>,
    /// Override the grid resolution (samples per axis).
    #[arg(long)]
    grid: Option<usize>,
    /// Comma-separated output formats: csv,json,svg.
    #[arg(long)]
    formats: Option<String>,
    /// File stem for outputs.
    #[arg(long)]
    stem: Option<String>,
}

#[derive(Args)]
struct BeamImageArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Also write each realization's mode coefficients as CSV.
    #[arg(long)]
    dump_coeffs: bool,
    /// Also write each realization's raw field samples (debug text dump).
    #[arg(long)]
    dump_field: bool,
}

#[derive(Args)]
struct ValidateArgs {
    /// Grid resolution for the field checks.
    #[arg(long, default_value_t = 256)]
    grid: usize,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    };
    std::process::exit(code);
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidParameter(_) | Error::Config(_) => 2,
        Error::GridMismatch(_) | Error::GridTooSmall(_) | Error::UndefinedVisibility => 3,
        Error::Io(_) | Error::Image(_) => 4,
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::DelaySweep(args) => run_sweep(&args, None, "delay_sweep", |cfg| {
            // The config's delay unit picks between the two delay kinds.
            run_delay_sweep(cfg)
        }),
        Command::ModeSweep(args) => {
            run_sweep(&args, Some(SweepKind::ModeOrder), "mode_sweep", run_mode_order_sweep)
        }
        Command::WavelengthSweep(args) => run_sweep(
            &args,
            Some(SweepKind::WavelengthN),
            "wavelength_sweep",
            run_wavelength_sweep_config,
        ),
        Command::BeamImage(args) => run_beam_image(&args),
        Command::Validate(args) => Ok(validate::run_suite(args.grid)),
    }
}

fn load_config(args: &RunArgs) -> Result<FileConfig> {
    let text = fs::read_to_string(&args.config)?;
    FileConfig::parse(&text)
}

fn apply_overrides(args: &RunArgs, config: &mut mmvis_core::sweep::SweepConfig) {
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if let Some(samples) = args.grid {
        let mut grid = config.grid.unwrap_or_default();
        grid.samples_per_axis = Some(samples);
        config.grid = Some(grid);
    }
}

fn formats_for(args: &RunArgs, file: &FileConfig) -> Result<FormatSet> {
    match args.formats.as_deref().or(file.formats.as_deref()) {
        Some(spec) => FormatSet::parse(spec),
        None => Ok(FormatSet {
            csv: true,
            json: true,
            svg: false,
        }),
    }
}

fn run_sweep(
    args: &RunArgs,
    kind: Option<SweepKind>,
    default_stem: &str,
    runner: impl Fn(&mmvis_core::sweep::SweepConfig) -> Result<SweepResult>,
) -> Result<i32> {
    let file = load_config(args)?;
    let kind = match kind {
        Some(k) => k,
        // delay-sweep: infer rayleigh vs. time from the config.
        None => match file.kind {
            Some(k @ (SweepKind::DelayRayleigh | SweepKind::DelayTime)) => k,
            Some(other) => {
                return Err(Error::Config(format!(
                    "delay-sweep cannot run a {other:?} config"
                )))
            }
            None => match file.delays.as_ref().map(|d| d.unit) {
                Some(mmvis_core::units::DelayUnit::RayleighUnits) => SweepKind::DelayRayleigh,
                Some(mmvis_core::units::DelayUnit::Seconds) => SweepKind::DelayTime,
                _ => {
                    return Err(Error::Config(
                        "set kind = \"delay-rayleigh\" or \"delay-time\" (or use those delay \
                         units) for delay sweeps"
                            .into(),
                    ))
                }
            },
        },
    };
    let mut config = file.to_sweep_config(kind)?;
    apply_overrides(args, &mut config);
    let result = runner(&config)?;

    let stem = args.stem.clone().unwrap_or_else(|| default_stem.to_string());
    let formats = formats_for(args, &file)?;
    let files = emit::emit(&result, &args.out, &stem, formats)?;
    if let Some(grid) = result.meta.grid {
        println!(
            "{:?}: {} curve(s), {} trial(s), grid {}x{} over half extent {:.2}",
            kind,
            result.curves.len(),
            result.meta.trials,
            grid.samples_per_axis(),
            grid.samples_per_axis(),
            grid.half_extent()
        );
    } else {
        println!("{:?}: {} curve(s)", kind, result.curves.len());
    }
    for path in files {
        println!("wrote {}", path.display());
    }
    Ok(0)
}

fn run_beam_image(args: &BeamImageArgs) -> Result<i32> {
    let file = load_config(&args.run)?;
    let mut config = file.to_sweep_config(SweepKind::BeamImage)?;
    apply_overrides(&args.run, &mut config);
    let trials = file.image_trials(config.trials);
    let images = render_beam_images(&config, &trials)?;

    let stem = args.run.stem.clone().unwrap_or_else(|| "beam".to_string());
    let files = emit::write_beam_images(&images, &args.run.out, &stem)?;
    for path in &files {
        println!("wrote {}", path.display());
    }
    if args.dump_coeffs || args.dump_field {
        let n = config.n_highest[0];
        for img in &images {
            let beam = mmvis_core::beam::synthesize_beam(n, img.seed)?;
            if args.dump_coeffs {
                let path = args.run.out.join(format!("{stem}_trial{}_coeffs.csv", img.trial));
                let mut out = fs::File::create(&path)?;
                beam.write_coefficients(&mut out)?;
                println!("wrote {}", path.display());
            }
            if args.dump_field {
                let field = mmvis_core::beam::evaluate_beam(&beam, img.grid, img.z);
                let path = args.run.out.join(format!("{stem}_trial{}_field.txt", img.trial));
                let mut out = fs::File::create(&path)?;
                field.write_debug_dump(&mut out)?;
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(0)
}
