//! TOML run configuration.
//!
//! A single flat file with typed sections describes one sweep; subcommand
//! and command-line flags can override the kind, seed, trial count, grid
//! resolution, and output formats.

use serde::Deserialize;

use mmvis_core::error::{Error, Result};
use mmvis_core::sweep::{GridSpec, SweepConfig, SweepKind, WavelengthScan};
use mmvis_core::units::{DelaySpec, DelayUnit, FiberSpec, IndexProfile};

/// `n_highest = 10` or `n_highest = [1, 3, 10]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(u32),
    Many(Vec<u32>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<u32> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DelayTable {
    pub unit: DelayUnit,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberTable {
    pub numerical_aperture: f64,
    pub core_radius: f64,
    pub profile: IndexProfile,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridTable {
    pub samples_per_axis: Option<usize>,
    pub half_extent: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavelengthScanTable {
    /// Meters.
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamImageTable {
    /// Trial indices to render; child seeds derive from the master seed.
    pub trials: Option<Vec<u64>>,
}

/// On-disk configuration. All lengths are meters, all times seconds.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub kind: Option<SweepKind>,
    pub n_highest: Option<OneOrMany>,
    pub waists: Option<Vec<f64>>,
    pub wavelength: Option<f64>,
    pub trials: Option<u32>,
    pub master_seed: Option<u64>,
    pub formats: Option<String>,
    pub delays: Option<DelayTable>,
    pub fibers: Option<Vec<FiberTable>>,
    pub grid: Option<GridTable>,
    pub wavelength_scan: Option<WavelengthScanTable>,
    pub beam_image: Option<BeamImageTable>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("cannot parse config: {e}")))
    }

    /// Builds the sweep configuration for the kind selected on the command
    /// line. A `kind` in the file must agree with the subcommand.
    pub fn to_sweep_config(&self, kind: SweepKind) -> Result<SweepConfig> {
        if let Some(file_kind) = self.kind {
            if file_kind != kind {
                return Err(Error::Config(format!(
                    "config file declares kind {file_kind:?} but the subcommand runs {kind:?}"
                )));
            }
        }
        let mut config = SweepConfig::new(kind);
        if let Some(n) = self.n_highest.clone() {
            config.n_highest = n.into_vec();
        }
        if let Some(waists) = &self.waists {
            config.waists = waists.clone();
        }
        if let Some(wavelength) = self.wavelength {
            config.wavelength = wavelength;
        }
        if let Some(trials) = self.trials {
            config.trials = trials;
        }
        if let Some(seed) = self.master_seed {
            config.master_seed = seed;
        }
        if let Some(delays) = &self.delays {
            config.delays = delays
                .values
                .iter()
                .map(|&v| DelaySpec::new(v, delays.unit))
                .collect::<Result<Vec<_>>>()?;
        }
        if let Some(fibers) = &self.fibers {
            config.fibers = fibers
                .iter()
                .map(|f| FiberSpec::new(f.numerical_aperture, f.core_radius, f.profile))
                .collect::<Result<Vec<_>>>()?;
        }
        if let Some(grid) = &self.grid {
            config.grid = Some(GridSpec {
                samples_per_axis: grid.samples_per_axis,
                half_extent: grid.half_extent,
            });
        }
        if let Some(scan) = &self.wavelength_scan {
            config.wavelength_scan = Some(WavelengthScan {
                min: scan.min,
                max: scan.max,
                points: scan.points,
            });
        }
        Ok(config)
    }

    /// Trial indices for beam-image runs; defaults to `0..trials`.
    pub fn image_trials(&self, trials: u32) -> Vec<u64> {
        self.beam_image
            .as_ref()
            .and_then(|b| b.trials.clone())
            .unwrap_or_else(|| (0..u64::from(trials)).collect())
    }
}
