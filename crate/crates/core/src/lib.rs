//! Visibility simulation for spatially multimode delay interferometers.
//!
//! An unbalanced Michelson or Mach-Zehnder interferometer fed from a
//! multimode fiber interferes two copies of a beam that have diffracted
//! over different distances, so the fringe visibility degrades with the
//! arm delay, the number of excited modes, and shrinking beam waist. This
//! crate models the beam as an equal-amplitude, random-phase superposition
//! of Hermite-Gaussian modes bounded by the fiber's guided-mode capacity,
//! and computes the visibility from the overlap of the two arm fields.
//!
//! Everything runs in normalized units (transverse lengths in waists,
//! propagation in Rayleigh lengths); [`units`] converts from SI fiber,
//! wavelength, waist, and delay parameters.
//!
//! ```
//! use mmvis_core::{
//!     beam::synthesize_beam,
//!     interference::visibility_mode_space,
//! };
//!
//! let beam = synthesize_beam(10, 42).unwrap();
//! let result = visibility_mode_space(&beam, 0.0, 0.1);
//! assert!(result.visibility > 0.9 && result.visibility <= 1.0);
//! ```

pub mod beam;
pub mod emit;
pub mod error;
pub mod grid;
pub mod hermite;
pub mod interference;
pub mod modes;
pub mod propagation;
pub mod sweep;
pub mod units;

pub use error::{Error, Result};
