//! Physical parameter types, SI/normalized unit conversions, and the
//! fiber mode-count chain that fixes the highest included mode order.
//!
//! Internally the simulator measures transverse coordinates in units of the
//! beam waist `w0` and propagation distance in units of the Rayleigh length
//! `z_R = pi * w0^2 / lambda`. SI values appear only at this boundary.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum (m/s). The surrounding medium is taken as
/// index 1, so optical path and geometric path coincide.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Refractive index profile of a multimode fiber core.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexProfile {
    /// Graded (parabolic) index; guides `V^2 / 8` spatial modes.
    Parabolic,
    /// Step index; guides `V^2 / 4` spatial modes, twice the parabolic count.
    StepIndex,
}

/// Multimode fiber parameters that bound the mode content of the beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberSpec {
    /// Numerical aperture, dimensionless, in (0, 1).
    pub numerical_aperture: f64,
    /// Core radius in meters.
    pub core_radius: f64,
    pub profile: IndexProfile,
}

impl FiberSpec {
    pub fn new(numerical_aperture: f64, core_radius: f64, profile: IndexProfile) -> Result<Self> {
        if !(numerical_aperture > 0.0 && numerical_aperture < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "numerical aperture must lie in (0, 1), got {numerical_aperture}"
            )));
        }
        if !(core_radius > 0.0) || !core_radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "core radius must be positive, got {core_radius}"
            )));
        }
        Ok(Self {
            numerical_aperture,
            core_radius,
            profile,
        })
    }
}

/// Wavelength and waist of the collimated beam entering the interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalConfig {
    /// Wavelength in meters.
    pub wavelength: f64,
    /// Beam waist (1/e field radius of the fundamental mode) in meters.
    pub waist: f64,
}

impl OpticalConfig {
    pub fn new(wavelength: f64, waist: f64) -> Result<Self> {
        if !(wavelength > 0.0) || !wavelength.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "wavelength must be positive, got {wavelength}"
            )));
        }
        if !(waist > 0.0) || !waist.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "waist must be positive, got {waist}"
            )));
        }
        Ok(Self { wavelength, waist })
    }

    /// Rayleigh length `z_R = pi * w0^2 / lambda` in meters.
    pub fn rayleigh_length(&self) -> f64 {
        std::f64::consts::PI * self.waist * self.waist / self.wavelength
    }
}

/// Unit in which an interferometer delay is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DelayUnit {
    /// Time delay between the arms.
    Seconds,
    /// Optical path difference.
    PathMeters,
    /// Path difference in Rayleigh lengths.
    RayleighUnits,
    /// Physical shift of the long-arm mirror (half the path difference,
    /// Michelson double pass).
    MirrorShiftMeters,
}

/// A non-negative delay tagged with its unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelaySpec {
    pub value: f64,
    pub unit: DelayUnit,
}

impl DelaySpec {
    pub fn new(value: f64, unit: DelayUnit) -> Result<Self> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "delay must be finite and non-negative, got {value}"
            )));
        }
        Ok(Self { value, unit })
    }

    pub fn seconds(value: f64) -> Result<Self> {
        Self::new(value, DelayUnit::Seconds)
    }

    pub fn rayleigh_units(value: f64) -> Result<Self> {
        Self::new(value, DelayUnit::RayleighUnits)
    }

    pub fn mirror_shift_meters(value: f64) -> Result<Self> {
        Self::new(value, DelayUnit::MirrorShiftMeters)
    }
}

/// One delay expressed simultaneously in all supported units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayRecord {
    pub seconds: f64,
    pub path_meters: f64,
    pub rayleigh_units: f64,
    pub mirror_shift_meters: f64,
}

/// Fiber V-parameter, `V = (2 pi / lambda) * NA * a`.
pub fn v_parameter(fiber: &FiberSpec, wavelength: f64) -> Result<f64> {
    if !(wavelength > 0.0) || !wavelength.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "wavelength must be positive, got {wavelength}"
        )));
    }
    FiberSpec::new(fiber.numerical_aperture, fiber.core_radius, fiber.profile)?;
    Ok(std::f64::consts::TAU / wavelength * fiber.numerical_aperture * fiber.core_radius)
}

/// Number of guided spatial modes for a given V-parameter, excluding
/// polarization diversity. Returned unrounded.
pub fn guided_mode_count(v: f64, profile: IndexProfile) -> Result<f64> {
    if !(v >= 0.0) || !v.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "V-parameter must be non-negative, got {v}"
        )));
    }
    Ok(match profile {
        IndexProfile::Parabolic => v * v / 8.0,
        IndexProfile::StepIndex => v * v / 4.0,
    })
}

/// Highest combined mode order `N` such that the `N (N + 1) / 2` modes with
/// `n + m < N` best match a guided-mode count `M`.
///
/// Solves `N (N + 1) / 2 = M` and rounds to the nearest integer; any
/// positive mode count yields at least `N = 1`.
pub fn highest_mode_order(mode_count: f64) -> Result<u32> {
    if !(mode_count >= 0.0) || !mode_count.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "mode count must be non-negative, got {mode_count}"
        )));
    }
    let root = 0.5 * ((1.0 + 8.0 * mode_count).sqrt() - 1.0);
    let n = root.round() as u32;
    if mode_count > 0.0 {
        Ok(n.max(1))
    } else {
        Ok(0)
    }
}

/// Full chain from fiber parameters and wavelength to the highest mode order.
pub fn mode_order_for_fiber(fiber: &FiberSpec, wavelength: f64) -> Result<u32> {
    let v = v_parameter(fiber, wavelength)?;
    let m = guided_mode_count(v, fiber.profile)?;
    highest_mode_order(m)
}

/// Expresses a delay in every supported unit for the given optics.
///
/// path = c * dt, mirror shift = path / 2, Rayleigh units = path / z_R.
pub fn convert_delay(delay: DelaySpec, optics: &OpticalConfig) -> DelayRecord {
    let z_r = optics.rayleigh_length();
    let path_meters = match delay.unit {
        DelayUnit::Seconds => SPEED_OF_LIGHT * delay.value,
        DelayUnit::PathMeters => delay.value,
        DelayUnit::RayleighUnits => delay.value * z_r,
        DelayUnit::MirrorShiftMeters => 2.0 * delay.value,
    };
    DelayRecord {
        seconds: path_meters / SPEED_OF_LIGHT,
        path_meters,
        rayleigh_units: path_meters / z_r,
        mirror_shift_meters: path_meters / 2.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn parabolic_fiber() -> FiberSpec {
        FiberSpec::new(0.2, 25e-6, IndexProfile::Parabolic).unwrap()
    }

    fn step_fiber() -> FiberSpec {
        FiberSpec::new(0.22, 52.5e-6, IndexProfile::StepIndex).unwrap()
    }

    #[test]
    fn v_parameter_reference_values() {
        let v = v_parameter(&parabolic_fiber(), 1550e-9).unwrap();
        assert!((v - 20.268).abs() < 1e-3, "V = {v}");

        // 1/lambda scaling: a one-meter wavelength drives V toward zero.
        let v_long = v_parameter(&parabolic_fiber(), 1.0).unwrap();
        assert_relative_eq!(v_long, 3.1416e-5, max_relative = 1e-4);

        let v_step = v_parameter(&step_fiber(), 850e-9).unwrap();
        assert!((v_step - 85.38).abs() < 1e-2, "V = {v_step}");
    }

    #[test]
    fn v_parameter_rejects_bad_input() {
        assert!(v_parameter(&parabolic_fiber(), 0.0).is_err());
        assert!(v_parameter(&parabolic_fiber(), -1.0).is_err());
        assert!(FiberSpec::new(0.0, 25e-6, IndexProfile::Parabolic).is_err());
        assert!(FiberSpec::new(1.2, 25e-6, IndexProfile::Parabolic).is_err());
        assert!(FiberSpec::new(0.2, 0.0, IndexProfile::Parabolic).is_err());
    }

    #[test]
    fn guided_mode_count_reference_values() {
        let m = guided_mode_count(20.268, IndexProfile::Parabolic).unwrap();
        assert!((m - 51.35).abs() < 1e-2, "M = {m}");
        assert_eq!(guided_mode_count(0.0, IndexProfile::Parabolic).unwrap(), 0.0);
        let m_step = guided_mode_count(85.38, IndexProfile::StepIndex).unwrap();
        assert!((m_step - 1822.4).abs() < 0.1, "M = {m_step}");
        assert!(guided_mode_count(-1.0, IndexProfile::Parabolic).is_err());
    }

    #[test]
    fn highest_mode_order_reference_values() {
        assert_eq!(highest_mode_order(51.35).unwrap(), 10);
        assert_eq!(highest_mode_order(1.0).unwrap(), 1);
        assert_eq!(highest_mode_order(1822.4).unwrap(), 60);
        assert_eq!(highest_mode_order(0.0).unwrap(), 0);
        // Tiny positive counts still include the fundamental mode.
        assert_eq!(highest_mode_order(0.05).unwrap(), 1);
        assert!(highest_mode_order(-0.5).is_err());
    }

    #[test]
    fn mode_order_round_trips_triangular_numbers() {
        for n in 1u32..=100 {
            let m = f64::from(n) * f64::from(n + 1) / 2.0;
            assert_eq!(highest_mode_order(m).unwrap(), n);
        }
    }

    #[test]
    fn mirror_step_matches_quarter_nanosecond() {
        let optics = OpticalConfig::new(1550e-9, 1.85e-3).unwrap();
        let record = convert_delay(DelaySpec::mirror_shift_meters(3.75e-2).unwrap(), &optics);
        // 7.5 cm of path at exact c: 0.2502 ns, within 0.5% of 0.25 ns.
        assert!((record.seconds - 0.25e-9).abs() / 0.25e-9 < 5e-3);
        assert_relative_eq!(record.seconds, 2.5017e-10, max_relative = 1e-4);
    }

    #[test]
    fn zero_delay_is_zero_everywhere() {
        let optics = OpticalConfig::new(1550e-9, 1.3e-3).unwrap();
        let record = convert_delay(DelaySpec::seconds(0.0).unwrap(), &optics);
        assert_eq!(record.seconds, 0.0);
        assert_eq!(record.path_meters, 0.0);
        assert_eq!(record.rayleigh_units, 0.0);
        assert_eq!(record.mirror_shift_meters, 0.0);
    }

    #[test]
    fn two_nanoseconds_in_rayleigh_units() {
        let optics = OpticalConfig::new(1550e-9, 1.85e-3).unwrap();
        let record = convert_delay(DelaySpec::seconds(2e-9).unwrap(), &optics);
        assert!((record.path_meters - 0.5996).abs() < 1e-4);
        assert!((record.rayleigh_units - 0.0865).abs() < 1e-4);
        assert_relative_eq!(optics.rayleigh_length(), 6.937, max_relative = 1e-3);
    }

    #[test]
    fn delay_spec_rejects_negative_values() {
        assert!(DelaySpec::seconds(-1e-9).is_err());
        assert!(DelaySpec::new(f64::NAN, DelayUnit::Seconds).is_err());
    }

    proptest! {
        // Converting any representation to any other and back reproduces the
        // input to relative 1e-12.
        #[test]
        fn delay_conversion_round_trips(
            value in 1e-12f64..1e3,
            unit_idx in 0usize..4,
            waist_mm in 0.5f64..5.0,
            wavelength_nm in 400.0f64..2000.0,
        ) {
            let units = [
                DelayUnit::Seconds,
                DelayUnit::PathMeters,
                DelayUnit::RayleighUnits,
                DelayUnit::MirrorShiftMeters,
            ];
            let optics = OpticalConfig::new(wavelength_nm * 1e-9, waist_mm * 1e-3).unwrap();
            let unit = units[unit_idx];
            let record = convert_delay(DelaySpec::new(value, unit).unwrap(), &optics);
            for (other, back_value) in [
                (DelayUnit::Seconds, record.seconds),
                (DelayUnit::PathMeters, record.path_meters),
                (DelayUnit::RayleighUnits, record.rayleigh_units),
                (DelayUnit::MirrorShiftMeters, record.mirror_shift_meters),
            ] {
                let back = convert_delay(DelaySpec::new(back_value, other).unwrap(), &optics);
                let round_tripped = match unit {
                    DelayUnit::Seconds => back.seconds,
                    DelayUnit::PathMeters => back.path_meters,
                    DelayUnit::RayleighUnits => back.rayleigh_units,
                    DelayUnit::MirrorShiftMeters => back.mirror_shift_meters,
                };
                prop_assert!((round_tripped - value).abs() <= 1e-12 * value.abs());
            }
        }

        // V is linear in NA and core radius, and scales as 1/lambda.
        #[test]
        fn v_parameter_scaling(
            na in 0.05f64..0.5,
            radius_um in 5.0f64..100.0,
            wavelength_nm in 400.0f64..2000.0,
            scale in 1.1f64..4.0,
        ) {
            let base = FiberSpec::new(na, radius_um * 1e-6, IndexProfile::Parabolic).unwrap();
            let lambda = wavelength_nm * 1e-9;
            let v0 = v_parameter(&base, lambda).unwrap();

            let scaled_na = FiberSpec::new((na * scale).min(0.999), radius_um * 1e-6, IndexProfile::Parabolic).unwrap();
            let expected = v0 / na * scaled_na.numerical_aperture;
            prop_assert!((v_parameter(&scaled_na, lambda).unwrap() - expected).abs() <= 1e-9 * expected);

            let scaled_radius = FiberSpec::new(na, radius_um * 1e-6 * scale, IndexProfile::Parabolic).unwrap();
            prop_assert!((v_parameter(&scaled_radius, lambda).unwrap() - v0 * scale).abs() <= 1e-9 * v0 * scale);

            let v_scaled_lambda = v_parameter(&base, lambda * scale).unwrap();
            prop_assert!((v_scaled_lambda * scale - v0).abs() <= 1e-9 * v0);
        }

        // A step-index fiber guides exactly twice the parabolic mode count.
        #[test]
        fn step_index_doubles_mode_count(v in 0.0f64..200.0) {
            let parabolic = guided_mode_count(v, IndexProfile::Parabolic).unwrap();
            let step = guided_mode_count(v, IndexProfile::StepIndex).unwrap();
            prop_assert_eq!(step, 2.0 * parabolic);
        }
    }
}
