//! Second-harmonic conversion inside the transmitter retroreflector.
//!
//! Undepleted-pump, plane-wave approximation with the phase mismatch
//! neglected. Converted power is not removed from the fundamental.

use core::f64::consts::PI;

use crate::beam::rayleigh_range;
use crate::constants::PhysicalConstants;
use crate::power::positive;
use crate::Result;

/// Default upper bound on `η_SHG` for the small-signal regime.
pub const SMALL_SIGNAL_BOUND: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShgCrystalSpec {
    /// Effective nonlinear coefficient, m/V.
    pub d_eff: f64,
    /// Refractive index.
    pub n0: f64,
    /// Crystal thickness, m.
    pub l_s: f64,
}

impl ShgCrystalSpec {
    pub fn validate(&self) -> Result<()> {
        positive("d_eff", self.d_eff)?;
        positive("n0", self.n0)?;
        positive("l_s", self.l_s)
    }

    /// `8π²·d_eff²·l_s² / (ε0·c·λ²·n0³)`, in m²/W.
    pub fn material_coefficient(&self, wavelength: f64, k: &PhysicalConstants) -> f64 {
        8.0 * PI * PI * self.d_eff * self.d_eff * self.l_s * self.l_s
            / (k.epsilon_0 * k.c * wavelength * wavelength * self.n0 * self.n0 * self.n0)
    }
}

/// `η = coefficient · 2·P_ν / (π·w0²)`; the intensity counts both
/// counter-propagating passes.
pub fn shg_efficiency(
    p_nu: f64,
    w0: f64,
    crystal: &ShgCrystalSpec,
    wavelength: f64,
    k: &PhysicalConstants,
) -> f64 {
    crystal.material_coefficient(wavelength, k) * 2.0 * p_nu / (PI * w0 * w0)
}

/// `P_2ν = 2·η·P_ν`: the fundamental crosses the crystal twice per round trip.
pub fn doubled_power(p_nu: f64, eta: f64) -> f64 {
    2.0 * eta * p_nu
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub rayleigh_range: f64,
    /// `l_s >= z_R`: the plane-wave approximation breaks down.
    pub thick_crystal: bool,
    /// `η` above the small-signal bound.
    pub large_signal: bool,
}

impl ValidityReport {
    pub fn ok(&self) -> bool {
        !self.thick_crystal && !self.large_signal
    }
}

/// Advisory checks on the SHG approximations. `w00` is the TEM00 radius at
/// the crystal.
pub fn validity_check(w00: f64, l_s: f64, wavelength: f64, eta: f64, bound: f64) -> ValidityReport {
    let z_r = rayleigh_range(w00, wavelength);
    ValidityReport {
        rayleigh_range: z_r,
        thick_crystal: l_s >= z_r,
        large_signal: eta > bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::CODATA;

    const CRYSTAL: ShgCrystalSpec = ShgCrystalSpec {
        d_eff: 4.7e-12,
        n0: 2.23,
        l_s: 0.2e-3,
    };

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn material_coefficient_value() {
        let c = CRYSTAL.material_coefficient(1064e-9, &CODATA);
        assert!(rel(c, 2.093_525_049_565_746e-15) < 1e-9, "{c}");
    }

    #[test]
    fn efficiency_scalings() {
        assert_eq!(shg_efficiency(0.0, 1e-4, &CRYSTAL, 1064e-9, &CODATA), 0.0);
        let a = shg_efficiency(10.0, 1e-4, &CRYSTAL, 1064e-9, &CODATA);
        let b = shg_efficiency(10.0, 0.5e-4, &CRYSTAL, 1064e-9, &CODATA);
        assert!(rel(b, 4.0 * a) < 1e-14);
    }

    #[test]
    fn doubled_power_is_quadratic() {
        assert_eq!(doubled_power(5.0, 0.0), 0.0);
        let p = |x: f64| doubled_power(x, shg_efficiency(x, 2e-5, &CRYSTAL, 1064e-9, &CODATA));
        assert!(rel(p(20.0), 4.0 * p(10.0)) < 1e-14);
    }

    #[test]
    fn validity_rules() {
        let r = validity_check(0.5e-3, 0.2e-3, 1064e-9, 1e-4, SMALL_SIGNAL_BOUND);
        assert!(rel(r.rayleigh_range, 0.738_156_168_606_624_3) < 1e-12);
        assert!(r.ok());
        let z_r = rayleigh_range(0.5e-3, 1064e-9);
        assert!(validity_check(0.5e-3, z_r, 1064e-9, 0.0, SMALL_SIGNAL_BOUND).thick_crystal);
        let big = validity_check(0.5e-3, 0.2e-3, 1064e-9, 0.5, SMALL_SIGNAL_BOUND);
        assert!(big.large_signal && !big.thick_crystal);
    }
}
