//! Steady-state intra-cavity fundamental power from pump power (Rigrod analysis).
//!
//! The resonator is reduced to a two-mirror laser with the gain medium next to
//! mirror 1. `R1` carries the loss of the transmitter retroreflector; every
//! other loss is folded into `R2 = Γ_g²·Γ_air²·Γ_RR2·Γ_diff`.

use core::f64::consts::PI;

use crate::constants::PhysicalConstants;
use crate::math;
use crate::resonator::{multimode_radius_profile, SslrGeometry};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainMediumSpec {
    /// Stimulated-emission cross section, m².
    pub sigma_s: f64,
    /// Fluorescence lifetime, s.
    pub tau_f: f64,
    /// Thickness, m.
    pub l_g: f64,
    /// Aperture radius, m.
    pub a_g: f64,
    /// Combined pumping efficiency.
    pub eta_c: f64,
}

impl GainMediumSpec {
    pub fn validate(&self) -> Result<()> {
        positive("sigma_s", self.sigma_s)?;
        positive("tau_f", self.tau_f)?;
        positive("l_g", self.l_g)?;
        positive("a_g", self.a_g)?;
        unit_fraction("eta_c", self.eta_c)
    }

    /// `V = π·a_g²·l_g`.
    pub fn volume(&self) -> f64 {
        PI * self.a_g * self.a_g * self.l_g
    }
}

/// `I_s = h·ν / (σ_s·τ_f)` with `ν = c/λ`.
pub fn saturation_intensity(gain: &GainMediumSpec, wavelength: f64, k: &PhysicalConstants) -> f64 {
    let nu = k.c / wavelength;
    k.h * nu / (gain.sigma_s * gain.tau_f)
}

/// One-way air transmission `exp(-α·d)`.
pub fn air_loss(alpha_air: f64, d: f64) -> f64 {
    math::exp(-alpha_air * d)
}

/// A per-round-trip diffraction loss factor for a given geometry.
///
/// Implement this to substitute a different closed form.
pub trait DiffractionLoss {
    fn factor(&self, geometry: &SslrGeometry) -> Result<f64>;
}

impl<T: DiffractionLoss + ?Sized> DiffractionLoss for &T {
    fn factor(&self, geometry: &SslrGeometry) -> Result<f64> {
        (**self).factor(geometry)
    }
}

/// Built-in aperture-clipping models.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DiffractionModel {
    /// Gaussian power fraction of the TEM00 mode passing the receiving lens
    /// aperture: `1 - exp(-2·a_lens²/w00_L2²)`.
    #[default]
    ClipFundamental,
    /// Same form with the multimode radius at the receiving lens.
    ClipMultimode,
    /// Fixed factor, independent of geometry.
    Constant(f64),
}

impl DiffractionLoss for DiffractionModel {
    fn factor(&self, geometry: &SslrGeometry) -> Result<f64> {
        let radius = match *self {
            DiffractionModel::Constant(x) => {
                unit_fraction("gamma_diff", x)?;
                return Ok(x);
            }
            DiffractionModel::ClipFundamental => multimode_radius_profile(geometry)?.1.fundamental.w_l2,
            DiffractionModel::ClipMultimode => multimode_radius_profile(geometry)?.1.multimode.w_l2,
        };
        Ok(gaussian_clip(geometry.a_lens, radius))
    }
}

/// Power fraction of a Gaussian of radius `w` inside a circular aperture of radius `a`.
pub fn gaussian_clip(a: f64, w: f64) -> f64 {
    1.0 - math::exp(-2.0 * a * a / (w * w))
}

/// Diffraction factor of `geometry` under the default model.
pub fn diffraction_loss(geometry: &SslrGeometry) -> Result<f64> {
    DiffractionModel::default().factor(geometry)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossBudget {
    pub gamma_rr1: f64,
    pub gamma_rr2: f64,
    /// Single-pass transmission of the gain medium.
    pub gamma_g: f64,
    /// Air attenuation coefficient, 1/m.
    pub alpha_air: f64,
    pub diffraction: DiffractionModel,
}

impl LossBudget {
    pub fn validate(&self) -> Result<()> {
        unit_fraction("gamma_rr1", self.gamma_rr1)?;
        unit_fraction("gamma_rr2", self.gamma_rr2)?;
        unit_fraction("gamma_g", self.gamma_g)?;
        if !(self.alpha_air >= 0.0) || !self.alpha_air.is_finite() {
            return Err(Error::InvalidParameter {
                name: "alpha_air",
                reason: "must be finite and non-negative",
            });
        }
        if let DiffractionModel::Constant(x) = self.diffraction {
            unit_fraction("gamma_diff", x)?;
        }
        Ok(())
    }

    pub fn reflectivities(&self, geometry: &SslrGeometry) -> Result<Reflectivities> {
        self.reflectivities_with(geometry, &self.diffraction)
    }

    pub fn reflectivities_with(
        &self,
        geometry: &SslrGeometry,
        model: &dyn DiffractionLoss,
    ) -> Result<Reflectivities> {
        let gamma_diff = model.factor(geometry)?;
        Ok(self.fold(geometry.d, gamma_diff))
    }

    /// Folds the budget into the two equivalent mirror reflectivities.
    pub fn fold(&self, d: f64, gamma_diff: f64) -> Reflectivities {
        let gamma_air = air_loss(self.alpha_air, d);
        Reflectivities {
            r1_sq: self.gamma_rr1,
            r2_sq: self.gamma_g * self.gamma_g * gamma_air * gamma_air * self.gamma_rr2 * gamma_diff,
            gamma_air,
            gamma_diff,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflectivities {
    /// `R1`.
    pub r1_sq: f64,
    /// `R2`.
    pub r2_sq: f64,
    pub gamma_air: f64,
    pub gamma_diff: f64,
}

impl Reflectivities {
    pub fn r1(&self) -> f64 {
        math::sqrt(self.r1_sq)
    }

    pub fn r2(&self) -> f64 {
        math::sqrt(self.r2_sq)
    }

    pub fn product(&self) -> f64 {
        self.r1() * self.r2()
    }
}

/// Rigrod steady state for one gain medium and mirror pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rigrod {
    pub saturation_intensity: f64,
    pub volume: f64,
    pub l_g: f64,
    pub eta_c: f64,
    pub a_g: f64,
    pub r1: f64,
    pub r2: f64,
}

impl Rigrod {
    pub fn new(
        gain: &GainMediumSpec,
        refl: &Reflectivities,
        wavelength: f64,
        k: &PhysicalConstants,
    ) -> Result<Self> {
        gain.validate()?;
        let (r1, r2) = (refl.r1(), refl.r2());
        let rr = r1 * r2;
        if !(rr > 0.0 && rr < 1.0) {
            return Err(Error::NonphysicalLoss(rr));
        }
        Ok(Rigrod {
            saturation_intensity: saturation_intensity(gain, wavelength, k),
            volume: gain.volume(),
            l_g: gain.l_g,
            eta_c: gain.eta_c,
            a_g: gain.a_g,
            r1,
            r2,
        })
    }

    fn round_trip_log_loss(&self) -> f64 {
        math::ln(1.0 / (self.r1 * self.r2))
    }

    /// `l_g·η_c·P_in / (I_s·V)`, dimensionless.
    pub fn pump_term(&self, p_in: f64) -> f64 {
        self.l_g * self.eta_c * p_in / (self.saturation_intensity * self.volume)
    }

    /// Pump power at which the bracket vanishes.
    pub fn threshold(&self) -> f64 {
        self.saturation_intensity * self.volume * self.round_trip_log_loss() / (self.l_g * self.eta_c)
    }

    /// Intensity incident on mirror 1; zero at or below threshold.
    pub fn intensity(&self, p_in: f64) -> f64 {
        let bracket = self.pump_term(p_in) - self.round_trip_log_loss();
        if !(bracket > 0.0) {
            return 0.0;
        }
        let rr = self.r1 * self.r2;
        self.saturation_intensity / ((1.0 + self.r1 / self.r2) * (1.0 - rr)) * bracket
    }

    /// `P_ν = I4·π·a_g²` (flat-top multimode profile).
    pub fn power(&self, p_in: f64) -> f64 {
        self.intensity(p_in) * PI * self.a_g * self.a_g
    }

    /// `dP_ν/dP_in` above threshold.
    pub fn slope(&self) -> f64 {
        let rr = self.r1 * self.r2;
        PI * self.a_g * self.a_g * self.l_g * self.eta_c
            / ((1.0 + self.r1 / self.r2) * (1.0 - rr) * self.volume)
    }
}

/// Pump threshold for the given geometry and loss budget.
pub fn lasing_threshold(
    gain: &GainMediumSpec,
    losses: &LossBudget,
    geometry: &SslrGeometry,
    k: &PhysicalConstants,
) -> Result<f64> {
    let refl = losses.reflectivities(geometry)?;
    Ok(Rigrod::new(gain, &refl, geometry.wavelength, k)?.threshold())
}

/// Intra-cavity fundamental power for pump power `p_in`.
pub fn fundamental_power(
    p_in: f64,
    gain: &GainMediumSpec,
    losses: &LossBudget,
    geometry: &SslrGeometry,
    k: &PhysicalConstants,
) -> Result<f64> {
    if !(p_in >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "P_in",
            reason: "pump power must be non-negative",
        });
    }
    let refl = losses.reflectivities(geometry)?;
    Ok(Rigrod::new(gain, &refl, geometry.wavelength, k)?.power(p_in))
}

pub(crate) fn positive(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: "must be positive and finite",
        })
    }
}

pub(crate) fn unit_fraction(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: "must lie in (0, 1]",
        })
    }
}
