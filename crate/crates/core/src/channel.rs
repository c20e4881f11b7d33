//! Direct-detection channel: DC gain from the SHG crystal to the photodiode
//! and Shannon spectral efficiency under shot, background and thermal noise.

use crate::constants::PhysicalConstants;
use crate::math;
use crate::power::{air_loss, positive, unit_fraction};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorChainSpec {
    /// Mirrors and lenses on the second-harmonic path.
    pub gamma_dev: f64,
    pub gamma_det: f64,
    /// Gain medium plus modulator.
    pub gamma_g_eom: f64,
    /// Photodiode responsivity, A/W.
    pub responsivity: f64,
    /// Background photocurrent, A.
    pub i_bk: f64,
    /// Bandwidth, Hz.
    pub bandwidth: f64,
    /// Temperature, K.
    pub temperature: f64,
    /// Load resistance, Ω.
    pub r_load: f64,
    /// Intensity-modulation depth applied to the signal current.
    pub modulation_index: f64,
}

impl DetectorChainSpec {
    pub fn validate(&self) -> Result<()> {
        unit_fraction("gamma_dev", self.gamma_dev)?;
        unit_fraction("gamma_det", self.gamma_det)?;
        unit_fraction("gamma_g_eom", self.gamma_g_eom)?;
        unit_fraction("modulation_index", self.modulation_index)?;
        positive("responsivity", self.responsivity)?;
        positive("bandwidth", self.bandwidth)?;
        positive("temperature", self.temperature)?;
        // R_L = ∞ is the thermal-noise-free limit.
        if !(self.r_load > 0.0) {
            return Err(Error::InvalidParameter {
                name: "r_load",
                reason: "must be positive",
            });
        }
        if !(self.i_bk >= 0.0) || !self.i_bk.is_finite() {
            return Err(Error::InvalidParameter {
                name: "i_bk",
                reason: "must be finite and non-negative",
            });
        }
        Ok(())
    }

    /// Product of the forward loss factors excluding air.
    pub fn device_gain(&self) -> f64 {
        self.gamma_dev * self.gamma_det * self.gamma_g_eom
    }
}

/// `P_r = Γ_dev·Γ_det·Γ_air(d)·Γ_g,EOM·P_2ν`.
pub fn received_power(p_2nu: f64, chain: &DetectorChainSpec, alpha_air: f64, d: f64) -> f64 {
    chain.gamma_dev * chain.gamma_det * air_loss(alpha_air, d) * chain.gamma_g_eom * p_2nu
}

/// Electrical SNR `(γ·P_r)² / (2e(γ·P_r + I_bk)·B + 4kTB/R_L)`.
pub fn snr(p_r: f64, chain: &DetectorChainSpec, k: &PhysicalConstants) -> f64 {
    let current = chain.responsivity * p_r;
    let signal = chain.modulation_index * current;
    let shot = 2.0 * k.e * (current + chain.i_bk) * chain.bandwidth;
    let thermal = 4.0 * k.k * chain.temperature * chain.bandwidth / chain.r_load;
    let noise = shot + thermal;
    if noise == 0.0 {
        return if signal == 0.0 { 0.0 } else { f64::INFINITY };
    }
    signal * signal / noise
}

/// `log2(1 + SNR)` in bit/s/Hz.
pub fn spectral_efficiency(p_r: f64, chain: &DetectorChainSpec, k: &PhysicalConstants) -> f64 {
    math::log2(1.0 + snr(p_r, chain, k))
}
