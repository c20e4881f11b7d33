//! End-to-end evaluation of one (pump power, distance) operating point.

use crate::beam;
use crate::channel::{self, DetectorChainSpec};
use crate::constants::{PhysicalConstants, CODATA};
use crate::power::{positive, DiffractionLoss, GainMediumSpec, LossBudget, Rigrod};
use crate::resonator::{self, SslrGeometry};
use crate::shg::{self, ShgCrystalSpec};
use crate::{Error, Result};

/// Which beam radius at M1 sets the fundamental intensity in the SHG crystal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShgRadius {
    #[default]
    Multimode,
    Fundamental,
}

/// Every parameter of the link except the swept pump power and distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig {
    /// Retroreflector lens focal length, m.
    pub f: f64,
    /// Lens-mirror interval, m.
    pub l: f64,
    /// Lens aperture radius, m.
    pub a_lens: f64,
    /// Fundamental wavelength, m.
    pub wavelength: f64,
    pub gain: GainMediumSpec,
    pub losses: LossBudget,
    pub crystal: ShgCrystalSpec,
    pub chain: DetectorChainSpec,
    pub shg_radius: ShgRadius,
    pub small_signal_bound: f64,
    pub constants: PhysicalConstants,
}

impl LinkConfig {
    /// Geometry at transmission distance `d`.
    pub fn geometry(&self, d: f64) -> Result<SslrGeometry> {
        SslrGeometry::new(self.f, self.l, d, self.gain.a_g, self.a_lens, self.wavelength)
    }

    /// Checks every precondition that does not depend on `d`.
    pub fn validate(&self) -> Result<()> {
        self.geometry(0.0)?;
        self.gain.validate()?;
        self.losses.validate()?;
        self.crystal.validate()?;
        self.chain.validate()?;
        positive("small_signal_bound", self.small_signal_bound)
    }
}

impl Default for LinkConfig {
    /// Nd:YVO4 at 1064 nm, surface losses of 0.5 % per surface.
    fn default() -> Self {
        LinkConfig {
            f: 0.03,
            l: 0.03015,
            a_lens: 3e-3,
            wavelength: 1064e-9,
            gain: GainMediumSpec {
                sigma_s: 15.6e-23,
                tau_f: 100e-6,
                l_g: 1e-3,
                a_g: 3e-3,
                eta_c: 0.439,
            },
            losses: LossBudget {
                gamma_rr1: 0.956,
                gamma_rr2: 0.975,
                gamma_g: 0.985,
                alpha_air: 1e-4,
                diffraction: Default::default(),
            },
            crystal: ShgCrystalSpec {
                d_eff: 4.7e-12,
                n0: 2.23,
                l_s: 0.2e-3,
            },
            chain: DetectorChainSpec {
                gamma_dev: 0.96,
                gamma_det: 0.99,
                gamma_g_eom: 0.975,
                responsivity: 0.6,
                i_bk: 5100e-6,
                bandwidth: 800e6,
                temperature: 298.0,
                r_load: 10e3,
                modulation_index: 1.0,
            },
            shg_radius: ShgRadius::Multimode,
            small_signal_bound: shg::SMALL_SIGNAL_BOUND,
            constants: CODATA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Warnings {
    /// SHG efficiency above the small-signal bound.
    pub large_signal: bool,
    /// Crystal not thinner than the Rayleigh length.
    pub thick_crystal: bool,
}

impl Warnings {
    pub fn any(&self) -> bool {
        self.large_signal || self.thick_crystal
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSolution {
    pub p_in: f64,
    pub d: f64,
    /// Intra-cavity fundamental power, W.
    pub p_nu: f64,
    pub eta_shg: f64,
    /// Frequency-doubled power, W.
    pub p_2nu: f64,
    /// Received optical power, W.
    pub p_r: f64,
    pub snr: f64,
    /// bit/s/Hz.
    pub spectral_efficiency: f64,
    /// Lasing threshold, W.
    pub threshold: f64,
    pub gamma_diff: f64,
    /// Radius used for the SHG intensity, m.
    pub w_shg: f64,
    /// TEM00 radius at M1, m.
    pub w00_shg: f64,
    pub warnings: Warnings,
}

/// Solves the link with the diffraction model configured in `config`.
pub fn solve_link(p_in: f64, d: f64, config: &LinkConfig) -> Result<LinkSolution> {
    solve_link_with(p_in, d, config, &config.losses.diffraction)
}

/// Solves the link with a caller-supplied diffraction model.
///
/// Unstable geometries return [`Error::Unstable`]; callers that tabulate
/// results should record that outcome rather than zeros.
pub fn solve_link_with(
    p_in: f64,
    d: f64,
    config: &LinkConfig,
    diffraction: &dyn DiffractionLoss,
) -> Result<LinkSolution> {
    if !(p_in >= 0.0) || !p_in.is_finite() {
        return Err(Error::InvalidParameter {
            name: "P_in",
            reason: "pump power must be finite and non-negative",
        });
    }
    let k = &config.constants;
    let geometry = config.geometry(d)?;
    let report = resonator::is_stable(&geometry);
    if !report.stable {
        return Err(Error::Unstable {
            product: report.product,
        });
    }
    let (_, stations) = resonator::multimode_radius_profile(&geometry)?;

    let refl = config.losses.reflectivities_with(&geometry, diffraction)?;
    let rigrod = Rigrod::new(&config.gain, &refl, config.wavelength, k)?;
    let p_nu = rigrod.power(p_in);

    let w00_shg = stations.fundamental.w_m1;
    let w_shg = match config.shg_radius {
        ShgRadius::Multimode => stations.multimode.w_m1,
        ShgRadius::Fundamental => w00_shg,
    };
    let eta = shg::shg_efficiency(p_nu, w_shg, &config.crystal, config.wavelength, k);
    let p_2nu = shg::doubled_power(p_nu, eta);
    let validity = shg::validity_check(
        w00_shg,
        config.crystal.l_s,
        config.wavelength,
        eta,
        config.small_signal_bound,
    );

    let p_r = channel::received_power(p_2nu, &config.chain, config.losses.alpha_air, d);
    let snr = channel::snr(p_r, &config.chain, k);

    Ok(LinkSolution {
        p_in,
        d,
        p_nu,
        eta_shg: eta,
        p_2nu,
        p_r,
        snr,
        spectral_efficiency: channel::spectral_efficiency(p_r, &config.chain, k),
        threshold: rigrod.threshold(),
        gamma_diff: refl.gamma_diff,
        w_shg,
        w00_shg,
        warnings: Warnings {
            large_signal: validity.large_signal,
            thick_crystal: validity.thick_crystal,
        },
    })
}

/// Rayleigh length of the TEM00 mode at the SHG crystal.
pub fn crystal_rayleigh_range(d: f64, config: &LinkConfig) -> Result<f64> {
    let g = config.geometry(d)?;
    let (_, st) = resonator::multimode_radius_profile(&g)?;
    Ok(beam::rayleigh_range(st.fundamental.w_m1, config.wavelength))
}
