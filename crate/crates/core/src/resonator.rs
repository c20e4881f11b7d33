//! Spatially separated laser resonator (SSLR): two cat's-eye retroreflectors
//! facing each other across a free-space gap `d`.
//!
//! Unfolded layout along z, starting at mirror M1:
//!
//! ```text
//!  M1 --l-- L1 --f-- gain ... d ... --f-- L2 --l-- M2
//!  0        l        l+f               l+d+2f   2l+d+2f
//! ```

use alloc::vec::Vec;

use crate::beam::{self, BeamState, StabilityParams};
use crate::ray::{self, RayMatrix, RetroreflectorSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SslrGeometry {
    /// Lens focal length, m.
    pub f: f64,
    /// Lens-mirror interval, m.
    pub l: f64,
    /// Transmission distance between the retroreflectors, m.
    pub d: f64,
    /// Gain-medium aperture radius, m.
    pub a_g: f64,
    /// Lens aperture radius, m.
    pub a_lens: f64,
    /// Fundamental wavelength, m.
    pub wavelength: f64,
}

impl SslrGeometry {
    pub fn new(f: f64, l: f64, d: f64, a_g: f64, a_lens: f64, wavelength: f64) -> Result<Self> {
        let g = SslrGeometry {
            f,
            l,
            d,
            a_g,
            a_lens,
            wavelength,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        RetroreflectorSpec::new(self.f, self.l)?;
        if !(self.d >= 0.0) || !self.d.is_finite() {
            return Err(Error::InvalidGeometry("transmission distance must be non-negative"));
        }
        if !(self.a_g > 0.0) {
            return Err(Error::InvalidGeometry("gain aperture radius must be positive"));
        }
        if !(self.a_lens >= self.a_g) {
            return Err(Error::InvalidGeometry("lens aperture must be at least the gain aperture"));
        }
        if !(self.wavelength > 0.0) {
            return Err(Error::InvalidGeometry("wavelength must be positive"));
        }
        Ok(())
    }

    /// Same geometry at another transmission distance.
    pub fn with_distance(&self, d: f64) -> Result<Self> {
        let g = SslrGeometry { d, ..*self };
        g.validate()?;
        Ok(g)
    }

    pub fn retroreflector(&self) -> RetroreflectorSpec {
        // Validated on construction.
        RetroreflectorSpec::new(self.f, self.l).expect("validated geometry")
    }

    pub fn z_m1(&self) -> f64 {
        0.0
    }

    pub fn z_l1(&self) -> f64 {
        self.l
    }

    pub fn z_gain(&self) -> f64 {
        self.l + self.f
    }

    pub fn z_l2(&self) -> f64 {
        self.l + self.d + 2.0 * self.f
    }

    pub fn z_m2(&self) -> f64 {
        2.0 * self.l + self.d + 2.0 * self.f
    }

    /// Elements from M1 to M2 in traversal order.
    pub fn single_pass_elements(&self) -> [RayMatrix; 7] {
        let lens = RayMatrix::new(1.0, 0.0, -1.0 / self.f, 1.0);
        let interval = RayMatrix::new(1.0, self.l, 0.0, 1.0);
        let gap = RayMatrix::new(1.0, 2.0 * self.f + self.d, 0.0, 1.0);
        [
            ray::flat_mirror(),
            interval,
            lens,
            gap,
            lens,
            interval,
            ray::flat_mirror(),
        ]
    }
}

/// Closed-form single-pass ABCD entries and the stability parameters taken
/// from them.
pub fn single_pass_abcd(g: &SslrGeometry) -> (StabilityParams, RayMatrix) {
    let (f, l, d) = (g.f, g.l, g.d);
    let a = -1.0 - d / f + d * l / (f * f);
    let b = 2.0 * f - 2.0 * l + d - 2.0 * d * l / f + d * l * l / (f * f);
    let c = d / (f * f);
    let m = RayMatrix::new(a, b, c, a);
    (StabilityParams::from_matrix(&m), m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub stable: bool,
    pub params: StabilityParams,
    /// `g1*·g2*`.
    pub product: f64,
    /// Equivalent focal length of each retroreflector; `None` when `l = f`.
    pub f_rr: Option<f64>,
    /// Upper bound `4·f_RR` on the transmission distance.
    pub d_bound: Option<f64>,
}

pub fn is_stable(g: &SslrGeometry) -> StabilityReport {
    let (params, _) = single_pass_abcd(g);
    let f_rr = ray::equivalent_focal_length(&g.retroreflector()).ok();
    StabilityReport {
        stable: params.is_stable(),
        params,
        product: params.product(),
        f_rr,
        d_bound: f_rr.map(|x| 4.0 * x),
    }
}

/// Piecewise q(z) of the resonator eigenmode, from M1 to M2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QProfile {
    geometry: SslrGeometry,
    /// At M1.
    q0: BeamState,
    /// Just past L1.
    after_l1: BeamState,
    /// Just past L2.
    after_l2: BeamState,
}

pub fn q_profile(g: &SslrGeometry) -> Result<QProfile> {
    let (params, _) = single_pass_abcd(g);
    let q0 = beam::initial_q(&params, g.wavelength)?;
    let at_l1 = beam::translate(&q0, g.l);
    let after_l1 = beam::through_lens(&at_l1, g.f)?;
    let at_l2 = beam::translate(&after_l1, g.d + 2.0 * g.f);
    let after_l2 = beam::through_lens(&at_l2, g.f)?;
    Ok(QProfile {
        geometry: *g,
        q0,
        after_l1,
        after_l2,
    })
}

impl QProfile {
    pub fn geometry(&self) -> &SslrGeometry {
        &self.geometry
    }

    pub fn initial(&self) -> BeamState {
        self.q0
    }

    /// q at `z`. Exactly at a lens the incoming (left-side) value is used.
    pub fn at(&self, z: f64) -> Result<BeamState> {
        let g = &self.geometry;
        if !(z >= 0.0 && z <= g.z_m2()) {
            return Err(Error::OutOfRange(z));
        }
        let state = if z <= g.z_l1() {
            beam::translate(&self.q0, z)
        } else if z <= g.z_l2() {
            beam::translate(&self.after_l1, z - g.z_l1())
        } else {
            beam::translate(&self.after_l2, z - g.z_l2())
        };
        // Pin z to the requested coordinate rather than accumulating it.
        Ok(BeamState { z, ..state })
    }

    /// q just after the lens at `z_l1` or `z_l2`.
    pub fn after_lens(&self, second: bool) -> BeamState {
        if second {
            self.after_l2
        } else {
            self.after_l1
        }
    }

    pub fn fundamental_radius_at(&self, z: f64) -> Result<f64> {
        beam::fundamental_radius(&self.at(z)?)
    }

    /// Beam propagation factor `a_g / w00(l + f)`.
    pub fn beam_factor(&self) -> Result<f64> {
        Ok(self.geometry.a_g / self.fundamental_radius_at(self.geometry.z_gain())?)
    }

    /// Multimode radius `w(z) = (a_g / w00(l+f))·w00(z)`.
    pub fn multimode_radius_at(&self, z: f64) -> Result<f64> {
        Ok(self.beam_factor()? * self.fundamental_radius_at(z)?)
    }

    /// Uniform samples with `per_segment` points in each of the three
    /// segments. The first segment includes z = 0; every segment includes
    /// its right end.
    pub fn sample(&self, per_segment: usize) -> Result<Vec<ProfilePoint>> {
        let g = &self.geometry;
        let n = per_segment.max(2);
        let factor = self.beam_factor()?;
        let mut out = Vec::with_capacity(3 * n);
        let bounds = [(0.0, g.z_l1()), (g.z_l1(), g.z_l2()), (g.z_l2(), g.z_m2())];
        for (seg, &(start, stop)) in bounds.iter().enumerate() {
            let span = stop - start;
            for i in 0..n {
                let z = if seg == 0 {
                    start + span * i as f64 / (n - 1) as f64
                } else {
                    start + span * (i + 1) as f64 / n as f64
                };
                let z = z.min(g.z_m2());
                let state = self.at(z)?;
                let w00 = beam::fundamental_radius(&state)?;
                out.push(ProfilePoint {
                    z,
                    w: factor * w00,
                    w00,
                    curvature: state.curvature_radius(),
                });
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub z: f64,
    /// Multimode radius, m.
    pub w: f64,
    /// TEM00 radius, m.
    pub w00: f64,
    /// Wavefront radius of curvature; infinite at a waist.
    pub curvature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationRadii {
    pub w_m1: f64,
    pub w_l1: f64,
    pub w_gain: f64,
    pub w_l2: f64,
    pub w_m2: f64,
}

/// Multimode and TEM00 radii at the five named stations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeStations {
    pub multimode: StationRadii,
    pub fundamental: StationRadii,
    pub beam_factor: f64,
}

pub fn multimode_radius_profile(g: &SslrGeometry) -> Result<(QProfile, ModeStations)> {
    let profile = q_profile(g)?;
    let w00 = |z: f64| profile.fundamental_radius_at(z);
    let fundamental = StationRadii {
        w_m1: w00(g.z_m1())?,
        w_l1: w00(g.z_l1())?,
        w_gain: w00(g.z_gain())?,
        w_l2: w00(g.z_l2())?,
        w_m2: w00(g.z_m2())?,
    };
    let k = g.a_g / fundamental.w_gain;
    let multimode = StationRadii {
        w_m1: k * fundamental.w_m1,
        w_l1: k * fundamental.w_l1,
        // Anchor: the multimode beam fills the gain aperture.
        w_gain: g.a_g,
        w_l2: k * fundamental.w_l2,
        w_m2: k * fundamental.w_m2,
    };
    Ok((
        profile,
        ModeStations {
            multimode,
            fundamental,
            beam_factor: k,
        },
    ))
}

/// Multimode radius inside the SHG crystal, taken equal to the radius at M1.
pub fn radius_at_shg(g: &SslrGeometry) -> Result<f64> {
    Ok(multimode_radius_profile(g)?.1.multimode.w_m1)
}
