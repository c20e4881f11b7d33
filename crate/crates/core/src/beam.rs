//! Gaussian beams described by the complex q-parameter.
//!
//! Convention: `q = z + j·z_R` with `Im(q) > 0` for a confined beam, so that
//! `Im(1/q) < 0` and the radius `sqrt(-λ / (π·Im(1/q)))` is real.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::math;
use crate::ray::RayMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamState {
    /// Complex beam parameter, meters.
    pub q: Complex64,
    /// Vacuum wavelength, meters.
    pub wavelength: f64,
    /// Axial position, meters.
    pub z: f64,
}

impl BeamState {
    pub fn new(q: Complex64, wavelength: f64, z: f64) -> Result<Self> {
        if !(wavelength > 0.0) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: "wavelength must be positive",
            });
        }
        Ok(BeamState { q, wavelength, z })
    }

    /// Beam at its waist with radius `w0`, located at `z`.
    pub fn from_waist(w0: f64, wavelength: f64, z: f64) -> Result<Self> {
        let z_r = rayleigh_range(w0, wavelength);
        BeamState::new(Complex64::new(0.0, z_r), wavelength, z)
    }

    /// TEM00 radius at this position.
    pub fn radius(&self) -> Result<f64> {
        fundamental_radius(self)
    }

    /// Wavefront radius of curvature, `1/Re(1/q)`; infinite at a waist.
    pub fn curvature_radius(&self) -> f64 {
        let inv = self.q.inv();
        if inv.re == 0.0 {
            f64::INFINITY
        } else {
            1.0 / inv.re
        }
    }

    pub fn is_confined(&self) -> bool {
        self.q.inv().im < 0.0
    }
}

/// Generalized stability parameters taken from a single-pass ABCD matrix:
/// `g1* = A`, `g2* = D`, `L* = B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityParams {
    pub g1: f64,
    pub g2: f64,
    pub length: f64,
}

impl StabilityParams {
    pub fn from_matrix(m: &RayMatrix) -> Self {
        StabilityParams {
            g1: m.a,
            g2: m.d,
            length: m.b,
        }
    }

    pub fn product(&self) -> f64 {
        self.g1 * self.g2
    }

    /// `0 < g1*g2* < 1`, plus the symmetric confocal point `g1* = g2* = 0`
    /// where the eigenmode is the finite limit `q0 = j|L*|`.
    pub fn is_stable(&self) -> bool {
        let p = self.product();
        (p > 0.0 && p < 1.0) || (self.g1 == 0.0 && self.g2 == 0.0)
    }

    fn g_ratio(&self) -> Result<f64> {
        if self.g1 == self.g2 {
            Ok(1.0)
        } else if self.g1 == 0.0 {
            Err(Error::Degenerate)
        } else {
            Ok(self.g2 / self.g1)
        }
    }
}

/// Resonator eigenmode at the first mirror (z = 0):
/// `q0 = j·|L*|·sqrt(g2* / (g1*·(1 - g1*·g2*)))`.
pub fn initial_q(params: &StabilityParams, wavelength: f64) -> Result<BeamState> {
    if !params.is_stable() {
        return Err(Error::Unstable {
            product: params.product(),
        });
    }
    if params.length == 0.0 {
        return Err(Error::InvalidParameter {
            name: "L*",
            reason: "single-pass B element must be non-zero",
        });
    }
    let ratio = params.g_ratio()?;
    let radicand = ratio / (1.0 - params.product());
    if !(radicand > 0.0) {
        return Err(Error::Unstable {
            product: params.product(),
        });
    }
    let z_r = params.length.abs() * math::sqrt(radicand);
    BeamState::new(Complex64::new(0.0, z_r), wavelength, 0.0)
}

/// Applies `q' = (a·q + b)/(c·q + d)` and advances `z` by `dz`.
pub fn propagate(state: &BeamState, m: &RayMatrix, dz: f64) -> Result<BeamState> {
    let den = state.q * m.c + m.d;
    if den.re == 0.0 && den.im == 0.0 {
        return Err(Error::BeamCollapse);
    }
    let q = (state.q * m.a + m.b) / den;
    Ok(BeamState {
        q,
        wavelength: state.wavelength,
        z: state.z + dz,
    })
}

/// Thin-lens transform `q / (1 - q/f)` at a fixed position.
pub fn through_lens(state: &BeamState, focal: f64) -> Result<BeamState> {
    let den = Complex64::new(1.0, 0.0) - state.q / focal;
    if den.re == 0.0 && den.im == 0.0 {
        return Err(Error::BeamCollapse);
    }
    Ok(BeamState {
        q: state.q / den,
        ..*state
    })
}

/// Free-space translation `q + dz`.
pub fn translate(state: &BeamState, dz: f64) -> BeamState {
    BeamState {
        q: state.q + dz,
        wavelength: state.wavelength,
        z: state.z + dz,
    }
}

/// TEM00 radius `w00 = sqrt(-λ / (π·Im(1/q)))`.
pub fn fundamental_radius(state: &BeamState) -> Result<f64> {
    let im = state.q.inv().im;
    if !(im < 0.0) {
        return Err(Error::InvalidBeam(im));
    }
    Ok(math::sqrt(-state.wavelength / (PI * im)))
}

/// `z_R = π·w0²/λ`.
pub fn rayleigh_range(w0: f64, wavelength: f64) -> f64 {
    PI * w0 * w0 / wavelength
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ray::{free_space, thin_lens};

    const LAMBDA: f64 = 1064e-9;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn waist_round_trip() {
        let w0 = 0.8e-3;
        let s = BeamState::from_waist(w0, LAMBDA, 0.0).unwrap();
        assert!(rel(fundamental_radius(&s).unwrap(), w0) < 1e-14);
        assert_eq!(s.curvature_radius(), f64::INFINITY);
    }

    #[test]
    fn radius_scales_with_root_wavelength() {
        let q = Complex64::new(0.2, 0.5);
        let a = fundamental_radius(&BeamState::new(q, LAMBDA, 0.0).unwrap()).unwrap();
        let b = fundamental_radius(&BeamState::new(q, 2.0 * LAMBDA, 0.0).unwrap()).unwrap();
        assert!(rel(b / a, core::f64::consts::SQRT_2) < 1e-14);
    }

    #[test]
    fn unconfined_beam_rejected() {
        let s = BeamState::new(Complex64::new(1.0, -0.1), LAMBDA, 0.0).unwrap();
        assert!(matches!(fundamental_radius(&s), Err(Error::InvalidBeam(_))));
        let flat = BeamState::new(Complex64::new(1.0, 0.0), LAMBDA, 0.0).unwrap();
        assert!(fundamental_radius(&flat).is_err());
    }

    #[test]
    fn identity_and_translation() {
        let s = BeamState::new(Complex64::new(0.1, 0.3), LAMBDA, 2.0).unwrap();
        assert_eq!(propagate(&s, &RayMatrix::IDENTITY, 0.0).unwrap(), s);
        let t = propagate(&s, &free_space(0.5).unwrap(), 0.5).unwrap();
        assert!((t.q - (s.q + 0.5)).norm_sqr() < 1e-30);
        assert_eq!(t.z, 2.5);
        assert_eq!(translate(&s, 0.5).q, s.q + 0.5);
    }

    #[test]
    fn lens_matches_matrix_form() {
        let s = BeamState::new(Complex64::new(0.1, 0.3), LAMBDA, 0.0).unwrap();
        let a = through_lens(&s, 0.03).unwrap();
        let b = propagate(&s, &thin_lens(0.03).unwrap(), 0.0).unwrap();
        assert!((a.q - b.q).norm_sqr() < 1e-30 * a.q.norm_sqr());
        // A thin lens changes only the curvature.
        assert!(rel(fundamental_radius(&a).unwrap(), fundamental_radius(&s).unwrap()) < 1e-12);
    }

    #[test]
    fn collapse_detected() {
        let s = BeamState::new(Complex64::new(1.0, 0.0), LAMBDA, 0.0).unwrap();
        let m = RayMatrix::new(1.0, 0.0, -1.0, 1.0);
        assert_eq!(propagate(&s, &m, 0.0), Err(Error::BeamCollapse));
    }

    #[test]
    fn initial_q_is_pure_imaginary() {
        let p = StabilityParams {
            g1: -5.0 / 6.0,
            g2: -5.0 / 6.0,
            length: -0.5,
        };
        let s = initial_q(&p, LAMBDA).unwrap();
        assert_eq!(s.q.re, 0.0);
        let expected = 0.5 * (1.0f64 / (1.0 - 25.0 / 36.0)).sqrt();
        assert!(rel(s.q.im, expected) < 1e-14);
        assert!(rel(s.q.im / 0.5, 1.809_068_067_466_585) < 1e-9);
    }

    #[test]
    fn initial_q_errors() {
        let unstable = StabilityParams { g1: 1.2, g2: 1.0, length: 1.0 };
        assert!(matches!(initial_q(&unstable, LAMBDA), Err(Error::Unstable { .. })));
        let negative = StabilityParams { g1: -0.5, g2: 0.5, length: 1.0 };
        assert!(initial_q(&negative, LAMBDA).is_err());
        let degenerate = StabilityParams { g1: 0.0, g2: 0.3, length: 1.0 };
        assert!(initial_q(&degenerate, LAMBDA).is_err());
        let confocal = StabilityParams { g1: 0.0, g2: 0.0, length: -0.7 };
        assert!(rel(initial_q(&confocal, LAMBDA).unwrap().q.im, 0.7) < 1e-15);
    }

    #[test]
    fn near_marginal_stability_diverges() {
        let p = StabilityParams { g1: 0.999_999_9, g2: 0.999_999_9, length: 1.0 };
        assert!(initial_q(&p, LAMBDA).unwrap().q.im > 1e3);
    }
}
