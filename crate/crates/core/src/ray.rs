//! Paraxial ray-transfer (ABCD) matrices.
//!
//! A ray is a (height, angle) pair; an element maps it through a 2×2 matrix.
//! A cascade of elements is the product of their matrices with the
//! first-traversed element on the right.

use core::ops::Mul;

use crate::{Error, Result};

/// A 2×2 ray-transfer matrix `[[a, b], [c, d]]`.
///
/// `b` is in meters and `c` in 1/m; `a` and `d` are dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RayMatrix {
    pub const IDENTITY: RayMatrix = RayMatrix::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        RayMatrix { a, b, c, d }
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Applies the matrix to a ray `(height, angle)`.
    pub fn apply(&self, height: f64, angle: f64) -> (f64, f64) {
        (
            self.a * height + self.b * angle,
            self.c * height + self.d * angle,
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        RayMatrix::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }
}

impl Default for RayMatrix {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Mul for RayMatrix {
    type Output = RayMatrix;

    fn mul(self, rhs: RayMatrix) -> RayMatrix {
        RayMatrix {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }
}

/// Propagation through `distance` meters of free space.
pub fn free_space(distance: f64) -> Result<RayMatrix> {
    if !(distance >= 0.0) || !distance.is_finite() {
        return Err(Error::InvalidGeometry("free-space distance must be finite and non-negative"));
    }
    Ok(RayMatrix::new(1.0, distance, 0.0, 1.0))
}

/// Thin lens of focal length `focal` (negative for a diverging lens).
///
/// An infinite focal length yields the identity.
pub fn thin_lens(focal: f64) -> Result<RayMatrix> {
    if focal == 0.0 || focal.is_nan() {
        return Err(Error::InvalidGeometry("lens focal length must be non-zero"));
    }
    Ok(RayMatrix::new(1.0, 0.0, -1.0 / focal, 1.0))
}

/// Flat mirror at normal incidence (unfolded cavity convention).
pub fn flat_mirror() -> RayMatrix {
    RayMatrix::IDENTITY
}

/// Composes elements listed in the order the ray meets them.
///
/// The first element ends up rightmost in the product.
pub fn compose<I>(traversal: I) -> Result<RayMatrix>
where
    I: IntoIterator<Item = RayMatrix>,
{
    let mut iter = traversal.into_iter();
    let first = iter.next().ok_or(Error::EmptySequence)?;
    Ok(iter.fold(first, |acc, m| m * acc))
}

/// Telecentric cat's-eye retroreflector: an internal lens of focal length `f`
/// with a flat mirror `l` behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetroreflectorSpec {
    f: f64,
    l: f64,
}

impl RetroreflectorSpec {
    /// Requires `f > 0` and `l >= f`. `l == f` is the ideal (non-focusing) retroreflector.
    pub fn new(f: f64, l: f64) -> Result<Self> {
        if !(f > 0.0) || !f.is_finite() {
            return Err(Error::InvalidGeometry("retroreflector focal length must be positive"));
        }
        if !(l >= f) || !l.is_finite() {
            return Err(Error::InvalidGeometry(
                "retroreflector lens-mirror interval must satisfy l >= f",
            ));
        }
        Ok(RetroreflectorSpec { f, l })
    }

    pub fn focal_length(&self) -> f64 {
        self.f
    }

    pub fn interval(&self) -> f64 {
        self.l
    }

    /// Optical power `1/f_RR = 2(l - f)/f²`, zero for the ideal retroreflector.
    pub fn focusing_power(&self) -> f64 {
        2.0 * (self.l - self.f) / (self.f * self.f)
    }

    /// The seven elements in traversal order: entrance gap, lens, interval,
    /// mirror, interval, lens, exit gap.
    pub fn elements(&self) -> [RayMatrix; 7] {
        let gap = RayMatrix::new(1.0, self.f, 0.0, 1.0);
        let interval = RayMatrix::new(1.0, self.l, 0.0, 1.0);
        let lens = RayMatrix::new(1.0, 0.0, -1.0 / self.f, 1.0);
        [gap, lens, interval, flat_mirror(), interval, lens, gap]
    }
}

/// Round-trip matrix of the retroreflector, built as the explicit product of
/// its seven elements.
pub fn retroreflector_matrix(spec: &RetroreflectorSpec) -> RayMatrix {
    // Non-empty by construction.
    compose(spec.elements()).unwrap_or(RayMatrix::IDENTITY)
}

/// Closed form `[[1, 0], [-1/f_RR, 1]] · (-I)`.
pub fn retroreflector_closed_form(spec: &RetroreflectorSpec) -> RayMatrix {
    let lens = RayMatrix::new(1.0, 0.0, -spec.focusing_power(), 1.0);
    lens * RayMatrix::IDENTITY.scale(-1.0)
}

/// Equivalent focal length `f_RR = f² / (2(l - f))`.
///
/// Returns [`Error::InfiniteFocalLength`] for the ideal case `l == f`.
pub fn equivalent_focal_length(spec: &RetroreflectorSpec) -> Result<f64> {
    if spec.l == spec.f {
        return Err(Error::InfiniteFocalLength);
    }
    Ok(spec.f * spec.f / (2.0 * (spec.l - spec.f)))
}
