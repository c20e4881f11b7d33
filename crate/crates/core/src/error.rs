use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(&'static str),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("cannot compose an empty element sequence")]
    EmptySequence,
    /// Lens-mirror interval equals the focal length; the retroreflector does not focus.
    #[error("equivalent focal length is infinite (l = f)")]
    InfiniteFocalLength,
    #[error("resonator is unstable: g1*g2* = {product}")]
    Unstable { product: f64 },
    #[error("degenerate stability parameters: g1* = 0 with g2* != 0")]
    Degenerate,
    /// `c*q + d` vanished while propagating a q-parameter.
    #[error("beam collapse: c*q + d = 0")]
    BeamCollapse,
    #[error("beam is not confined: Im(1/q) = {0} must be negative")]
    InvalidBeam(f64),
    #[error("nonphysical loss budget: r1*r2 = {0} must lie in (0, 1)")]
    NonphysicalLoss(f64),
    #[error("z = {0} m lies outside the resonator")]
    OutOfRange(f64),
}
