//! Closed-form model of an intra-cavity second-harmonic resonant beam link.
//!
//! The chain runs from the resonator geometry (two telecentric cat's-eye
//! retroreflectors facing each other across free space) through stability
//! and eigenmode analysis, Rigrod steady-state power, second harmonic
//! conversion, and finally received power and Shannon spectral efficiency.
//!
//! Everything here is pure arithmetic on `f64` and works without `std`.
//! Lengths are SI meters throughout.
#![no_std]
#![deny(missing_debug_implementations)]
// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod beam;
pub mod channel;
pub mod constants;
mod error;
pub mod link;
pub(crate) mod math;
pub mod power;
pub mod ray;
pub mod resonator;
pub mod shg;

pub use error::{Error, Result};
