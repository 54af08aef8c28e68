//! Float functions routed through `libm` so that `std` and `no_std` builds
//! produce identical bits.

pub(crate) use libm::{acos, asin, cos, erf, exp, fabs as abs, pow, sin, sqrt};

pub(crate) const PI: f64 = core::f64::consts::PI;
pub(crate) const TAU: f64 = core::f64::consts::TAU;

#[inline]
pub(crate) fn sq(x: f64) -> f64 {
    x * x
}
