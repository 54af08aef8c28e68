//! Angular spectra of photon pairs from type-I degenerate spontaneous
//! parametric down-conversion (SPDC) pumped by a focused Gaussian beam in a
//! negative uniaxial crystal.
//!
//! Two engines are provided and are meant to be checked against each other:
//!
//! - [`numeric`]: the joint density `|F|²` built from the exact birefringent
//!   dispersion relations and the sinc phase-matching function, integrated
//!   by fixed-grid quadrature.
//! - [`analytic`]: the Gaussian-sinc approximation of the conditional
//!   angular spectrum, the cone radius and width, the semi-analytic and
//!   stationary-phase angular spectrum, and aperture-angle statistics.
//!
//! [`cone`] evaluates the on-cone angular correlation and [`optimize`] runs
//! cut-angle and pump-wavelength sweeps on top of both engines.
//!
//! Units: lengths in μm, transverse wave vectors in rad/μm, angles in
//! radians. Frequencies only ever enter through the vacuum wavenumber
//! `ω/c = 2π/λ`.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. The `parallel` feature evaluates grids row-parallel with rayon;
//! results are identical to the sequential path.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod analytic;
pub mod cone;
pub mod crystal;
mod error;
pub mod grid;
mod math;
pub mod numeric;
pub mod optimize;
mod par;
pub mod pump;
pub mod quadrature;
mod source;
mod vector;

pub use error::{Error, Result};
pub use source::Source;
pub use vector::TransverseWaveVector;
