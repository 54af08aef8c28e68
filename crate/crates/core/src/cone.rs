//! Angular correlation of pairs whose photons both sit on the cone radius.
//!
//! With signal and idler azimuths `θ_s = θ₊ + θ₋/2`, `θ_i = θ₊ − θ₋/2`,
//! anti-collinear pairs have `θ₋ = π`.

use crate::analytic::cone_radius;
use crate::grid::{AxisKind, Component, Marginal1D, Normalization, SpectrumGrid};
use crate::math::PI;
use crate::numeric::{joint_density, mismatch_density};
use crate::quadrature::Axis;
use crate::{Result, Source, TransverseWaveVector};

/// Which `Δk_z` feeds the phase-matching function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mismatch {
    #[default]
    Exact,
    /// First-order expansion about the signal.
    Taylor,
}

/// Signal and idler wave vectors on a ring of radius `r`.
pub fn pair_on_ring(radius: f64, theta_plus: f64, theta_minus: f64) -> (TransverseWaveVector, TransverseWaveVector) {
    (
        TransverseWaveVector::polar(radius, theta_plus + 0.5 * theta_minus),
        TransverseWaveVector::polar(radius, theta_plus - 0.5 * theta_minus),
    )
}

fn density(source: &Source, radius: f64, theta_plus: f64, theta_minus: f64, mismatch: Mismatch) -> f64 {
    let (ks, ki) = pair_on_ring(radius, theta_plus, theta_minus);
    match mismatch {
        Mismatch::Exact => joint_density(source, ks, ki),
        Mismatch::Taylor => {
            let dk = source.dispersion().taylor_delta_kz(ks, ki);
            mismatch_density(source, ks + ki, dk)
        }
    }
}

/// `|F|²` for a pair on the analytic cone radius.
pub fn cone_correlation(source: &Source, theta_plus: f64, theta_minus: f64, mismatch: Mismatch) -> Result<f64> {
    let r = cone_radius(source)?;
    Ok(density(source, r, theta_plus, theta_minus, mismatch))
}

/// Sampling of the `(θ₊, θ₋)` plane, radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeWindow {
    pub theta_plus: Axis,
    pub theta_minus: Axis,
}

impl Default for ConeWindow {
    /// The full circle in θ₊ at 1° and `θ₋ ∈ [160°, 200°]` in 181 steps.
    fn default() -> Self {
        Self {
            theta_plus: Axis::new(-PI, PI, 361).expect("static axis"),
            theta_minus: Axis::new(160f64.to_radians(), 200f64.to_radians(), 181).expect("static axis"),
        }
    }
}

/// Peak-normalised correlation on a [`ConeWindow`]: θ₊ along x, θ₋ along y.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeCorrelation {
    pub grid: SpectrumGrid,
    pub radius: f64,
}

impl ConeCorrelation {
    pub fn raw_peak(&self) -> f64 {
        match self.grid.normalization() {
            Normalization::PeakNormalized { raw_peak } => raw_peak,
            Normalization::Raw => self.grid.max(),
        }
    }

    /// `(θ₊, θ₋)` of the grid maximum.
    pub fn argmax(&self) -> (f64, f64) {
        let p = self.grid.argmax_point();
        (p.x, p.y)
    }
}

pub fn cone_correlation_grid(source: &Source, window: &ConeWindow, mismatch: Mismatch) -> Result<ConeCorrelation> {
    let r = cone_radius(source)?;
    let grid = SpectrumGrid::from_fn(window.theta_plus, window.theta_minus, AxisKind::Angle, |tp, tm| {
        density(source, r, tp, tm, mismatch)
    })?;
    Ok(ConeCorrelation {
        grid: grid.peak_normalized(),
        radius: r,
    })
}

/// Marginals over θ₊ and over θ₋, each normalised to a unit maximum.
pub fn cone_marginals(corr: &ConeCorrelation) -> (Marginal1D, Marginal1D) {
    (
        corr.grid.marginal(Component::X).peak_normalized(),
        corr.grid.marginal(Component::Y).peak_normalized(),
    )
}
