//! Angular amplitude of a quasi-monochromatic Gaussian pump.

use alloc::format;

use num_complex::Complex64;

use crate::crystal::SUPPORTED_BAND;
use crate::math::{exp, sq, PI};
use crate::{Error, Result, TransverseWaveVector};

/// Gaussian pump: wavelength λ_p (μm), waists `W_x`, `W_y` (μm), focal-plane
/// offset `z_o` (μm) and a constant spectral amplitude α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpConfig {
    wavelength: f64,
    waist_x: f64,
    waist_y: f64,
    focus_offset: f64,
    amplitude: Complex64,
}

impl PumpConfig {
    pub fn new(wavelength: f64, waist_x: f64, waist_y: f64, focus_offset: f64) -> Result<Self> {
        let (min, max) = SUPPORTED_BAND;
        if !(wavelength >= min && wavelength <= max) {
            return Err(Error::WavelengthOutOfBand {
                wavelength,
                min,
                max,
            });
        }
        for (name, w) in [("waist_x", waist_x), ("waist_y", waist_y)] {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "pump {name} must be positive, got {w}"
                )));
            }
        }
        if !focus_offset.is_finite() {
            return Err(Error::InvalidConfig("pump focus offset must be finite".into()));
        }
        Ok(Self {
            wavelength,
            waist_x,
            waist_y,
            focus_offset,
            amplitude: Complex64::new(1.0, 0.0),
        })
    }

    /// Round beam focused at `z = 0`.
    pub fn symmetric(wavelength: f64, waist: f64) -> Result<Self> {
        Self::new(wavelength, waist, waist, 0.0)
    }

    pub fn with_amplitude(mut self, amplitude: Complex64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn with_waist(&self, waist_x: f64, waist_y: f64) -> Result<Self> {
        Ok(Self::new(self.wavelength, waist_x, waist_y, self.focus_offset)?
            .with_amplitude(self.amplitude))
    }

    pub fn with_wavelength(&self, wavelength: f64) -> Result<Self> {
        Ok(Self::new(wavelength, self.waist_x, self.waist_y, self.focus_offset)?
            .with_amplitude(self.amplitude))
    }

    pub fn with_focus_offset(&self, focus_offset: f64) -> Result<Self> {
        Ok(Self::new(self.wavelength, self.waist_x, self.waist_y, focus_offset)?
            .with_amplitude(self.amplitude))
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn waist_x(&self) -> f64 {
        self.waist_x
    }

    pub fn waist_y(&self) -> f64 {
        self.waist_y
    }

    /// Geometric mean of the two waists.
    pub fn mean_waist(&self) -> f64 {
        crate::math::sqrt(self.waist_x * self.waist_y)
    }

    pub fn focus_offset(&self) -> f64 {
        self.focus_offset
    }

    pub fn amplitude(&self) -> Complex64 {
        self.amplitude
    }

    /// Vacuum Rayleigh lengths `π W² / λ_p` along x and y.
    pub fn rayleigh_lengths(&self) -> (f64, f64) {
        (
            PI * sq(self.waist_x) / self.wavelength,
            PI * sq(self.waist_y) / self.wavelength,
        )
    }

    /// `α exp(−(k_x W_x/2)²(1 − i z_o/z_Rx)) exp(−(k_y W_y/2)²(1 − i z_o/z_Ry))`.
    pub fn angular_amplitude(&self, k: TransverseWaveVector) -> Complex64 {
        let (zx, zy) = self.rayleigh_lengths();
        let gx = sq(0.5 * k.x * self.waist_x);
        let gy = sq(0.5 * k.y * self.waist_y);
        let exponent = Complex64::new(
            -(gx + gy),
            gx * self.focus_offset / zx + gy * self.focus_offset / zy,
        );
        self.amplitude * exponent.exp()
    }

    /// `|angular_amplitude|²`, computed without the focal phase so that any
    /// spectrum built from it is bit-identical for every `z_o`.
    pub fn intensity(&self, k: TransverseWaveVector) -> f64 {
        let gx = sq(k.x * self.waist_x);
        let gy = sq(k.y * self.waist_y);
        self.amplitude.norm_sqr() * exp(-0.5 * (gx + gy))
    }
}
