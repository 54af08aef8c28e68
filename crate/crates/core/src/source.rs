use crate::crystal::{CrystalConfig, Dispersion};
use crate::pump::PumpConfig;
use crate::Result;

/// A crystal pumped by a given beam, with the dispersion at the pump
/// wavelength precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Source {
    crystal: CrystalConfig,
    pump: PumpConfig,
    dispersion: Dispersion,
}

impl Source {
    pub fn new(crystal: CrystalConfig, pump: PumpConfig) -> Result<Self> {
        let dispersion = Dispersion::new(&crystal, pump.wavelength())?;
        Ok(Self {
            crystal,
            pump,
            dispersion,
        })
    }

    /// 1 mm BBO cut at `cut_angle_deg`, round pump of waist `waist` at
    /// 406.99 nm.
    pub fn bbo(cut_angle_deg: f64, waist: f64) -> Result<Self> {
        Self::new(
            CrystalConfig::bbo(cut_angle_deg.to_radians(), 1000.0)?,
            PumpConfig::symmetric(0.40699, waist)?,
        )
    }

    pub fn crystal(&self) -> &CrystalConfig {
        &self.crystal
    }

    pub fn pump(&self) -> &PumpConfig {
        &self.pump
    }

    pub fn dispersion(&self) -> &Dispersion {
        &self.dispersion
    }

    pub fn with_crystal(&self, crystal: CrystalConfig) -> Result<Self> {
        Self::new(crystal, self.pump)
    }

    pub fn with_pump(&self, pump: PumpConfig) -> Result<Self> {
        Self::new(self.crystal, pump)
    }
}
