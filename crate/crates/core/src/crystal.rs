//! Dielectric response of the uniaxial crystal and the phase mismatch of the
//! type-I interaction `e → o + o`.
//!
//! The optical axis lies in the `y-z` plane, `a = (0, sin θ_a, cos θ_a)`, and
//! the pump propagates along `z`.

use alloc::format;

use crate::math::{cos, sin, sq, sqrt, TAU};
use crate::{Error, Result, TransverseWaveVector};

/// Wavelength band (μm) over which Sellmeier models are evaluated.
pub const SUPPORTED_BAND: (f64, f64) = (0.2, 1.2);

/// Four-term Sellmeier model `n²(λ) = a + b/(λ² − c) − d λ²`, λ in μm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sellmeier {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Sellmeier {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    /// Dispersion-free model with `n² = index_sq` at every wavelength.
    pub const fn constant(index_sq: f64) -> Self {
        Self::new(index_sq, 0.0, 0.0, 0.0)
    }

    pub fn coefficients(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    fn eval(&self, wavelength: f64) -> f64 {
        let l2 = wavelength * wavelength;
        self.a + self.b / (l2 - self.c) - self.d * l2
    }

    pub fn index_sq(&self, wavelength: f64) -> Result<f64> {
        check_band(wavelength)?;
        Ok(self.eval(wavelength))
    }

    pub fn index(&self, wavelength: f64) -> Result<f64> {
        self.index_sq(wavelength).map(sqrt)
    }

    /// `n² > 1` and finite across the whole band, with no pole inside it.
    fn validate(&self, label: &str) -> Result<()> {
        let (lo, hi) = SUPPORTED_BAND;
        if self.b != 0.0 && self.c >= lo * lo && self.c <= hi * hi {
            return Err(Error::InvalidConfig(format!(
                "{label} Sellmeier pole at {} um lies inside the band",
                sqrt(self.c)
            )));
        }
        const SAMPLES: usize = 256;
        for i in 0..=SAMPLES {
            let l = lo + (hi - lo) * i as f64 / SAMPLES as f64;
            let n2 = self.eval(l);
            if !(n2.is_finite() && n2 > 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "{label} Sellmeier gives n^2 = {n2} at {l} um"
                )));
            }
        }
        Ok(())
    }
}

fn check_band(wavelength: f64) -> Result<()> {
    let (min, max) = SUPPORTED_BAND;
    if wavelength >= min && wavelength <= max {
        Ok(())
    } else {
        Err(Error::WavelengthOutOfBand {
            wavelength,
            min,
            max,
        })
    }
}

/// Ordinary and extraordinary principal-index models of a uniaxial crystal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SellmeierSet {
    pub ordinary: Sellmeier,
    pub extraordinary: Sellmeier,
}

impl SellmeierSet {
    /// β-BaB₂O₄ after Eimerl et al.
    pub const BBO_EIMERL: Self = Self {
        ordinary: Sellmeier::new(2.7405, 0.0184, 0.0179, 0.0155),
        extraordinary: Sellmeier::new(2.3730, 0.0128, 0.0156, 0.0044),
    };

    pub const NAMES: &'static [&'static str] = &["bbo-eimerl"];

    pub fn named(name: &str) -> Option<Self> {
        match name {
            "bbo-eimerl" => Some(Self::BBO_EIMERL),
            _ => None,
        }
    }
}

/// Everything defining the crystal's response: index models, cut angle
/// `θ_a` (rad) and length `L` (μm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalConfig {
    sellmeier: SellmeierSet,
    cut_angle: f64,
    length: f64,
}

impl CrystalConfig {
    pub fn new(sellmeier: SellmeierSet, cut_angle: f64, length: f64) -> Result<Self> {
        if !(cut_angle > 0.0 && cut_angle < core::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidConfig(format!(
                "cut angle must lie in (0, pi/2) rad, got {cut_angle}"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "crystal length must be positive, got {length}"
            )));
        }
        sellmeier.ordinary.validate("ordinary")?;
        sellmeier.extraordinary.validate("extraordinary")?;
        Ok(Self {
            sellmeier,
            cut_angle,
            length,
        })
    }

    /// BBO (Eimerl set) with the given cut angle and length.
    pub fn bbo(cut_angle: f64, length: f64) -> Result<Self> {
        Self::new(SellmeierSet::BBO_EIMERL, cut_angle, length)
    }

    pub fn sellmeier(&self) -> &SellmeierSet {
        &self.sellmeier
    }

    pub fn cut_angle(&self) -> f64 {
        self.cut_angle
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn with_cut_angle(&self, cut_angle: f64) -> Result<Self> {
        Self::new(self.sellmeier, cut_angle, self.length)
    }

    pub fn with_length(&self, length: f64) -> Result<Self> {
        Self::new(self.sellmeier, self.cut_angle, length)
    }

    /// `(a_y, a_z)` of the optical axis.
    pub fn optical_axis(&self) -> (f64, f64) {
        (sin(self.cut_angle), cos(self.cut_angle))
    }

    pub fn ordinary_index(&self, wavelength: f64) -> Result<f64> {
        self.sellmeier.ordinary.index(wavelength)
    }

    pub fn extraordinary_principal_index(&self, wavelength: f64) -> Result<f64> {
        self.sellmeier.extraordinary.index(wavelength)
    }

    /// Effective index, walk-off and astigmatism coefficients at `wavelength`.
    pub fn axis_coefficients(&self, wavelength: f64) -> Result<AxisCoefficients> {
        let eps_perp = self.sellmeier.ordinary.index_sq(wavelength)?;
        let eps_par = self.sellmeier.extraordinary.index_sq(wavelength)?;
        Ok(AxisCoefficients::from_permittivities(
            eps_perp,
            eps_par,
            self.cut_angle,
        ))
    }

    /// Exact longitudinal mismatch `k_z,p − k_z,s − k_z,i` for arbitrary
    /// (non-degenerate) daughter wavelengths. The pump wavelength follows
    /// from energy conservation, `1/λ_p = 1/λ_s + 1/λ_i`.
    ///
    /// Returns `None` when any of the three waves is evanescent.
    pub fn delta_kz(
        &self,
        signal: TransverseWaveVector,
        signal_wavelength: f64,
        idler: TransverseWaveVector,
        idler_wavelength: f64,
    ) -> Result<Option<f64>> {
        let pump_wavelength = 1.0 / (1.0 / signal_wavelength + 1.0 / idler_wavelength);
        let axis = self.axis_coefficients(pump_wavelength)?;
        let (a_y, _) = self.optical_axis();
        let kp = TAU / pump_wavelength;
        let pump = kz_extraordinary_raw(&axis, a_y, kp, signal + idler);
        let ks = kz_ordinary_raw(
            self.sellmeier.ordinary.index_sq(signal_wavelength)?,
            TAU / signal_wavelength,
            signal.norm(),
        );
        let ki = kz_ordinary_raw(
            self.sellmeier.ordinary.index_sq(idler_wavelength)?,
            TAU / idler_wavelength,
            idler.norm(),
        );
        if pump.evanescent || ks.evanescent || ki.evanescent {
            return Ok(None);
        }
        Ok(Some(pump.value - ks.value - ki.value))
    }
}

/// Permittivity-derived coefficients of the extraordinary dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisCoefficients {
    pub n_eff: f64,
    pub beta: f64,
    /// `1/(ε_⊥ + Δε a_z²)`.
    pub eta: f64,
    pub eps_perp: f64,
    pub eps_par: f64,
    pub delta_eps: f64,
}

impl AxisCoefficients {
    /// Valid for any axis angle in `[0, π/2]`.
    pub fn from_permittivities(eps_perp: f64, eps_par: f64, cut_angle: f64) -> Self {
        let a_z = cos(cut_angle);
        let delta_eps = eps_par - eps_perp;
        let denom = eps_perp + delta_eps * a_z * a_z;
        Self {
            n_eff: sqrt(eps_perp * eps_par / denom),
            beta: delta_eps * a_z / denom,
            eta: 1.0 / denom,
            eps_perp,
            eps_par,
            delta_eps,
        }
    }
}

/// A longitudinal wavenumber. Evanescent waves carry `value = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kz {
    pub value: f64,
    pub evanescent: bool,
}

impl Kz {
    fn from_radicand(scale: f64, radicand: f64) -> Self {
        if radicand >= 0.0 {
            Self {
                value: scale * sqrt(radicand),
                evanescent: false,
            }
        } else {
            Self {
                value: 0.0,
                evanescent: true,
            }
        }
    }
}

fn kz_ordinary_raw(eps_perp: f64, vacuum_wavenumber: f64, k_perp: f64) -> Kz {
    Kz::from_radicand(1.0, eps_perp * sq(vacuum_wavenumber) - sq(k_perp))
}

fn kz_extraordinary_raw(
    axis: &AxisCoefficients,
    a_y: f64,
    vacuum_wavenumber: f64,
    k: TransverseWaveVector,
) -> Kz {
    let radial = Kz::from_radicand(
        vacuum_wavenumber * axis.n_eff,
        1.0 - k.norm_sq() * axis.eta / sq(vacuum_wavenumber),
    );
    if radial.evanescent {
        return radial;
    }
    Kz {
        value: radial.value - axis.beta * a_y * k.y,
        evanescent: false,
    }
}

/// First-order expansion `Δk_z ≈ κ − d·(k_s + k_i)` about a signal wave
/// vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorMismatch {
    pub kappa: f64,
    pub d: TransverseWaveVector,
}

impl TaylorMismatch {
    pub fn delta_kz(&self, pump: TransverseWaveVector) -> f64 {
        self.kappa - self.d.dot(pump)
    }
}

/// Dispersion of the degenerate interaction at a fixed pump wavelength.
///
/// Holds everything the engines need per sample so that no Sellmeier model
/// is evaluated in inner loops. The daughter index is `n_o(2λ_p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    pump_wavenumber: f64,
    axis: AxisCoefficients,
    a_y: f64,
    a_z: f64,
    daughter_index: f64,
    daughter_eps: f64,
    length: f64,
}

impl Dispersion {
    pub fn new(crystal: &CrystalConfig, pump_wavelength: f64) -> Result<Self> {
        let axis = crystal.axis_coefficients(pump_wavelength)?;
        let daughter_eps = crystal
            .sellmeier
            .ordinary
            .index_sq(2.0 * pump_wavelength)?;
        let (a_y, a_z) = crystal.optical_axis();
        Ok(Self {
            pump_wavenumber: TAU / pump_wavelength,
            axis,
            a_y,
            a_z,
            daughter_index: sqrt(daughter_eps),
            daughter_eps,
            length: crystal.length,
        })
    }

    /// Vacuum pump wavenumber `ω/c`.
    pub fn pump_wavenumber(&self) -> f64 {
        self.pump_wavenumber
    }

    pub fn axis(&self) -> &AxisCoefficients {
        &self.axis
    }

    pub fn optical_axis(&self) -> (f64, f64) {
        (self.a_y, self.a_z)
    }

    /// `n_o(2λ_p)`.
    pub fn daughter_index(&self) -> f64 {
        self.daughter_index
    }

    /// In-crystal daughter wavenumber `n_o ω / 2c`.
    pub fn daughter_wavenumber(&self) -> f64 {
        0.5 * self.daughter_index * self.pump_wavenumber
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Ordinary daughter photon, `√(ε_⊥ ω²/4c² − k_⊥²)`.
    pub fn kz_ordinary(&self, k_perp: f64) -> Kz {
        kz_ordinary_raw(self.daughter_eps, 0.5 * self.pump_wavenumber, k_perp)
    }

    /// Extraordinary pump wave.
    pub fn kz_extraordinary(&self, k: TransverseWaveVector) -> Kz {
        kz_extraordinary_raw(&self.axis, self.a_y, self.pump_wavenumber, k)
    }

    /// Exact `Δk_z` with the pump at `k_s + k_i`; `None` if any wave is
    /// evanescent.
    #[inline]
    pub fn delta_kz(&self, signal: TransverseWaveVector, idler: TransverseWaveVector) -> Option<f64> {
        let pump = self.kz_extraordinary(signal + idler);
        let s = self.kz_ordinary(signal.norm());
        let i = self.kz_ordinary(idler.norm());
        if pump.evanescent || s.evanescent || i.evanescent {
            None
        } else {
            Some(pump.value - s.value - i.value)
        }
    }

    /// First-order mismatch coefficients about `signal`.
    pub fn taylor(&self, signal: TransverseWaveVector) -> TaylorMismatch {
        let inv_k0 = 2.0 / (self.daughter_index * self.pump_wavenumber);
        TaylorMismatch {
            kappa: self.pump_wavenumber * (self.axis.n_eff - self.daughter_index)
                + inv_k0 * signal.norm_sq(),
            d: TransverseWaveVector::new(
                inv_k0 * signal.x,
                self.axis.beta * self.a_y + inv_k0 * signal.y,
            ),
        }
    }

    /// `κ(k_s) − d(k_s)·(k_s + k_i)`.
    pub fn taylor_delta_kz(&self, signal: TransverseWaveVector, idler: TransverseWaveVector) -> f64 {
        self.taylor(signal).delta_kz(signal + idler)
    }

    /// `n_o − n_eff`; negative when no real cone exists.
    pub fn index_gap(&self) -> f64 {
        self.daughter_index - self.axis.n_eff
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::PI;

    const LP: f64 = 0.40699;

    fn standard() -> CrystalConfig {
        CrystalConfig::bbo(29.3_f64.to_radians(), 1000.0).unwrap()
    }

    /// Sellmeier evaluated independently of the crate code path.
    fn bbo_no2(l: f64) -> f64 {
        2.7405 + 0.0184 / (l * l - 0.0179) - 0.0155 * l * l
    }

    fn bbo_ne2(l: f64) -> f64 {
        2.3730 + 0.0128 / (l * l - 0.0156) - 0.0044 * l * l
    }

    #[test]
    fn sellmeier_values() {
        let c = standard();
        // Hand-evaluated values of the BBO set.
        assert!((c.ordinary_index(LP).unwrap() - 1.6919).abs() < 5e-4);
        assert!((c.ordinary_index(2.0 * LP).unwrap() - 1.6610).abs() < 5e-4);
        assert!((c.extraordinary_principal_index(LP).unwrap() - 1.5677).abs() < 5e-4);
        assert!((c.extraordinary_principal_index(2.0 * LP).unwrap() - 1.5462).abs() < 5e-4);
        assert_eq!(c.ordinary_index(LP).unwrap(), sqrt(bbo_no2(LP)));
        assert_eq!(c.extraordinary_principal_index(LP).unwrap(), sqrt(bbo_ne2(LP)));
    }

    #[test]
    fn constant_model() {
        let set = SellmeierSet {
            ordinary: Sellmeier::constant(4.0),
            extraordinary: Sellmeier::constant(4.0),
        };
        let c = CrystalConfig::new(set, 0.5, 10.0).unwrap();
        for l in [0.2, 0.5, 1.2] {
            assert_eq!(c.ordinary_index(l).unwrap(), 2.0);
            assert_eq!(c.extraordinary_principal_index(l).unwrap(), 2.0);
        }
    }

    #[test]
    fn normal_dispersion_over_band() {
        let c = standard();
        let mut prev = f64::INFINITY;
        for i in 0..=100 {
            let l = 0.2 + 0.01 * i as f64;
            let n = c.ordinary_index(l).unwrap();
            assert!(n < prev);
            prev = n;
        }
    }

    #[test]
    fn out_of_band() {
        let c = standard();
        let err = c.ordinary_index(1.3).unwrap_err();
        assert!(matches!(err, Error::WavelengthOutOfBand { .. }));
        assert!(alloc::string::ToString::to_string(&err).contains("0.2-1.2"));
        assert!(c.extraordinary_principal_index(0.1).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(CrystalConfig::bbo(0.0, 1000.0).is_err());
        assert!(CrystalConfig::bbo(PI / 2.0, 1000.0).is_err());
        assert!(CrystalConfig::bbo(0.5, 0.0).is_err());
        let bad = SellmeierSet {
            ordinary: Sellmeier::constant(0.9),
            extraordinary: Sellmeier::constant(2.0),
        };
        assert!(CrystalConfig::new(bad, 0.5, 1.0).is_err());
        let pole = SellmeierSet {
            ordinary: Sellmeier::new(2.0, 0.1, 0.25, 0.0),
            extraordinary: Sellmeier::constant(2.0),
        };
        assert!(CrystalConfig::new(pole, 0.5, 1.0).is_err());
    }

    #[test]
    fn axis_limits() {
        let (ep, epa) = (bbo_no2(LP), bbo_ne2(LP));
        let along = AxisCoefficients::from_permittivities(ep, epa, 0.0);
        assert!((along.n_eff - sqrt(ep)).abs() < 1e-15);
        assert!((along.beta - (epa - ep) / (ep + (epa - ep))).abs() < 1e-15);
        let across = AxisCoefficients::from_permittivities(ep, epa, PI / 2.0);
        assert!(across.beta.abs() < 1e-16);
        assert!((across.n_eff - sqrt(epa)).abs() < 1e-14);
    }

    #[test]
    fn standard_axis_coefficients() {
        let a = standard().axis_coefficients(LP).unwrap();
        assert!((a.n_eff - 1.659).abs() < 5e-4, "{}", a.n_eff);
        assert!((a.beta + 0.138).abs() < 5e-4, "{}", a.beta);
        assert_eq!(a.delta_eps, a.eps_par - a.eps_perp);
        assert!(a.delta_eps < 0.0 && a.beta < 0.0);
        assert!(a.n_eff <= sqrt(a.eps_perp) && a.n_eff >= sqrt(a.eps_par));
    }

    #[test]
    fn ordinary_dispersion() {
        let d = Dispersion::new(&standard(), LP).unwrap();
        let k0 = d.daughter_wavenumber();
        assert!((d.kz_ordinary(0.0).value - sqrt(bbo_no2(2.0 * LP)) * PI / LP).abs() < 1e-12);
        assert!((d.kz_ordinary(0.0).value - k0).abs() < 1e-12);
        let grazing = d.kz_ordinary(k0);
        assert!(grazing.value.abs() < 1e-6 && !grazing.evanescent);
        let beyond = d.kz_ordinary(k0 * 1.01);
        assert!(beyond.evanescent);
        assert_eq!(beyond.value, 0.0);
        // √((1.6610·π/0.40699)² − 0.25)
        assert!((d.kz_ordinary(0.5).value - 12.81).abs() < 0.01);
    }

    #[test]
    fn extraordinary_dispersion() {
        let c = standard();
        let d = Dispersion::new(&c, LP).unwrap();
        let a = d.axis();
        let w = TAU / LP;
        assert_eq!(d.kz_extraordinary(TransverseWaveVector::ZERO).value, a.n_eff * w);
        // Oracle: −β a_y k_y + (ω/c) n_eff √(1 − k² η c²/ω²) evaluated in place.
        let (ay, _) = c.optical_axis();
        let k = TransverseWaveVector::new(0.0, 0.5);
        let manual = -a.beta * ay * 0.5 + w * a.n_eff * sqrt(1.0 - 0.25 * a.eta / (w * w));
        assert!((d.kz_extraordinary(k).value - manual).abs() < 1e-12);
        assert!((manual - 25.6476).abs() < 1e-3, "{manual}");
    }

    #[test]
    fn walk_off_free_extraordinary() {
        let (ep, epa) = (bbo_no2(LP), bbo_ne2(LP));
        let axis = AxisCoefficients::from_permittivities(ep, epa, PI / 2.0);
        let w = TAU / LP;
        let q = 0.8;
        let kz = kz_extraordinary_raw(&axis, 1.0, w, TransverseWaveVector::new(q, 0.0));
        let expect = w * sqrt(epa) * sqrt(1.0 - q * q / (w * w * ep));
        assert!((kz.value - expect).abs() < 1e-12);
    }
}
