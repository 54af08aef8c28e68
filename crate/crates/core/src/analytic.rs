//! Approximate engine: sinc² replaced by a Gaussian and the mismatch
//! linearised about the signal wave vector.
//!
//! All densities here omit the overall `L²` of `|f|²`, so the exact engine
//! compares against `L²` times these values.

use alloc::vec::Vec;

use crate::grid::{AxisKind, SpectrumGrid};
use crate::math::{abs, asin, cos, erf, exp, pow, sin, sq, sqrt, PI};
use crate::numeric::CasWindow;
use crate::quadrature::{integrate_periodic, Axis};
use crate::{Error, Result, Source, TransverseWaveVector};

/// Width parameter of the Gaussian fit `sinc(x) ≈ exp(−(γx)²)`.
pub const GAMMA: f64 = 0.4393;

pub fn sinc_gaussian(x: f64) -> f64 {
    exp(-sq(GAMMA * x))
}

/// Pump width entering the sum-coordinate Gaussian of the CAS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WidthModel {
    /// The pump waists.
    #[default]
    Waist,
    /// Waists widened by the curvature of the extraordinary dispersion,
    /// see [`effective_widths`].
    CurvatureCorrected,
}

/// `W̃_b² = W_b² + γ²L² n_o² η (n_eff/n_o − n_eff²/n_o²)`.
pub fn effective_widths(source: &Source) -> (f64, f64) {
    let d = source.dispersion();
    let n_o = d.daughter_index();
    let n_eff = d.axis().n_eff;
    let l = source.crystal().length();
    let extra = sq(GAMMA * l) * sq(n_o) * d.axis().eta * (n_eff / n_o - sq(n_eff / n_o));
    let p = source.pump();
    (sqrt(sq(p.waist_x()) + extra), sqrt(sq(p.waist_y()) + extra))
}

fn widths(source: &Source, model: WidthModel) -> (f64, f64) {
    match model {
        WidthModel::Waist => (source.pump().waist_x(), source.pump().waist_y()),
        WidthModel::CurvatureCorrected => effective_widths(source),
    }
}

/// Parameters of the Gaussian-sinc CAS about a signal wave vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussCasParams {
    /// μm; `σ_x² = (W_x² + γ²L²d_x²)/2`.
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub kappa: f64,
    pub d: TransverseWaveVector,
    pub gamma: f64,
    pub length: f64,
}

pub fn gauss_cas_params(source: &Source, signal: TransverseWaveVector, model: WidthModel) -> GaussCasParams {
    let t = source.dispersion().taylor(signal);
    let l = source.crystal().length();
    let (wx, wy) = widths(source, model);
    let gl = GAMMA * l;
    GaussCasParams {
        sigma_x: sqrt(0.5 * (sq(wx) + sq(gl * t.d.x))),
        sigma_y: sqrt(0.5 * (sq(wy) + sq(gl * t.d.y))),
        kappa: t.kappa,
        d: t.d,
        gamma: GAMMA,
        length: l,
    }
}

impl GaussCasParams {
    /// The CAS at pump transverse vector `q = k_s + k_i`.
    pub fn density(&self, q: TransverseWaveVector) -> f64 {
        let gl2 = sq(self.gamma * self.length);
        let sum = sq(self.sigma_x * q.x) + sq(self.sigma_y * q.y);
        let kd = 0.5 * gl2 * (sq(self.kappa) - 2.0 * self.kappa * self.d.dot(q));
        let cross = gl2 * self.d.x * self.d.y * q.x * q.y;
        exp(-sum - kd - cross)
    }
}

/// Gaussian-sinc conditional angular spectrum, unit peak for an on-cone
/// anti-collinear pair.
pub fn cas_analytic(source: &Source, signal: TransverseWaveVector, idler: TransverseWaveVector, model: WidthModel) -> f64 {
    gauss_cas_params(source, signal, model).density(signal + idler)
}

pub fn cas_analytic_grid(
    source: &Source,
    idler: TransverseWaveVector,
    window: &CasWindow,
    model: WidthModel,
) -> Result<SpectrumGrid> {
    SpectrumGrid::from_fn(window.x, window.y, AxisKind::WaveVector, |x, y| {
        cas_analytic(source, TransverseWaveVector::new(x, y), idler, model)
    })
}

/// `r_AS = √(½ (n_o ω/c)² (1 − n_eff/n_o))`.
pub fn cone_radius(source: &Source) -> Result<f64> {
    let d = source.dispersion();
    let n_o = d.daughter_index();
    let n_eff = d.axis().n_eff;
    if n_eff > n_o {
        return Err(Error::NoRealCone { n_eff, n_o });
    }
    let k0 = d.daughter_wavenumber();
    Ok(sqrt(0.5 * sq(2.0 * k0) * (1.0 - n_eff / n_o)))
}

/// `σ_AS⁻² = 2(γL c/n_o ω)² / (1 + (γL|d|/W)²)`.
pub fn sigma_as_inv_sq(source: &Source, d_norm: f64) -> f64 {
    let d = source.dispersion();
    let gl = GAMMA * source.crystal().length();
    let w = source.pump().mean_waist();
    2.0 * sq(gl / (2.0 * d.daughter_wavenumber())) / (1.0 + sq(gl * d_norm / w))
}

/// `ζ = κ|d| / (|d|² + (W/γL)²)` at the given signal wave vector.
pub fn zeta(source: &Source, signal: TransverseWaveVector) -> f64 {
    let t = source.dispersion().taylor(signal);
    let dn = t.d.norm();
    let w = source.pump().mean_waist();
    t.kappa * dn / (sq(dn) + sq(w / (GAMMA * source.crystal().length())))
}

/// Upper limit `k̃_⊥(θ)` of the radial integral.
pub fn boundary_wavevector(source: &Source, theta: f64) -> f64 {
    let d = source.dispersion();
    let a = d.axis();
    let (a_y, _) = d.optical_axis();
    d.pump_wavenumber() * sqrt(a.eps_perp * a.eps_par) / sqrt(a.eps_perp + a.delta_eps * sq(a_y * cos(theta)))
}

/// Radial `1/e` half-width `σ_AS / (2√2 r_AS)` of the ring for `σ_AS⁻²`.
pub fn radial_width(sigma_inv_sq: f64, cone_radius: f64) -> f64 {
    1.0 / (sqrt(sigma_inv_sq) * 2.0 * core::f64::consts::SQRT_2 * cone_radius)
}

/// Ring geometry from the analytic engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeParams {
    /// rad/μm.
    pub r_as: f64,
    /// μm⁴, evaluated with `|d| = |β|`.
    pub sigma_as_inv_sq: f64,
    /// rad/μm.
    pub radial_width: f64,
    /// `ζ` on axis (`k_s = 0`), rad/μm.
    pub zeta_x: f64,
}

pub fn cone_params(source: &Source) -> Result<ConeParams> {
    let r_as = cone_radius(source)?;
    let beta = abs(source.dispersion().axis().beta);
    let s = sigma_as_inv_sq(source, beta);
    Ok(ConeParams {
        r_as,
        sigma_as_inv_sq: s,
        radial_width: if r_as > 0.0 { radial_width(s, r_as) } else { f64::INFINITY },
        zeta_x: zeta(source, TransverseWaveVector::ZERO),
    })
}

/// Summary geometry of the emission cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeStats {
    pub r_as: f64,
    pub sigma_as_inv_sq: f64,
    pub radial_width: f64,
    pub zeta_x: f64,
    /// Mean aperture angle, rad.
    pub theta_mean: f64,
    pub dtheta_max: f64,
    pub dtheta_min: f64,
    pub d_ext_max: f64,
    pub d_ext_min: f64,
}

/// Aperture spread `(1 + (γL d/W)²)^{1/4} / (2^{5/4} √(γL n_o ω/2c))`.
pub fn aperture_spread(source: &Source, d_ext: f64) -> f64 {
    let gl = GAMMA * source.crystal().length();
    let w = source.pump().mean_waist();
    let k0 = source.dispersion().daughter_wavenumber();
    pow(1.0 + sq(gl * d_ext / w), 0.25) / (pow(2.0, 1.25) * sqrt(gl * k0))
}

/// Cone parameters with the mean aperture angle and the extreme spreads,
/// `d_ext = |β| ± r_AS/k0`.
pub fn aperture_stats(source: &Source) -> Result<ConeStats> {
    let p = cone_params(source)?;
    let d = source.dispersion();
    let k0 = d.daughter_wavenumber();
    let beta = abs(d.axis().beta);
    let d_ext_max = beta + p.r_as / k0;
    let d_ext_min = abs(beta - p.r_as / k0);
    Ok(ConeStats {
        r_as: p.r_as,
        sigma_as_inv_sq: p.sigma_as_inv_sq,
        radial_width: p.radial_width,
        zeta_x: p.zeta_x,
        theta_mean: asin(p.r_as / sqrt(sq(k0) - sq(p.r_as))),
        dtheta_max: aperture_spread(source, d_ext_max),
        dtheta_min: aperture_spread(source, d_ext_min),
        d_ext_max,
        d_ext_min,
    })
}

/// Ring quantities shared by both AS forms at one signal point.
struct RingTerms {
    /// `exp(−σ_AS⁻²(k² − r_AS²)²)`.
    envelope: f64,
    kappa: f64,
    d_norm: f64,
    waist: f64,
    gl: f64,
}

fn ring_terms(source: &Source, signal: TransverseWaveVector) -> RingTerms {
    let t = source.dispersion().taylor(signal);
    let d_norm = t.d.norm();
    let w = source.pump().mean_waist();
    let gl = GAMMA * source.crystal().length();
    let k0 = source.dispersion().daughter_wavenumber();
    // κ = (k² − r_AS²)/k0, which also covers n_eff > n_o.
    let quartic = sq(t.kappa * k0);
    RingTerms {
        envelope: exp(-sigma_as_inv_sq(source, d_norm) * quartic),
        kappa: t.kappa,
        d_norm,
        waist: w,
        gl,
    }
}

/// Angular spectrum with the radial pump integral done in closed form and
/// the azimuthal one by an `n_theta`-point periodic trapezoid.
///
/// In the frame where `d` lies along `θ = 0`,
/// `R_s = e^{−σ_AS⁻²(k²−r²)²} ∮dθ ∫₀^{k̃(θ)} k dk e^{−u(k,θ)}` with
/// `u = [A(k cos θ − ζ)² + W²k² sin²θ]/2` and `A = W² + (γL|d|)²`.
pub fn as_semianalytic(source: &Source, signal: TransverseWaveVector, n_theta: usize) -> f64 {
    let r = ring_terms(source, signal);
    let w2 = sq(r.waist);
    let a_big = w2 + sq(r.gl * r.d_norm);
    let zeta = r.kappa * r.d_norm / (sq(r.d_norm) + sq(r.waist / r.gl));
    let u0 = 0.5 * a_big * sq(zeta);
    let bracket = integrate_periodic(
        |theta| {
            let (c, s) = (cos(theta), sin(theta));
            let den = a_big * c * c + w2 * s * s;
            let k = boundary_wavevector(source, theta);
            let u_k = 0.5 * (a_big * sq(k * c - zeta) + w2 * sq(k * s));
            // ∫₀^k e^{−u}: u = a(x − x₀)² + u_min.
            let a = 0.5 * den;
            let x0 = a_big * zeta * c / den;
            let u_min = u0 * w2 * s * s / den;
            let sa = sqrt(a);
            let i0 = exp(-u_min) * 0.5 * sqrt(PI) / sa * (erf(sa * (k - x0)) - erf(-sa * x0));
            ((exp(-u0) - exp(-u_k)) + a_big * zeta * c * i0) / den
        },
        n_theta.max(128),
    );
    (r.envelope * bracket).max(0.0)
}

/// Stationary-phase closed form of the angular spectrum.
pub fn as_closedform(source: &Source, signal: TransverseWaveVector) -> f64 {
    let r = ring_terms(source, signal);
    let k = signal.norm();
    let cos_est = if r.d_norm * k > 0.0 {
        (r.kappa / (r.d_norm * k)).clamp(-1.0, 1.0)
    } else {
        1.0
    };
    let theta_est = crate::math::acos(cos_est);
    let kt = boundary_wavevector(source, theta_est);
    let ratio = r.gl * r.d_norm / r.waist;
    let tail = if r.d_norm > 0.0 {
        1.0 - 1.0 / (1.0 + sq(r.waist / (r.gl * r.d_norm)))
    } else {
        0.0
    };
    let u = 0.5 * sq(r.waist * kt) - 0.5 * sq(r.gl * r.kappa) * tail;
    PI * r.envelope / (sq(r.waist) * sqrt(1.0 + sq(ratio))) * (1.0 - exp(-u))
}

/// Which analytic angular-spectrum form to tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsForm {
    SemiAnalytic { n_theta: usize },
    ClosedForm,
}

pub fn as_analytic_grid(source: &Source, x: Axis, y: Axis, form: AsForm) -> Result<SpectrumGrid> {
    SpectrumGrid::from_fn(x, y, AxisKind::WaveVector, |a, b| {
        let k = TransverseWaveVector::new(a, b);
        match form {
            AsForm::SemiAnalytic { n_theta } => as_semianalytic(source, k, n_theta),
            AsForm::ClosedForm => as_closedform(source, k),
        }
    })
}

/// Radial profile `f(r (cos φ, sin φ))` for `r` on `radii`.
pub fn radial_profile<F: Fn(TransverseWaveVector) -> f64>(f: F, azimuth: f64, radii: &Axis) -> Vec<f64> {
    radii
        .points()
        .map(|r| f(TransverseWaveVector::new(r * cos(azimuth), r * sin(azimuth))))
        .collect()
}
