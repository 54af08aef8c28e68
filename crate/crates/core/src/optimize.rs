//! Cut-angle and pump-wavelength sweeps, wavelength matching and pair
//! brightness.

use alloc::vec::Vec;

use crate::analytic::{aperture_stats, cone_radius, ConeStats};
use crate::math::{abs, cos, sin, PI};
use crate::numeric::{coincidence_counts, find_peak_idler, mismatch_density, PeakSearch};
use crate::par;
use crate::quadrature::{integrate_periodic, trapezoid, Axis};
use crate::{Error, Result, Source, TransverseWaveVector};

/// One evaluated design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignPoint {
    pub theta_a: f64,
    pub lambda_p: f64,
    /// `None` when the design has no real emission cone.
    pub cone: Option<ConeStats>,
    pub brightness: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    CutAngle,
    Wavelength,
}

/// Design points ordered by the swept variable.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub points: Vec<DesignPoint>,
}

fn sweep_values(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    match steps {
        0 => Err(Error::EmptyRange),
        1 => Ok(alloc::vec![from]),
        _ => {
            if !(to > from) {
                return Err(Error::InvalidConfig(alloc::format!("sweep range [{from}, {to}] is empty")));
            }
            Ok(Axis::new(from, to, steps)?.points().collect())
        }
    }
}

fn evaluate(source: &Source, with_brightness: Option<&BrightnessSpec>) -> Result<DesignPoint> {
    let cone = match aperture_stats(source) {
        Ok(c) => Some(c),
        Err(Error::NoRealCone { .. }) => None,
        Err(e) => return Err(e),
    };
    let brightness = match (with_brightness, cone) {
        (Some(spec), Some(_)) => Some(brightness(source, spec)?),
        _ => None,
    };
    Ok(DesignPoint {
        theta_a: source.crystal().cut_angle(),
        lambda_p: source.pump().wavelength(),
        cone,
        brightness,
    })
}

fn sweep(
    sources: Vec<Result<Source>>,
    variable: SweepVariable,
    from: f64,
    to: f64,
    with_brightness: Option<&BrightnessSpec>,
) -> Result<SweepResult> {
    let sources: Vec<Source> = sources.into_iter().collect::<Result<_>>()?;
    let points: Vec<DesignPoint> = par::map(&sources, |s| evaluate(s, with_brightness))
        .into_iter()
        .collect::<Result<_>>()?;
    if points.iter().all(|p| p.cone.is_none()) {
        return Err(Error::EmptyRange);
    }
    Ok(SweepResult {
        variable,
        from,
        to,
        points,
    })
}

/// Cone statistics across cut angles `[from, to]` (rad) in `steps` points.
pub fn sweep_cut_angle(
    source: &Source,
    from: f64,
    to: f64,
    steps: usize,
    with_brightness: Option<&BrightnessSpec>,
) -> Result<SweepResult> {
    let sources = sweep_values(from, to, steps)?
        .into_iter()
        .map(|a| source.with_crystal(source.crystal().with_cut_angle(a)?))
        .collect();
    sweep(sources, SweepVariable::CutAngle, from, to, with_brightness)
}

/// Cone statistics across pump wavelengths `[from, to]` (μm).
pub fn sweep_wavelength(
    source: &Source,
    from: f64,
    to: f64,
    steps: usize,
    with_brightness: Option<&BrightnessSpec>,
) -> Result<SweepResult> {
    let sources = sweep_values(from, to, steps)?
        .into_iter()
        .map(|l| source.with_pump(source.pump().with_wavelength(l)?))
        .collect();
    sweep(sources, SweepVariable::Wavelength, from, to, with_brightness)
}

/// Cone property matched between a cut angle and a pump wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchQuantity {
    /// Mean aperture angle `⟨Θ_AS⟩` (rad).
    #[default]
    ApertureAngle,
    /// Cone radius `r_AS` (rad/μm).
    ConeRadius,
}

impl MatchQuantity {
    fn eval(self, source: &Source) -> Result<f64> {
        match self {
            Self::ApertureAngle => aperture_stats(source).map(|s| s.theta_mean),
            Self::ConeRadius => cone_radius(source),
        }
    }
}

/// Search bracket and stopping rule for [`match_wavelength_to_angle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchSpec {
    pub quantity: MatchQuantity,
    /// Wavelength bracket, μm.
    pub bracket: (f64, f64),
    /// Samples used to check monotonicity across the bracket.
    pub probes: usize,
}

impl Default for MatchSpec {
    fn default() -> Self {
        Self {
            quantity: MatchQuantity::ApertureAngle,
            bracket: (0.40, 0.52),
            probes: 49,
        }
    }
}

/// Pump wavelength at which the source's own cut angle gives the same cone
/// as `theta_target` does at the source's wavelength.
pub fn match_wavelength_to_angle(source: &Source, theta_target: f64, spec: &MatchSpec) -> Result<f64> {
    let q = spec.quantity;
    let target = q.eval(&source.with_crystal(source.crystal().with_cut_angle(theta_target)?)?)?;
    let at = |l: f64| -> Result<f64> { q.eval(&source.with_pump(source.pump().with_wavelength(l)?)?) };
    let (lo, hi) = spec.bracket;
    if !(hi > lo) {
        return Err(Error::InvalidConfig(alloc::format!("empty bracket [{lo}, {hi}]")));
    }
    let probes = Axis::new(lo, hi, spec.probes.max(3))?;
    let mut values = Vec::with_capacity(probes.count());
    for l in probes.points() {
        match at(l) {
            Ok(v) => values.push(v),
            Err(Error::NoRealCone { .. }) => return Err(Error::NonMonotoneBracket { lo, hi }),
            Err(e) => return Err(e),
        }
    }
    let increasing = values[values.len() - 1] > values[0];
    if values
        .windows(2)
        .any(|w| if increasing { w[1] <= w[0] } else { w[1] >= w[0] })
    {
        return Err(Error::NonMonotoneBracket { lo, hi });
    }
    let (vmin, vmax) = if increasing {
        (values[0], values[values.len() - 1])
    } else {
        (values[values.len() - 1], values[0])
    };
    if !(target >= vmin && target <= vmax) {
        return Err(Error::TargetOutOfRange {
            target,
            min: vmin,
            max: vmax,
        });
    }
    let sign = if increasing { 1.0 } else { -1.0 };
    let (mut a, mut b) = (lo, hi);
    let mut mid = 0.5 * (a + b);
    for _ in 0..200 {
        mid = 0.5 * (a + b);
        let r = at(mid)? - target;
        if abs(r) < 1e-12 || b - a < 1e-12 {
            break;
        }
        if sign * r > 0.0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(mid)
}

/// Resolution of the total pair-rate integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrightnessSpec {
    /// Pump coordinate integrated over `±span/W` per axis.
    pub pump_span: f64,
    pub pump_points: usize,
    /// Half-range of `L Δk_z / 2` kept around the ring.
    pub sinc_range: f64,
    /// Samples per π of `L Δk_z / 2`.
    pub samples_per_pi: f64,
    pub azimuths: usize,
}

impl Default for BrightnessSpec {
    fn default() -> Self {
        Self {
            pump_span: 6.0,
            pump_points: 41,
            sinc_range: 120.0,
            samples_per_pi: 8.0,
            azimuths: 128,
        }
    }
}

/// Pair rate at fixed pump transverse vector, `∫d²k_s L² sinc²(LΔk_z/2)`.
///
/// Written about `k_p/2` as `k_{s,i} = k_p/2 ± ρ(cos θ, sin θ)`, with the
/// radial variable `s = ρ²`, in which the mismatch is nearly linear.
fn pair_rate_at(source: &Source, pump: TransverseWaveVector, spec: &BrightnessSpec) -> f64 {
    let d = source.dispersion();
    let k0 = d.daughter_wavenumber();
    let l = source.crystal().length();
    let (a_y, _) = d.optical_axis();
    // Δk_z ≈ (s − s_c)/k0.
    let s_c = k0 * d.pump_wavenumber() * d.index_gap() + k0 * d.axis().beta * a_y * pump.y - 0.25 * pump.norm_sq();
    let half = 2.0 * spec.sinc_range * k0 / l;
    let s_lo = (s_c - half).max(0.0);
    let s_hi = s_c + half;
    if s_hi <= 0.0 {
        return 0.0;
    }
    let ds = PI * 2.0 * k0 / (l * spec.samples_per_pi);
    let n = (((s_hi - s_lo) / ds) as usize).max(16);
    let axis = Axis::new(s_lo, s_hi, n + 1).expect("non-empty radial range");
    let half_pump = pump * 0.5;
    let radial: Vec<f64> = axis
        .points()
        .map(|s| {
            let rho = crate::math::sqrt(s);
            // ks ↔ ki symmetry: θ and θ + π give the same pair.
            0.5 * integrate_periodic(
                |t| {
                    let e = TransverseWaveVector::new(rho * cos(t), rho * sin(t));
                    match d.delta_kz(half_pump + e, half_pump - e) {
                        Some(dk) => mismatch_density(source, TransverseWaveVector::ZERO, dk),
                        None => 0.0,
                    }
                },
                spec.azimuths,
            )
        })
        .collect();
    trapezoid(&radial, axis.step())
}

/// Total pair rate `∬∬ |F|² d²k_s d²k_i` (with `|g α|² = 1`), integrated as
/// `∫ d²k_p |𝔈(k_p)|² ∫ d²k_s |f|²`.
pub fn brightness(source: &Source, spec: &BrightnessSpec) -> Result<f64> {
    let pump = source.pump();
    let x = Axis::centered(0.0, spec.pump_span / pump.waist_x(), spec.pump_points)?;
    let y = Axis::centered(0.0, spec.pump_span / pump.waist_y(), spec.pump_points)?;
    let ys: Vec<f64> = y.points().collect();
    let rows: Vec<f64> = par::map(&ys, |py| {
        let row: Vec<f64> = x
            .points()
            .map(|px| {
                let k = TransverseWaveVector::new(px, *py);
                pump.intensity(k) * pair_rate_at(source, k, spec)
            })
            .collect();
        trapezoid(&row, x.step())
    });
    let total = trapezoid(&rows, y.step());
    if !total.is_finite() {
        return Err(Error::NonFiniteIntegrand { x: 0.0, y: 0.0 });
    }
    Ok(total)
}

/// Coincidence counts `∬ R_c(k_s; k_i) d²k_s` at the idler returned by
/// [`find_peak_idler`], with that idler.
pub fn conditional_brightness(
    source: &Source,
    search: &PeakSearch,
    window_count: usize,
) -> Result<(f64, TransverseWaveVector)> {
    let ki = find_peak_idler(source, search)?;
    Ok((coincidence_counts(source, ki, window_count)?, ki))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(w: f64) -> Source {
        Source::bbo(29.3, w).unwrap()
    }

    #[test]
    fn single_step_is_identity() {
        let s = base(5.0);
        let sw = sweep_cut_angle(&s, s.crystal().cut_angle(), s.crystal().cut_angle(), 1, None).unwrap();
        assert_eq!(sw.points.len(), 1);
        assert_eq!(sw.points[0].cone.unwrap(), aperture_stats(&s).unwrap());
        let sw = sweep_wavelength(&s, 0.40699, 0.40699, 1, None).unwrap();
        assert_eq!(sw.points[0].cone.unwrap(), aperture_stats(&s).unwrap());
    }

    #[test]
    fn radius_grows_with_cut_angle() {
        let s = base(5.0);
        let sw = sweep_cut_angle(&s, 29f64.to_radians(), 34f64.to_radians(), 26, None).unwrap();
        let r: Vec<f64> = sw.points.iter().map(|p| p.cone.unwrap().r_as).collect();
        assert!(r.windows(2).all(|w| w[1] > w[0]));
        let t: Vec<f64> = sw.points.iter().map(|p| p.theta_a).collect();
        assert!(t.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn sweep_end_points() {
        let s = base(5.0);
        let sw = sweep_cut_angle(&s, 29.3f64.to_radians(), 33f64.to_radians(), 38, None).unwrap();
        let first = sw.points[0].cone.unwrap();
        let last = sw.points[37].cone.unwrap();
        assert!(last.theta_mean / first.theta_mean > 2.0);
        assert!(last.dtheta_max / first.dtheta_max < 1.15);
        let mid = aperture_stats(&Source::bbo(31.0, 5.0).unwrap()).unwrap();
        assert!((mid.dtheta_max / 0.024 - 1.0).abs() < 0.2);
        assert!((mid.dtheta_min / 0.013 - 1.0).abs() < 0.2);
    }

    #[test]
    fn no_cone_points_are_flagged() {
        let s = base(35.0);
        let sw = sweep_cut_angle(&s, 20f64.to_radians(), 30f64.to_radians(), 11, None).unwrap();
        assert!(sw.points[0].cone.is_none());
        assert!(sw.points[10].cone.is_some());
        assert!(matches!(
            sweep_cut_angle(&s, 10f64.to_radians(), 20f64.to_radians(), 5, None),
            Err(Error::EmptyRange)
        ));
        assert!(matches!(sweep_cut_angle(&s, 0.5, 0.6, 0, None), Err(Error::EmptyRange)));
    }

    #[test]
    fn wavelength_matching() {
        let s = base(5.0);
        let spec = MatchSpec::default();
        let l31 = match_wavelength_to_angle(&s, 31f64.to_radians(), &spec).unwrap();
        let l33 = match_wavelength_to_angle(&s, 33f64.to_radians(), &spec).unwrap();
        assert!((l31 - 0.436).abs() < 0.01, "{l31}");
        assert!((l33 - 0.483).abs() < 0.015, "{l33}");
        let l = match_wavelength_to_angle(&s, s.crystal().cut_angle(), &spec).unwrap();
        assert!((l - 0.40699).abs() < 1e-6, "{l}");
        // Round trip.
        let target = aperture_stats(&Source::bbo(31.0, 5.0).unwrap()).unwrap().theta_mean;
        let got = aperture_stats(&s.with_pump(s.pump().with_wavelength(l31).unwrap()).unwrap()).unwrap().theta_mean;
        assert!((got - target).abs() < 1e-6);
    }

    #[test]
    fn radius_matching_and_bracket_errors() {
        let s = base(5.0);
        let spec = MatchSpec {
            quantity: MatchQuantity::ConeRadius,
            ..MatchSpec::default()
        };
        let l31 = match_wavelength_to_angle(&s, 31f64.to_radians(), &spec).unwrap();
        let r_target = cone_radius(&Source::bbo(31.0, 5.0).unwrap()).unwrap();
        let r = cone_radius(&s.with_pump(s.pump().with_wavelength(l31).unwrap()).unwrap()).unwrap();
        assert!((r - r_target).abs() < 1e-3);
        // The cone radius saturates near 0.53 μm and cannot reach the 33° cone.
        assert!(matches!(
            match_wavelength_to_angle(&s, 33f64.to_radians(), &spec),
            Err(Error::TargetOutOfRange { .. })
        ));
        let wide = MatchSpec {
            bracket: (0.42, 0.60),
            ..spec
        };
        assert!(matches!(
            match_wavelength_to_angle(&s, 31f64.to_radians(), &wide),
            Err(Error::NonMonotoneBracket { .. })
        ));
    }

    #[test]
    fn brightness_grows_linearly_with_length() {
        let s = base(35.0);
        let spec = BrightnessSpec {
            pump_points: 17,
            azimuths: 64,
            ..BrightnessSpec::default()
        };
        let b1 = brightness(&s, &spec).unwrap();
        let half = s.with_crystal(s.crystal().with_length(500.0).unwrap()).unwrap();
        let b2 = brightness(&half, &spec).unwrap();
        // Long crystals: the sinc window in Δk_z narrows like 1/L.
        assert!((b1 / b2 - 2.0).abs() < 0.1, "{b1} {b2}");
        assert_eq!(b1, brightness(&s, &spec).unwrap());
    }
}
