//! Exact engine: the joint density `|F(k_s, k_i)|²` from the exact
//! dispersion relations, and the spectra obtained from it by quadrature.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::analytic::{gauss_cas_params, WidthModel};
use crate::grid::{AxisKind, Component, SpectrumGrid};
use crate::math::{abs, cos, sin, sq};
use crate::par;
use crate::quadrature::{integrate_2d, iterations_for, refine_peak_1d, Axis, QuadratureSpec};
use crate::{Error, Result, Source, TransverseWaveVector};

/// `sin x / x` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if abs(x) < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        sin(x) / x
    }
}

/// `L sinc(L Δk_z / 2) exp(i L Δk_z / 2)`.
pub fn phase_matching(delta_kz: f64, length: f64) -> Complex64 {
    let half = 0.5 * length * delta_kz;
    Complex64::from_polar(length * sinc(half), half)
}

/// `|f|² = L² sinc²(L Δk_z / 2)`.
pub fn phase_matching_sq(delta_kz: f64, length: f64) -> f64 {
    sq(length * sinc(0.5 * length * delta_kz))
}

/// The joint amplitude `𝔈(k_s + k_i) f(Δk_z)`; zero for evanescent waves.
pub fn joint_amplitude(source: &Source, signal: TransverseWaveVector, idler: TransverseWaveVector) -> Complex64 {
    let d = source.dispersion();
    match d.delta_kz(signal, idler) {
        Some(dk) => source.pump().angular_amplitude(signal + idler) * phase_matching(dk, d.length()),
        None => Complex64::new(0.0, 0.0),
    }
}

/// `|𝔈(k_s + k_i)|² |f(Δk_z)|²`, the conditional angular spectrum integrand.
/// Zero when any of the three waves is evanescent.
#[inline]
pub fn joint_density(source: &Source, signal: TransverseWaveVector, idler: TransverseWaveVector) -> f64 {
    let d = source.dispersion();
    match d.delta_kz(signal, idler) {
        Some(dk) => mismatch_density(source, signal + idler, dk),
        None => 0.0,
    }
}

/// `|𝔈(q)|² |f(Δk_z)|²` for a given pump transverse vector and mismatch.
#[inline]
pub fn mismatch_density(source: &Source, pump: TransverseWaveVector, delta_kz: f64) -> f64 {
    source.pump().intensity(pump) * phase_matching_sq(delta_kz, source.crystal().length())
}

/// Signal window for a conditional spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasWindow {
    pub x: Axis,
    pub y: Axis,
    /// False when the sample spacing exceeds `1/(8σ)` along either axis.
    pub resolved: bool,
}

impl CasWindow {
    pub fn new(x: Axis, y: Axis, sigma: (f64, f64)) -> Self {
        let resolved = x.step() <= 1.0 / (8.0 * sigma.0) && y.step() <= 1.0 / (8.0 * sigma.1);
        Self { x, y, resolved }
    }
}

/// Half-widths `6/σ_x`, `6/σ_y` of the analytic Gaussian at `k_s = −k_i`.
pub fn cas_half_widths(source: &Source, idler: TransverseWaveVector) -> (f64, f64) {
    let p = gauss_cas_params(source, -idler, WidthModel::Waist);
    (6.0 / p.sigma_x, 6.0 / p.sigma_y)
}

/// Window of `count × count` samples centred on `−k_i`, spanning six
/// analytic widths in each direction.
pub fn cas_window(source: &Source, idler: TransverseWaveVector, count: usize) -> Result<CasWindow> {
    let p = gauss_cas_params(source, -idler, WidthModel::Waist);
    let x = Axis::centered(-idler.x, 6.0 / p.sigma_x, count)?;
    let y = Axis::centered(-idler.y, 6.0 / p.sigma_y, count)?;
    Ok(CasWindow::new(x, y, (p.sigma_x, p.sigma_y)))
}

/// Conditional angular spectrum `R_c(k_s; k_i)` sampled on `window`.
pub fn cas_grid(source: &Source, idler: TransverseWaveVector, window: &CasWindow) -> Result<SpectrumGrid> {
    SpectrumGrid::from_fn(window.x, window.y, AxisKind::WaveVector, |x, y| {
        joint_density(source, TransverseWaveVector::new(x, y), idler)
    })
}

/// `∬ R_c(k_s; k_i) d²k_s` over the automatic window.
pub fn coincidence_counts(source: &Source, idler: TransverseWaveVector, count: usize) -> Result<f64> {
    let w = cas_window(source, idler, count)?;
    Ok(integrate_window(&w, |ks| joint_density(source, ks, idler)))
}

fn integrate_window<F: Fn(TransverseWaveVector) -> f64>(w: &CasWindow, f: F) -> f64 {
    let rows: Vec<f64> = w
        .y
        .points()
        .map(|y| {
            let row: Vec<f64> = w.x.points().map(|x| f(TransverseWaveVector::new(x, y))).collect();
            crate::quadrature::trapezoid(&row, w.x.step())
        })
        .collect();
    crate::quadrature::trapezoid(&rows, w.y.step())
}

/// Settings of the angular-spectrum quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsQuadrature {
    pub spec: QuadratureSpec,
    /// The pump coordinate `k_s + k_i` is integrated over `±span/W` per axis.
    pub pump_span: f64,
    /// Idler components beyond `±clip · n_o ω/2c` are discarded.
    pub idler_clip: f64,
}

impl Default for AsQuadrature {
    fn default() -> Self {
        Self {
            spec: QuadratureSpec::default(),
            pump_span: 6.0,
            idler_clip: 1.2,
        }
    }
}

/// One angular-spectrum sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsSample {
    pub value: f64,
    pub converged: bool,
}

/// `R_s(k_s) = ∫ d²k_i |F|²`, integrated in the pump coordinate
/// `k_p = k_s + k_i` where the Gaussian pump confines the integrand.
pub fn as_point(source: &Source, signal: TransverseWaveVector, quad: &AsQuadrature) -> Result<AsSample> {
    let pump = source.pump();
    let hx = quad.pump_span / pump.waist_x();
    let hy = quad.pump_span / pump.waist_y();
    let clip = quad.idler_clip * source.dispersion().daughter_wavenumber();
    let mut spec = quad.spec;
    // Zero to working precision relative to the largest attainable value.
    let scale = sq(source.crystal().length()) * crate::math::TAU / (pump.waist_x() * pump.waist_y());
    spec.abs_tol = spec.abs_tol.max(1e-12 * scale);
    let r = integrate_2d(
        |px, py| {
            let idler = TransverseWaveVector::new(px - signal.x, py - signal.y);
            if abs(idler.x) > clip || abs(idler.y) > clip {
                0.0
            } else {
                joint_density(source, signal, idler)
            }
        },
        (-hx, hx),
        (-hy, hy),
        &spec,
    )?;
    Ok(AsSample {
        value: r.value.max(0.0),
        converged: r.converged,
    })
}

/// Angular spectrum on a grid, with the indices `(i, j)` of samples whose
/// quadrature did not converge.
#[derive(Debug, Clone, PartialEq)]
pub struct AsGrid {
    pub grid: SpectrumGrid,
    pub unconverged: Vec<(usize, usize)>,
}

pub fn as_grid(source: &Source, x: Axis, y: Axis, quad: &AsQuadrature) -> Result<AsGrid> {
    quad.spec.validate()?;
    let samples = par::rows(y.count(), x.count(), |i, j| {
        as_point(source, TransverseWaveVector::new(x.point(i), y.point(j)), quad)
    });
    let mut values = Vec::with_capacity(samples.len());
    let mut unconverged = Vec::new();
    for (k, s) in samples.into_iter().enumerate() {
        let s = s?;
        if !s.converged {
            unconverged.push((k % x.count(), k / x.count()));
        }
        values.push(s.value);
    }
    Ok(AsGrid {
        grid: SpectrumGrid::new(x, y, AxisKind::WaveVector, values)?,
        unconverged,
    })
}

/// `|F|²` on the `(k_{a,s}, k_{a,i})` plane with the other components of
/// both photons pinned to zero. Signal along x, idler along y.
pub fn slice_correlation(source: &Source, component: Component, signal: Axis, idler: Axis) -> Result<SpectrumGrid> {
    let pin = |a: f64| match component {
        Component::X => TransverseWaveVector::new(a, 0.0),
        Component::Y => TransverseWaveVector::new(0.0, a),
    };
    SpectrumGrid::from_fn(signal, idler, AxisKind::WaveVector, |s, i| {
        joint_density(source, pin(s), pin(i))
    })
}

/// Parameters of [`find_peak_idler`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakSearch {
    /// Radial scan range along `−k_y`, rad/μm.
    pub radius_min: f64,
    pub radius_max: f64,
    pub coarse_points: usize,
    /// Final resolution of the refinement, rad/μm.
    pub resolution: f64,
    /// Signal-window samples per axis for each counts evaluation.
    pub window_count: usize,
}

impl PeakSearch {
    /// Scan from the axis out to twice the cone radius.
    pub fn around_cone(cone_radius: f64) -> Self {
        Self {
            radius_min: 0.0,
            radius_max: 2.0 * cone_radius.max(0.05),
            coarse_points: 41,
            resolution: 1e-3,
            window_count: 64,
        }
    }
}

/// Idler on the `−k_y` axis maximising the coincidence counts over radius.
///
/// The counts at `k_i` equal the angular spectrum at `k_i`, which along the
/// ring grows from the `−k_y` axis towards `k_y → 0` (by about 1% at
/// `W = 185 μm`, 20% at `W = 35 μm`). Over the open half-plane `k_y < 0` the
/// supremum therefore lies on its edge, so the search is restricted to the
/// symmetry axis: a coarse radial scan followed by 1D refinement.
pub fn find_peak_idler(source: &Source, search: &PeakSearch) -> Result<TransverseWaveVector> {
    if !(search.radius_max > search.radius_min && search.radius_min >= 0.0) || search.coarse_points < 5 {
        return Err(Error::InvalidConfig(format!(
            "bad peak search range [{}, {}] with {} points",
            search.radius_min, search.radius_max, search.coarse_points
        )));
    }
    let counts = |r: f64| coincidence_counts(source, TransverseWaveVector::new(0.0, -r), search.window_count);
    let axis = Axis::new(search.radius_min, search.radius_max, search.coarse_points)?;
    let radii: Vec<f64> = axis.points().collect();
    let landscape: Vec<f64> = par::map(&radii, |r| counts(*r)).into_iter().collect::<Result<_>>()?;
    let mut sorted = landscape.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let max = sorted[sorted.len() - 1];
    if !(max >= 1.05 * median) {
        return Err(Error::DegeneratePeak { ratio: max / median });
    }
    let k = (0..landscape.len()).max_by(|a, b| landscape[*a].total_cmp(&landscape[*b])).unwrap_or(0);
    let step = axis.step();
    let iters = iterations_for(step, search.resolution);
    let refined = refine_peak_1d(
        |r| {
            if r <= 0.0 {
                return f64::NEG_INFINITY;
            }
            counts(r).unwrap_or(f64::NEG_INFINITY)
        },
        radii[k],
        step,
        iters,
    );
    if !refined.converged {
        return Err(Error::PeakNotConverged);
    }
    Ok(TransverseWaveVector::new(0.0, -refined.point))
}

/// Counts around a ring of idler vectors `r (cos φ, sin φ)`, for inspecting
/// the azimuthal landscape behind [`find_peak_idler`].
pub fn counts_around_ring(source: &Source, radius: f64, azimuths: &[f64], count: usize) -> Result<Vec<f64>> {
    par::map(azimuths, |phi| {
        coincidence_counts(source, TransverseWaveVector::new(radius * cos(*phi), radius * sin(*phi)), count)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::{CrystalConfig, Sellmeier, SellmeierSet};
    use crate::math::PI;
    use crate::pump::PumpConfig;

    fn standard(w: f64) -> Source {
        Source::bbo(29.3, w).unwrap()
    }

    #[test]
    fn phase_matching_values() {
        assert_eq!(phase_matching(0.0, 1000.0), Complex64::new(1000.0, 0.0));
        assert!(phase_matching(2.0 * PI / 1000.0, 1000.0).norm() < 1e-12);
        let f = phase_matching(PI / 1000.0, 1000.0);
        assert!(f.re.abs() < 1e-10);
        assert!((f.im - 2000.0 / PI).abs() < 1e-9);
        assert!((f.im - 636.6).abs() < 0.1);
        for dk in [-0.3, -0.01, 0.002, 0.05, 1.0] {
            assert!(phase_matching(dk, 1000.0).norm() <= 1000.0);
            let r = phase_matching_sq(dk, 1000.0);
            assert!((r - phase_matching(dk, 1000.0).norm_sqr()).abs() <= 1e-9 * (1.0 + r));
        }
    }

    #[test]
    fn sinc_is_smooth_near_zero() {
        for x in [1e-6, 5e-5, 9.9e-5, 1.01e-4, 1e-3] {
            assert!((sinc(x) - sin(x) / x).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_matching_and_on_axis_pump() {
        // n_eff = n_o(2λ) with no dispersion: collinear exact matching.
        let set = SellmeierSet {
            ordinary: Sellmeier::constant(2.25),
            extraordinary: Sellmeier::constant(2.25),
        };
        let c = CrystalConfig::new(set, 0.5, 1000.0).unwrap();
        let s = Source::new(c, PumpConfig::symmetric(0.4, 35.0).unwrap()).unwrap();
        assert!(s.dispersion().delta_kz(TransverseWaveVector::ZERO, TransverseWaveVector::ZERO).unwrap().abs() < 1e-12);
        let std = standard(185.0);
        let d = std.dispersion();
        let ks = TransverseWaveVector::new(0.1, 0.3);
        let expect = d.axis().n_eff * d.pump_wavenumber() - 2.0 * d.kz_ordinary(ks.norm()).value;
        assert!((d.delta_kz(ks, -ks).unwrap() - expect).abs() < 1e-12);
        // (0, ±0.492) sits close to the cone; compare with a far-off pair.
        let near = d.delta_kz(TransverseWaveVector::new(0.0, 0.492), TransverseWaveVector::new(0.0, -0.492)).unwrap();
        let far = d.delta_kz(TransverseWaveVector::ZERO, TransverseWaveVector::ZERO).unwrap();
        assert!(near.abs() < 0.01 && near.abs() < 0.2 * far.abs(), "{near} {far}");
    }

    #[test]
    fn evanescent_density_vanishes() {
        let s = standard(35.0);
        let k0 = s.dispersion().daughter_wavenumber();
        let far = TransverseWaveVector::new(1.01 * k0, 0.0);
        assert_eq!(joint_density(&s, far, TransverseWaveVector::ZERO), 0.0);
        assert_eq!(joint_density(&s, TransverseWaveVector::ZERO, far), 0.0);
        assert_eq!(joint_amplitude(&s, far, -far), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn anti_collinear_is_local_max() {
        let s = standard(1000.0);
        let r = crate::analytic::cone_radius(&s).unwrap();
        let ks = TransverseWaveVector::new(0.0, r);
        let axis = Axis::centered(0.0, 0.01, 21).unwrap();
        let grid = SpectrumGrid::from_fn(axis, Axis::centered(-r, 0.01, 21).unwrap(), AxisKind::WaveVector, |x, y| {
            joint_density(&s, ks, TransverseWaveVector::new(x, y))
        })
        .unwrap();
        let (i, j) = grid.argmax();
        assert!(i.abs_diff(10) <= 1 && j.abs_diff(10) <= 1, "{i} {j}");
    }

    #[test]
    fn amplitude_and_density_agree() {
        let s = Source::new(
            *standard(35.0).crystal(),
            PumpConfig::new(0.40699, 35.0, 20.0, 250.0).unwrap(),
        )
        .unwrap();
        let ks = TransverseWaveVector::new(0.02, 0.5);
        let ki = TransverseWaveVector::new(-0.01, -0.49);
        let a = joint_amplitude(&s, ks, ki).norm_sqr();
        let b = joint_density(&s, ks, ki);
        assert!((a - b).abs() < 1e-12 * b);
    }

    #[test]
    fn plane_wave_cas_is_local() {
        let s = standard(1e4);
        let ki = TransverseWaveVector::new(0.0, -0.54);
        let w = cas_window(&s, ki, 65).unwrap();
        let g = cas_grid(&s, ki, &w).unwrap().peak_normalized();
        let (i, j) = g.argmax();
        let p = g.point(i, j);
        assert!((p - (-ki)).norm() < 3.0 * w.x.step().max(w.y.step()));
        // Beyond a few pixels the momentum-conserving Gaussian has died off.
        let wide = CasWindow::new(
            Axis::centered(0.0, 0.01, 65).unwrap(),
            Axis::centered(0.54, 0.01, 65).unwrap(),
            (1.0, 1.0),
        );
        let g = cas_grid(&s, ki, &wide).unwrap().peak_normalized();
        let (ci, cj) = g.argmax();
        for j in 0..65usize {
            for i in 0..65usize {
                if i.abs_diff(ci) > 4 || j.abs_diff(cj) > 4 {
                    assert!(g.value(i, j) < 1e-3);
                }
            }
        }
    }

    #[test]
    fn window_resolution_flag() {
        let s = standard(185.0);
        let ki = TransverseWaveVector::new(0.0, -0.5);
        assert!(cas_window(&s, ki, 129).unwrap().resolved);
        assert!(!cas_window(&s, ki, 16).unwrap().resolved);
    }

    #[test]
    fn slice_y_band() {
        let s = standard(185.0);
        let a = Axis::centered(0.0, 0.8, 161).unwrap();
        let g = slice_correlation(&s, Component::Y, a, a).unwrap();
        let (i, j) = g.argmax();
        let (ks, ki) = (a.point(i), a.point(j));
        assert!((ks + ki).abs() < 0.02, "{ks} {ki}");
        assert!((ki.abs() - 0.5).abs() < 0.08, "{ki}");
    }
}
