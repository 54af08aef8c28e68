use approx::assert_relative_eq;

use spdc_core::analytic::cone_radius;
use spdc_core::cone::{cone_correlation_grid, ConeWindow, Mismatch};
use spdc_core::grid::Component;
use spdc_core::numeric::{
    as_point, cas_grid, cas_window, joint_density, slice_correlation, AsQuadrature,
};
use spdc_core::quadrature::{trapezoid_2d, Axis};
use spdc_core::{Source, TransverseWaveVector as K};

fn source(w: f64) -> Source {
    Source::bbo(29.3, w).unwrap()
}

#[test]
fn cas_integrates_to_angular_spectrum() {
    for w in [35.0, 185.0] {
        let s = source(w);
        // Ring peak along +k_y.
        let r = (0..=400)
            .map(|k| 0.52 + 0.05 * k as f64 / 400.0)
            .max_by(|a, b| {
                let f = |r: f64| as_point(&s, K::new(0.0, r), &AsQuadrature::default()).unwrap().value;
                f(*a).total_cmp(&f(*b))
            })
            .unwrap();
        let ks = K::new(0.0, r);
        let h = 6.0 / w;
        let over_idlers = trapezoid_2d(|x, y| joint_density(&s, ks, K::new(x, y)), (-h, h), (-r - h, -r + h), 400).unwrap();
        let as_value = as_point(&s, ks, &AsQuadrature::default()).unwrap().value;
        assert_relative_eq!(over_idlers, as_value, max_relative = 0.02);
    }
}

#[test]
fn cas_x_spread_grows_as_waist_shrinks() {
    let mut last = 0.0;
    for w in [185.0, 35.0, 5.0] {
        let s = source(w);
        let ki = K::new(0.0, -cone_radius(&s).unwrap());
        let g = cas_grid(&s, ki, &cas_window(&s, ki, 129).unwrap()).unwrap();
        let width = g.marginal(Component::X).rms_width();
        assert!(width > last, "W={w}: {width} <= {last}");
        last = width;
    }
}

#[test]
fn tight_focus_separates_the_slices() {
    let a = Axis::new(-1.0, 1.0, 161).unwrap();
    let s = source(5.0);
    let x = slice_correlation(&s, Component::X, a, a).unwrap().peak_normalized();
    let y = slice_correlation(&s, Component::Y, a, a).unwrap().peak_normalized();
    assert!(x.relative_l2_distance(&y).unwrap() > 0.1);
}

#[test]
fn slice_band_narrows_with_waist() {
    let a = Axis::new(-1.0, 1.0, 161).unwrap();
    let mut last = f64::INFINITY;
    for w in [5.0, 35.0, 185.0] {
        let area = slice_correlation(&source(w), Component::X, a, a).unwrap().peak_normalized().integral();
        assert!(area < last, "W={w}: {area} >= {last}");
        last = area;
    }
}

#[test]
fn cone_grid_mirror_identity() {
    let window = ConeWindow::default();
    let np = window.theta_plus.count();
    let nm = window.theta_minus.count();
    for w in [185.0, 5.0] {
        let c = cone_correlation_grid(&source(w), &window, Mismatch::Exact).unwrap();
        let g = &c.grid;
        for j in 0..np {
            for k in 0..nm {
                let v = g.value(j, k);
                // k_x mirror combined with relabelling of the pair.
                let m = g.value(np - 1 - j, nm - 1 - k);
                assert!((v - m).abs() <= 1e-9 * v.max(m) + 1e-15, "({j}, {k}): {v} {m}");
                // Exchange of signal and idler after the mirror.
                let jj = (180 + np - 1 - j) % (np - 1);
                let e = g.value(jj, k);
                assert!((v - e).abs() <= 1e-9 * v.max(e) + 1e-15, "({j}, {k}) vs ({jj}, {k}): {v} {e}");
            }
        }
    }
}
