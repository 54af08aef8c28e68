use std::fs;

use spdc::config::RunConfig;
use spdc::format::{grid_to_string, parse_grid, read_grid, write_grid, Header};
use spdc_core::grid::{AxisKind, SpectrumGrid};
use spdc_core::numeric::{cas_grid, cas_window};
use spdc_core::quadrature::Axis;
use spdc_core::TransverseWaveVector;

fn header(cfg: &RunConfig) -> Header<'_> {
    Header {
        engine: "exact",
        config: cfg,
        extra: vec![],
    }
}

#[test]
fn ones_grid_body() {
    let a = Axis::new(0.0, 1.0, 2).unwrap();
    let g = SpectrumGrid::new(a, a, AxisKind::WaveVector, vec![1.0; 4]).unwrap();
    let cfg = RunConfig::default();
    let text = grid_to_string(&g, &header(&cfg));
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body, ["1.00000000 1.00000000", "1.00000000 1.00000000"]);
    assert!(text.ends_with('\n') && !text.contains('\r'));
    assert!(text.contains("\n# axis-x 0.0 1.0 2\n"));
}

#[test]
fn round_trip_to_printed_precision() {
    let cfg = RunConfig::parse("pump.waist = 35\ncas.idler = 0.033, -0.485\n").unwrap();
    let source = cfg.source().unwrap();
    let ki = TransverseWaveVector::new(0.033, -0.485);
    let g = cas_grid(&source, ki, &cas_window(&source, ki, 65).unwrap()).unwrap().peak_normalized();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.grid");
    write_grid(&g, &header(&cfg), &path).unwrap();
    let back = read_grid(&path).unwrap();
    assert_eq!(back.engine, "exact");
    assert_eq!(back.grid.x_axis(), g.x_axis());
    assert_eq!(back.grid.y_axis(), g.y_axis());
    assert_eq!(back.grid.normalization(), g.normalization());
    for (a, b) in back.grid.values().iter().zip(g.values()) {
        approx::assert_relative_eq!(*a, *b, max_relative = 5e-9);
    }
    // Rewriting what was read reproduces the file.
    let again = grid_to_string(&back.grid, &header(&back.config));
    assert_eq!(again, fs::read_to_string(&path).unwrap());
}

#[test]
fn header_config_reruns_the_job() {
    let cfg = RunConfig::parse(
        "crystal.cut_angle = 33 deg\npump.waist_x = 5\npump.waist_y = 7.5\npump.focus = -250\nengine = analytic\ngrid.count = 64\n",
    )
    .unwrap();
    let a = Axis::new(-1.0, 1.0, 3).unwrap();
    let g = SpectrumGrid::new(a, a, AxisKind::Angle, vec![0.5; 9]).unwrap();
    let parsed = parse_grid(&grid_to_string(&g, &header(&cfg))).unwrap();
    assert_eq!(parsed.config, cfg);
    assert_eq!(parsed.grid.kind(), AxisKind::Angle);
}

#[test]
fn malformed_files_are_rejected() {
    let cfg = RunConfig::default();
    let a = Axis::new(0.0, 1.0, 2).unwrap();
    let g = SpectrumGrid::new(a, a, AxisKind::WaveVector, vec![1.0; 4]).unwrap();
    let text = grid_to_string(&g, &header(&cfg));
    assert!(parse_grid(&text.replace("1.00000000 1.00000000\n1.00000000 1.00000000\n", "1.0 1.0\n")).is_err());
    assert!(parse_grid(&text.replace("# axis-y", "# axis-q")).is_err());
    assert!(parse_grid(&text.replace("1.00000000 1.00000000\n", "1.00000000 x\n")).is_err());
}
