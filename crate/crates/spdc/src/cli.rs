//! `spdc` command-line front end.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use spdc_core::analytic::{
    aperture_stats, as_analytic_grid, cas_analytic, cas_analytic_grid, cone_radius, AsForm, WidthModel,
};
use spdc_core::cone::{cone_correlation_grid, cone_marginals, ConeWindow, Mismatch};
use spdc_core::grid::{Component, Marginal1D, SpectrumGrid};
use spdc_core::numeric::{as_grid, cas_grid, cas_window, find_peak_idler, joint_density, slice_correlation, PeakSearch};
use spdc_core::optimize::{
    match_wavelength_to_angle, sweep_cut_angle, sweep_wavelength, BrightnessSpec, MatchQuantity, MatchSpec,
    SweepResult, SweepVariable,
};
use spdc_core::TransverseWaveVector;

use crate::config::{parse_angle, parse_length, parse_wavevector, Engine, RunConfig};
use crate::format::{write_grid, write_table, Header, Table};

#[derive(Debug, Parser)]
#[command(name = "spdc", version, about = "Angular spectra of type-I SPDC pumped by a focused Gaussian beam")]
pub struct Cli {
    /// Run configuration file (`section.key = value` lines).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub engine: Option<EngineArg>,
    /// Output directory.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Override a config key, e.g. `--set pump.waist=35um`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Exact,
    Analytic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conditional angular spectrum for a fixed idler.
    Cas(CasArgs),
    /// Single-photon angular spectrum.
    As(AsArgs),
    /// Joint density on a (signal, idler) component slice.
    Slice(SliceArgs),
    /// Azimuthal pair correlation on the cone.
    Cone(ConeArgs),
    /// Cone radius and aperture angles.
    Aperture,
    /// Cone statistics across cut angles.
    SweepAngle(SweepArgs),
    /// Cone statistics across pump wavelengths.
    SweepLambda(SweepArgs),
    /// Pump wavelength equivalent to a cut angle.
    MatchLambda(MatchArgs),
    /// Idler wave vector maximising the coincidence counts.
    PeakIdler,
}

#[derive(Debug, Args)]
pub struct CasArgs {
    /// Idler wave vector `x,y` in rad/μm. Defaults to `cas.idler`, then to the peak idler.
    #[arg(long, allow_hyphen_values = true)]
    pub idler: Option<String>,
    #[arg(long, value_enum, default_value_t = WidthArg::Waist)]
    pub width_model: WidthArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WidthArg {
    Waist,
    Curvature,
}

#[derive(Debug, Args)]
pub struct AsArgs {
    /// Analytic form; ignored by the exact engine.
    #[arg(long, value_enum, default_value_t = FormArg::Closed)]
    pub form: FormArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Closed,
    Semi,
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    #[arg(long, value_enum)]
    pub axis: AxisArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    X,
    Y,
}

#[derive(Debug, Args)]
pub struct ConeArgs {
    /// Use the first-order mismatch instead of the exact one.
    #[arg(long)]
    pub taylor: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Start: an angle (`29.3`, `29.3deg`, `0.51rad`) or a wavelength (`0.40699`, `406.99nm`).
    #[arg(long, allow_hyphen_values = true)]
    pub from: String,
    #[arg(long, allow_hyphen_values = true)]
    pub to: String,
    #[arg(long)]
    pub steps: usize,
    /// Also integrate the total pair rate at every point (slow).
    #[arg(long)]
    pub brightness: bool,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    /// Target cut angle.
    #[arg(long, allow_hyphen_values = true)]
    pub angle: String,
    #[arg(long, value_enum, default_value_t = QuantityArg::Aperture)]
    pub quantity: QuantityArg,
    /// Wavelength bracket `lo,hi` in μm.
    #[arg(long)]
    pub bracket: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuantityArg {
    Aperture,
    Radius,
}

/// Failure that maps to exit code 3.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct NotConverged(pub String);

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Exit code for an error returned by [`run`].
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.is::<NotConverged>() {
            return EXIT_NUMERIC;
        }
        if let Some(e) = cause.downcast_ref::<spdc_core::Error>() {
            return match e {
                spdc_core::Error::NonFiniteIntegrand { .. }
                | spdc_core::Error::DegeneratePeak { .. }
                | spdc_core::Error::PeakNotConverged => EXIT_NUMERIC,
                _ => EXIT_CONFIG,
            };
        }
    }
    EXIT_CONFIG
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

fn load_config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            RunConfig::parse(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => RunConfig::default(),
    };
    cfg = cfg.with_overrides(cli.set.iter().map(String::as_str))?;
    if let Some(e) = cli.engine {
        cfg.engine = match e {
            EngineArg::Exact => Engine::Exact,
            EngineArg::Analytic => Engine::Analytic,
        };
    }
    if let Some(o) = &cli.output {
        cfg.output = o.clone();
    }
    Ok(cfg)
}

fn out_path(cfg: &RunConfig, name: &str) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(&cfg.output).with_context(|| format!("creating {}", cfg.output.display()))?;
    Ok(cfg.output.join(name))
}

fn header<'a>(cfg: &'a RunConfig, engine: &'a str, extra: Vec<(String, String)>) -> Header<'a> {
    Header {
        engine,
        config: cfg,
        extra,
    }
}

fn sci(v: f64) -> String {
    format!("{v:.6e}")
}

/// Mean radius of the samples at or above `1/e` of the maximum, weighted by value.
pub fn ring_radius(grid: &SpectrumGrid) -> f64 {
    let level = grid.max() * (-1.0f64).exp();
    let (mut num, mut den) = (0.0, 0.0);
    for j in 0..grid.y_axis().count() {
        for i in 0..grid.x_axis().count() {
            let v = grid.value(i, j);
            if v >= level {
                num += v * grid.point(i, j).norm();
                den += v;
            }
        }
    }
    num / den
}

fn widths(grid: &SpectrumGrid) -> (Option<f64>, Option<f64>) {
    let w = |m: Marginal1D| m.peak_normalized().crossings((-1.0f64).exp()).map(|(a, b)| b - a);
    (w(grid.marginal(Component::X)), w(grid.marginal(Component::Y)))
}

fn opt(v: Option<f64>) -> String {
    v.map(sci).unwrap_or_else(|| "none".into())
}

pub fn run(cli: &Cli) -> anyhow::Result<String> {
    let mut cfg = load_config(cli)?;
    let source = cfg.source()?;
    let engine = cfg.engine;
    match &cli.command {
        Command::Cas(args) => {
            let idler = match (&args.idler, cfg.idler) {
                (Some(text), _) => parse_wavevector("--idler", text)?,
                (None, Some(k)) => k,
                (None, None) => find_peak_idler(&source, &PeakSearch::around_cone(cone_radius(&source)?))?,
            };
            cfg.idler = Some(idler);
            let window = cas_window(&source, idler, cfg.cas_count)?;
            let model = match args.width_model {
                WidthArg::Waist => WidthModel::Waist,
                WidthArg::Curvature => WidthModel::CurvatureCorrected,
            };
            let grid = match engine {
                Engine::Exact => cas_grid(&source, idler, &window)?,
                Engine::Analytic => cas_analytic_grid(&source, idler, &window, model)?,
            }
            .peak_normalized();
            let mut extra = vec![("idler".into(), format!("{:?} {:?}", idler.x, idler.y))];
            if engine == Engine::Analytic {
                extra.push(("width-model".into(), format!("{:?}", model).to_lowercase()));
            }
            let path = out_path(&cfg, &format!("cas_{}.grid", engine.tag()))?;
            write_grid(&grid, &header(&cfg, engine.tag(), extra), &path)?;
            let p = grid.argmax_point();
            let (wx, wy) = widths(&grid);
            Ok(format!(
                "cas {}: idler ({}, {}) peak ({}, {}) width_x {} width_y {} -> {}",
                engine.tag(),
                sci(idler.x),
                sci(idler.y),
                sci(p.x),
                sci(p.y),
                opt(wx),
                opt(wy),
                path.display()
            ))
        }
        Command::As(args) => {
            let axis = cfg.as_axis()?;
            let (grid, unconverged) = match engine {
                Engine::Exact => {
                    let g = as_grid(&source, axis, axis, &cfg.as_quadrature())?;
                    (g.grid, g.unconverged.len())
                }
                Engine::Analytic => {
                    let form = match args.form {
                        FormArg::Closed => AsForm::ClosedForm,
                        FormArg::Semi => AsForm::SemiAnalytic { n_theta: 256 },
                    };
                    (as_analytic_grid(&source, axis, axis, form)?, 0)
                }
            };
            let grid = grid.peak_normalized();
            let mut extra = vec![("unconverged".into(), unconverged.to_string())];
            if engine == Engine::Analytic {
                extra.push(("form".into(), format!("{:?}", args.form).to_lowercase()));
            }
            let path = out_path(&cfg, &format!("as_{}.grid", engine.tag()))?;
            write_grid(&grid, &header(&cfg, engine.tag(), extra), &path)?;
            if unconverged > 0 {
                return Err(NotConverged(format!(
                    "{unconverged} angular-spectrum samples did not converge (written to {})",
                    path.display()
                ))
                .into());
            }
            Ok(format!(
                "as {}: r_as {} (analytic {}) -> {}",
                engine.tag(),
                sci(ring_radius(&grid)),
                sci(cone_radius(&source)?),
                path.display()
            ))
        }
        Command::Slice(args) => {
            let axis = cfg.as_axis()?;
            let component = match args.axis {
                AxisArg::X => Component::X,
                AxisArg::Y => Component::Y,
            };
            let grid = match engine {
                Engine::Exact => slice_correlation(&source, component, axis, axis)?,
                Engine::Analytic => {
                    let pin = |a: f64| match component {
                        Component::X => TransverseWaveVector::new(a, 0.0),
                        Component::Y => TransverseWaveVector::new(0.0, a),
                    };
                    SpectrumGrid::from_fn(axis, axis, spdc_core::grid::AxisKind::WaveVector, |s, i| {
                        cas_analytic(&source, pin(s), pin(i), WidthModel::Waist)
                    })?
                }
            }
            .peak_normalized();
            let name = format!("slice_{}_{}.grid", if component == Component::X { "x" } else { "y" }, engine.tag());
            let path = out_path(&cfg, &name)?;
            write_grid(&grid, &header(&cfg, engine.tag(), vec![]), &path)?;
            let p = grid.argmax_point();
            Ok(format!(
                "slice {}: peak (signal {}, idler {}) -> {}",
                engine.tag(),
                sci(p.x),
                sci(p.y),
                path.display()
            ))
        }
        Command::Cone(args) => {
            let (mismatch, tag) = if args.taylor || engine == Engine::Analytic {
                (Mismatch::Taylor, "taylor")
            } else {
                (Mismatch::Exact, "exact")
            };
            let corr = cone_correlation_grid(&source, &ConeWindow::default(), mismatch)?;
            let extra = vec![
                ("mismatch".into(), tag.to_string()),
                ("radius".into(), format!("{:?}", corr.radius)),
            ];
            let path = out_path(&cfg, &format!("cone_{tag}.grid"))?;
            write_grid(&corr.grid, &header(&cfg, engine.tag(), extra.clone()), &path)?;
            let (mp, mm) = cone_marginals(&corr);
            let table = marginal_table(&mp, &mm);
            let tpath = out_path(&cfg, &format!("cone_marginals_{tag}.tsv"))?;
            write_table(&table, &header(&cfg, engine.tag(), extra), &tpath)?;
            let (_, tm) = corr.argmax();
            let fwhm = mm.crossings(0.5).map(|(a, b)| (b - a).to_degrees());
            Ok(format!(
                "cone {tag}: radius {} theta_minus_peak {:.3} deg fwhm {} deg theta_plus_max/min {} -> {}",
                sci(corr.radius),
                tm.to_degrees(),
                fwhm.map(|v| format!("{v:.3}")).unwrap_or_else(|| "none".into()),
                sci(mp.max() / mp.min()),
                path.display()
            ))
        }
        Command::Aperture => {
            let s = aperture_stats(&source)?;
            let table = Table {
                columns: vec![
                    "r_as", "sigma_as", "radial_width", "theta_mean", "dtheta_max", "dtheta_min",
                ],
                rows: vec![vec![
                    s.r_as,
                    s.sigma_as_inv_sq.powf(-0.5),
                    s.radial_width,
                    s.theta_mean,
                    s.dtheta_max,
                    s.dtheta_min,
                ]],
            };
            let path = out_path(&cfg, "aperture.tsv")?;
            write_table(&table, &header(&cfg, "analytic", vec![]), &path)?;
            Ok(format!(
                "aperture: r_as {} theta_mean {} dtheta_max {} dtheta_min {} -> {}",
                sci(s.r_as),
                sci(s.theta_mean),
                sci(s.dtheta_max),
                sci(s.dtheta_min),
                path.display()
            ))
        }
        Command::SweepAngle(args) => {
            let from = parse_angle("--from", &args.from)?;
            let to = parse_angle("--to", &args.to)?;
            let spec = BrightnessSpec::default();
            let sweep = sweep_cut_angle(&source, from, to, args.steps, args.brightness.then_some(&spec))?;
            finish_sweep(&cfg, &sweep, "sweep_angle.tsv")
        }
        Command::SweepLambda(args) => {
            let from = parse_length("--from", &args.from)?;
            let to = parse_length("--to", &args.to)?;
            let spec = BrightnessSpec::default();
            let sweep = sweep_wavelength(&source, from, to, args.steps, args.brightness.then_some(&spec))?;
            finish_sweep(&cfg, &sweep, "sweep_lambda.tsv")
        }
        Command::MatchLambda(args) => {
            let angle = parse_angle("--angle", &args.angle)?;
            let mut spec = MatchSpec {
                quantity: match args.quantity {
                    QuantityArg::Aperture => MatchQuantity::ApertureAngle,
                    QuantityArg::Radius => MatchQuantity::ConeRadius,
                },
                ..MatchSpec::default()
            };
            if let Some(b) = &args.bracket {
                let (lo, hi) = b.split_once(',').context("--bracket takes lo,hi")?;
                spec.bracket = (parse_length("--bracket", lo)?, parse_length("--bracket", hi)?);
                if !(spec.bracket.1 > spec.bracket.0) {
                    bail!("--bracket must satisfy lo < hi");
                }
            }
            let lambda = match_wavelength_to_angle(&source, angle, &spec)?;
            Ok(format!(
                "match-lambda: cut {:.4} deg at {} um is matched by {lambda:.6} um at {:.4} deg",
                angle.to_degrees(),
                source.pump().wavelength(),
                source.crystal().cut_angle().to_degrees()
            ))
        }
        Command::PeakIdler => {
            let ki = find_peak_idler(&source, &PeakSearch::around_cone(cone_radius(&source)?))?;
            let peak = joint_density(&source, -ki, ki);
            Ok(format!("peak-idler: ({}, {}) anti-collinear density {}", sci(ki.x), sci(ki.y), sci(peak)))
        }
    }
}

fn marginal_table(plus: &Marginal1D, minus: &Marginal1D) -> Table {
    let mut rows = Vec::new();
    let n = plus.axis().count().max(minus.axis().count());
    let cell = |m: &Marginal1D, k: usize| -> (f64, f64) {
        if k < m.axis().count() {
            (m.axis().point(k).to_degrees(), m.values()[k])
        } else {
            (f64::NAN, f64::NAN)
        }
    };
    for k in 0..n {
        let (a, b) = cell(plus, k);
        let (c, d) = cell(minus, k);
        rows.push(vec![a, b, c, d]);
    }
    Table {
        columns: vec!["theta_plus_deg", "marginal_plus", "theta_minus_deg", "marginal_minus"],
        rows,
    }
}

fn finish_sweep(cfg: &RunConfig, sweep: &SweepResult, name: &str) -> anyhow::Result<String> {
    let nan = f64::NAN;
    let rows: Vec<Vec<f64>> = sweep
        .points
        .iter()
        .map(|p| {
            let c = p.cone;
            vec![
                p.theta_a.to_degrees(),
                p.lambda_p,
                c.map_or(nan, |c| c.r_as),
                c.map_or(nan, |c| c.theta_mean),
                c.map_or(nan, |c| c.dtheta_max),
                c.map_or(nan, |c| c.dtheta_min),
                p.brightness.unwrap_or(nan),
            ]
        })
        .collect();
    let table = Table {
        columns: vec![
            "theta_a_deg", "lambda_p_um", "r_as", "theta_mean", "dtheta_max", "dtheta_min", "brightness",
        ],
        rows,
    };
    let path = out_path(cfg, name)?;
    let variable = match sweep.variable {
        SweepVariable::CutAngle => "cut-angle",
        SweepVariable::Wavelength => "wavelength",
    };
    let extra = vec![("sweep".into(), format!("{variable} {:?} {:?} {}", sweep.from, sweep.to, sweep.points.len()))];
    write_table(&table, &header(cfg, "analytic", extra), &path)?;
    let without = sweep.points.iter().filter(|p| p.cone.is_none()).count();
    Ok(format!(
        "{}: {} rows ({} without a cone) -> {}",
        name.trim_end_matches(".tsv").replace('_', "-"),
        sweep.points.len(),
        without,
        path.display()
    ))
}
