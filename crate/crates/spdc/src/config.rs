//! Run configuration: flat `section.key = value` text.
//!
//! ```text
//! # comment
//! crystal.sellmeier = bbo-eimerl
//! crystal.cut_angle = 29.3 deg
//! crystal.length = 1 mm
//! pump.wavelength = 406.99 nm
//! pump.waist = 185 um
//! engine = exact
//! ```
//!
//! Bare angles are degrees, bare lengths and wavelengths μm. [`RunConfig::echo`]
//! writes every key in canonical units and parses back to the same config.

use std::fmt::Write as _;
use std::path::PathBuf;

use spdc_core::crystal::{CrystalConfig, Sellmeier, SellmeierSet};
use spdc_core::numeric::AsQuadrature;
use spdc_core::pump::PumpConfig;
use spdc_core::quadrature::{Axis, QuadratureSpec};
use spdc_core::{Source, TransverseWaveVector};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {message}")]
    Value { key: String, message: String },
    #[error(transparent)]
    Model(#[from] spdc_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Exact,
    Analytic,
}

impl Engine {
    pub fn tag(self) -> &'static str {
        match self {
            Engine::Exact => "exact",
            Engine::Analytic => "analytic",
        }
    }
}

/// Where the Sellmeier coefficients came from.
#[derive(Debug, Clone, PartialEq)]
pub enum SellmeierSource {
    Named(String),
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sellmeier_source: SellmeierSource,
    pub crystal: CrystalConfig,
    pub pump: PumpConfig,
    pub engine: Engine,
    /// Square AS grid `[min, max]²` with `count` samples per axis.
    pub grid: (f64, f64, usize),
    /// Samples per axis of CAS windows.
    pub cas_count: usize,
    pub idler: Option<TransverseWaveVector>,
    pub quadrature: QuadratureSpec,
    pub output: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            sellmeier_source: SellmeierSource::Named("bbo-eimerl".into()),
            crystal: CrystalConfig::bbo(29.3f64.to_radians(), 1000.0).expect("default crystal"),
            pump: PumpConfig::symmetric(0.40699, 185.0).expect("default pump"),
            engine: Engine::Exact,
            grid: (-1.0, 1.0, 256),
            cas_count: 257,
            idler: None,
            quadrature: QuadratureSpec::default(),
            output: PathBuf::from("."),
        }
    }
}

/// Scalar with an optional unit suffix, e.g. `29.3 deg`, `0.5rad`, `406.99nm`.
fn split_unit(text: &str) -> (&str, &str) {
    let t = text.trim();
    let cut = t
        .char_indices()
        .find(|(_, c)| c.is_ascii_alphabetic() && *c != 'e' && *c != 'E')
        .map(|(i, _)| i)
        .unwrap_or(t.len());
    // `1e-3` keeps its exponent; `1 deg` splits at the space.
    (t[..cut].trim(), t[cut..].trim())
}

fn number(key: &str, text: &str) -> Result<f64, ConfigError> {
    text.trim().parse::<f64>().map_err(|e| ConfigError::Value {
        key: key.into(),
        message: format!("`{text}`: {e}"),
    })
}

/// Angle in radians; bare numbers are degrees.
pub fn parse_angle(key: &str, text: &str) -> Result<f64, ConfigError> {
    let (v, unit) = split_unit(text);
    let v = number(key, v)?;
    match unit {
        "" | "deg" | "°" => Ok(v.to_radians()),
        "rad" => Ok(v),
        u => Err(ConfigError::Value {
            key: key.into(),
            message: format!("unknown angle unit `{u}` (use deg or rad)"),
        }),
    }
}

/// Length in μm; bare numbers are μm.
pub fn parse_length(key: &str, text: &str) -> Result<f64, ConfigError> {
    let (v, unit) = split_unit(text);
    let v = number(key, v)?;
    match unit {
        "" | "um" | "µm" | "μm" => Ok(v),
        "nm" => Ok(v * 1e-3),
        "mm" => Ok(v * 1e3),
        u => Err(ConfigError::Value {
            key: key.into(),
            message: format!("unknown length unit `{u}` (use nm, um or mm)"),
        }),
    }
}

fn list(key: &str, text: &str, n: usize) -> Result<Vec<f64>, ConfigError> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| number(key, s))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(ConfigError::Value {
            key: key.into(),
            message: format!("expected {n} comma-separated numbers, got {}", v.len()),
        });
    }
    Ok(v)
}

/// `x, y` wave vector in rad/μm.
pub fn parse_wavevector(key: &str, text: &str) -> Result<TransverseWaveVector, ConfigError> {
    let v = list(key, text, 2)?;
    Ok(TransverseWaveVector::new(v[0], v[1]))
}

fn count(key: &str, text: &str) -> Result<usize, ConfigError> {
    text.trim().parse::<usize>().map_err(|e| ConfigError::Value {
        key: key.into(),
        message: format!("`{text}`: {e}"),
    })
}

/// Raw values gathered before the models are validated together.
struct Draft {
    sellmeier: Option<String>,
    sellmeier_o: Option<Vec<f64>>,
    sellmeier_e: Option<Vec<f64>>,
    cut_angle: f64,
    length: f64,
    wavelength: f64,
    waist_x: f64,
    waist_y: f64,
    focus: f64,
    engine: Engine,
    grid: (f64, f64, usize),
    cas_count: usize,
    idler: Option<TransverseWaveVector>,
    quadrature: QuadratureSpec,
    output: PathBuf,
}

impl Draft {
    fn from(c: &RunConfig) -> Self {
        let set = c.crystal.sellmeier();
        Self {
            sellmeier: match &c.sellmeier_source {
                SellmeierSource::Named(n) => Some(n.clone()),
                SellmeierSource::Custom => None,
            },
            sellmeier_o: Some(set.ordinary.coefficients().to_vec()),
            sellmeier_e: Some(set.extraordinary.coefficients().to_vec()),
            cut_angle: c.crystal.cut_angle(),
            length: c.crystal.length(),
            wavelength: c.pump.wavelength(),
            waist_x: c.pump.waist_x(),
            waist_y: c.pump.waist_y(),
            focus: c.pump.focus_offset(),
            engine: c.engine,
            grid: c.grid,
            cas_count: c.cas_count,
            idler: c.idler,
            quadrature: c.quadrature,
            output: c.output.clone(),
        }
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "crystal.sellmeier" => {
                let v = value.trim();
                if v == "custom" {
                    self.sellmeier = None;
                } else if SellmeierSet::named(v).is_some() {
                    self.sellmeier = Some(v.to_string());
                } else {
                    return Err(ConfigError::Value {
                        key: key.into(),
                        message: format!(
                            "unknown Sellmeier set `{v}` (available: {}, custom)",
                            SellmeierSet::NAMES.join(", ")
                        ),
                    });
                }
            }
            "crystal.sellmeier_o" => {
                self.sellmeier_o = Some(list(key, value, 4)?);
                self.sellmeier = None;
            }
            "crystal.sellmeier_e" => {
                self.sellmeier_e = Some(list(key, value, 4)?);
                self.sellmeier = None;
            }
            "crystal.cut_angle" => self.cut_angle = parse_angle(key, value)?,
            "crystal.length" => self.length = parse_length(key, value)?,
            "pump.wavelength" => self.wavelength = parse_length(key, value)?,
            "pump.waist" => {
                let w = parse_length(key, value)?;
                self.waist_x = w;
                self.waist_y = w;
            }
            "pump.waist_x" => self.waist_x = parse_length(key, value)?,
            "pump.waist_y" => self.waist_y = parse_length(key, value)?,
            "pump.focus" => self.focus = parse_length(key, value)?,
            "engine" => {
                self.engine = match value.trim() {
                    "exact" => Engine::Exact,
                    "analytic" => Engine::Analytic,
                    v => {
                        return Err(ConfigError::Value {
                            key: key.into(),
                            message: format!("`{v}` is not one of exact, analytic"),
                        })
                    }
                }
            }
            "grid.min" => self.grid.0 = number(key, value)?,
            "grid.max" => self.grid.1 = number(key, value)?,
            "grid.count" => self.grid.2 = count(key, value)?,
            "cas.count" => self.cas_count = count(key, value)?,
            "cas.idler" => {
                self.idler = match value.trim() {
                    "auto" => None,
                    v => Some(parse_wavevector(key, v)?),
                }
            }
            "quadrature.resolution" => self.quadrature.resolution = count(key, value)?,
            "quadrature.tolerance" => self.quadrature.rel_tol = number(key, value)?,
            "quadrature.refinements" => self.quadrature.max_refinements = count(key, value)?,
            "output.dir" => self.output = PathBuf::from(value.trim()),
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    fn build(self) -> Result<RunConfig, ConfigError> {
        let (source, set) = match &self.sellmeier {
            Some(name) => (
                SellmeierSource::Named(name.clone()),
                SellmeierSet::named(name).expect("validated name"),
            ),
            None => {
                let coeffs = |v: &Option<Vec<f64>>, key: &str| -> Result<Sellmeier, ConfigError> {
                    let v = v.as_ref().ok_or_else(|| ConfigError::Value {
                        key: key.into(),
                        message: "required for a custom Sellmeier set".into(),
                    })?;
                    Ok(Sellmeier::new(v[0], v[1], v[2], v[3]))
                };
                (
                    SellmeierSource::Custom,
                    SellmeierSet {
                        ordinary: coeffs(&self.sellmeier_o, "crystal.sellmeier_o")?,
                        extraordinary: coeffs(&self.sellmeier_e, "crystal.sellmeier_e")?,
                    },
                )
            }
        };
        let crystal = CrystalConfig::new(set, self.cut_angle, self.length)?;
        let pump = PumpConfig::new(self.wavelength, self.waist_x, self.waist_y, self.focus)?;
        Axis::new(self.grid.0, self.grid.1, self.grid.2)?;
        if self.grid.2 < 16 || self.cas_count < 16 {
            return Err(ConfigError::Value {
                key: "grid.count".into(),
                message: "grids need at least 16 samples per axis".into(),
            });
        }
        self.quadrature.validate()?;
        Ok(RunConfig {
            sellmeier_source: source,
            crystal,
            pump,
            engine: self.engine,
            grid: self.grid,
            cas_count: self.cas_count,
            idler: self.idler,
            quadrature: self.quadrature,
            output: self.output,
        })
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::default().with_text(text)
    }

    /// Applies the assignments in `text` on top of `self`.
    pub fn with_text(&self, text: &str) -> Result<Self, ConfigError> {
        let mut draft = Draft::from(self);
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: n + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            draft.set(key.trim(), value)?;
        }
        draft.build()
    }

    /// Applies `key=value` overrides.
    pub fn with_overrides<'a>(&self, items: impl IntoIterator<Item = &'a str>) -> Result<Self, ConfigError> {
        let mut draft = Draft::from(self);
        for item in items {
            let (key, value) = item.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: 0,
                message: format!("override `{item}` is not key=value"),
            })?;
            draft.set(key.trim(), value)?;
        }
        draft.build()
    }

    /// Canonical text form; `RunConfig::parse(&c.echo()) == c`.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let set = self.crystal.sellmeier();
        match &self.sellmeier_source {
            SellmeierSource::Named(n) => {
                let _ = writeln!(s, "crystal.sellmeier = {n}");
            }
            SellmeierSource::Custom => {
                let f = |c: [f64; 4]| format!("{:?}, {:?}, {:?}, {:?}", c[0], c[1], c[2], c[3]);
                let _ = writeln!(s, "crystal.sellmeier = custom");
                let _ = writeln!(s, "crystal.sellmeier_o = {}", f(set.ordinary.coefficients()));
                let _ = writeln!(s, "crystal.sellmeier_e = {}", f(set.extraordinary.coefficients()));
            }
        }
        let _ = writeln!(s, "crystal.cut_angle = {:?} rad", self.crystal.cut_angle());
        let _ = writeln!(s, "crystal.length = {:?} um", self.crystal.length());
        let _ = writeln!(s, "pump.wavelength = {:?} um", self.pump.wavelength());
        let _ = writeln!(s, "pump.waist_x = {:?} um", self.pump.waist_x());
        let _ = writeln!(s, "pump.waist_y = {:?} um", self.pump.waist_y());
        let _ = writeln!(s, "pump.focus = {:?} um", self.pump.focus_offset());
        let _ = writeln!(s, "engine = {}", self.engine.tag());
        let _ = writeln!(s, "grid.min = {:?}", self.grid.0);
        let _ = writeln!(s, "grid.max = {:?}", self.grid.1);
        let _ = writeln!(s, "grid.count = {}", self.grid.2);
        let _ = writeln!(s, "cas.count = {}", self.cas_count);
        match self.idler {
            Some(k) => {
                let _ = writeln!(s, "cas.idler = {:?}, {:?}", k.x, k.y);
            }
            None => {
                let _ = writeln!(s, "cas.idler = auto");
            }
        }
        let _ = writeln!(s, "quadrature.resolution = {}", self.quadrature.resolution);
        let _ = writeln!(s, "quadrature.tolerance = {:?}", self.quadrature.rel_tol);
        let _ = writeln!(s, "quadrature.refinements = {}", self.quadrature.max_refinements);
        let _ = writeln!(s, "output.dir = {}", self.output.display());
        s
    }

    pub fn source(&self) -> Result<Source, spdc_core::Error> {
        Source::new(self.crystal, self.pump)
    }

    pub fn as_axis(&self) -> Result<Axis, spdc_core::Error> {
        Axis::new(self.grid.0, self.grid.1, self.grid.2)
    }

    pub fn as_quadrature(&self) -> AsQuadrature {
        AsQuadrature {
            spec: self.quadrature,
            ..AsQuadrature::default()
        }
    }
}
