//! Text grid and sweep table formats.
//!
//! A grid file is a block of `#` header lines followed by one line per `y`
//! sample (increasing), each holding the `x` samples with nine significant
//! digits separated by single spaces:
//!
//! ```text
//! # spdc 0.1.0
//! # engine exact
//! # kind wavevector
//! # normalization peak 3.1415e6
//! # config crystal.sellmeier = bbo-eimerl
//! # ...
//! # axis-x -1.0 1.0 256
//! # axis-y -1.0 1.0 256
//! 0.00000000 1.25000000e-07 ...
//! ```

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use spdc_core::grid::{AxisKind, Normalization, SpectrumGrid};
use spdc_core::quadrature::Axis;

use crate::config::{ConfigError, RunConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("embedded config: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] spdc_core::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

/// C's `%#.9g`: nine significant digits, trailing zeros kept.
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        return "0.00000000".into();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else if exp == 8 {
        format!("{v:.0}.")
    } else {
        format!("{v:.*}", (8 - exp) as usize)
    }
}

/// Header shared by grids and tables.
pub struct Header<'a> {
    pub engine: &'a str,
    pub config: &'a RunConfig,
    /// Extra `# key value` lines, written after the config echo.
    pub extra: Vec<(String, String)>,
}

impl Header<'_> {
    fn write(&self, out: &mut String) {
        let _ = writeln!(out, "# spdc {VERSION}");
        let _ = writeln!(out, "# engine {}", self.engine);
        for line in self.config.echo().lines() {
            let _ = writeln!(out, "# config {line}");
        }
        for (k, v) in &self.extra {
            let _ = writeln!(out, "# {k} {v}");
        }
    }
}

fn axis_line(name: &str, a: &Axis) -> String {
    format!("# {name} {:?} {:?} {}\n", a.min(), a.max(), a.count())
}

pub fn grid_to_string(grid: &SpectrumGrid, header: &Header) -> String {
    let mut out = String::new();
    header.write(&mut out);
    let kind = match grid.kind() {
        AxisKind::WaveVector => "wavevector",
        AxisKind::Angle => "angle",
    };
    let _ = writeln!(out, "# kind {kind}");
    match grid.normalization() {
        Normalization::Raw => out.push_str("# normalization raw\n"),
        Normalization::PeakNormalized { raw_peak } => {
            let _ = writeln!(out, "# normalization peak {raw_peak:?}");
        }
    }
    out.push_str(&axis_line("axis-x", grid.x_axis()));
    out.push_str(&axis_line("axis-y", grid.y_axis()));
    if grid.kind() == AxisKind::Angle {
        let deg = |a: &Axis| format!("{:?} {:?}", a.min().to_degrees(), a.max().to_degrees());
        let _ = writeln!(out, "# axis-x-deg {}", deg(grid.x_axis()));
        let _ = writeln!(out, "# axis-y-deg {}", deg(grid.y_axis()));
    }
    let nx = grid.x_axis().count();
    for j in 0..grid.y_axis().count() {
        let row = grid.row(j);
        for (i, v) in row.iter().enumerate() {
            out.push_str(&format_value(*v));
            out.push(if i + 1 == nx { '\n' } else { ' ' });
        }
    }
    out
}

fn write_file(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text.as_bytes()).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_grid(grid: &SpectrumGrid, header: &Header, path: &Path) -> Result<(), FormatError> {
    write_file(path, &grid_to_string(grid, header))
}

/// A grid file read back.
#[derive(Debug, Clone)]
pub struct GridFile {
    pub version: String,
    pub engine: String,
    pub config: RunConfig,
    pub grid: SpectrumGrid,
    /// Header lines that are neither config nor structure.
    pub extra: Vec<(String, String)>,
}

fn parse_axis(line: usize, rest: &str) -> Result<Axis, FormatError> {
    let parts: Vec<&str> = rest.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(parse_err(line, "axis needs `<min> <max> <count>`"));
    }
    let f = |s: &str| s.parse::<f64>().map_err(|e| parse_err(line, e.to_string()));
    let n = parts[2].parse::<usize>().map_err(|e| parse_err(line, e.to_string()))?;
    Ok(Axis::new(f(parts[0])?, f(parts[1])?, n)?)
}

pub fn parse_grid(text: &str) -> Result<GridFile, FormatError> {
    let mut version = None;
    let mut engine = None;
    let mut config = String::new();
    let mut kind = AxisKind::WaveVector;
    let mut normalization = Normalization::Raw;
    let (mut ax, mut ay) = (None, None);
    let mut extra = Vec::new();
    let mut values = Vec::new();
    let mut rows = 0;
    for (n, line) in text.lines().enumerate() {
        let n = n + 1;
        if let Some(h) = line.strip_prefix('#') {
            let h = h.trim_start();
            let (key, rest) = h.split_once(' ').unwrap_or((h, ""));
            match key {
                "spdc" => version = Some(rest.to_string()),
                "engine" => engine = Some(rest.to_string()),
                "config" => {
                    config.push_str(rest);
                    config.push('\n');
                }
                "kind" => {
                    kind = match rest {
                        "wavevector" => AxisKind::WaveVector,
                        "angle" => AxisKind::Angle,
                        k => return Err(parse_err(n, format!("unknown kind `{k}`"))),
                    }
                }
                "normalization" => {
                    normalization = match rest.split_once(' ') {
                        None if rest == "raw" => Normalization::Raw,
                        Some(("peak", p)) => Normalization::PeakNormalized {
                            raw_peak: p.parse().map_err(|_| parse_err(n, "bad raw peak"))?,
                        },
                        _ => return Err(parse_err(n, format!("unknown normalization `{rest}`"))),
                    }
                }
                "axis-x" => ax = Some(parse_axis(n, rest)?),
                "axis-y" => ay = Some(parse_axis(n, rest)?),
                "axis-x-deg" | "axis-y-deg" => {}
                _ => extra.push((key.to_string(), rest.to_string())),
            }
            continue;
        }
        let (Some(x), Some(_)) = (ax, ay) else {
            return Err(parse_err(n, "data before axis header"));
        };
        let before = values.len();
        for tok in line.split(' ') {
            values.push(tok.parse::<f64>().map_err(|e| parse_err(n, format!("`{tok}`: {e}")))?);
        }
        if values.len() - before != x.count() {
            return Err(parse_err(n, format!("expected {} values, got {}", x.count(), values.len() - before)));
        }
        rows += 1;
    }
    let (Some(x), Some(y)) = (ax, ay) else {
        return Err(parse_err(0, "missing axis header"));
    };
    if rows != y.count() {
        return Err(parse_err(0, format!("expected {} rows, got {rows}", y.count())));
    }
    let grid = SpectrumGrid::new(x, y, kind, values)?.with_normalization(normalization);
    Ok(GridFile {
        version: version.ok_or_else(|| parse_err(0, "missing version line"))?,
        engine: engine.ok_or_else(|| parse_err(0, "missing engine line"))?,
        config: RunConfig::parse(&config)?,
        grid,
        extra,
    })
}

pub fn read_grid(path: &Path) -> Result<GridFile, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_grid(&text)
}

/// Tab-separated table with the grid header convention.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

pub fn table_to_string(table: &Table, header: &Header) -> String {
    let mut out = String::new();
    header.write(&mut out);
    out.push_str(&table.columns.join("\t"));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|v| if v.is_nan() { "nan".to_string() } else { format_value(*v) })
            .collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

pub fn write_table(table: &Table, header: &Header, path: &Path) -> Result<(), FormatError> {
    write_file(path, &table_to_string(table, header))
}
