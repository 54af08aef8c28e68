use alloc::string::String;

/// Errors raised by the configuration checks and the numerical engines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("wavelength {wavelength} um is outside the supported band {min}-{max} um")]
    WavelengthOutOfBand { wavelength: f64, min: f64, max: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("no real emission cone: n_eff = {n_eff} exceeds n_o = {n_o}")]
    NoRealCone { n_eff: f64, n_o: f64 },

    #[error("non-finite integrand sample at ({x}, {y})")]
    NonFiniteIntegrand { x: f64, y: f64 },

    #[error("degenerate peak: max/median of the search landscape is {ratio}")]
    DegeneratePeak { ratio: f64 },

    #[error("peak refinement did not converge (argmax on the search boundary)")]
    PeakNotConverged,

    #[error("sweep range contains no valid design point")]
    EmptyRange,

    #[error("matched quantity is not monotone over the bracket [{lo}, {hi}] um")]
    NonMonotoneBracket { lo: f64, hi: f64 },

    #[error("target {target} is outside the range [{min}, {max}] reachable in the bracket")]
    TargetOutOfRange { target: f64, min: f64, max: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
