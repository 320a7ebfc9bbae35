use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Variants split into two families: validation failures (bad inputs,
/// malformed files, violated preconditions) and numeric failures (singular
/// points, non-identifiable segments, arccos excursions). The CLI maps the
/// first family to exit code 2 and the second to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("angle {theta} is outside the domain [{lo}, {hi}]")]
    Domain { theta: f64, lo: f64, hi: f64 },

    #[error("angle must be finite, got {0}")]
    NonFinite(f64),

    #[error("invalid response law: {0}")]
    InvalidLaw(String),

    #[error("table line {line}: {message}")]
    Table { line: u64, message: String },

    #[error("sample size must be at least 1")]
    ZeroSampleSize,

    #[error("intervals were built from different sample sizes ({0} vs {1})")]
    SampleSizeMismatch(u64, u64),

    #[error("sample-size schedule must be non-empty and strictly increasing")]
    InvalidSchedule,

    #[error("uninformative interval at theta = {theta}: dp/dtheta vanishes while p(1-p) > 0")]
    Singularity { theta: f64 },

    #[error("p(1-p) vanishes throughout [{lo}, {hi}]; the segment is not identifiable")]
    NonIdentifiable { lo: f64, hi: f64 },

    #[error("response law is not strictly monotone on its domain; orientation cannot be recovered from p")]
    NotMonotone,

    #[error("parameter separation must be non-zero")]
    ZeroSeparation,

    #[error("singular point at theta = {theta}: p(1-p) = 0")]
    SingularPoint { theta: f64 },

    #[error("arccos argument {0} lies outside [-1, 1] beyond rounding tolerance")]
    ArccosDomain(f64),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("basis is not orthonormal (worst overlap {0:e})")]
    NotOrthonormal(f64),

    #[error("invalid channel bank: {0}")]
    InvalidBank(String),

    #[error("theta = {theta} is outside the covered span ({lo}, {hi}) of the channel bank")]
    Coverage { theta: f64, lo: f64, hi: f64 },

    #[error("channel vector cannot be decoded: {0}")]
    Undecodable(String),

    #[error("invalid column sheet: {0}")]
    InvalidSheet(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by invalid input rather than numeric breakdown.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::Singularity { .. }
                | Error::NonIdentifiable { .. }
                | Error::SingularPoint { .. }
                | Error::ArccosDomain(_)
                | Error::Undecodable(_)
        )
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
