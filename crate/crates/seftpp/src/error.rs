use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite angle {0}")]
    NonFiniteAngle(f64),
    #[error("empty point set")]
    EmptyPointSet,
    #[error("map parse error at line {line}: {reason}")]
    MapParse { line: usize, reason: String },
    #[error("no path between the requested endpoints")]
    NoPath,
    #[error("polyline intersects obstacle interior near ({0}, {1})")]
    PolylineInObstacle(f64, f64),
    #[error("tether anchor coincides with the retraction point")]
    ZeroSpan,
    #[error("invalid scenario field `{field}`: {reason}")]
    Scenario { field: String, reason: String },
    #[error("start configuration violates the {0} condition")]
    InvalidStart(&'static str),
    #[error("internal consistency: {0}")]
    Internal(String),
    #[error("invalid interval [{0}, {1}]")]
    BadInterval(f64, f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn scenario(field: &str, reason: impl Into<String>) -> Self {
        Error::Scenario {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}
