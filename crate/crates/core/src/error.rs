use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-positive density {0:e} (velocity grid too coarse or too narrow?)")]
    NonPositiveDensity(f64),

    #[error("non-positive temperature {0:e} (velocity grid too coarse or too narrow?)")]
    NonPositiveTemperature(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A characteristic foot point landed outside the ghost region. This is a
    /// sizing bug in the caller, not a physical condition.
    #[error("foot point at index {position} is outside the covered range [{lo}, {hi}]")]
    OutOfCoverage { position: f64, lo: isize, hi: isize },

    #[error("grid nesting violated: {0}")]
    GridNesting(String),

    #[error("vacuum generated by the Riemann data (pressure positivity condition fails)")]
    Vacuum,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("at space node {node}: {source}")]
    AtNode {
        node: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("at step {step} (t = {time}): {source}")]
    AtStep {
        step: usize,
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("reference solution drift: {0}")]
    ReferenceDrift(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn at_node(self, node: usize) -> Self {
        Error::AtNode {
            node,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_step(self, step: usize, time: f64) -> Self {
        Error::AtStep {
            step,
            time,
            source: Box::new(self),
        }
    }

    /// The innermost error, with node/step context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtNode { source, .. } | Error::AtStep { source, .. } => source.root(),
            e => e,
        }
    }
}
