use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Input lies outside the domain of a map, e.g. the cut locus of `log_map`.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    /// The curvature-based scheme cannot place a vertex whose prescribed
    /// `sin(defect)` falls outside the admissible interval.
    #[error(
        "unsolvable insertion on edge {edge}: |sin(defect)| = {value:.6} exceeds {limit:.6}; \
         apply more presmoothing iterations"
    )]
    Unsolvable { edge: usize, value: f64, limit: f64 },

    #[error("vertex {index}: {source}")]
    AtVertex { index: usize, source: Box<Error> },

    #[error("iteration {iteration}: {source}")]
    AtIteration { iteration: usize, source: Box<Error> },

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },
}

impl Error {
    pub(crate) fn at_vertex(self, index: usize) -> Self {
        Error::AtVertex { index, source: Box::new(self) }
    }

    pub(crate) fn at_iteration(self, iteration: usize) -> Self {
        Error::AtIteration { iteration, source: Box::new(self) }
    }

    /// The innermost error, with vertex/iteration annotations stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtVertex { source, .. } | Error::AtIteration { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for numeric and degeneracy failures, false for bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(self.root(), Error::Domain(_) | Error::Degenerate(_) | Error::Unsolvable { .. })
    }
}
