use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain where the physics is defined.
    #[error("{name} = {value} is out of range: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("site count {0} is invalid: the k-grid needs an even N >= 2")]
    SiteCount(usize),

    #[error(
        "quadrature did not converge within {subdivisions} subdivisions \
         (value {value:e}, estimated error {error_estimate:e})"
    )]
    Quadrature {
        value: f64,
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error("scan row {row}: {source}")]
    ScanRow {
        row: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("malformed table: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            reason,
        }
    }

    /// True for quadrature failures, including ones wrapped in scan context.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Quadrature { .. } => true,
            Error::ScanRow { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
