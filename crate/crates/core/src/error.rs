use thiserror::Error;

use crate::spectral::SpectrumReport;
use crate::wave_families::{Family, SpeedInterval};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested speed does not carry a wave of the requested family and period.
    #[error(
        "speed c = {c} is not admissible for the {family} family at L = {period}: \
         |c| must lie in {interval}{hint}"
    )]
    Regime { family: Family, c: f64, period: f64, interval: SpeedInterval, hint: String },

    #[error("convergence failure: {0}")]
    Convergence(String),

    /// A numerically computed spectrum contradicts the expected analytic structure.
    #[error("verification failed for {}: {reason}", report.label)]
    Verification { reason: String, report: Box<SpectrumReport> },

    #[error("the {0} family has no stability functional")]
    UnsupportedFamily(Family),

    #[error("momentum is only defined for real-valued fields")]
    UnsupportedField,
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
