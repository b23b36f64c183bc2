use thiserror::Error;

/// Errors raised by the energy models, simulators and theorem checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("approximation not valid here: {0}")]
    Eval(String),

    /// The Gaussian model meets the target at non-positive SNR; the caller has
    /// left the region where the model is meaningful.
    #[error("target met at non-positive SNR (k = {k})")]
    InfeasibleAtZeroPower { k: f64 },

    #[error("path-efficiency factor {factor} is not positive")]
    InvalidGeometry { factor: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("hypothesis does not hold: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(what: &'static str, value: f64, domain: &'static str) -> Result<T> {
    Err(Error::Domain {
        what,
        value,
        domain,
    })
}
