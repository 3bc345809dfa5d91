use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument was outside the domain of the operation.
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("empty or inverted interval [{lo}, {hi}]")]
    EmptyRange { lo: f64, hi: f64 },

    #[error("sample count must be at least 1")]
    NoSamples,

    #[error("zero-norm operator in fidelity")]
    ZeroNorm,

    /// P(σ) > 0 while P(-σ) = 0; cannot happen for a SWAP engine.
    #[error("fluctuation-theorem support is one-sided at sigma = {sigma}")]
    OneSidedSupport { sigma: f64 },
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }
}
