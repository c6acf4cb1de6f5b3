//! Error type shared across the crate.

/// Errors produced by analytic evaluation, quadrature and sampling.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {name} must satisfy {requirement}, got {value}")]
    Domain {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    /// Adaptive quadrature exhausted its subdivision budget. The best
    /// estimate obtained so far is attached.
    #[error(
        "quadrature did not converge: best estimate {value:e} with error estimate \
         {abs_error:e} after {evaluations} evaluations"
    )]
    NoConvergence {
        value: f64,
        abs_error: f64,
        evaluations: u32,
    },

    /// The integrand handed to the semi-infinite rule does not decay:
    /// the transformed integrand blows up at the mapped endpoint.
    #[error(
        "integrand does not decay on the semi-infinite tail (transformed endpoint value {probe:e})"
    )]
    NonDecaying { probe: f64 },

    /// Quantile inversion could not establish a bracket.
    #[error("no bracket for quantile q={q} after {expansions} expansions")]
    BracketFailure { q: f64, expansions: u32 },

    /// A statistic was requested of an empty sample.
    #[error("empty sample")]
    EmptySample,

    /// Invalid sampler or CLI configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Domain guard: `value` must satisfy the condition described by
/// `requirement` (checked by the caller via `ok`).
pub(crate) fn ensure(
    ok: bool,
    name: &'static str,
    requirement: &'static str,
    value: f64,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            requirement,
            value,
        })
    }
}
