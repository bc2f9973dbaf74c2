//! Error types shared across the crate.
//!
//! Two broad classes matter to callers:
//!
//! * usage errors (bad identity name, malformed parameter, precision too
//!   low) — the CLI maps these to exit code 2;
//! * mathematical failures (a pole of the summand or of a closed form,
//!   a parameter outside an identity's convergence domain) — exit code 1.
//!
//! Divergence detected while summing is *not* an error: it is reported as a
//! [`crate::series::SeriesStatus`] so that verification sweeps can record it
//! per case without aborting.

use thiserror::Error;

/// Minimum number of decimal digits a precision context may carry.
pub const MIN_DIGITS: u32 = 20;

#[derive(Debug, Error)]
pub enum Error {
    /// Requested precision is below [`MIN_DIGITS`].
    #[error("precision must be at least {MIN_DIGITS} decimal digits, got {0}")]
    InvalidDigits(u32),

    /// A denominator factor came within `trunc_eps` of zero.
    #[error("pole encountered: {0}")]
    Pole(String),

    /// Parameters violate an identity's domain (convergence condition,
    /// integrality requirement, pole proximity, ...).
    #[error("parameter outside domain: {0}")]
    Domain(String),

    /// No identity is registered under this name.
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    /// No limit edge is registered under this name.
    #[error("unknown limit edge `{0}`")]
    UnknownEdge(String),

    /// A parameter string could not be parsed, or a required parameter is
    /// missing, or an unexpected one was supplied.
    #[error("invalid parameter: {0}")]
    Param(String),

    /// Rejection sampling could not find enough in-domain points.
    #[error(
        "could not sample {requested} in-domain points for {identity} within {attempts} draws"
    )]
    Sampling {
        identity: String,
        requested: usize,
        attempts: usize,
    },
}

impl Error {
    /// True for errors that indicate caller misuse rather than a
    /// mathematical obstruction; the CLI maps these to exit code 2.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidDigits(_)
                | Error::UnknownIdentity(_)
                | Error::UnknownEdge(_)
                | Error::Param(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
