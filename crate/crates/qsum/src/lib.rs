//! qsum — high-precision evaluation and verification of basic
//! hypergeometric summation identities.
//!
//! The crate evaluates both sides of a family of q-series summation
//! identities (unilateral and bilateral multibasic series with bases q and
//! q², theta-type bilateral sums, a terminating classical ₄F₃ sum, and
//! related limit cases) at arbitrary precision, and verifies each identity
//! numerically over seeded random parameter sweeps.
//!
//! Layering, bottom up:
//!
//! * [`arith`] — precision contexts, arbitrary-precision real/complex
//!   arithmetic, scale-aware comparison.
//! * [`qpoch`] — q-Pochhammer symbols for any integer order and for
//!   infinite products, the q-gamma function, and the classical gamma
//!   function.
//! * [`series`] — adaptive term generation and summation for unilateral
//!   and bilateral multibasic series, with termination, divergence, and
//!   pole detection.
//! * [`identities`] — the registry of summation identities: parameter
//!   schemas, left-hand series evaluation, right-hand closed forms,
//!   residuals.
//! * [`verifier`] — seeded random parameter sweeps, verification reports
//!   (JSON/CSV), and limit studies connecting identities to their
//!   degenerations.
//! * [`report`] — report construction shared by every front end, so the
//!   CLI and the C ABI emit byte-identical JSON.
//! * [`cli`] — the `qsum` command-line interface.

pub mod arith;
pub mod cli;
pub mod error;
pub mod identities;
pub mod qpoch;
pub mod report;
pub mod series;
pub mod verifier;

pub use arith::{approx_equal, make_context, relative_error, Complex, PrecisionContext, Real};
pub use error::{Error, Result};
