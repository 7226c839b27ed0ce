//! Unilateral and bilateral basic hypergeometric series.
//!
//! * [`qcore`]: q-shifted factorials `(a; q)_n` for signed, infinite and
//!   multi-argument orders, plus the classical gamma function.
//! * [`series`]: summation of `r phi s` and `r psi s` with convergence
//!   checks and truncation bounds.
//! * [`qoperators`]: the q-derivative, q-shift, `theta` and the
//!   augmentation operator `E(b theta)`.
//! * [`identities`]: a registry of two-sided identities between series and
//!   products, each with its admissible sampling region.
//! * [`verifier`]: randomized, reproducible verification of the registry
//!   with JSON and CSV reports.

pub mod error;
pub mod identities;
pub mod qcore;
pub mod qoperators;
pub mod series;
pub mod sum;
pub mod verifier;

pub use num_complex::Complex64 as Complex;

pub use error::{QError, Result};
pub use identities::{lookup, registry, Identity, ManifestEntry, Point};
pub use qcore::{gamma, qpoch_finite, qpoch_infinite, qpoch_multi, GammaArg, Order, PochValue, QBase};
pub use qoperators::{apply_e, OperatorPolicy, ParamFunction};
pub use series::{
    eval_dougall, eval_phi, eval_psi, eval_psi_shifted, ConvergenceDomain, EvalResult, SeriesKind, SeriesSpec, Verdict,
};
pub use verifier::{verify, verify_all, VerificationConfig, VerificationReport};
