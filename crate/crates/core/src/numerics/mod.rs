//! Scalars, shifted factorials, terminating series and summation identities.

pub mod identities;
pub mod pochhammer;
mod scalar;
pub mod series;

pub use identities::{identity_oracle, sample_grid, IdentityReport, Summation};
pub use pochhammer::{binomial, pochhammer, q_binomial, q_pochhammer, q_pochhammer_inf, q_pochhammer_len, QLength};
pub use scalar::{format_rational, parse_rational, rat, rational_to_f64, Rational, Scalar};
pub use series::{hyper_terminating, qhyper_terminating, SeriesKind, SeriesSpec};
