//! Exact arithmetic over ℚ and real quadratic fields ℚ(√d), with continued
//! fraction expansion and evaluation.

mod cf;
pub(crate) mod parse;
mod quad;
pub mod squarefree;

pub use cf::{convergent_pairs, ContinuedFraction};
pub use parse::{parse_cf, parse_value};
pub use quad::QuadIrr;

/// Reduced fraction with positive denominator.
pub type Rational = num_rational::BigRational;
