//! Exact arithmetic in real quadratic fields and eventually periodic
//! continued fractions.

mod cf;
mod parse;
mod surd;

pub use cf::{
    canonical_rotation, cf_expand, cf_value, least_rotation, periodic_state, word_matrix, ContinuedFraction,
    SurdState,
};
pub use parse::{parse_cf, parse_int_list, parse_rational, parse_surd, parse_word};
pub use surd::QuadraticSurd;
