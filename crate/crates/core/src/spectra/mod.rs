//! Exact Lagrange and Markoff values, weighted by the conductor `n` and
//! scaled by the multiplier `m`.

mod conic;
mod search;
mod value;

pub use conic::{analyze_conic, conic_lagrange, conic_markoff, ConicAnalysis};
pub use search::{coset_reps, spectrum_search, SearchParams};
pub use value::{
    format_word, lagrange_value, markoff_value_form, n_lagrange, n_markoff, period_word, reduced_cycle,
    reduction_cycle, IndefiniteBinaryForm, SpectrumValue, Witness, DECIMAL_DIGITS,
};
