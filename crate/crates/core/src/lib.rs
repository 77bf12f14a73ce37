//! Exact Lagrange and Markoff spectra of rational conics.
//!
//! An isotropic integral conic `Phi = 0` is put in the standard shape
//! `-AX^2 - BXY - CY^2 + DXZ`, its quaternion ring is built, the invariant
//! lattices of that ring are classified locally on Bruhat-Tits trees and the
//! resulting multiplier `m` and conductor `n` turn approximability on the
//! conic into weighted classical approximability, computed exactly from
//! continued fractions.

pub mod cli;
pub mod error;
pub mod forms;
pub mod int;
pub mod lattices;
pub mod oracle;
pub mod qfield;
pub mod quaternion;
pub mod real;
pub mod tables;
pub mod spectra;

pub use error::{Error, Result};
pub use int::Int;
pub use qfield::{ContinuedFraction, QuadraticSurd};

/// Surd over arbitrary-precision integers; the type every pipeline stage uses.
pub type Surd = QuadraticSurd<num_bigint::BigInt>;
/// Continued fraction with arbitrary-precision partial quotients.
pub type Cf = ContinuedFraction<num_bigint::BigInt>;
/// Exact rational number.
pub type Rational = num_rational::BigRational;
