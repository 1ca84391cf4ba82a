//! Screening operators, Nichols algebra relations and multivalued Selberg-type integrals.

pub mod combinat;
pub mod error;
pub mod monodromy;
pub mod nichols;
pub mod numeric;
pub mod selberg;
pub mod symformula;
pub mod voa;

pub use error::{Error, Result};
pub use numeric::{PhaseExponent, Rational, Real};

pub type Complex64 = num_complex::Complex64;

pub type ExactElement = voa::VoaElement<Rational>;
pub type NumericElement = voa::VoaElement<Complex64>;
