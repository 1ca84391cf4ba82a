//! Symbolic fractional lattice VOA: differential polynomials times pure exponentials,
//! the Hopf pairing, vertex operators, residues and the charge operators `yer`, `zemlja`.
//!
//! `∂^kφ_i` carries `ℕ₀`-degree `k`, so `∂` raises degree by one and `P_{α,k}` is
//! homogeneous of degree `k`.

mod checks;
mod element;
mod lattice;
mod ops;

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::monodromy::res;
use crate::numeric::{expi_pi, is_integer, to_f64, Rational};

pub use checks::{
    basis_vectors, check_nichols_on_vector, triplet_w0, trivial_level_relations,
    NicholsVectorReport, RelationCheck, RootSystem, TrivialLevelReport,
};
pub use element::{coproduct, diff_poly, DiffMonomial, FracLaurent, Tensor, Term, VoaElement};
pub use lattice::{Lattice, LatticePoint};
pub use ops::{
    mode_op, pairing, q_commutator, res_y, screening_product_direct,
    screening_product_direct_with_headroom, screening_product_formula, translation_defect,
    vertex_op, yer, zemlja, DEFAULT_TRUNCATION,
};

/// Coefficient ring of [`VoaElement`]: exact rationals for integral pairings, complex
/// doubles otherwise.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + Send
    + Sync
    + 'static
{
    fn from_rational(r: &Rational) -> Self;
    /// `Res_1 z^m`.
    fn residue(m: &Rational) -> Result<Self>;
    /// `e^{πi m}`.
    fn phase(m: &Rational) -> Result<Self>;
    fn to_complex(&self) -> Complex64;

    fn from_int(k: i64) -> Self {
        Self::from_rational(&Rational::from_integer(k.into()))
    }
}

impl Coeff for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn residue(m: &Rational) -> Result<Self> {
        if !is_integer(m) {
            return Err(Error::Precondition(format!(
                "exact coefficients need integral exponents, got z^{m}"
            )));
        }
        Ok(if *m == Rational::from_integer((-1).into()) {
            Rational::from_integer(1.into())
        } else {
            Rational::zero()
        })
    }

    fn phase(m: &Rational) -> Result<Self> {
        if !is_integer(m) {
            return Err(Error::Precondition(format!("e^(πi·{m}) is not rational")));
        }
        let even = m.to_integer().to_i64().is_none_or(|k| k % 2 == 0);
        Ok(Rational::from_integer(if even { 1 } else { -1 }.into()))
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(to_f64(self), 0.0)
    }
}

impl Coeff for Complex64 {
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(to_f64(r), 0.0)
    }

    fn residue(m: &Rational) -> Result<Self> {
        Ok(res(m, 1.0))
    }

    fn phase(m: &Rational) -> Result<Self> {
        Ok(expi_pi::<f64>(m))
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}
