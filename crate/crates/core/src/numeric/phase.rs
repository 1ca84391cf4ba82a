use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg};

use num_complex::Complex;
use num_traits::Zero;

use super::rational::{rat, rem_euclid, to_f64, Rational};
use super::Real;

/// The phase `e^{πi m}`, stored as `m mod 2` in `[0, 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhaseExponent(Rational);

impl PhaseExponent {
    pub fn new(m: Rational) -> Self {
        PhaseExponent(rem_euclid(&m, 2))
    }

    pub fn one() -> Self {
        PhaseExponent(Rational::zero())
    }

    pub fn exponent(&self) -> &Rational {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_zero()
    }

    pub fn pow(&self, k: i64) -> Self {
        PhaseExponent::new(&self.0 * Rational::from_integer(k.into()))
    }

    pub fn eval<T: Real>(&self) -> Complex<T> {
        phase_eval(self)
    }
}

impl fmt::Display for PhaseExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(pi i {})", self.0)
    }
}

impl Add for PhaseExponent {
    type Output = PhaseExponent;
    fn add(self, rhs: Self) -> Self {
        PhaseExponent::new(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a PhaseExponent> for &'a PhaseExponent {
    type Output = PhaseExponent;
    fn add(self, rhs: Self) -> PhaseExponent {
        PhaseExponent::new(&self.0 + &rhs.0)
    }
}

impl AddAssign<&PhaseExponent> for PhaseExponent {
    fn add_assign(&mut self, rhs: &PhaseExponent) {
        *self = PhaseExponent::new(&self.0 + &rhs.0);
    }
}

/// Multiplication of phases is addition of exponents.
impl Mul for PhaseExponent {
    type Output = PhaseExponent;
    fn mul(self, rhs: Self) -> Self {
        self + rhs
    }
}

impl Neg for PhaseExponent {
    type Output = PhaseExponent;
    fn neg(self) -> Self {
        PhaseExponent::new(-self.0)
    }
}

/// `cos(πm) + i sin(πm)` from the reduced representative; exact at multiples of 1/2.
pub fn phase_eval<T: Real>(p: &PhaseExponent) -> Complex<T> {
    expi_pi(p.exponent())
}

/// `e^{πi m}`.
pub fn expi_pi<T: Real>(m: &Rational) -> Complex<T> {
    let r = rem_euclid(m, 2);
    let (o, one) = (T::zero(), T::one());
    if r.is_zero() {
        return Complex::new(one, o);
    }
    if r == rat(1, 2) {
        return Complex::new(o, one);
    }
    if r == rat(1, 1) {
        return Complex::new(-one, o);
    }
    if r == rat(3, 2) {
        return Complex::new(o, -one);
    }
    let mut x = to_f64(&r);
    if x > 1.0 {
        x -= 2.0;
    }
    let a = T::c(x) * T::PI();
    Complex::new(a.cos(), a.sin())
}

/// `(e^{2πi m} - 1) / (2πi)`, evaluated as `e^{πi m} sin(πm) / π`.
pub fn loop_factor<T: Real>(m: &Rational) -> Complex<T> {
    let e = expi_pi::<T>(m);
    e * (e.im / T::PI())
}
