//! Rational exponents, phases and the transcendental primitives used everywhere else.

mod phase;
pub mod quad;
mod rational;
mod special;

pub use phase::{expi_pi, loop_factor, phase_eval, PhaseExponent};
pub use rational::{
    abs, common_denominator, frac, int, is_integer, parse_rational, parse_rational_list, rat,
    rem_euclid, to_f64, to_i64, to_real, Rational,
};
pub use special::{beta, beta_rat, binomial_real, gamma, ln_gamma};

use std::fmt::{Debug, Display};

/// Floating point scalar accepted by the numeric kernels.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    fn c(x: f64) -> Self {
        Self::from_f64(x).unwrap()
    }
}

impl Real for f32 {}
impl Real for f64 {}
