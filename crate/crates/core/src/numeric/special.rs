use super::rational::{is_integer, to_f64, Rational};
use super::Real;
use crate::error::{Error, Result};
use num_traits::Signed;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer<T: Real>(x: T) -> bool {
    x <= T::zero() && x == x.round()
}

/// `sin(πx)` with the argument reduced modulo 2 first.
fn sin_pi<T: Real>(x: T) -> T {
    let two = T::c(2.0);
    let r = x - two * (x / two).round();
    (T::PI() * r).sin()
}

/// `(ln|Γ(x)|, sign Γ(x))`; Lanczos for `x >= 1/2`, Euler reflection below.
pub fn ln_gamma<T: Real>(x: T) -> (T, T) {
    let half = T::c(0.5);
    if x < half {
        let s = sin_pi(x);
        let (lg, _) = ln_gamma(T::one() - x);
        let sign = if s < T::zero() { -T::one() } else { T::one() };
        return ((T::PI() / s.abs()).ln() - lg, sign);
    }
    let x = x - T::one();
    let mut a = T::c(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += T::c(c) / (x + T::c(i as f64));
    }
    let t = x + T::c(LANCZOS_G) + half;
    let lg = half * (T::c(2.0) * T::PI()).ln() + (x + half) * t.ln() - t + a.ln();
    (lg, T::one())
}

pub fn gamma<T: Real>(x: T) -> Result<T> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(format!("Gamma at {x}")));
    }
    let (lg, s) = ln_gamma(x);
    Ok(s * lg.exp())
}

/// Euler Beta `Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta<T: Real>(a: T, b: T) -> Result<T> {
    for (name, v) in [("a", a), ("b", b), ("a+b", a + b)] {
        if is_nonpositive_integer(v) {
            return Err(Error::Pole(format!(
                "Beta: {name} = {v} is a non-positive integer"
            )));
        }
    }
    let (la, sa) = ln_gamma(a);
    let (lb, sb) = ln_gamma(b);
    let (lab, sab) = ln_gamma(a + b);
    Ok(sa * sb * sab * (la + lb - lab).exp())
}

/// Beta at rational arguments; the pole test is exact.
pub fn beta_rat(a: &Rational, b: &Rational) -> Result<f64> {
    let np = |r: &Rational| is_integer(r) && !r.is_positive();
    for (name, v) in [("a", a.clone()), ("b", b.clone()), ("a+b", a + b)] {
        if np(&v) {
            return Err(Error::Pole(format!(
                "Beta: {name} = {v} is a non-positive integer"
            )));
        }
    }
    beta(to_f64(a), to_f64(b))
}

/// Generalized binomial `m (m-1) ... (m-k+1) / k!`.
pub fn binomial_real<T: Real>(m: T, k: usize) -> T {
    let mut c = T::one();
    for j in 0..k {
        c = c * (m - T::c(j as f64)) / T::c((j + 1) as f64);
    }
    c
}
