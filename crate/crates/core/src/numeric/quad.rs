//! Double-exponential (tanh-sinh) rules on the unit interval.
//!
//! Every node carries both `x` and `1 - x` computed independently, so integrands with
//! algebraic singularities at either endpoint can be evaluated without cancellation.

use num_complex::Complex;

use super::Real;

#[derive(Clone, Copy, Debug)]
pub struct Node<T> {
    pub x: T,
    pub xc: T,
    pub w: T,
}

/// Default half-width of the `t` range; nodes whose weight underflows are dropped.
pub const T_MAX: f64 = 6.0;

fn node<T: Real>(t: f64, h: f64) -> Option<Node<T>> {
    let s = std::f64::consts::FRAC_PI_2 * t.sinh();
    let e = (-2.0 * s.abs()).exp();
    let (small, big) = (e / (1.0 + e), 1.0 / (1.0 + e));
    let (x, xc) = if t >= 0.0 { (big, small) } else { (small, big) };
    let w = h * std::f64::consts::FRAC_PI_2 * t.cosh() * 2.0 * e / ((1.0 + e) * (1.0 + e));
    if x == 0.0 || xc == 0.0 || w == 0.0 || !w.is_finite() {
        return None;
    }
    Some(Node {
        x: T::c(x),
        xc: T::c(xc),
        w: T::c(w),
    })
}

/// Full rule with step `2^-level`.
pub fn tanh_sinh<T: Real>(level: u32, t_max: f64) -> Vec<Node<T>> {
    let h = 0.5_f64.powi(level as i32);
    let k = (t_max / h).ceil() as i64;
    (-k..=k).filter_map(|i| node(i as f64 * h, h)).collect()
}

/// Nodes added when refining from `level - 1` to `level` (odd multiples of the step).
fn refinement<T: Real>(level: u32, t_max: f64) -> Vec<Node<T>> {
    let h = 0.5_f64.powi(level as i32);
    let k = (t_max / h).ceil() as i64;
    (-k..=k)
        .filter(|i| i.rem_euclid(2) == 1)
        .filter_map(|i| node(i as f64 * h, h))
        .collect()
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult<T> {
    pub value: Complex<T>,
    pub error: T,
    pub evals: usize,
    pub converged: bool,
}

/// Integrates `f(x, 1 - x)` over `(0, 1)`, halving the step until two successive
/// levels agree to `tol` (absolute) or `max_level` is reached.
pub fn integrate_unit<T: Real, F>(mut f: F, tol: T, max_level: u32) -> QuadResult<T>
where
    F: FnMut(T, T) -> Complex<T>,
{
    let level0 = 2;
    let mut evals = 0;
    let mut sum = Complex::new(T::zero(), T::zero());
    for nd in tanh_sinh::<T>(level0, T_MAX) {
        sum += f(nd.x, nd.xc) * nd.w;
        evals += 1;
    }
    let mut prev = sum;
    let mut error = T::infinity();
    for level in level0 + 1..=max_level {
        let mut add = Complex::new(T::zero(), T::zero());
        for nd in refinement::<T>(level, T_MAX) {
            add += f(nd.x, nd.xc) * nd.w;
            evals += 1;
        }
        let cur = prev * T::c(0.5) + add;
        error = (cur - prev).norm();
        prev = cur;
        if error <= tol && level >= 4 {
            return QuadResult {
                value: cur,
                error,
                evals,
                converged: true,
            };
        }
    }
    QuadResult {
        value: prev,
        error,
        evals,
        converged: false,
    }
}
