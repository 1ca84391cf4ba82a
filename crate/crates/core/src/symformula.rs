//! Reduced monodromy numbers `F̃−`, the quantum symmetrizer formula and its checks.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::combinat::{braiding_factor, permutations, shuffles, BraidingMatrix, Permutation};
use crate::error::{Error, Result};
use crate::monodromy::{f_minus, EvalReport, Method, MonodromyParams};
use crate::numeric::quad::integrate_unit;
use crate::numeric::{beta_rat, expi_pi, int, loop_factor, to_f64, Rational};
use crate::selberg::{selberg_report, SelbergOptions, SelbergParams};

/// Largest `n` for which [`verify_symmetrizer`] runs.
pub const SYMMETRIZER_CAP: usize = 6;

/// Checks `Σ_{i<j ∈ J} m_ij > 1 - |J|` for every `J` with `|J| ≥ 2`.
///
/// The reported subset is 1-based.
pub fn check_smallness(p: &MonodromyParams) -> Result<()> {
    let n = p.n();
    if n > 20 {
        return Err(Error::SizeLimit(format!(
            "smallness check enumerates 2^n subsets, n = {n}"
        )));
    }
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as i64;
        if size < 2 {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let mut sum = Rational::zero();
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                sum += p.mm(i, j);
            }
        }
        if sum <= int(1 - size) {
            return Err(Error::Smallness {
                subset: idx.iter().map(|i| i + 1).collect(),
                sum: sum.to_string(),
                bound: 1 - size,
            });
        }
    }
    Ok(())
}

/// Beta-function expression of `F₋(m_1, m_2; m_12)`:
/// `A(m_2)A(m_1+m_12)/(m_1+m_2+m_12+2) · (B(m_2+1, m_12+1) + sin πm_1/sin π(m_1+m_12) · B(m_1+1, m_12+1))`.
pub fn f_minus_n2_closed(m1: &Rational, m2: &Rational, m12: &Rational) -> Result<Complex64> {
    let one = int(1);
    let den = to_f64(&(m1 + m2 + m12)) + 2.0;
    if den == 0.0 {
        return Err(Error::Pole("m1 + m2 + m12 + 2 = 0".into()));
    }
    let s = |x: &Rational| (PI * to_f64(x)).sin();
    let s12 = s(&(m1 + m12));
    if s12 == 0.0 {
        return Err(Error::Pole("m1 + m12 is an integer".into()));
    }
    let pre = loop_factor::<f64>(m2) * loop_factor::<f64>(&(m1 + m12)) / den;
    let b1 = beta_rat(&(m2 + &one), &(m12 + &one))?;
    let b2 = beta_rat(&(m1 + &one), &(m12 + &one))?;
    Ok(pre * (b1 + s(m1) / s12 * b2))
}

/// One term of the shuffle expansion: the phase in front of `Sel`, and `η`.
struct Piece {
    phase: Complex64,
    eta: Permutation,
}

fn pieces(p: &MonodromyParams) -> Result<Vec<Piece>> {
    let n = p.n();
    let mut out = Vec::new();
    for k in 0..=n {
        let mut lift = Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
        for i in k..n {
            lift *= expi_pi::<f64>(&(p.m()[i].clone() * int(2)));
        }
        for eta in shuffles(k, n)? {
            let mut ph = lift;
            for (i, j) in eta.inversions() {
                ph *= expi_pi::<f64>(p.mm(i, j));
            }
            out.push(Piece { phase: ph, eta });
        }
    }
    Ok(out)
}

/// `F̃−` with Selberg integrals evaluated under `opts`; `opts.tol` is split evenly
/// over the `2^n` pieces.
pub fn f_tilde_with(p: &MonodromyParams, opts: &SelbergOptions) -> Result<EvalReport> {
    check_smallness(p)?;
    let n = p.n();
    let list = pieces(p)?;
    let piece_opts = SelbergOptions {
        tol: opts.tol / list.len() as f64,
        ..*opts
    };
    let reports: Vec<Result<EvalReport>> = list
        .par_iter()
        .map(|pc| {
            let sp = SelbergParams::from_monodromy(&p.permuted(&pc.eta));
            selberg_report(&sp, &piece_opts)
        })
        .collect();
    let norm = Complex64::new(0.0, 2.0 * PI).powi(n as i32);
    let mut value = Complex64::zero();
    let mut err = 0.0;
    let mut nodes = 0;
    let mut converged = true;
    let mut method = Method::ClosedForm;
    for (pc, r) in list.iter().zip(reports) {
        let r = r?;
        value += pc.phase * r.value;
        err += r.abs_error_estimate;
        nodes += r.terms_or_nodes;
        converged &= r.converged;
        if r.method != Method::ClosedForm {
            method = r.method;
        }
    }
    Ok(EvalReport {
        value: value / norm,
        abs_error_estimate: err / norm.norm(),
        terms_or_nodes: nodes,
        converged,
        method,
    })
}

/// Reduced quantum monodromy number `F̃−(m_i; m_ij)`.
pub fn f_tilde(p: &MonodromyParams, tol: f64) -> Result<EvalReport> {
    let r = f_tilde_with(
        p,
        &SelbergOptions {
            tol,
            ..SelbergOptions::default()
        },
    )?;
    if r.converged {
        Ok(r)
    } else {
        Err(Error::Budget(format!(
            "Selberg pieces of F̃−{p} unconverged, error estimate {:e}",
            r.abs_error_estimate
        )))
    }
}

#[derive(Clone, Debug)]
pub struct SymmetrizerCheckReport {
    /// `F₋` from the series.
    pub lhs: Complex64,
    /// `Σ_σ q(σ) F̃−(σ-permuted)`.
    pub rhs: Complex64,
    pub residual: f64,
    /// `q(σ) F̃−(σ-permuted)` for every `σ`.
    pub per_sigma: BTreeMap<Permutation, Complex64>,
    pub lhs_error: f64,
    pub rhs_error: f64,
    pub tol: f64,
}

impl SymmetrizerCheckReport {
    pub fn propagated_error(&self) -> f64 {
        self.lhs_error + self.rhs_error
    }
}

/// Braiding with `q_ij = e^{πi m_ij}` on positions; the diagonal is never read.
pub fn position_braiding(p: &MonodromyParams) -> BraidingMatrix {
    let n = p.n();
    let m = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::zero()
                    } else {
                        p.mm(i, j).clone()
                    }
                })
                .collect()
        })
        .collect();
    BraidingMatrix::new(m).expect("square")
}

/// Compares the series `F₋` with the quantum symmetrizer applied to `F̃−`.
///
/// For `n ≥ 5` the Selberg pieces are Monte Carlo estimates and the tolerance is
/// relaxed to `1e-2`.
pub fn verify_symmetrizer(p: &MonodromyParams, tol: f64) -> Result<SymmetrizerCheckReport> {
    verify_symmetrizer_with(p, tol, 0)
}

pub fn verify_symmetrizer_with(
    p: &MonodromyParams,
    tol: f64,
    seed: u64,
) -> Result<SymmetrizerCheckReport> {
    let n = p.n();
    if n > SYMMETRIZER_CAP {
        return Err(Error::FactorialLimit {
            n,
            cap: SYMMETRIZER_CAP,
        });
    }
    check_smallness(p)?;
    let tol = if n >= 5 { tol.max(1e-2) } else { tol };
    let lhs = f_minus(p, tol, None)?;
    let q = position_braiding(p);
    let colors: Vec<usize> = (0..n).collect();
    let perms: Vec<Permutation> = permutations(n).collect();
    let opts = SelbergOptions {
        tol: tol.min(1e-6),
        seed,
        ..SelbergOptions::default()
    };
    let terms: Vec<Result<(Permutation, Complex64, f64)>> = perms
        .par_iter()
        .map(|s| {
            let r = f_tilde_with(&p.permuted(s), &opts)?;
            let f = braiding_factor(&q, &colors, s).eval::<f64>();
            Ok((s.clone(), f * r.value, r.abs_error_estimate))
        })
        .collect();
    let mut rhs = Complex64::zero();
    let mut rhs_error = 0.0;
    let mut per_sigma = BTreeMap::new();
    for t in terms {
        let (s, v, e) = t?;
        rhs += v;
        rhs_error += e;
        per_sigma.insert(s, v);
    }
    Ok(SymmetrizerCheckReport {
        lhs: lhs.value,
        rhs,
        residual: (lhs.value - rhs).norm(),
        per_sigma,
        lhs_error: lhs.abs_error_estimate,
        rhs_error,
        tol,
    })
}

/// `(1 - (ħ_j/ħ_i) e^{iφ})^{m}` through the modulus `r_ij` and phase `θ_ij ∈ [-π/2, π/2]`.
fn pair_factor(ratio: f64, phi: f64, m: f64) -> Complex64 {
    let theta = -(phi.sin() / (1.0 / ratio - phi.cos())).atan();
    let r = (1.0 + ratio * ratio - 2.0 * ratio * phi.cos()).sqrt();
    Complex64::from_polar(r.powf(m), theta * m)
}

/// The lifted torus integral
/// `Π ħ_i^{m_i+Σ_{i<j} m_ij} / (2π)^n ∫ Π dt_i e^{i(Σ t_i(1+m_i) + Σ_{i<j} (t_i+θ_ij) m_ij)} Π r_ij^{m_ij}`
/// over `[0, 2π]^n`, by nested tanh-sinh quadrature.
pub fn torus_integral(p: &MonodromyParams, node_budget: usize) -> Result<EvalReport> {
    const TOL: f64 = 1e-11;
    const LEVEL: u32 = 10;
    let n = p.n();
    let hbar = p
        .hbar()
        .ok_or_else(|| Error::Precondition("torus integral needs hbar".into()))?;
    if n > 2 {
        return Err(Error::SizeLimit(format!(
            "torus integral supports n <= 2, got {n}"
        )));
    }
    let e: Vec<f64> = (0..n).map(|i| to_f64(&p.base(i))).collect();
    let pre: f64 = (0..n).map(|i| hbar[i].powf(e[i])).product::<f64>() / (2.0 * PI).powi(n as i32);
    let two_pi = 2.0 * PI;
    let mut evals = 0usize;
    let (value, error, converged) = if n == 1 {
        let r = integrate_unit::<f64, _>(
            |x, _| Complex64::from_polar(two_pi, two_pi * x * (1.0 + e[0])),
            TOL,
            LEVEL,
        );
        evals = r.evals;
        (r.value, r.error, r.converged)
    } else {
        if !(hbar[0] > hbar[1]) {
            return Err(Error::Precondition(
                "torus integral needs hbar_1 > hbar_2".into(),
            ));
        }
        let ratio = hbar[1] / hbar[0];
        let m12 = to_f64(p.mm(0, 1));
        let mut inner_err: f64 = 0.0;
        let mut ok = true;
        let mut over = false;
        let outer = integrate_unit::<f64, _>(
            |x1, _| {
                if over {
                    return Complex64::zero();
                }
                let t1 = two_pi * x1;
                let r = integrate_unit::<f64, _>(
                    |x2, _| {
                        let t2 = two_pi * x2;
                        Complex64::from_polar(two_pi, t2 * (1.0 + e[1]))
                            * pair_factor(ratio, t2 - t1, m12)
                    },
                    TOL,
                    LEVEL,
                );
                evals += r.evals;
                if evals > node_budget {
                    over = true;
                }
                inner_err = inner_err.max(r.error);
                ok &= r.converged;
                r.value * Complex64::from_polar(two_pi, t1 * (1.0 + e[0]))
            },
            TOL,
            LEVEL,
        );
        if over {
            return Err(Error::Budget(format!(
                "torus integral exceeded {node_budget} nodes"
            )));
        }
        (
            outer.value,
            outer.error + two_pi * inner_err,
            outer.converged && ok,
        )
    };
    if evals > node_budget {
        return Err(Error::Budget(format!(
            "torus integral exceeded {node_budget} nodes"
        )));
    }
    Ok(EvalReport {
        value: value * pre,
        abs_error_estimate: error * pre,
        terms_or_nodes: evals,
        converged,
        method: Method::Quadrature,
    })
}

/// The Selberg-free coefficient `(2πi)^{-n} Σ_k (-1)^k t^{n-k} Σ_{η ∈ S_{k,n-k}} q^{inv(η)}`
/// for equal `t = e^{2πi m_i}` and `q = e^{πi m_ij}`.
pub fn shuffle_coefficient(n: usize, t: Complex64, q: Complex64) -> Complex64 {
    let mut total = Complex64::zero();
    for k in 0..=n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let mut inner = Complex64::zero();
        for eta in shuffles(k, n).expect("k <= n") {
            inner += q.powu(eta.length() as u32);
        }
        total += t.powu((n - k) as u32) * inner * sign;
    }
    total / Complex64::new(0.0, 2.0 * PI).powu(n as u32)
}

/// [`shuffle_coefficient`] at `t = e^{2πi m_i}`, `q = e^{πi m_ij}`.
pub fn vanishing_coefficient(n: usize, m_i: &Rational, m_ij: &Rational) -> Complex64 {
    let t = expi_pi::<f64>(&(m_i * int(2)));
    let q = expi_pi::<f64>(m_ij);
    shuffle_coefficient(n, t, q)
}

/// `Π_{j<n} (t q^j - 1)`, which the alternating shuffle sum factors into up to `(2πi)^{-n}`.
pub fn shuffle_coefficient_product(n: usize, t: Complex64, q: Complex64) -> Complex64 {
    let mut acc = Complex64::one();
    let mut qj = Complex64::one();
    for _ in 0..n {
        acc *= t * qj - 1.0;
        qj *= q;
    }
    acc / Complex64::new(0.0, 2.0 * PI).powu(n as u32)
}
