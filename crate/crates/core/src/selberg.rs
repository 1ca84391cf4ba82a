//! Generalized Selberg integrals over the ordered simplex `1 ≥ z_1 > ... > z_n ≥ 0`.

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::monodromy::{pair_count, pair_index, EvalReport, Method, MonodromyParams};
use crate::numeric::quad::{tanh_sinh, Node, T_MAX};
use crate::numeric::{beta_rat, int, is_integer, ln_gamma, to_f64, Rational};

/// `∫ Π z_i^{m_i} Π (1-z_i)^{m̄_i} Π_{i<j} (z_i - z_j)^{m_ij}` over the ordered simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct SelbergParams {
    m: Vec<Rational>,
    mbar: Vec<Rational>,
    mm: Vec<Rational>,
}

impl SelbergParams {
    pub fn new(m: Vec<Rational>, mbar: Vec<Rational>, mm: Vec<Rational>) -> Result<Self> {
        let n = m.len();
        if mbar.len() != n || mm.len() != pair_count(n) {
            return Err(Error::Precondition(format!(
                "Selberg parameters need {n} m̄ and {} m_ij entries",
                pair_count(n)
            )));
        }
        Ok(SelbergParams { m, mbar, mm })
    }

    /// `(m; 0; m_ij)` from monodromy arguments.
    pub fn from_monodromy(p: &MonodromyParams) -> Self {
        SelbergParams {
            m: p.m().to_vec(),
            mbar: vec![Rational::zero(); p.n()],
            mm: p.mm_upper().to_vec(),
        }
    }

    /// The classical case `m_i = a-1`, `m̄_i = b-1`, `m_ij = 2c`.
    pub fn classical(a: &Rational, b: &Rational, c: &Rational, k: usize) -> Self {
        let one = int(1);
        SelbergParams {
            m: vec![a - &one; k],
            mbar: vec![b - &one; k],
            mm: vec![c * int(2); pair_count(k)],
        }
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn m(&self) -> &[Rational] {
        &self.m
    }

    pub fn mbar(&self) -> &[Rational] {
        &self.mbar
    }

    pub fn mm_upper(&self) -> &[Rational] {
        &self.mm
    }

    pub fn mm(&self, i: usize, j: usize) -> &Rational {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        &self.mm[pair_index(self.n(), a, b)]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Convergence {
    pub convergent: bool,
    pub violations: Vec<String>,
}

/// The three families of strict inequalities, checked exactly.
pub fn selberg_convergent(p: &SelbergParams) -> Convergence {
    let n = p.n();
    let mut violations = Vec::new();
    for r in 0..n {
        for s in r + 1..n {
            let mut sum = Rational::zero();
            for i in r..=s {
                for j in i + 1..=s {
                    sum += p.mm(i, j);
                }
            }
            if sum <= -int((s - r) as i64) {
                violations.push(format!(
                    "(i) r={}, s={}: Σ m_ij = {sum} must exceed -{}",
                    r + 1,
                    s + 1,
                    s - r
                ));
            }
        }
    }
    for r in 0..n {
        let mut sum: Rational = p.mbar[..=r].iter().sum();
        for i in 0..=r {
            for j in 0..i {
                sum += p.mm(j, i);
            }
        }
        if sum <= -int(r as i64 + 1) {
            violations.push(format!(
                "(ii) r={}: sum {sum} must exceed -{}",
                r + 1,
                r + 1
            ));
        }
    }
    for r in 0..n {
        let mut sum: Rational = p.m[r..].iter().sum();
        for i in r..n {
            for j in i + 1..n {
                sum += p.mm(i, j);
            }
        }
        if sum <= -int((n - r) as i64) {
            violations.push(format!(
                "(iii) r={}: sum {sum} must exceed -{}",
                r + 1,
                n - r
            ));
        }
    }
    Convergence {
        convergent: violations.is_empty(),
        violations,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelbergOptions {
    /// Relative tolerance.
    pub tol: f64,
    /// Integrate out `z_1` analytically whenever every `m̄_i = 0`.
    pub reduce: bool,
    pub seed: u64,
    /// Integrand evaluations allowed for the product quadrature.
    pub max_evals: usize,
    pub max_samples: usize,
}

impl Default for SelbergOptions {
    fn default() -> Self {
        SelbergOptions {
            tol: 1e-10,
            reduce: true,
            seed: 0,
            max_evals: 60_000_000,
            max_samples: 10_000_000,
        }
    }
}

pub const MC_TARGET_REL: f64 = 1e-3;

/// Integrand data after `z_1 = u_1`, `z_j = z_{j-1} u_j`.
struct Cube {
    n: usize,
    /// Exponent of `u_l` including the Jacobian.
    e: Vec<f64>,
    mbar: Vec<f64>,
    /// `(i, j, m_ij)` with nonzero exponent.
    pairs: Vec<(usize, usize, f64)>,
}

impl Cube {
    fn new(p: &SelbergParams) -> Self {
        let n = p.n();
        let e = (0..n)
            .map(|l| {
                let mut s: f64 = p.m[l..].iter().map(to_f64).sum();
                for i in l..n {
                    for j in i + 1..n {
                        s += to_f64(p.mm(i, j));
                    }
                }
                s + (n - 1 - l) as f64
            })
            .collect();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = to_f64(p.mm(i, j));
                if v != 0.0 {
                    pairs.push((i, j, v));
                }
            }
        }
        Cube {
            n,
            e,
            mbar: p.mbar.iter().map(to_f64).collect(),
            pairs,
        }
    }

    /// Log of the integrand at `u` (with complements `uc`), without any Jacobian of a
    /// further change of variables.
    fn ln_f(&self, u: &[f64], uc: &[f64], lnu: &[f64]) -> f64 {
        let mut acc = 0.0;
        for l in 0..self.n {
            acc += self.e[l] * lnu[l];
        }
        // 1 - u_0 ... u_i for the m̄ factors
        let mut p = 1.0;
        let mut c = 0.0;
        for i in 0..self.n {
            c += p * uc[i];
            p *= u[i];
            if self.mbar[i] != 0.0 {
                acc += self.mbar[i] * c.ln();
            }
        }
        for &(i, j, mij) in &self.pairs {
            let mut p = u[i + 1];
            let mut c = uc[i + 1];
            for l in i + 2..=j {
                c += p * uc[l];
                p *= u[l];
            }
            acc += mij * c.ln();
        }
        acc
    }
}

/// Nodes with `ln x` precomputed and the weight stored as `ln w`.
fn rule(level: u32) -> Vec<(Node<f64>, f64)> {
    tanh_sinh::<f64>(level, T_MAX)
        .into_iter()
        .map(|nd| {
            let lx = nd.x.ln();
            (Node { w: nd.w.ln(), ..nd }, lx)
        })
        .collect()
}

fn grid_sum(cube: &Cube, nodes: &[(Node<f64>, f64)]) -> f64 {
    let d = cube.n;
    let k = nodes.len();
    let parts: Vec<f64> = (0..k)
        .into_par_iter()
        .map(|i0| {
            let mut u = vec![0.0; d];
            let mut uc = vec![0.0; d];
            let mut lu = vec![0.0; d];
            let mut idx = vec![0usize; d];
            idx[0] = i0;
            let mut acc = 0.0;
            loop {
                let mut lw = 0.0;
                for a in 0..d {
                    let (nd, l) = &nodes[idx[a]];
                    u[a] = nd.x;
                    uc[a] = nd.xc;
                    lu[a] = *l;
                    lw += nd.w;
                }
                acc += (lw + cube.ln_f(&u, &uc, &lu)).exp();
                let mut a = d - 1;
                loop {
                    if a == 0 {
                        return acc;
                    }
                    idx[a] += 1;
                    if idx[a] < k {
                        break;
                    }
                    idx[a] = 0;
                    a -= 1;
                }
            }
        })
        .collect();
    parts.iter().sum()
}

fn quadrature(cube: &Cube, opts: &SelbergOptions) -> Result<EvalReport> {
    let d = cube.n as i32;
    let mut prev: Option<f64> = None;
    let mut evals = 0usize;
    let mut last = None;
    for level in 2u32..=12 {
        let nodes = rule(level);
        let count = (nodes.len() as f64).powi(d);
        if (evals as f64 + count) > opts.max_evals as f64 {
            break;
        }
        let v = grid_sum(cube, &nodes);
        evals += count as usize;
        if let Some(pv) = prev {
            let err = (v - pv).abs();
            last = Some((v, err));
            if err <= opts.tol * v.abs() && level >= 3 {
                return Ok(EvalReport {
                    value: Complex64::new(v, 0.0),
                    abs_error_estimate: err,
                    terms_or_nodes: evals,
                    converged: true,
                    method: Method::Quadrature,
                });
            }
        }
        prev = Some(v);
    }
    let (v, err) =
        last.ok_or_else(|| Error::Budget("quadrature budget below two levels".into()))?;
    Ok(EvalReport {
        value: Complex64::new(v, 0.0),
        abs_error_estimate: err,
        terms_or_nodes: evals,
        converged: false,
        method: Method::Quadrature,
    })
}

/// Per-axis map `u = (1 - (1-w)^q)^p` flattening `u^E` at 0 and `(1-u)^F` at 1.
#[derive(Clone, Copy)]
struct AxisMap {
    p: f64,
    q: f64,
}

impl AxisMap {
    /// `(u, 1-u, ln u, ln du/dw)`.
    fn apply(&self, w: f64) -> (f64, f64, f64, f64) {
        let omw = 1.0 - w;
        let a = omw.powf(self.q);
        let v = -(self.q * omw.ln()).exp_m1();
        let v = if v > 0.0 { v } else { 1.0 - a };
        let lnv = v.ln();
        let lnu = self.p * lnv;
        let u = lnu.exp();
        let uc = -(lnu).exp_m1();
        let ljac = self.p.ln() + (self.p - 1.0) * lnv + self.q.ln() + (self.q - 1.0) * omw.ln();
        (u, uc, lnu, ljac)
    }
}

fn monte_carlo(cube: &Cube, opts: &SelbergOptions) -> Result<EvalReport> {
    let d = cube.n;
    let maps: Vec<AxisMap> = (0..d)
        .map(|l| {
            let p = if cube.e[l] < 0.0 {
                1.0 / (cube.e[l] + 1.0)
            } else {
                1.0
            };
            let end = if l == 0 {
                cube.mbar[0]
            } else {
                cube.pairs
                    .iter()
                    .find(|&&(i, j, _)| i + 1 == l && j == l)
                    .map_or(0.0, |&(_, _, v)| v)
            };
            let q = if end < 0.0 { 1.0 / (end + 1.0) } else { 1.0 };
            AxisMap { p, q }
        })
        .collect();
    const BATCH: usize = 4096;
    const GROUP: usize = 8;
    let batch = |b: u64| -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(b);
        let mut strata: Vec<Vec<usize>> = (0..d).map(|_| (0..BATCH).collect()).collect();
        for s in strata.iter_mut() {
            for i in (1..BATCH).rev() {
                let j = rng.gen_range(0..=i);
                s.swap(i, j);
            }
        }
        let mut u = vec![0.0; d];
        let mut uc = vec![0.0; d];
        let mut lu = vec![0.0; d];
        let mut acc = 0.0;
        for i in 0..BATCH {
            let mut lj = 0.0;
            for a in 0..d {
                let w = (strata[a][i] as f64 + rng.gen::<f64>()) / BATCH as f64;
                let w = w.clamp(1e-300, 1.0 - 1e-16);
                let (x, xc, lx, l) = maps[a].apply(w);
                u[a] = x;
                uc[a] = xc;
                lu[a] = lx;
                lj += l;
            }
            acc += (cube.ln_f(&u, &uc, &lu) + lj).exp();
        }
        acc / BATCH as f64
    };
    let mut means: Vec<f64> = Vec::new();
    let max_batches = (opts.max_samples / BATCH).max(GROUP);
    while means.len() < max_batches {
        let start = means.len() as u64;
        let group: Vec<f64> = (start..start + GROUP as u64)
            .into_par_iter()
            .map(batch)
            .collect();
        means.extend(group);
        let k = means.len() as f64;
        let mean = means.iter().sum::<f64>() / k;
        let var = means.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
        let se = (var / k).sqrt();
        if means.len() >= 2 * GROUP && se <= MC_TARGET_REL * mean.abs() {
            return Ok(EvalReport {
                value: Complex64::new(mean, 0.0),
                abs_error_estimate: se,
                terms_or_nodes: means.len() * BATCH,
                converged: true,
                method: Method::MonteCarlo,
            });
        }
    }
    let k = means.len() as f64;
    let mean = means.iter().sum::<f64>() / k;
    let var = means.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    Ok(EvalReport {
        value: Complex64::new(mean, 0.0),
        abs_error_estimate: (var / k).sqrt(),
        terms_or_nodes: means.len() * BATCH,
        converged: false,
        method: Method::MonteCarlo,
    })
}

/// `Sel(p)` with its report; an unconverged estimate is returned with `converged = false`.
pub fn selberg_report(p: &SelbergParams, opts: &SelbergOptions) -> Result<EvalReport> {
    let c = selberg_convergent(p);
    if !c.convergent {
        return Err(Error::Precondition(format!(
            "Selberg integral diverges: {}",
            c.violations.join("; ")
        )));
    }
    let n = p.n();
    if n == 0 {
        return Ok(EvalReport::exact(
            Complex64::new(1.0, 0.0),
            0,
            Method::ClosedForm,
        ));
    }
    if n == 1 {
        let one = int(1);
        let b = beta_rat(&(&p.m[0] + &one), &(&p.mbar[0] + &one))?;
        return Ok(EvalReport::exact(
            Complex64::new(b, 0.0),
            1,
            Method::ClosedForm,
        ));
    }
    if opts.reduce && p.mbar.iter().all(|x| x.is_zero()) {
        let (pre, reduced) = selberg_reduce_first(p)?;
        let mut r = selberg_report(&reduced, opts)?;
        r.value *= pre;
        r.abs_error_estimate *= pre.norm();
        return Ok(r);
    }
    if n > 6 {
        return Err(Error::SizeLimit(format!(
            "Selberg integrals support n <= 6, got {n}"
        )));
    }
    let cube = Cube::new(p);
    if n <= 3 {
        quadrature(&cube, opts)
    } else {
        monte_carlo(&cube, opts)
    }
}

/// `Sel(p)`; fails with `Budget` when the tolerance is not reached within the caps.
pub fn selberg(p: &SelbergParams, opts: &SelbergOptions) -> Result<EvalReport> {
    let r = selberg_report(p, opts)?;
    if r.converged {
        Ok(r)
    } else {
        Err(Error::Budget(format!(
            "{} stopped at {} nodes with error estimate {:e}",
            r.method, r.terms_or_nodes, r.abs_error_estimate
        )))
    }
}

/// `B(m_2+1, m_12+1) / (2 + m_1 + m_2 + m_12)`.
pub fn selberg_closed_n2(m1: &Rational, m2: &Rational, m12: &Rational) -> Result<Complex64> {
    let den = m1 + m2 + m12 + int(2);
    if den.is_zero() {
        return Err(Error::Pole("2 + m1 + m2 + m12 = 0".into()));
    }
    let one = int(1);
    let b = beta_rat(&(m2 + &one), &(m12 + &one))?;
    Ok(Complex64::new(b / to_f64(&den), 0.0))
}

fn nonpositive_integer(x: &Rational) -> bool {
    is_integer(x) && !x.is_positive()
}

/// `(1/k!) Π_{j<k} Γ(a+jc)Γ(b+jc)Γ(1+(j+1)c) / (Γ(a+b+(k+j-1)c)Γ(1+c))`.
pub fn selberg_product_formula(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    k: usize,
) -> Result<Complex64> {
    let one = int(1);
    let mut ln = 0.0;
    let mut sign = 1.0;
    let mut gamma = |x: Rational, inv: bool| -> Result<()> {
        if nonpositive_integer(&x) {
            return Err(Error::Pole(format!("Gamma at {x}")));
        }
        let (l, s) = ln_gamma(to_f64(&x));
        ln += if inv { -l } else { l };
        sign *= s;
        Ok(())
    };
    for j in 0..k {
        let jr = int(j as i64);
        gamma(a + &jr * c, false)?;
        gamma(b + &jr * c, false)?;
        gamma(&one + (&jr + &one) * c, false)?;
        gamma(a + b + (int(k as i64) + &jr - &one) * c, true)?;
        gamma(&one + c, true)?;
    }
    let lf: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
    Ok(Complex64::new(sign * (ln - lf).exp(), 0.0))
}

/// Integrates out `z_1`: returns `1/(n + Σm_i + Σm_ij)` and the `(n-1)`-fold parameters
/// `(m_2..; m_12..m_1n; m_ij for i, j ≥ 2)`.
pub fn selberg_reduce_first(p: &SelbergParams) -> Result<(Complex64, SelbergParams)> {
    if p.mbar.iter().any(|x| !x.is_zero()) {
        return Err(Error::Precondition("reduction needs all m̄_i = 0".into()));
    }
    let n = p.n();
    let total: Rational = p.m.iter().chain(&p.mm).sum::<Rational>() + int(n as i64);
    if total.is_zero() {
        return Err(Error::Pole("n + Σm_i + Σm_ij = 0".into()));
    }
    let m = p.m[1..].to_vec();
    let mbar = (1..n).map(|j| p.mm(0, j).clone()).collect();
    let mut mm = Vec::new();
    for i in 1..n {
        for j in i + 1..n {
            mm.push(p.mm(i, j).clone());
        }
    }
    Ok((
        Complex64::new(1.0 / to_f64(&total), 0.0),
        SelbergParams { m, mbar, mm },
    ))
}
