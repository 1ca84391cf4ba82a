//! Formal residues and the quantum monodromy numbers `F±`.

use std::fmt;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{is_integer, loop_factor, parse_rational_list, to_f64, to_i64, Rational};

/// Arguments `(m_i, m_ij)` of a monodromy number, with optional radii `ħ_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyParams {
    m: Vec<Rational>,
    /// Upper triangle `m_ij`, `i < j`, row-major.
    mm: Vec<Rational>,
    hbar: Option<Vec<f64>>,
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Row-major position of the pair `(i, j)`, `i < j`, among `n` indices.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl MonodromyParams {
    pub fn new(m: Vec<Rational>, mm: Vec<Rational>) -> Result<Self> {
        let n = m.len();
        if n == 0 {
            return Err(Error::Precondition("need n >= 1".into()));
        }
        if mm.len() != pair_count(n) {
            return Err(Error::Precondition(format!(
                "n = {n} needs {} pairings m_ij, got {}",
                pair_count(n),
                mm.len()
            )));
        }
        Ok(MonodromyParams { m, mm, hbar: None })
    }

    /// From a full symmetric matrix; only entries above the diagonal are read.
    pub fn from_matrix(m: Vec<Rational>, mm: &[Vec<Rational>]) -> Result<Self> {
        let n = m.len();
        let mut up = Vec::with_capacity(pair_count(n));
        for i in 0..n {
            for j in i + 1..n {
                up.push(mm[i][j].clone());
            }
        }
        MonodromyParams::new(m, up)
    }

    pub fn parse(m: &str, mm: &str) -> Result<Self> {
        MonodromyParams::new(parse_rational_list(m)?, parse_rational_list(mm)?)
    }

    pub fn with_hbar(mut self, hbar: Vec<f64>) -> Result<Self> {
        if hbar.len() != self.n() {
            return Err(Error::Precondition(format!(
                "hbar needs {} entries, got {}",
                self.n(),
                hbar.len()
            )));
        }
        if hbar.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
            return Err(Error::Precondition("hbar entries must be positive".into()));
        }
        self.hbar = Some(hbar);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn m(&self) -> &[Rational] {
        &self.m
    }

    pub fn mm_upper(&self) -> &[Rational] {
        &self.mm
    }

    /// `m_ij` for `i ≠ j`, read symmetrically.
    pub fn mm(&self, i: usize, j: usize) -> &Rational {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        &self.mm[pair_index(self.n(), a, b)]
    }

    pub fn hbar(&self) -> Option<&[f64]> {
        self.hbar.as_deref()
    }

    /// `m_i + Σ_{i<j} m_ij`, the exponent whose integrality decides fracturedness.
    pub fn base(&self, i: usize) -> Rational {
        let mut b = self.m[i].clone();
        for j in i + 1..self.n() {
            b += self.mm(i, j);
        }
        b
    }

    pub fn is_fractured(&self) -> bool {
        (0..self.n()).all(|i| !is_integer(&self.base(i)))
    }

    /// Arguments `(m_{σ⁻¹(i)}, m_{σ⁻¹(i)σ⁻¹(j)})`.
    pub fn permuted(&self, sigma: &crate::combinat::Permutation) -> Self {
        let inv = sigma.inverse();
        let n = self.n();
        let m = (0..n).map(|i| self.m[inv.image(i)].clone()).collect();
        let mut mm = Vec::with_capacity(self.mm.len());
        for i in 0..n {
            for j in i + 1..n {
                mm.push(self.mm(inv.image(i), inv.image(j)).clone());
            }
        }
        MonodromyParams {
            m,
            mm,
            hbar: self.hbar.clone(),
        }
    }

    /// `m_i ↦ m_i + k_i`.
    pub fn shifted(&self, k: &[i64]) -> Self {
        let mut p = self.clone();
        for (mi, &ki) in p.m.iter_mut().zip(k) {
            *mi += Rational::from_integer(ki.into());
        }
        p
    }
}

impl fmt::Display for MonodromyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rational]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "({}; {})", join(&self.m), join(&self.mm))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Series,
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalReport {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub terms_or_nodes: usize,
    pub converged: bool,
    pub method: Method,
}

impl EvalReport {
    pub fn exact(value: Complex64, terms: usize, method: Method) -> Self {
        EvalReport {
            value,
            abs_error_estimate: 0.0,
            terms_or_nodes: terms,
            converged: true,
            method,
        }
    }

    /// Turns an unconverged series report into `ShellCap`.
    pub fn require_converged(self, cap: usize) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::ShellCap {
                cap,
                value: self.value,
                estimate: self.abs_error_estimate,
            })
        }
    }
}

/// `Res_ħ z^m`: `0` on `ℤ∖{-1}`, `1` at `-1`, else `ħ^{m+1} (e^{2πi(m+1)} - 1) / (2πi(m+1))`.
pub fn res(m: &Rational, hbar: f64) -> Complex64 {
    if is_integer(m) {
        return if to_i64(m) == Some(-1) {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::zero()
        };
    }
    let e = to_f64(m) + 1.0;
    loop_factor::<f64>(m) * hbar.powf(e) / e
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesConfig {
    pub tol: f64,
    /// Number of shells (total degrees `0..cap`); `None` picks a default from `n`.
    pub shell_cap: Option<usize>,
}

pub const DEFAULT_TOL: f64 = 1e-8;
pub const STABLE_WINDOW: usize = 4;
const TERM_BUDGET: f64 = 2e9;

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            tol: DEFAULT_TOL,
            shell_cap: None,
        }
    }
}

fn shell_terms(pairs: usize, k: usize) -> f64 {
    // C(k + pairs - 1, pairs - 1)
    (1..pairs).fold(1.0, |acc, i| acc * (k + i) as f64 / i as f64)
}

fn total_terms(pairs: usize, cap: usize) -> f64 {
    (0..cap).map(|k| shell_terms(pairs, k)).sum()
}

pub fn default_shell_cap(n: usize) -> usize {
    match n {
        0 | 1 => 1,
        2 => 400,
        3 => 120,
        _ => {
            let pairs = pair_count(n);
            let mut cap = 40;
            while cap > 4 && total_terms(pairs, cap) > 2e7 {
                cap -= 1;
            }
            cap
        }
    }
}

/// One residue factor `Res z_i^{base_i + shift} / ħ_i` with the shift an integer.
#[derive(Clone, Copy, Debug)]
struct Factor {
    base_int: Option<i64>,
    base: f64,
    a: Complex64,
    ln_h: f64,
}

impl Factor {
    fn new(base: &Rational, hbar: f64) -> Result<Self> {
        let base_int = if is_integer(base) {
            Some(
                base.numer()
                    .to_i64()
                    .ok_or_else(|| Error::Precondition(format!("exponent {base} out of range")))?,
            )
        } else {
            None
        };
        Ok(Factor {
            base_int,
            base: to_f64(base),
            a: loop_factor::<f64>(base),
            ln_h: hbar.ln(),
        })
    }

    fn eval(&self, shift: i64) -> Complex64 {
        match self.base_int {
            Some(b) => {
                if b + shift == -1 {
                    Complex64::new((-self.ln_h).exp(), 0.0)
                } else {
                    Complex64::zero()
                }
            }
            None => {
                let e = self.base + shift as f64;
                self.a * ((self.ln_h * e).exp() / (e + 1.0))
            }
        }
    }
}

/// `(±1)^k C(m, k)` for `k < len`.
fn binomial_weights(m: &Rational, sign: f64, len: usize) -> Vec<f64> {
    let mf = to_f64(m);
    let mut w = Vec::with_capacity(len);
    let mut c = 1.0;
    for k in 0..len {
        w.push(c);
        c *= sign * (mf - k as f64) / (k + 1) as f64;
    }
    w
}

/// Shell-graded multiple series `Σ_{(k_ij)} Π_i factor_i Π_{i<j} w_ij(k_ij)`.
struct Series {
    n: usize,
    pairs: Vec<(usize, usize)>,
    factors: Vec<Factor>,
    weights: Vec<Vec<f64>>,
    pair_max: Vec<Option<usize>>,
}

impl Series {
    fn new(p: &MonodromyParams, sign: f64, cap: usize) -> Result<Self> {
        let n = p.n();
        let ones = vec![1.0; n];
        let hbar = p.hbar().unwrap_or(&ones);
        let factors = (0..n)
            .map(|i| Factor::new(&p.base(i), hbar[i]))
            .collect::<Result<Vec<_>>>()?;
        let mut pairs = Vec::new();
        let mut weights = Vec::new();
        let mut pair_max = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mij = p.mm(i, j);
                let finite = to_i64(mij).filter(|&v| v >= 0).map(|v| v as usize);
                let len = finite.map_or(cap + 1, |v| v + 1);
                pairs.push((i, j));
                weights.push(binomial_weights(mij, sign, len));
                pair_max.push(finite);
            }
        }
        Ok(Series {
            n,
            pairs,
            factors,
            weights,
            pair_max,
        })
    }

    /// Total degree beyond which every term vanishes, if any.
    fn finite_degree(&self) -> Option<usize> {
        self.pair_max
            .iter()
            .try_fold(0, |acc, m| m.map(|m| acc + m))
    }

    fn rec(&self, idx: usize, remaining: usize, shifts: &mut [i64], w: f64) -> Complex64 {
        let np = self.pairs.len();
        let (i, j) = self.pairs[idx];
        let hi = self.pair_max[idx].map_or(remaining, |m| m.min(remaining));
        if idx + 1 == np {
            if remaining > hi {
                return Complex64::zero();
            }
            let ww = w * self.weights[idx][remaining];
            if ww == 0.0 {
                return Complex64::zero();
            }
            let r = remaining as i64;
            shifts[i] -= r;
            shifts[j] += r;
            let mut t = Complex64::new(ww, 0.0);
            for (f, &s) in self.factors.iter().zip(shifts.iter()) {
                t *= f.eval(s);
            }
            shifts[i] += r;
            shifts[j] -= r;
            return t;
        }
        let mut acc = Complex64::zero();
        for kk in 0..=hi {
            let ww = w * self.weights[idx][kk];
            if ww == 0.0 {
                continue;
            }
            let r = kk as i64;
            shifts[i] -= r;
            shifts[j] += r;
            acc += self.rec(idx + 1, remaining - kk, shifts, ww);
            shifts[i] += r;
            shifts[j] -= r;
        }
        acc
    }

    /// Sum of all terms with `Σ k_ij = k`.
    fn shell(&self, k: usize) -> Complex64 {
        if self.pairs.is_empty() {
            if k > 0 {
                return Complex64::zero();
            }
            return self.factors.iter().map(|f| f.eval(0)).product();
        }
        let hi = self.pair_max[0].map_or(k, |m| m.min(k));
        let first = |kk: usize| {
            let ww = self.weights[0][kk];
            if ww == 0.0 {
                return Complex64::zero();
            }
            let mut shifts = vec![0i64; self.n];
            let (i, j) = self.pairs[0];
            shifts[i] -= kk as i64;
            shifts[j] += kk as i64;
            if self.pairs.len() == 1 {
                let mut t = Complex64::new(ww, 0.0);
                if kk != k {
                    return Complex64::zero();
                }
                for (f, &s) in self.factors.iter().zip(shifts.iter()) {
                    t *= f.eval(s);
                }
                return t;
            }
            self.rec(1, k - kk, &mut shifts, ww)
        };
        if self.pairs.len() == 1 {
            return if k <= hi { first(k) } else { Complex64::zero() };
        }
        // parallel over the first index; ordered reduction keeps the sum deterministic
        let parts: Vec<Complex64> = if k >= 24 {
            (0..=hi).into_par_iter().map(first).collect()
        } else {
            (0..=hi).map(first).collect()
        };
        parts.into_iter().fold(Complex64::zero(), |a, b| a + b)
    }
}

fn mean_norm(shells: &[Complex64]) -> f64 {
    shells.iter().map(|s| s.norm()).sum::<f64>() / shells.len() as f64
}

/// Plain shell summation with the stabilization window and a power-law tail estimate.
fn sum_shells(series: &Series, cfg: &SeriesConfig, cap: usize) -> Result<EvalReport> {
    let pairs = series.pairs.len().max(1);
    if let Some(d) = series.finite_degree() {
        let mut v = Complex64::zero();
        for k in 0..=d {
            v += series.shell(k);
        }
        let terms = series.pair_max.iter().map(|m| m.unwrap() + 1).product();
        return Ok(EvalReport::exact(v, terms, Method::Series));
    }
    if total_terms(pairs, cap) > TERM_BUDGET {
        return Err(Error::Budget(format!(
            "{cap} shells over {pairs} indices exceed the term budget"
        )));
    }
    let mut shells: Vec<Complex64> = Vec::with_capacity(cap);
    let mut sum = Complex64::zero();
    let mut quiet = 0;
    let mut tail = f64::INFINITY;
    for k in 0..cap {
        let s = series.shell(k);
        sum += s;
        shells.push(s);
        quiet = if s.norm() < cfg.tol { quiet + 1 } else { 0 };
        if k >= 16 {
            let now = mean_norm(&shells[k - 3..=k]);
            let half = mean_norm(&shells[k / 2 - 3..=k / 2]);
            if half > 0.0 && now > 4.0 * half && now > 1e-300 {
                return Err(Error::Diverged {
                    shell: k,
                    magnitude: s.norm(),
                });
            }
            tail = if now == 0.0 {
                0.0
            } else if half > 0.0 {
                let p = (half / now).log2() / ((k as f64 - 1.5) / (k as f64 / 2.0 - 1.5)).log2();
                if p > 1.05 {
                    k as f64 * now / (p - 1.0)
                } else {
                    f64::INFINITY
                }
            } else {
                f64::INFINITY
            };
            if quiet >= STABLE_WINDOW && tail <= cfg.tol {
                return Ok(EvalReport {
                    value: sum,
                    abs_error_estimate: tail.max(s.norm()),
                    terms_or_nodes: k + 1,
                    converged: true,
                    method: Method::Series,
                });
            }
        }
    }
    let last = shells.last().map_or(0.0, |s| s.norm());
    Ok(EvalReport {
        value: sum,
        abs_error_estimate: tail.max(last),
        terms_or_nodes: cap,
        converged: quiet >= STABLE_WINDOW && tail <= cfg.tol,
        method: Method::Series,
    })
}

/// Richardson extrapolation of partial sums at `K_j = 25·2^j`, eliminating `K^{-(γ+j)}`.
fn richardson(partials: &[Complex64], gamma: f64) -> (Complex64, f64) {
    let mut table = vec![partials.to_vec()];
    for j in 0..partials.len() - 1 {
        let r = 2f64.powf(gamma + j as f64);
        let prev = table.last().unwrap();
        let next: Vec<Complex64> = (0..prev.len() - 1)
            .map(|i| (prev[i + 1] * r - prev[i]) / (r - 1.0))
            .collect();
        table.push(next);
    }
    let l = table.len();
    let value = table[l - 1][0];
    let est = if l >= 2 {
        (value - table[l - 2][1]).norm()
    } else {
        f64::INFINITY
    };
    (value, est)
}

fn f_minus_n2(
    p: &MonodromyParams,
    series: &Series,
    cfg: &SeriesConfig,
    cap: usize,
) -> Result<EvalReport> {
    let m12 = p.mm(0, 1);
    let (f1, f2) = (series.factors[0], series.factors[1]);
    let mut bound: Option<i64> = to_i64(m12).filter(|&v| v >= 0);
    if let Some(b2) = f2.base_int {
        bound = Some(bound.map_or(-1 - b2, |b| b.min(-1 - b2)).max(0));
    }
    if let Some(b1) = f1.base_int {
        bound = Some(bound.map_or(b1 + 1, |b| b.min(b1 + 1)).max(0));
    }
    let term = |k: usize, w: f64| f1.eval(-(k as i64)) * f2.eval(k as i64) * w;
    if let Some(b) = bound {
        let w = binomial_weights(m12, -1.0, b as usize + 1);
        let v = (0..=b as usize).map(|k| term(k, w[k])).sum();
        return Ok(EvalReport::exact(v, b as usize + 1, Method::Series));
    }
    let w = binomial_weights(m12, -1.0, cap);
    let mf = to_f64(m12);
    if mf <= -2.0 {
        return Err(Error::Diverged {
            shell: cap,
            magnitude: term(cap - 1, w[cap - 1]).norm(),
        });
    }
    let mut partials = Vec::new();
    let mut sum = Complex64::zero();
    let mut next = 25;
    for (k, &wk) in w.iter().enumerate() {
        sum += term(k, wk);
        if k + 1 == next {
            partials.push(sum);
            next *= 2;
        }
    }
    if partials.is_empty() {
        partials.push(sum);
    }
    let last = term(cap - 1, w[cap - 1]).norm();
    let (value, est) = if partials.len() >= 2 {
        richardson(&partials, 2.0 + mf)
    } else {
        (sum, last * cap as f64)
    };
    let est = est.max(1e-16 * value.norm());
    Ok(EvalReport {
        value,
        abs_error_estimate: est,
        terms_or_nodes: cap,
        converged: est <= cfg.tol,
        method: Method::Series,
    })
}

/// `F₋` as a report; an unconverged sum is returned with `converged = false`.
pub fn f_minus_report(p: &MonodromyParams, cfg: &SeriesConfig) -> Result<EvalReport> {
    let cap = cfg
        .shell_cap
        .unwrap_or_else(|| default_shell_cap(p.n()))
        .max(1);
    let unit = MonodromyParams {
        hbar: None,
        ..p.clone()
    };
    let series = Series::new(&unit, -1.0, cap)?;
    if p.n() == 2 {
        f_minus_n2(&unit, &series, cfg, cap)
    } else {
        sum_shells(&series, cfg, cap)
    }
}

/// `F₋((m_i, m_ij))`; fails with `ShellCap` when the shells do not stabilize.
pub fn f_minus(p: &MonodromyParams, tol: f64, shell_cap: Option<usize>) -> Result<EvalReport> {
    let cfg = SeriesConfig { tol, shell_cap };
    let cap = shell_cap.unwrap_or_else(|| default_shell_cap(p.n()));
    f_minus_report(p, &cfg)?.require_converged(cap)
}

/// The same shell graded series as [`f_minus`], truncated after `shells` shells.
pub fn f_minus_partial(p: &MonodromyParams, shells: usize) -> Result<Complex64> {
    let series = Series::new(p, -1.0, shells)?;
    Ok((0..shells).map(|k| series.shell(k)).sum())
}

/// The fractured closed-form series `Π_i A(base_i)/(e_i + 1) Π (-1)^k C(m_ij, k)`,
/// truncated after `shells` shells. Requires fracturedness.
pub fn f_minus_fractured_partial(p: &MonodromyParams, shells: usize) -> Result<Complex64> {
    if !p.is_fractured() {
        return Err(Error::Precondition(format!("{p} is not fractured")));
    }
    let n = p.n();
    let base: Vec<f64> = (0..n).map(|i| to_f64(&p.base(i))).collect();
    let pre: Complex64 = (0..n).map(|i| loop_factor::<f64>(&p.base(i))).product();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mmf: Vec<f64> = pairs.iter().map(|&(i, j)| to_f64(p.mm(i, j))).collect();
    let mut total = Complex64::zero();
    let mut ks = vec![0usize; pairs.len()];
    loop {
        let deg: usize = ks.iter().sum();
        if deg < shells {
            let mut e = base.clone();
            let mut w = 1.0;
            for (idx, &(i, j)) in pairs.iter().enumerate() {
                let k = ks[idx];
                e[i] -= k as f64;
                e[j] += k as f64;
                let mut c = 1.0;
                for t in 0..k {
                    c *= -(mmf[idx] - t as f64) / (t + 1) as f64;
                }
                w *= c;
            }
            let den: f64 = e.iter().map(|x| x + 1.0).product();
            total += pre * (w / den);
        }
        // odometer over ks with Σ ks < shells
        let mut idx = 0;
        loop {
            if idx == ks.len() {
                return Ok(total);
            }
            ks[idx] += 1;
            if ks.iter().sum::<usize>() < shells {
                break;
            }
            ks[idx] = 0;
            idx += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }
}

/// Generalized binomial `C(m, k)` for a rational top entry.
fn binom_rat(m: &Rational, k: i64) -> f64 {
    let mf = to_f64(m);
    (0..k).fold(1.0, |c, j| c * (mf - j as f64) / (j + 1) as f64)
}

/// Closed forms of the `(−1)^k` family when `m_b` or `m_a + m_ab` is integral.
pub fn f_integral_case(
    sign: Sign,
    m_a: &Rational,
    m_b: &Rational,
    m_ab: &Rational,
) -> Result<Complex64> {
    let s = sign.value();
    let ia = to_i64(&(m_a + m_ab));
    let ib = to_i64(m_b);
    let power = |k: i64| if k % 2 == 0 { 1.0 } else { s };
    match (ib, ia) {
        (Some(b), Some(a)) => {
            let k = -b - 1;
            if a + b + 2 == 0 && k >= 0 {
                Ok(Complex64::new(power(k) * binom_rat(m_ab, k), 0.0))
            } else {
                Ok(Complex64::zero())
            }
        }
        (Some(b), None) => {
            let k = -b - 1;
            if k < 0 {
                return Ok(Complex64::zero());
            }
            let top = m_a + m_ab;
            let den = to_f64(&(&top + m_b)) + 2.0;
            Ok(loop_factor::<f64>(&top) / den * power(k) * binom_rat(m_ab, k))
        }
        (None, Some(a)) => {
            let k = a + 1;
            if k < 0 {
                return Ok(Complex64::zero());
            }
            let den = to_f64(&(m_a + m_b + m_ab)) + 2.0;
            Ok(loop_factor::<f64>(m_b) / den * power(k) * binom_rat(m_ab, k))
        }
        (None, None) => Err(Error::Precondition(
            "fully fractured arguments have no integral closed form".into(),
        )),
    }
}

pub fn f_minus_integral_case(m_a: &Rational, m_b: &Rational, m_ab: &Rational) -> Result<Complex64> {
    f_integral_case(Sign::Minus, m_a, m_b, m_ab)
}

/// `F₊(m_a, m_b; m_ab) = Σ_k Res t^{m_ab+k} Res w^{m_a+m_b-k} C(m_a, k)`.
pub fn f_plus_n2(
    m_a: &Rational,
    m_b: &Rational,
    m_ab: &Rational,
    tol: f64,
    cap: usize,
) -> Result<EvalReport> {
    let ft = Factor::new(m_ab, 1.0)?;
    let fw = Factor::new(&(m_a + m_b), 1.0)?;
    let term = |k: usize, c: f64| ft.eval(k as i64) * fw.eval(-(k as i64)) * c;
    let mut bound = to_i64(m_a).filter(|&v| v >= 0);
    if let Some(b) = ft.base_int {
        bound = Some(bound.map_or(-1 - b, |x| x.min(-1 - b)).max(0));
    }
    if let Some(b) = fw.base_int {
        bound = Some(bound.map_or(b + 1, |x| x.min(b + 1)).max(0));
    }
    let ma = to_f64(m_a);
    let mut c = 1.0;
    let mut sum = Complex64::zero();
    if let Some(b) = bound {
        for k in 0..=b as usize {
            sum += term(k, c);
            c *= (ma - k as f64) / (k + 1) as f64;
        }
        return Ok(EvalReport::exact(sum, b as usize + 1, Method::Series));
    }
    let mut quiet = 0;
    let mut mags: Vec<f64> = Vec::with_capacity(cap);
    for k in 0..cap {
        let t = term(k, c);
        c *= (ma - k as f64) / (k + 1) as f64;
        sum += t;
        mags.push(t.norm());
        quiet = if t.norm() < tol { quiet + 1 } else { 0 };
        if k >= 16 && mags[k] > 4.0 * mags[k / 2] && mags[k / 2] > 0.0 && mags[k] > mags[k - 1] {
            return Err(Error::Diverged {
                shell: k,
                magnitude: t.norm(),
            });
        }
        if quiet >= STABLE_WINDOW {
            return Ok(EvalReport {
                value: sum,
                abs_error_estimate: t.norm(),
                terms_or_nodes: k + 1,
                converged: true,
                method: Method::Series,
            });
        }
    }
    Err(Error::ShellCap {
        cap,
        value: sum,
        estimate: mags.last().copied().unwrap_or(0.0),
    })
}

/// The `ħ`-weighted series `Σ Π_i ħ_i^{e_i} A(e_i)/(e_i+1) Π (-1)^k C(m_ij, k)`.
///
/// With equal radii `h` this is `h^{Σm_i + Σm_ij} F₋`; decreasing radii make it
/// converge geometrically.
pub fn f_hbar(p: &MonodromyParams, cfg: &SeriesConfig) -> Result<EvalReport> {
    let hbar = p
        .hbar()
        .ok_or_else(|| Error::Precondition("f_hbar needs hbar".into()))?
        .to_vec();
    let h0 = hbar[0];
    if hbar.iter().all(|&h| h == h0) {
        let total: Rational = p.m().iter().chain(p.mm_upper()).sum();
        let scale = h0.powf(to_f64(&total));
        let mut r = f_minus_report(p, cfg)?;
        r.value *= scale;
        r.abs_error_estimate *= scale;
        return Ok(r);
    }
    let cap = cfg.shell_cap.unwrap_or(match p.n() {
        1 | 2 => 100_000,
        n => default_shell_cap(n) * 2,
    });
    let series = Series::new(p, -1.0, cap)?;
    sum_shells(&series, cfg, cap)
}
