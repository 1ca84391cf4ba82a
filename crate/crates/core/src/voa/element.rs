use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{Coeff, LatticePoint};
use crate::error::{Error, Result};
use crate::numeric::{int, rat, Rational};

/// Monomial in the generators `∂^kφ_i` (`i` a basis index, `k ≥ 1`), stored as
/// `(i, k) ↦ multiplicity`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiffMonomial(BTreeMap<(usize, u32), u32>);

impl DiffMonomial {
    pub fn one() -> Self {
        DiffMonomial(BTreeMap::new())
    }

    /// `∂^kφ_i`.
    pub fn generator(i: usize, k: u32) -> Self {
        assert!(k >= 1, "∂^0 φ is not a generator");
        DiffMonomial(BTreeMap::from([((i, k), 1)]))
    }

    pub fn from_powers(powers: &[(usize, u32, u32)]) -> Result<Self> {
        let mut m = DiffMonomial::one();
        for &(i, k, mult) in powers {
            if k == 0 {
                return Err(Error::Precondition("derivative order must be >= 1".into()));
            }
            if mult > 0 {
                *m.0.entry((i, k)).or_insert(0) += mult;
            }
        }
        Ok(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ k · multiplicity`.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(&(_, k), &m)| k * m).sum()
    }

    pub fn powers(&self) -> impl Iterator<Item = (usize, u32, u32)> + '_ {
        self.0.iter().map(|(&(i, k), &m)| (i, k, m))
    }

    /// Generators repeated by multiplicity.
    pub fn factors(&self) -> Vec<(usize, u32)> {
        self.0
            .iter()
            .flat_map(|(&g, &m)| std::iter::repeat_n(g, m as usize))
            .collect()
    }

    pub fn mul(&self, o: &DiffMonomial) -> DiffMonomial {
        let mut out = self.0.clone();
        for (&g, &m) in &o.0 {
            *out.entry(g).or_insert(0) += m;
        }
        DiffMonomial(out)
    }

    /// All `(u', u'', w)` with `u = u' u''` and `w = Π C(mult, mult')`, which is the
    /// coproduct of a product of primitives.
    pub fn splits(&self) -> Vec<(DiffMonomial, DiffMonomial, u64)> {
        let mut out = vec![(DiffMonomial::one(), DiffMonomial::one(), 1u64)];
        for (&g, &m) in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (m as usize + 1));
            for (a, b, w) in &out {
                for j in 0..=m {
                    let mut a2 = a.clone();
                    let mut b2 = b.clone();
                    if j > 0 {
                        a2.0.insert(g, j);
                    }
                    if j < m {
                        b2.0.insert(g, m - j);
                    }
                    next.push((a2, b2, w * binom(m, j)));
                }
            }
            out = next;
        }
        out
    }

    /// `∂u` by the Leibniz rule, as `(monomial, integer coefficient)`.
    pub fn derivative(&self) -> Vec<(DiffMonomial, u32)> {
        let mut out = Vec::new();
        for (&(i, k), &m) in &self.0 {
            let mut d = self.0.clone();
            if m == 1 {
                d.remove(&(i, k));
            } else {
                d.insert((i, k), m - 1);
            }
            *d.entry((i, k + 1)).or_insert(0) += 1;
            out.push((DiffMonomial(d), m));
        }
        out
    }
}

fn binom(n: u32, k: u32) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

impl fmt::Display for DiffMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(&(i, k), &m)| {
                let d = if k == 1 {
                    "∂".to_string()
                } else {
                    format!("∂^{k}")
                };
                let p = if m == 1 {
                    String::new()
                } else {
                    format!("^{m}")
                };
                format!("({d}φ_{}){p}", i + 1)
            })
            .collect();
        f.write_str(&parts.join(""))
    }
}

/// `u · e^{φ_β}`.
pub type Term = (DiffMonomial, LatticePoint);

fn min_trunc(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Finite linear combination of `u e^{φ_β}`; terms of degree above `truncation` are
/// unknown and never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct VoaElement<C: Coeff> {
    rank: usize,
    terms: BTreeMap<Term, C>,
    truncation: Option<u32>,
}

impl<C: Coeff> VoaElement<C> {
    pub fn zero(rank: usize, truncation: Option<u32>) -> Self {
        VoaElement {
            rank,
            terms: BTreeMap::new(),
            truncation,
        }
    }

    pub fn one(rank: usize) -> Self {
        VoaElement::exp(&LatticePoint::zero(rank))
    }

    /// `e^{φ_β}`.
    pub fn exp(beta: &LatticePoint) -> Self {
        VoaElement::term(DiffMonomial::one(), beta.clone(), C::from_int(1))
    }

    pub fn term(u: DiffMonomial, beta: LatticePoint, c: C) -> Self {
        let mut v = VoaElement::zero(beta.rank(), None);
        v.add_term(u, beta, c);
        v
    }

    /// `∂^kφ_β = Σ β_i ∂^kφ_i`.
    pub fn dphi(beta: &LatticePoint, k: u32) -> Self {
        let r = beta.rank();
        let mut v = VoaElement::zero(r, None);
        for (i, b) in beta.coords().iter().enumerate() {
            if !b.is_zero() {
                v.add_term(
                    DiffMonomial::generator(i, k),
                    LatticePoint::zero(r),
                    C::from_rational(b),
                );
            }
        }
        v
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn truncation(&self) -> Option<u32> {
        self.truncation
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DiffMonomial, &LatticePoint, &C)> {
        self.terms.iter().map(|((u, b), c)| (u, b, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, u: &DiffMonomial, beta: &LatticePoint) -> C {
        self.terms
            .get(&(u.clone(), beta.clone()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Adds `c · u e^{φ_β}` unless its degree exceeds the truncation.
    pub fn add_term(&mut self, u: DiffMonomial, beta: LatticePoint, c: C) {
        if c.is_zero() || self.truncation.is_some_and(|t| u.degree() > t) {
            return;
        }
        let key = (u, beta);
        match self.terms.get_mut(&key) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn truncated(&self, t: Option<u32>) -> Self {
        let truncation = min_trunc(self.truncation, t);
        let terms = self
            .terms
            .iter()
            .filter(|((u, _), _)| truncation.is_none_or(|d| u.degree() <= d))
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        VoaElement {
            rank: self.rank,
            terms,
            truncation,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.truncated(o.truncation);
        for ((u, b), c) in &o.terms {
            out.add_term(u.clone(), b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-C::from_int(1)))
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = VoaElement::zero(self.rank, self.truncation);
        for ((u, b), c) in &self.terms {
            out.add_term(u.clone(), b.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = VoaElement::zero(self.rank, min_trunc(self.truncation, o.truncation));
        for ((u1, b1), c1) in &self.terms {
            for ((u2, b2), c2) in &o.terms {
                out.add_term(u1.mul(u2), b1 + b2, c1.clone() * c2.clone());
            }
        }
        out
    }

    /// `∂(u e^{φ_β}) = (∂u + u ∂φ_β) e^{φ_β}`; the truncation is kept.
    pub fn derivative(&self) -> Self {
        let mut out = VoaElement::zero(self.rank, self.truncation);
        for ((u, b), c) in &self.terms {
            for (d, w) in u.derivative() {
                out.add_term(d, b.clone(), c.clone() * C::from_int(w as i64));
            }
            for (i, bi) in b.coords().iter().enumerate() {
                if !bi.is_zero() {
                    out.add_term(
                        u.mul(&DiffMonomial::generator(i, 1)),
                        b.clone(),
                        c.clone() * C::from_rational(bi),
                    );
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_complex().norm())
            .fold(0.0, f64::max)
    }

    /// Largest coefficient of `self - o`, over the common truncation.
    pub fn distance(&self, o: &Self) -> f64 {
        self.sub(o).max_abs()
    }

    pub fn to_complex(&self) -> VoaElement<Complex64> {
        let mut out = VoaElement::zero(self.rank, self.truncation);
        for ((u, b), c) in &self.terms {
            out.add_term(u.clone(), b.clone(), c.to_complex());
        }
        out
    }

    pub fn max_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(u, _)| u.degree())
            .max()
            .unwrap_or(0)
    }

    /// List of `{"monomial": [[i, k, mult]...], "lattice": [...], "coeff": {"re", "im"}}`
    /// with 0-based basis indices.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|((u, b), c)| {
                    let z = c.to_complex();
                    serde_json::json!({
                        "monomial": u.powers().map(|(i, k, m)| vec![i as u64, k as u64, m as u64]).collect::<Vec<_>>(),
                        "lattice": b.to_json(),
                        "coeff": {"re": z.re, "im": z.im},
                    })
                })
                .collect(),
        )
    }
}

impl VoaElement<Complex64> {
    pub fn from_json(s: &str, rank: usize) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::parse(s, e.to_string()))?;
        let arr = v
            .as_array()
            .ok_or_else(|| Error::parse(s, "element must be a list of terms"))?;
        let mut out = VoaElement::zero(rank, None);
        for t in arr {
            let bad = |why: &str| Error::parse(&t.to_string(), why);
            let mono = t["monomial"]
                .as_array()
                .ok_or_else(|| bad("missing monomial"))?;
            let mut powers = Vec::new();
            for e in mono {
                let e = e
                    .as_array()
                    .filter(|e| e.len() == 3)
                    .ok_or_else(|| bad("monomial entries are [i, k, mult]"))?;
                let get = |x: &serde_json::Value| {
                    x.as_u64()
                        .ok_or_else(|| bad("monomial entries must be integers"))
                };
                let i = get(&e[0])? as usize;
                if i >= rank {
                    return Err(bad("basis index out of range"));
                }
                powers.push((i, get(&e[1])? as u32, get(&e[2])? as u32));
            }
            let u = DiffMonomial::from_powers(&powers)?;
            let b = LatticePoint::from_json(&t["lattice"])?;
            if b.rank() != rank {
                return Err(bad("lattice point has wrong rank"));
            }
            let re = t["coeff"]["re"].as_f64().ok_or_else(|| bad("coeff.re"))?;
            let im = t["coeff"]["im"].as_f64().unwrap_or(0.0);
            out.add_term(u, b, Complex64::new(re, im));
        }
        Ok(out)
    }
}

impl<C: Coeff> fmt::Display for VoaElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((u, b), c)| format!("({:?}) {u} e^{b}", c))
            .collect();
        f.write_str(&parts.join(" + "))?;
        if let Some(t) = self.truncation {
            write!(f, " + O(deg {})", t + 1)?;
        }
        Ok(())
    }
}

/// `P_{α,k}` with `(1/k!) ∂^k e^{φ_α} = P_{α,k} e^{φ_α}`, from
/// `(k+1) P_{k+1} = Σ_{j≤k} P_j ∂^{k+1-j}φ_α / (k-j)!`.
pub fn diff_poly<C: Coeff>(alpha: &LatticePoint, k: u32) -> VoaElement<C> {
    diff_polys(alpha, k).pop().unwrap()
}

/// `[P_{α,0}, ..., P_{α,k}]`.
pub fn diff_polys<C: Coeff>(alpha: &LatticePoint, k: u32) -> Vec<VoaElement<C>> {
    let r = alpha.rank();
    let mut ps: Vec<VoaElement<C>> = vec![VoaElement::one(r)];
    // ∂^jφ_α / (j-1)!
    let mut fact = Rational::one();
    let mut dphis: Vec<VoaElement<C>> = Vec::new();
    for j in 1..=k {
        if j > 1 {
            fact *= int(j as i64 - 1);
        }
        dphis.push(VoaElement::dphi(alpha, j).scale(&C::from_rational(&(Rational::one() / &fact))));
    }
    for n in 0..k {
        let mut acc = VoaElement::zero(r, None);
        for j in 0..=n {
            acc = acc.add(&ps[j as usize].mul(&dphis[(n - j) as usize]));
        }
        ps.push(acc.scale(&C::from_rational(&rat(1, n as i64 + 1))));
    }
    ps
}

/// Formal sum of `a ⊗ b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<C: Coeff> {
    pub terms: BTreeMap<(Term, Term), C>,
}

impl<C: Coeff> Tensor<C> {
    pub fn new() -> Self {
        Tensor {
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, a: Term, b: Term, c: C) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let x = self.terms.entry(key.clone()).or_insert_with(C::zero);
        *x += c;
        if x.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`.
    pub fn mul(&self, o: &Tensor<C>) -> Tensor<C> {
        let mut out = Tensor::new();
        for (((u1, b1), (v1, d1)), c1) in &self.terms {
            for (((u2, b2), (v2, d2)), c2) in &o.terms {
                out.add_term(
                    (u1.mul(u2), b1 + b2),
                    (v1.mul(v2), d1 + d2),
                    c1.clone() * c2.clone(),
                );
            }
        }
        out
    }

    pub fn from_pure(a: &VoaElement<C>, b: &VoaElement<C>) -> Tensor<C> {
        let mut out = Tensor::new();
        for (u, x, c) in a.terms() {
            for (v, y, d) in b.terms() {
                out.add_term(
                    (u.clone(), x.clone()),
                    (v.clone(), y.clone()),
                    c.clone() * d.clone(),
                );
            }
        }
        out
    }
}

impl<C: Coeff> Default for Tensor<C> {
    fn default() -> Self {
        Tensor::new()
    }
}

/// `Δ`: `e^{φ_β}` grouplike, `∂^kφ_i` primitive, extended multiplicatively.
pub fn coproduct<C: Coeff>(v: &VoaElement<C>) -> Tensor<C> {
    let mut out = Tensor::new();
    for (u, b, c) in v.terms() {
        for (u1, u2, w) in u.splits() {
            out.add_term(
                (u1, b.clone()),
                (u2, b.clone()),
                c.clone() * C::from_int(w as i64),
            );
        }
    }
    out
}

/// Fractional Laurent polynomial `Σ c_m z^m` with an optional exponent window.
#[derive(Clone, Debug, PartialEq)]
pub struct FracLaurent<C: Coeff> {
    coeffs: BTreeMap<Rational, C>,
    window: Option<(Rational, Rational)>,
}

impl<C: Coeff> FracLaurent<C> {
    pub fn new(window: Option<(Rational, Rational)>) -> Self {
        FracLaurent {
            coeffs: BTreeMap::new(),
            window,
        }
    }

    pub fn window(&self) -> Option<&(Rational, Rational)> {
        self.window.as_ref()
    }

    pub fn add_term(&mut self, m: Rational, c: C) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        if let Some((lo, hi)) = &self.window {
            if m < *lo || m > *hi {
                return Err(Error::WindowOverflow(format!("{m} outside [{lo}, {hi}]")));
            }
        }
        let x = self.coeffs.entry(m.clone()).or_insert_with(C::zero);
        *x += c;
        if x.is_zero() {
            self.coeffs.remove(&m);
        }
        Ok(())
    }

    pub fn coeff(&self, m: &Rational) -> C {
        self.coeffs.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &C)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (m, c) in &o.coeffs {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let mut out = FracLaurent::new(self.window.clone().or_else(|| o.window.clone()));
        for (m1, c1) in &self.coeffs {
            for (m2, c2) in &o.coeffs {
                out.add_term(m1 + m2, c1.clone() * c2.clone())?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = FracLaurent::new(self.window.clone());
        for (m, c) in &self.coeffs {
            out.add_term(m.clone(), c.clone() * s.clone()).unwrap();
        }
        out
    }

    /// `d/dz`.
    pub fn d_dz(&self) -> Result<Self> {
        let mut out = FracLaurent::new(self.window.clone());
        for (m, c) in &self.coeffs {
            out.add_term(m - int(1), c.clone() * C::from_rational(m))?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    type Q = Rational;

    fn a() -> LatticePoint {
        LatticePoint::basis(1, 0)
    }

    fn g(k: u32) -> DiffMonomial {
        DiffMonomial::generator(0, k)
    }

    #[test]
    fn printed_diff_polys() {
        let ps = diff_polys::<Q>(&a(), 3);
        let z = LatticePoint::zero(1);
        assert_eq!(ps[0], VoaElement::one(1));
        assert_eq!(ps[1], VoaElement::term(g(1), z.clone(), int(1)));
        let mut p2 = VoaElement::zero(1, None);
        p2.add_term(g(1).mul(&g(1)), z.clone(), rat(1, 2));
        p2.add_term(g(2), z.clone(), rat(1, 2));
        assert_eq!(ps[2], p2);
        let mut p3 = VoaElement::zero(1, None);
        p3.add_term(g(1).mul(&g(1)).mul(&g(1)), z.clone(), rat(1, 6));
        p3.add_term(g(1).mul(&g(2)), z.clone(), rat(3, 6));
        p3.add_term(g(3), z, rat(1, 6));
        assert_eq!(ps[3], p3);
    }

    #[test]
    fn diff_poly_is_scaled_derivative() {
        let alpha = LatticePoint(vec![int(2), rat(-1, 3)]);
        let mut e = VoaElement::<Q>::exp(&alpha);
        let ps = diff_polys::<Q>(&alpha, 5);
        let mut fact = int(1);
        for (k, p) in ps.iter().enumerate() {
            if k > 0 {
                e = e.derivative();
                fact *= int(k as i64);
            }
            let lhs = e.scale(&(int(1) / fact.clone()));
            assert_eq!(lhs, p.mul(&VoaElement::exp(&alpha)), "k = {k}");
        }
    }

    #[test]
    fn coproduct_of_diff_poly() {
        let ps = diff_polys::<Q>(&a(), 3);
        for k in 0..=3usize {
            let lhs = coproduct(&ps[k]);
            let mut rhs = Tensor::new();
            for j in 0..=k {
                let t = Tensor::from_pure(&ps[j], &ps[k - j]);
                for ((x, y), c) in t.terms {
                    rhs.add_term(x, y, c);
                }
            }
            assert_eq!(lhs, rhs, "k = {k}");
        }
    }

    #[test]
    fn grouplike_and_primitive() {
        let e = VoaElement::<Q>::exp(&a());
        let t = coproduct(&e);
        assert_eq!(t, Tensor::from_pure(&e, &e));
        let x = VoaElement::<Q>::term(g(2), LatticePoint::zero(1), int(1));
        let one = VoaElement::<Q>::one(1);
        let mut expect = Tensor::from_pure(&x, &one);
        for (k, c) in Tensor::from_pure(&one, &x).terms {
            expect.add_term(k.0, k.1, c);
        }
        assert_eq!(coproduct(&x), expect);
    }

    #[test]
    fn truncation_drops_high_degree() {
        let mut v = VoaElement::<Q>::zero(1, Some(2));
        v.add_term(g(3), LatticePoint::zero(1), int(1));
        assert!(v.is_zero());
        let w = VoaElement::<Q>::term(g(1), LatticePoint::zero(1), int(1)).truncated(Some(1));
        assert_eq!(w.mul(&w).len(), 0);
    }

    #[test]
    fn json_round_trip() {
        let alpha = LatticePoint(vec![int(1), rat(1, 2)]);
        let v = diff_poly::<Complex64>(&alpha, 3).mul(&VoaElement::exp(&alpha));
        let back = VoaElement::from_json(&v.to_json().to_string(), 2).unwrap();
        assert!(back.distance(&v) < 1e-15);
    }
}
