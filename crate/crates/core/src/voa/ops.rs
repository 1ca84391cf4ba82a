use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::element::diff_polys;
use super::{Coeff, DiffMonomial, FracLaurent, Lattice, LatticePoint, VoaElement};
use crate::error::{Error, Result};
use crate::monodromy::{default_shell_cap, f_minus_report, MonodromyParams, SeriesConfig};
use crate::numeric::{int, is_integer, Rational};

pub const DEFAULT_TRUNCATION: u32 = 6;

fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, i| acc * int(i))
}

fn sign(k: u32) -> Rational {
    if k.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// `⟨u e^{φ_α}, v e^{φ_β}⟩ = c z^{(α,β) - deg u - deg v}`, with `c` a sum over partial
/// matchings of the primitive factors.
fn pair_terms(
    lat: &Lattice,
    u: &DiffMonomial,
    alpha: &LatticePoint,
    v: &DiffMonomial,
    beta: &LatticePoint,
) -> (Rational, Rational) {
    let exponent = lat.inner(alpha, beta) - int(u.degree() as i64) - int(v.degree() as i64);
    let xs = u.factors();
    let ys = v.factors();
    // ⟨∂^kφ_i, e^β⟩ and ⟨e^α, ∂^lφ_j⟩
    let xe: Vec<Rational> = xs
        .iter()
        .map(|&(i, k)| lat.basis_inner(i, beta) * sign(k - 1) * factorial(k - 1))
        .collect();
    let ey: Vec<Rational> = ys
        .iter()
        .map(|&(j, l)| -lat.basis_inner(j, alpha) * factorial(l - 1))
        .collect();
    let xy = |a: usize, b: usize| -> Rational {
        let (i, k) = xs[a];
        let (j, l) = ys[b];
        &lat.gram()[i][j] * sign(k - 1) * factorial(k + l - 1)
    };
    fn rec(
        a: usize,
        used: u64,
        xs_len: usize,
        xe: &[Rational],
        ey: &[Rational],
        xy: &dyn Fn(usize, usize) -> Rational,
    ) -> Rational {
        if a == xs_len {
            let mut p = Rational::one();
            for (b, v) in ey.iter().enumerate() {
                if used & (1 << b) == 0 {
                    p *= v;
                    if p.is_zero() {
                        break;
                    }
                }
            }
            return p;
        }
        let mut s = Rational::zero();
        if !xe[a].is_zero() {
            s += &xe[a] * rec(a + 1, used, xs_len, xe, ey, xy);
        }
        for b in 0..ey.len() {
            if used & (1 << b) == 0 {
                let w = xy(a, b);
                if !w.is_zero() {
                    s += w * rec(a + 1, used | (1 << b), xs_len, xe, ey, xy);
                }
            }
        }
        s
    }
    assert!(ys.len() < 64, "monomial too long for the pairing");
    let c = rec(0, 0, xs.len(), &xe, &ey, &xy);
    (exponent, c)
}

/// Hopf pairing `⟨a, b⟩` as a fractional Laurent polynomial.
pub fn pairing<C: Coeff>(
    lat: &Lattice,
    a: &VoaElement<C>,
    b: &VoaElement<C>,
    window: Option<(Rational, Rational)>,
) -> Result<FracLaurent<C>> {
    let mut out = FracLaurent::new(window);
    for (u, alpha, ca) in a.terms() {
        for (v, beta, cb) in b.terms() {
            let (e, c) = pair_terms(lat, u, alpha, v, beta);
            if !c.is_zero() {
                out.add_term(e, ca.clone() * cb.clone() * C::from_rational(&c))?;
            }
        }
    }
    Ok(out)
}

/// A term of `Σ ⟨a', b'⟩ b'' ⊗ a''` for single terms `a`, `b`: the exponent of the
/// pairing, its coefficient (split weights included), and the leftovers.
struct Contraction {
    exponent: Rational,
    coeff: Rational,
    a_rest: DiffMonomial,
    b_rest: DiffMonomial,
}

fn contractions(
    lat: &Lattice,
    x: &DiffMonomial,
    alpha: &LatticePoint,
    y: &DiffMonomial,
    beta: &LatticePoint,
) -> Vec<Contraction> {
    let mut out = Vec::new();
    for (xs, xr, wx) in x.splits() {
        for (ys, yr, wy) in y.splits() {
            let (e, c) = pair_terms(lat, &xs, alpha, &ys, beta);
            if c.is_zero() {
                continue;
            }
            out.push(Contraction {
                exponent: e,
                coeff: c * int(wx as i64) * int(wy as i64),
                a_rest: xr.clone(),
                b_rest: yr,
            });
        }
    }
    out
}

/// `(1/k!) ∂^k (u e^{φ_α})` for `k = 0, 1, ...`, extended on demand.
struct Taylor<C: Coeff> {
    cache: BTreeMap<(DiffMonomial, LatticePoint), Vec<VoaElement<C>>>,
}

impl<C: Coeff> Taylor<C> {
    fn new() -> Self {
        Taylor {
            cache: BTreeMap::new(),
        }
    }

    fn get(&mut self, u: &DiffMonomial, alpha: &LatticePoint, k: u32) -> &VoaElement<C> {
        let seq = self
            .cache
            .entry((u.clone(), alpha.clone()))
            .or_insert_with(|| {
                if u.is_one() {
                    Vec::new()
                } else {
                    vec![VoaElement::term(u.clone(), alpha.clone(), C::from_int(1))]
                }
            });
        if u.is_one() && seq.len() <= k as usize {
            let e = VoaElement::<C>::exp(alpha);
            *seq = diff_polys::<C>(alpha, k.max(2 * seq.len() as u32))
                .iter()
                .map(|p| p.mul(&e))
                .collect();
        }
        while seq.len() <= k as usize {
            let n = seq.len() as i64;
            let next = seq
                .last()
                .unwrap()
                .derivative()
                .scale(&C::from_rational(&(int(1) / int(n))));
            seq.push(next);
        }
        &seq[k as usize]
    }
}

fn accumulate<C: Coeff>(
    out: &mut VoaElement<C>,
    piece: &VoaElement<C>,
    rest: &DiffMonomial,
    beta: &LatticePoint,
    c: &C,
) {
    for (u, g, d) in piece.terms() {
        out.add_term(u.mul(rest), g + beta, d.clone() * c.clone());
    }
}

/// `Y(a)b = Σ ⟨a', b'⟩ b'' Σ_k (z^k/k!) ∂^k a''`, keyed by exponent of `z`, up to
/// output degree `trunc`.
pub fn vertex_op<C: Coeff>(
    lat: &Lattice,
    a: &VoaElement<C>,
    b: &VoaElement<C>,
    trunc: u32,
) -> Result<BTreeMap<Rational, VoaElement<C>>> {
    let mut out: BTreeMap<Rational, VoaElement<C>> = BTreeMap::new();
    let mut taylor = Taylor::new();
    let rank = lat.rank();
    for (x, alpha, ca) in a.terms() {
        for (y, beta, cb) in b.terms() {
            for ct in contractions(lat, x, alpha, y, beta) {
                let base = ct.a_rest.degree() + ct.b_rest.degree();
                if base > trunc {
                    continue;
                }
                let c = ca.clone() * cb.clone() * C::from_rational(&ct.coeff);
                for k in 0..=(trunc - base) {
                    let piece = taylor.get(&ct.a_rest, alpha, k).clone();
                    let slot = out
                        .entry(&ct.exponent + int(k as i64))
                        .or_insert_with(|| VoaElement::zero(rank, Some(trunc)));
                    accumulate(slot, &piece, &ct.b_rest, beta, &c);
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Coefficient of `z^m` in `Y(a)b`.
pub fn mode_op<C: Coeff>(
    lat: &Lattice,
    a: &VoaElement<C>,
    m: &Rational,
    b: &VoaElement<C>,
    trunc: u32,
) -> Result<VoaElement<C>> {
    Ok(vertex_op(lat, a, b, trunc)?
        .remove(m)
        .unwrap_or_else(|| VoaElement::zero(lat.rank(), Some(trunc))))
}

/// `ResY(a) b = Σ_m Res_1(z^m) · Y(a)_m b`.
///
/// Integral pairings contribute only `m = -1` and are exact without truncation;
/// fractional ones need `trunc`.
pub fn res_y<C: Coeff>(
    lat: &Lattice,
    a: &VoaElement<C>,
    b: &VoaElement<C>,
    trunc: Option<u32>,
) -> Result<VoaElement<C>> {
    let mut out = VoaElement::zero(lat.rank(), trunc);
    let mut taylor = Taylor::new();
    let minus_one = int(-1);
    for (x, alpha, ca) in a.terms() {
        for (y, beta, cb) in b.terms() {
            let integral = is_integer(&lat.inner(alpha, beta));
            if !integral && trunc.is_none() {
                return Err(Error::NonConvergent(format!(
                    "pairing ({alpha}, {beta}) is fractional; the residue is an infinite series and needs a truncation degree"
                )));
            }
            for ct in contractions(lat, x, alpha, y, beta) {
                let base = ct.a_rest.degree() + ct.b_rest.degree();
                let c = ca.clone() * cb.clone() * C::from_rational(&ct.coeff);
                if integral {
                    let k = &minus_one - &ct.exponent;
                    if k < Rational::zero() {
                        continue;
                    }
                    let k = k.to_integer().to_string().parse::<u32>().unwrap();
                    if trunc.is_some_and(|t| base + k > t) {
                        continue;
                    }
                    let piece = taylor.get(&ct.a_rest, alpha, k).clone();
                    accumulate(&mut out, &piece, &ct.b_rest, beta, &c);
                } else {
                    let t = trunc.unwrap();
                    if base > t {
                        continue;
                    }
                    for k in 0..=(t - base) {
                        let r = C::residue(&(&ct.exponent + int(k as i64)))?;
                        let piece = taylor.get(&ct.a_rest, alpha, k).clone();
                        accumulate(&mut out, &piece, &ct.b_rest, beta, &(c.clone() * r));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `yer_α (u e^{φ_β}) = (α, β) u e^{φ_β}`.
pub fn yer<C: Coeff>(lat: &Lattice, alpha: &LatticePoint, v: &VoaElement<C>) -> VoaElement<C> {
    let mut out = VoaElement::zero(v.rank(), v.truncation());
    for (u, b, c) in v.terms() {
        out.add_term(
            u.clone(),
            b.clone(),
            c.clone() * C::from_rational(&lat.inner(alpha, b)),
        );
    }
    out
}

/// Screening operator `ζ_α = ResY(e^{φ_α})`.
pub fn zemlja<C: Coeff>(
    lat: &Lattice,
    alpha: &LatticePoint,
    v: &VoaElement<C>,
    trunc: Option<u32>,
) -> Result<VoaElement<C>> {
    lat.check_point(alpha)?;
    res_y(lat, &VoaElement::exp(alpha), v, trunc)
}

/// `[ζ_α, ζ_β]_q v = ζ_α ζ_β v - e^{πi(α,β)} ζ_β ζ_α v`.
pub fn q_commutator<C: Coeff>(
    lat: &Lattice,
    alpha: &LatticePoint,
    beta: &LatticePoint,
    v: &VoaElement<C>,
    trunc: Option<u32>,
) -> Result<VoaElement<C>> {
    let q = C::phase(&lat.inner(alpha, beta))?;
    let ab = zemlja(lat, alpha, &zemlja(lat, beta, v, trunc)?, trunc)?;
    let ba = zemlja(lat, beta, &zemlja(lat, alpha, v, trunc)?, trunc)?;
    Ok(ab.sub(&ba.scale(&q)))
}

/// `ζ_{α_1} ∘ ... ∘ ζ_{α_n} (v)`, each step truncated at `trunc`.
pub fn screening_product_direct<C: Coeff>(
    lat: &Lattice,
    alphas: &[LatticePoint],
    v: &VoaElement<C>,
    trunc: Option<u32>,
) -> Result<VoaElement<C>> {
    screening_product_direct_with_headroom(lat, alphas, v, trunc, 0)
}

/// As [`screening_product_direct`], but intermediate results are kept up to
/// `trunc + headroom` so that contractions from higher degrees reach the final window.
pub fn screening_product_direct_with_headroom<C: Coeff>(
    lat: &Lattice,
    alphas: &[LatticePoint],
    v: &VoaElement<C>,
    trunc: Option<u32>,
    headroom: u32,
) -> Result<VoaElement<C>> {
    let inner = trunc.map(|t| t + headroom);
    let mut cur = v.clone();
    for (step, alpha) in alphas.iter().rev().enumerate() {
        let t = if step + 1 == alphas.len() {
            trunc
        } else {
            inner
        };
        cur = zemlja(lat, alpha, &cur, t)?;
    }
    Ok(cur.truncated(trunc))
}

/// `ζ_{α_1} ... ζ_{α_n} e^{φ_λ} = Σ_k F₋((m_i + k_i), m_ij) e^{φ_λ} Π_{i=n..1} P_{α_i,k_i} e^{φ_{α_i}}`
/// with `m_i = (α_i, λ)`, `m_ij = (α_i, α_j)`, over `Σ k_i ≤ trunc`.
pub fn screening_product_formula(
    lat: &Lattice,
    alphas: &[LatticePoint],
    lambda: &LatticePoint,
    trunc: u32,
    cfg: &SeriesConfig,
) -> Result<VoaElement<Complex64>> {
    let n = alphas.len();
    lat.check_point(lambda)?;
    for a in alphas {
        lat.check_point(a)?;
    }
    let r = lat.rank();
    if n == 0 {
        return Ok(VoaElement::exp(lambda).truncated(Some(trunc)));
    }
    let m: Vec<Rational> = alphas.iter().map(|a| lat.inner(a, lambda)).collect();
    let mut mm = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            mm.push(lat.inner(&alphas[i], &alphas[j]));
        }
    }
    let base = MonodromyParams::new(m, mm)?;
    let polys: Vec<Vec<VoaElement<Complex64>>> =
        alphas.iter().map(|a| diff_polys(a, trunc)).collect();
    let mut ks: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..n {
        ks = ks
            .into_iter()
            .flat_map(|k| {
                let used: u32 = k.iter().sum();
                (0..=trunc - used).map(move |x| {
                    let mut k2 = k.clone();
                    k2.push(x);
                    k2
                })
            })
            .collect();
    }
    let values: Vec<Result<Complex64>> = ks
        .par_iter()
        .map(|k| {
            let shift: Vec<i64> = k.iter().map(|&x| x as i64).collect();
            let cap = cfg.shell_cap.unwrap_or_else(|| default_shell_cap(n));
            Ok(f_minus_report(&base.shifted(&shift), cfg)?
                .require_converged(cap)?
                .value)
        })
        .collect();
    let mut total = LatticePoint::zero(r);
    total = &total + lambda;
    for a in alphas {
        total = &total + a;
    }
    let mut out = VoaElement::zero(r, Some(trunc));
    for (k, f) in ks.iter().zip(values) {
        let f = f?;
        if f == Complex64::zero() {
            continue;
        }
        let mut prod = VoaElement::<Complex64>::one(r);
        for i in (0..n).rev() {
            prod = prod.mul(&polys[i][k[i] as usize]);
        }
        for (u, _, c) in prod.terms() {
            out.add_term(u.clone(), total.clone(), c * f);
        }
    }
    Ok(out)
}

/// The boundary term `A((α,β)) Σ_m Y(e^{φ_α})_m v` of `∂ζ_α - ζ_α∂` on `v ∈ V_β`, with
/// `A(m) = (e^{2πim} - 1)/(2πi)`.
pub fn translation_defect<C: Coeff>(
    lat: &Lattice,
    alpha: &LatticePoint,
    v: &VoaElement<C>,
    trunc: u32,
) -> Result<VoaElement<C>> {
    let mut out = VoaElement::zero(lat.rank(), Some(trunc));
    let e = VoaElement::<C>::exp(alpha);
    for (u, beta, c) in v.terms() {
        let mab = lat.inner(alpha, beta);
        // A(m) = (m + 1) Res_1(z^m) off the integers, and 0 on them
        let a = if is_integer(&mab) {
            continue;
        } else {
            C::residue(&mab)? * C::from_rational(&(&mab + int(1)))
        };
        let single = VoaElement::term(u.clone(), beta.clone(), c.clone());
        for (_, part) in vertex_op(lat, &e, &single, trunc)? {
            out = out.add(&part.scale(&a));
        }
    }
    Ok(out)
}
