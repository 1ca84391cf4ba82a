use num_complex::Complex64;
use rayon::prelude::*;

use super::{
    q_commutator, screening_product_formula, yer, zemlja, DiffMonomial, Lattice, LatticePoint,
    VoaElement,
};
use crate::error::{Error, Result};
use crate::monodromy::SeriesConfig;
use crate::nichols::WordCombination;
use crate::numeric::{int, Rational};

#[derive(Clone, Debug)]
pub struct NicholsVectorReport {
    /// Largest coefficient of `Σ_f c_f ζ_{f_1} ... ζ_{f_n} e^{φ_λ}`.
    pub max_abs: f64,
    pub result: VoaElement<Complex64>,
    pub warnings: Vec<String>,
}

/// Applies the screening combination of `relation` (colors indexing `alphas`) to
/// `e^{φ_λ}` up to degree `trunc`.
pub fn check_nichols_on_vector(
    lat: &Lattice,
    relation: &WordCombination,
    alphas: &[LatticePoint],
    lambda: &LatticePoint,
    trunc: u32,
    cfg: &SeriesConfig,
) -> Result<NicholsVectorReport> {
    let mut warnings = Vec::new();
    for (c, a) in alphas.iter().enumerate() {
        let norm = lat.inner(a, a);
        if norm > int(1) {
            warnings.push(format!(
                "color {} has |α|² = {norm} > 1; smallness is not guaranteed",
                c + 1
            ));
        }
    }
    let mut result = VoaElement::zero(lat.rank(), Some(trunc));
    for (word, c) in relation.terms() {
        let seq: Vec<LatticePoint> =
            word.iter()
                .map(|&f| {
                    alphas.get(f).cloned().ok_or_else(|| {
                        Error::Precondition(format!("color {f} has no lattice vector"))
                    })
                })
                .collect::<Result<_>>()?;
        let part = screening_product_formula(lat, &seq, lambda, trunc, cfg)?;
        result = result.add(&part.scale(c));
    }
    Ok(NicholsVectorReport {
        max_abs: result.max_abs(),
        result,
        warnings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootSystem {
    Sl2,
    Sl3,
}

impl RootSystem {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sl2" => Ok(RootSystem::Sl2),
            "sl3" => Ok(RootSystem::Sl3),
            _ => Err(Error::parse(s, "expected sl2 or sl3")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RootSystem::Sl2 => "sl2",
            RootSystem::Sl3 => "sl3",
        }
    }

    pub fn lattice(&self) -> Lattice {
        match self {
            RootSystem::Sl2 => Lattice::sl2(),
            RootSystem::Sl3 => Lattice::sl3(),
        }
    }

    /// Positive and negative roots in simple-root coordinates.
    pub fn roots(&self) -> Vec<LatticePoint> {
        let pos: Vec<Vec<i64>> = match self {
            RootSystem::Sl2 => vec![vec![1]],
            RootSystem::Sl3 => vec![vec![1, 0], vec![0, 1], vec![1, 1]],
        };
        pos.iter()
            .map(|p| LatticePoint::from_ints(p))
            .chain(
                pos.iter()
                    .map(|p| LatticePoint::from_ints(&p.iter().map(|x| -x).collect::<Vec<_>>())),
            )
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub relation: String,
    pub vectors: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug)]
pub struct TrivialLevelReport {
    pub root_system: RootSystem,
    pub degree: u32,
    pub basis_size: usize,
    pub checks: Vec<RelationCheck>,
}

impl TrivialLevelReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }
}

fn monomials(rank: usize, degree: u32) -> Vec<DiffMonomial> {
    // generators (i, k) with k ≤ degree, combined up to total degree
    let gens: Vec<(usize, u32)> = (0..rank)
        .flat_map(|i| (1..=degree).map(move |k| (i, k)))
        .collect();
    fn rec(gens: &[(usize, u32)], left: u32, cur: DiffMonomial, out: &mut Vec<DiffMonomial>) {
        let Some((&(i, k), rest)) = gens.split_first() else {
            out.push(cur);
            return;
        };
        let mut m = cur;
        let mut budget = left;
        loop {
            rec(rest, budget, m.clone(), out);
            if budget < k {
                break;
            }
            budget -= k;
            m = m.mul(&DiffMonomial::generator(i, k));
        }
    }
    let mut out = Vec::new();
    rec(&gens, degree, DiffMonomial::one(), &mut out);
    out
}

/// `u e^{φ_β}` with `deg u ≤ degree` and `β` in the box `{-1, 0, 1}^rank`.
pub fn basis_vectors(rank: usize, degree: u32) -> Vec<VoaElement<Rational>> {
    let mut points = vec![Vec::<i64>::new()];
    for _ in 0..rank {
        points = points
            .into_iter()
            .flat_map(|p| {
                (-1..=1).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    let monos = monomials(rank, degree);
    points
        .iter()
        .flat_map(|p| {
            let beta = LatticePoint::from_ints(p);
            monos
                .iter()
                .map(move |u| VoaElement::term(u.clone(), beta.clone(), int(1)))
        })
        .collect()
}

fn run_check<F>(name: String, basis: &[VoaElement<Rational>], f: F) -> Result<RelationCheck>
where
    F: Fn(&VoaElement<Rational>) -> Result<VoaElement<Rational>> + Sync,
{
    let defects: Vec<Result<Option<String>>> = basis
        .par_iter()
        .map(|v| {
            Ok(if f(v)?.is_zero() {
                None
            } else {
                Some(v.to_string())
            })
        })
        .collect();
    let mut failures = 0;
    let mut first_failure = None;
    for d in defects {
        if let Some(s) = d? {
            failures += 1;
            first_failure.get_or_insert(s);
        }
    }
    Ok(RelationCheck {
        relation: name,
        vectors: basis.len(),
        failures,
        first_failure,
    })
}

/// Checks, exactly on every basis vector of degree `≤ degree`:
/// `[ζ_α, ζ_β]_+ = ζ_{α+β}` for `(α,β) = -1`, `[ζ_α, ζ_β]_q = 0` for `(α,β) ∈ {0, 1}`,
/// `[ζ_α, ζ_{-α}] = yer_α` and `[yer_λ, ζ_α] = (λ,α) ζ_α` for simple `λ`.
pub fn trivial_level_relations(g: RootSystem, degree: u32) -> Result<TrivialLevelReport> {
    let lat = g.lattice();
    let r = lat.rank();
    let roots = g.roots();
    let basis = basis_vectors(r, degree);
    let mut checks = Vec::new();
    for a in &roots {
        for b in &roots {
            let ab = lat.inner(a, b);
            if ab == int(-1) {
                let s = a + b;
                checks.push(run_check(
                    format!("[ζ_{a}, ζ_{b}]_+ = ζ_{s}"),
                    &basis,
                    |v| Ok(q_commutator(&lat, a, b, v, None)?.sub(&zemlja(&lat, &s, v, None)?)),
                )?);
            } else if ab == int(0) || ab == int(1) {
                let sym = if ab == int(0) { "" } else { "_+" };
                checks.push(run_check(
                    format!("[ζ_{a}, ζ_{b}]{sym} = 0"),
                    &basis,
                    |v| q_commutator(&lat, a, b, v, None),
                )?);
            } else if ab == int(-2) {
                checks.push(run_check(
                    format!("[ζ_{a}, ζ_{b}] = yer_{a}"),
                    &basis,
                    |v| Ok(q_commutator(&lat, a, b, v, None)?.sub(&yer(&lat, a, v))),
                )?);
            }
        }
    }
    for i in 0..r {
        let l = LatticePoint::basis(r, i);
        for a in &roots {
            let la = lat.inner(&l, a);
            checks.push(run_check(
                format!("[yer_{l}, ζ_{a}] = {la} ζ_{a}"),
                &basis,
                |v| {
                    let z = zemlja(&lat, a, v, None)?;
                    let comm = yer(&lat, &l, &z).sub(&zemlja(&lat, a, &yer(&lat, &l, v), None)?);
                    Ok(comm.sub(&z.scale(&la)))
                },
            )?);
        }
    }
    Ok(TrivialLevelReport {
        root_system: g,
        degree,
        basis_size: basis.len(),
        checks,
    })
}

/// `W⁰ = ζ_{β} e^{-φ_β}` on the rank one lattice with `(β, β) = 2p`, exactly.
pub fn triplet_w0(p: u32) -> Result<VoaElement<Rational>> {
    if p == 0 {
        return Err(Error::Precondition("triplet needs p >= 1".into()));
    }
    let lat = Lattice::rank_one(int(2 * p as i64));
    let beta = LatticePoint::basis(1, 0);
    zemlja(&lat, &beta, &VoaElement::exp(&-&beta), None)
}
