//! Quantum symmetrizers of diagonal braidings, their kernels and relation membership.

use std::collections::BTreeMap;

use itertools::Itertools;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::combinat::{permutations, BraidingMatrix, Permutation, DEFAULT_FACTORIAL_CAP};
use crate::error::{Error, Result};
use crate::numeric::{common_denominator, expi_pi, rat};

pub type Coloring = Vec<usize>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NicholsConfig {
    pub factorial_cap: usize,
    /// Upper bound on `rank^n`, the dimension of `M^{⊗n}`.
    pub max_columns: usize,
    /// Relative SVD threshold; singular values below `eps · n!` count as zero.
    pub eps: f64,
}

impl Default for NicholsConfig {
    fn default() -> Self {
        NicholsConfig {
            factorial_cap: DEFAULT_FACTORIAL_CAP,
            max_columns: 4096,
            eps: 1e-10,
        }
    }
}

/// Integer form of the braiding exponents: `m_ab = num[a][b] / den`, reduced mod `2 den`.
struct PhaseTable {
    num: Vec<Vec<i64>>,
    den: i64,
    table: Option<Vec<Complex64>>,
}

impl PhaseTable {
    fn new(q: &BraidingMatrix) -> Result<Self> {
        let r = q.rank();
        let d = common_denominator(
            (0..r)
                .flat_map(|i| (0..r).map(move |j| (i, j)))
                .map(|(i, j)| q.exponent(i, j)),
        );
        let den = d
            .to_i64()
            .filter(|&d| d < 1 << 40)
            .ok_or_else(|| Error::Precondition(format!("braiding denominators too large ({d})")))?;
        let num = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let x = q.exponent(i, j) * BigInt::from(den);
                        x.to_integer().to_i64().unwrap().rem_euclid(2 * den)
                    })
                    .collect()
            })
            .collect();
        let table =
            (den <= 1 << 15).then(|| (0..2 * den).map(|k| expi_pi::<f64>(&rat(k, den))).collect());
        Ok(PhaseTable { num, den, table })
    }

    fn eval(&self, k: i64) -> Complex64 {
        let k = k.rem_euclid(2 * self.den);
        match &self.table {
            Some(t) => t[k as usize],
            None => {
                let mut x = k as f64 / self.den as f64;
                if x > 1.0 {
                    x -= 2.0;
                }
                Complex64::from_polar(1.0, std::f64::consts::PI * x)
            }
        }
    }

    /// Exponent numerator of `q(σ)` for the colored word `f`.
    fn exponent(&self, f: &[usize], inversions: &[(usize, usize)]) -> i64 {
        inversions.iter().map(|&(a, b)| self.num[f[a]][f[b]]).sum()
    }
}

struct SymData {
    perms: Vec<(Permutation, Vec<(usize, usize)>, Permutation)>,
}

impl SymData {
    fn new(n: usize) -> Self {
        SymData {
            perms: permutations(n)
                .map(|s| {
                    let inv = s.inversions();
                    let si = s.inverse();
                    (s, inv, si)
                })
                .collect(),
        }
    }
}

fn check_size(q: &BraidingMatrix, n: usize, cfg: &NicholsConfig) -> Result<()> {
    if n > cfg.factorial_cap {
        return Err(Error::FactorialLimit {
            n,
            cap: cfg.factorial_cap,
        });
    }
    let cols = (q.rank() as f64).powi(n as i32);
    if cols > cfg.max_columns as f64 {
        return Err(Error::SizeLimit(format!(
            "rank^n = {}^{} exceeds {} columns",
            q.rank(),
            n,
            cfg.max_columns
        )));
    }
    Ok(())
}

/// Symmetrizer restricted to the words with a fixed multiset of colors.
#[derive(Clone, Debug)]
pub struct Block {
    /// Color counts per generator.
    pub weight: Vec<usize>,
    /// Basis words in lexicographic order.
    pub words: Vec<Coloring>,
    pub matrix: DMatrix<Complex64>,
}

#[derive(Clone, Debug)]
pub struct SymmetrizerBlocks {
    pub rank: usize,
    pub n: usize,
    pub blocks: Vec<Block>,
}

fn word_index(rank: usize, w: &[usize]) -> usize {
    w.iter().fold(0, |acc, &c| acc * rank + c)
}

impl SymmetrizerBlocks {
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.words.len()).sum()
    }

    /// The full matrix on the lexicographic word basis of `M^{⊗n}`.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let d = self.rank.pow(self.n as u32);
        let mut out = DMatrix::zeros(d, d);
        for b in &self.blocks {
            let idx: Vec<usize> = b.words.iter().map(|w| word_index(self.rank, w)).collect();
            for (r, &i) in idx.iter().enumerate() {
                for (c, &j) in idx.iter().enumerate() {
                    out[(i, j)] = b.matrix[(r, c)];
                }
            }
        }
        out
    }
}

/// All words of length `n` over `rank` colors, grouped by color multiset.
fn word_classes(rank: usize, n: usize) -> Vec<(Vec<usize>, Vec<Coloring>)> {
    let mut classes: BTreeMap<Vec<usize>, Vec<Coloring>> = BTreeMap::new();
    for w in (0..n).map(|_| 0..rank).multi_cartesian_product() {
        let mut weight = vec![0; rank];
        for &c in &w {
            weight[c] += 1;
        }
        classes.entry(weight).or_default().push(w);
    }
    if n == 0 {
        classes.insert(vec![0; rank], vec![Vec::new()]);
    }
    classes.into_iter().collect()
}

pub fn symmetrizer_blocks(q: &BraidingMatrix, n: usize) -> Result<SymmetrizerBlocks> {
    symmetrizer_blocks_with(q, n, &NicholsConfig::default())
}

pub fn symmetrizer_blocks_with(
    q: &BraidingMatrix,
    n: usize,
    cfg: &NicholsConfig,
) -> Result<SymmetrizerBlocks> {
    check_size(q, n, cfg)?;
    let phases = PhaseTable::new(q)?;
    let sym = SymData::new(n);
    let blocks = word_classes(q.rank(), n)
        .into_par_iter()
        .map(|(weight, words)| {
            let pos: BTreeMap<&Coloring, usize> =
                words.iter().enumerate().map(|(i, w)| (w, i)).collect();
            let mut m = DMatrix::zeros(words.len(), words.len());
            for (col, f) in words.iter().enumerate() {
                for (_, inv, si) in &sym.perms {
                    let image: Coloring = (0..n).map(|i| f[si.image(i)]).collect();
                    m[(pos[&image], col)] += phases.eval(phases.exponent(f, inv));
                }
            }
            Block {
                weight,
                words,
                matrix: m,
            }
        })
        .collect();
    Ok(SymmetrizerBlocks {
        rank: q.rank(),
        n,
        blocks,
    })
}

/// Dense matrix of `Ш_{q,n}` on the word basis of `M^{⊗n}`.
pub fn symmetrizer_matrix(q: &BraidingMatrix, n: usize) -> Result<DMatrix<Complex64>> {
    Ok(symmetrizer_blocks(q, n)?.to_dense())
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Numerical rank; errors when a singular value sits within a decade of the threshold.
fn numeric_rank(m: &DMatrix<Complex64>, threshold: f64) -> Result<usize> {
    if m.is_empty() {
        return Ok(0);
    }
    let sv = m.clone().svd(false, false).singular_values;
    let mut rank = 0;
    for &s in sv.iter() {
        if s > threshold / 10.0 && s < threshold * 10.0 {
            return Err(Error::IllConditioned {
                value: s,
                threshold,
            });
        }
        if s >= threshold {
            rank += 1;
        }
    }
    Ok(rank)
}

impl SymmetrizerBlocks {
    pub fn rank_with(&self, eps: f64) -> Result<usize> {
        let thr = eps * factorial(self.n);
        self.blocks
            .par_iter()
            .map(|b| numeric_rank(&b.matrix, thr))
            .collect::<Result<Vec<_>>>()
            .map(|v| v.into_iter().sum())
    }
}

/// `dim B(M)_n`, the rank of `Ш_{q,n}`.
pub fn nichols_dimension(q: &BraidingMatrix, n: usize) -> Result<usize> {
    let cfg = NicholsConfig::default();
    symmetrizer_blocks_with(q, n, &cfg)?.rank_with(cfg.eps)
}

pub fn kernel_dimension(q: &BraidingMatrix, n: usize) -> Result<usize> {
    kernel_dimension_with(q, n, &NicholsConfig::default())
}

pub fn kernel_dimension_with(q: &BraidingMatrix, n: usize, cfg: &NicholsConfig) -> Result<usize> {
    let b = symmetrizer_blocks_with(q, n, cfg)?;
    Ok(b.dimension() - b.rank_with(cfg.eps)?)
}

/// `dim B(M)_n` for `n = 0..=n_max`.
pub fn hilbert_series(q: &BraidingMatrix, n_max: usize) -> Result<Vec<usize>> {
    hilbert_series_with(q, n_max, &NicholsConfig::default())
}

pub fn hilbert_series_with(
    q: &BraidingMatrix,
    n_max: usize,
    cfg: &NicholsConfig,
) -> Result<Vec<usize>> {
    (0..=n_max)
        .map(|n| symmetrizer_blocks_with(q, n, cfg)?.rank_with(cfg.eps))
        .collect()
}

/// Element of `M^{⊗n}` in the word basis.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct WordCombination {
    terms: BTreeMap<Coloring, Complex64>,
    degree: usize,
}

impl WordCombination {
    pub fn new(degree: usize) -> Self {
        WordCombination {
            terms: BTreeMap::new(),
            degree,
        }
    }

    pub fn from_terms(
        degree: usize,
        terms: impl IntoIterator<Item = (Coloring, Complex64)>,
    ) -> Result<Self> {
        let mut w = WordCombination::new(degree);
        for (f, c) in terms {
            w.add_term(f, c)?;
        }
        Ok(w)
    }

    pub fn add_term(&mut self, f: Coloring, c: Complex64) -> Result<()> {
        if f.len() != self.degree {
            return Err(Error::Precondition(format!(
                "word {f:?} has length {}, expected {}",
                f.len(),
                self.degree
            )));
        }
        let e = self.terms.entry(f.clone()).or_insert_with(Complex64::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&f);
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Coloring, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// `Ш_{q,n}(w)`, computed term by term without building the matrix.
pub fn apply_symmetrizer(q: &BraidingMatrix, w: &WordCombination) -> Result<WordCombination> {
    let n = w.degree();
    if n > DEFAULT_FACTORIAL_CAP {
        return Err(Error::FactorialLimit {
            n,
            cap: DEFAULT_FACTORIAL_CAP,
        });
    }
    if w.terms().any(|(f, _)| f.iter().any(|&c| c >= q.rank())) {
        return Err(Error::Precondition("color outside braiding rank".into()));
    }
    let phases = PhaseTable::new(q)?;
    let sym = SymData::new(n);
    let mut acc: BTreeMap<Coloring, Complex64> = BTreeMap::new();
    for (f, &c) in w.terms() {
        for (_, inv, si) in &sym.perms {
            let image: Coloring = (0..n).map(|i| f[si.image(i)]).collect();
            *acc.entry(image).or_insert_with(Complex64::zero) +=
                c * phases.eval(phases.exponent(f, inv));
        }
    }
    let mut out = WordCombination::new(n);
    out.terms = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    Ok(out)
}

pub const DEFAULT_RELATION_TOL: f64 = 1e-9;

/// Whether `‖Ш_{q,n}(w)‖ ≤ tol ‖w‖`.
pub fn is_relation(q: &BraidingMatrix, w: &WordCombination, tol: f64) -> Result<bool> {
    let cols = (q.rank() as f64).powi(w.degree() as i32);
    if cols > NicholsConfig::default().max_columns as f64 {
        return Err(Error::SizeLimit(format!(
            "rank^n = {}^{} exceeds {} columns",
            q.rank(),
            w.degree(),
            NicholsConfig::default().max_columns
        )));
    }
    Ok(apply_symmetrizer(q, w)?.norm() <= tol * w.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::braiding_factor;
    use crate::numeric::{int, Rational};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn a2(m: Rational) -> BraidingMatrix {
        // q_ii = q², q_12 = q_21 = q⁻¹ with q = e^{πi m}
        BraidingMatrix::new(vec![
            vec![&m * int(2), -m.clone()],
            vec![-m.clone(), &m * int(2)],
        ])
        .unwrap()
    }

    /// Oracle: Σ_σ ρ(s(σ)) with each ρ(s(σ)) a product of braiding matrices `c_k`
    /// along the reduced word, on the full tensor power.
    fn brute_force(q: &BraidingMatrix, n: usize) -> DMatrix<Complex64> {
        let r = q.rank();
        let d = r.pow(n as u32);
        let words: Vec<Coloring> = (0..n).map(|_| 0..r).multi_cartesian_product().collect();
        let words = if n == 0 { vec![Vec::new()] } else { words };
        let ck = |k: usize| {
            let mut m = DMatrix::<Complex64>::zeros(d, d);
            for w in &words {
                let mut v = w.clone();
                v.swap(k, k + 1);
                m[(word_index(r, &v), word_index(r, w))] = q.value(w[k], w[k + 1]);
            }
            m
        };
        let gens: Vec<_> = (0..n.saturating_sub(1)).map(ck).collect();
        let mut total = DMatrix::<Complex64>::zeros(d, d);
        for s in permutations(n) {
            let mut m = DMatrix::<Complex64>::identity(d, d);
            for &k in &s.reduced_word() {
                m *= &gens[k];
            }
            total += m;
        }
        total
    }

    #[test]
    fn degree_one_is_identity() {
        let q = a2(rat(1, 5));
        let m = symmetrizer_matrix(&q, 1).unwrap();
        assert_eq!(m, DMatrix::identity(2, 2));
        assert_eq!(kernel_dimension(&q, 1).unwrap(), 0);
    }

    #[test]
    fn rank_one_degree_two() {
        let q = BraidingMatrix::uniform(1, rat(2, 7));
        let m = symmetrizer_matrix(&q, 2).unwrap();
        let expect = c(1.0) + q.value(0, 0);
        assert!((m[(0, 0)] - expect).norm() < 1e-15);
    }

    #[test]
    fn plain_symmetrizer() {
        let q = BraidingMatrix::uniform(2, int(0));
        let m = symmetrizer_matrix(&q, 2).unwrap();
        let expect = DMatrix::from_row_slice(
            4,
            4,
            &[
                2.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 2.0,
            ],
        )
        .map(c);
        assert!((m - expect).norm() < 1e-15);
    }

    #[test]
    fn matches_brute_force() {
        let qs = vec![
            a2(rat(1, 5)),
            BraidingMatrix::new(vec![
                vec![rat(1, 3), rat(2, 7)],
                vec![rat(-5, 11), rat(1, 1)],
            ])
            .unwrap(),
            BraidingMatrix::new(vec![
                vec![rat(1, 2), rat(1, 3), rat(1, 4)],
                vec![rat(1, 5), rat(1, 6), rat(1, 7)],
                vec![rat(1, 8), rat(1, 9), rat(1, 10)],
            ])
            .unwrap(),
        ];
        for q in &qs {
            for n in 0..=4 {
                if q.rank() == 3 && n == 4 {
                    continue;
                }
                let fast = symmetrizer_matrix(q, n).unwrap();
                let slow = brute_force(q, n);
                assert!((fast - slow).norm() < 1e-10, "rank {} n {}", q.rank(), n);
            }
        }
    }

    #[test]
    fn block_structure_and_braiding_factor() {
        let q = a2(rat(1, 7));
        let b = symmetrizer_blocks(&q, 4).unwrap();
        assert_eq!(b.dimension(), 16);
        let f = vec![0, 1, 1, 0];
        let s = Permutation::from_one_based(&[3, 1, 4, 2]).unwrap();
        let image: Coloring = (0..4).map(|i| f[s.inverse().image(i)]).collect();
        let dense = b.to_dense();
        let single = braiding_factor(&q, &f, &s).eval::<f64>();
        // the (image, f) entry collects every σ with f∘σ⁻¹ = image
        let total: Complex64 = permutations(4)
            .filter(|t| (0..4).all(|i| f[t.inverse().image(i)] == image[i]))
            .map(|t| braiding_factor(&q, &f, &t).eval::<f64>())
            .sum();
        assert!((dense[(word_index(2, &image), word_index(2, &f))] - total).norm() < 1e-14);
        assert!(single.norm() > 0.0);
    }

    #[test]
    fn rank_one_root_of_unity() {
        // q primitive ℓ-th root: q = e^{2πi/ℓ}
        for l in 2..=6i64 {
            let q = BraidingMatrix::uniform(1, rat(2, l));
            for n in 1..l as usize {
                assert_eq!(kernel_dimension(&q, n).unwrap(), 0);
            }
            assert_eq!(kernel_dimension(&q, l as usize).unwrap(), 1);
        }
        let h = hilbert_series(&BraidingMatrix::uniform(1, rat(2, 3)), 6).unwrap();
        assert_eq!(h, vec![1, 1, 1, 0, 0, 0, 0]);
        let generic = BraidingMatrix::uniform(1, rat(1, 1_000_003));
        assert_eq!(hilbert_series(&generic, 7).unwrap(), vec![1; 8]);
    }

    #[test]
    fn super_sl21_total_dimension() {
        let q1 =
            BraidingMatrix::new(vec![vec![int(1), rat(-1, 2)], vec![rat(-1, 2), int(1)]]).unwrap();
        let q2 =
            BraidingMatrix::new(vec![vec![int(1), rat(-1, 2)], vec![rat(-1, 2), int(1)]]).unwrap();
        for q in [q1, q2] {
            let h = hilbert_series(&q, 6).unwrap();
            assert_eq!(h.iter().sum::<usize>(), 8, "{h:?}");
        }
    }

    #[test]
    fn super_sl21_cube_root() {
        // q = e^{2πi/3}: dims 2·2·ord(q²) = 12 for both braidings
        let qm = rat(-2, 3);
        let q1 =
            BraidingMatrix::new(vec![vec![int(1), qm.clone()], vec![qm.clone(), int(1)]]).unwrap();
        let q2 = BraidingMatrix::new(vec![vec![int(1), qm.clone()], vec![qm.clone(), rat(4, 3)]])
            .unwrap();
        let cfg = NicholsConfig {
            max_columns: 1 << 10,
            ..Default::default()
        };
        for q in [q1, q2] {
            let h = hilbert_series_with(&q, 8, &cfg).unwrap();
            assert_eq!(h.iter().sum::<usize>(), 12, "{h:?}");
            assert_eq!(*h.last().unwrap(), 0);
        }
    }

    #[test]
    fn a2_serre_relation() {
        for m in [rat(1, 5), rat(1, 7), rat(3, 11)] {
            let q = a2(m);
            let (q11, q12) = (q.value(0, 0), q.value(0, 1));
            let w = WordCombination::from_terms(
                3,
                [
                    (vec![0, 0, 1], c(1.0)),
                    (vec![0, 1, 0], -(q11 * q12 + q12)),
                    (vec![1, 0, 0], q11 * q12 * q12),
                ],
            )
            .unwrap();
            assert!(is_relation(&q, &w, DEFAULT_RELATION_TOL).unwrap());
            let k = kernel_dimension(&q, 3).unwrap();
            let dense = brute_force(&q, 3);
            let sv = dense.svd(false, false).singular_values;
            let oracle = sv.iter().filter(|&&s| s < 1e-8).count();
            assert_eq!(k, oracle);
            assert_eq!(k, 2);
        }
    }

    #[test]
    fn simple_relations() {
        let w = WordCombination::from_terms(2, [(vec![0, 0], c(1.0))]).unwrap();
        assert!(is_relation(
            &BraidingMatrix::uniform(1, int(1)),
            &w,
            DEFAULT_RELATION_TOL
        )
        .unwrap());
        assert!(!is_relation(
            &BraidingMatrix::uniform(1, rat(1, 3)),
            &w,
            DEFAULT_RELATION_TOL
        )
        .unwrap());
    }

    #[test]
    fn zero_terms_dropped() {
        let mut w = WordCombination::new(2);
        w.add_term(vec![0, 1], c(1.0)).unwrap();
        w.add_term(vec![0, 1], c(-1.0)).unwrap();
        assert!(w.is_empty());
        assert!(w.add_term(vec![0], c(1.0)).is_err());
    }

    #[test]
    fn size_limits() {
        let q = BraidingMatrix::uniform(3, rat(1, 3));
        assert!(matches!(
            symmetrizer_matrix(&q, 8),
            Err(Error::SizeLimit(_))
        ));
        assert!(matches!(
            symmetrizer_matrix(&BraidingMatrix::uniform(1, int(0)), 11),
            Err(Error::FactorialLimit { .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn braiding(r: usize) -> impl Strategy<Value = BraidingMatrix> {
            prop::collection::vec(prop::collection::vec((-6i64..6, 1i64..7), r), r).prop_map(|m| {
                BraidingMatrix::new(
                    m.into_iter()
                        .map(|row| row.into_iter().map(|(p, q)| rat(p, q)).collect())
                        .collect(),
                )
                .unwrap()
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn blocks_do_not_mix(q in (1usize..=3).prop_flat_map(braiding), n in 1usize..=4) {
                let m = symmetrizer_matrix(&q, n).unwrap();
                let r = q.rank();
                let words: Vec<Coloring> = (0..n).map(|_| 0..r).multi_cartesian_product().collect();
                let weight = |w: &Coloring| { let mut v = w.clone(); v.sort(); v };
                for a in &words {
                    for b in &words {
                        if weight(a) != weight(b) {
                            prop_assert_eq!(m[(word_index(r, a), word_index(r, b))], Complex64::zero());
                        }
                    }
                }
            }

            #[test]
            fn relabel_invariance(q in (2usize..=3).prop_flat_map(braiding), n in 2usize..=4) {
                let pi = Permutation::new((0..q.rank()).rev().collect()).unwrap();
                let a = kernel_dimension(&q, n);
                let b = kernel_dimension(&q.relabel(&pi), n);
                if let (Ok(a), Ok(b)) = (a, b) {
                    prop_assert_eq!(a, b);
                }
            }

            #[test]
            fn rank_one_vs_q_factorial(m in (-20i64..20, 1i64..9), n in 1usize..=7) {
                let q = BraidingMatrix::uniform(1, rat(m.0, m.1));
                let qv = q.value(0, 0);
                let qfact: Complex64 = (1..=n)
                    .map(|k| (0..k).map(|j| qv.powu(j as u32)).sum::<Complex64>())
                    .product();
                let d = nichols_dimension(&q, n).unwrap();
                prop_assert!(d <= 1);
                prop_assert_eq!(d == 0, qfact.norm() < 1e-9);
            }
        }

        #[test]
        fn trivial_braiding_gives_symmetric_algebra() {
            let binom =
                |a: usize, b: usize| -> usize { (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1)) };
            for r in 1..=3 {
                for n in 0..=5 {
                    let q = BraidingMatrix::uniform(r, int(0));
                    let d = nichols_dimension(&q, n).unwrap();
                    assert_eq!(d, binom(n + r - 1, r - 1), "r {r} n {n}");
                }
            }
        }
    }
}
