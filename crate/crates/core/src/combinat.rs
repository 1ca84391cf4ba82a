//! Permutations, reduced words, Matsumoto braiding factors and the modified shuffles.
//!
//! Positions and colors are 0-based in the API; `Display` prints the one-line
//! notation 1-based.

use std::fmt;

use itertools::Itertools;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{parse_rational, rem_euclid, PhaseExponent, Rational};

pub const DEFAULT_FACTORIAL_CAP: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Precondition(format!(
                    "{images:?} is not a permutation"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// From one-line notation with values `1..=n`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::Precondition("one-based images start at 1".into()));
        }
        Permutation::new(images.iter().map(|&i| i - 1).collect())
    }

    /// The order-reversing permutation, longest element of `S_n`.
    pub fn longest(n: usize) -> Self {
        Permutation {
            images: (0..n).rev().collect(),
        }
    }

    /// `s_{w_1} s_{w_2} ... s_{w_l}`, where `s_k` swaps `k` and `k+1`.
    pub fn from_word(n: usize, word: &[usize]) -> Self {
        let mut p = Permutation::identity(n);
        for &k in word.iter().rev() {
            p = p.left_mul_adjacent(k);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    /// `s_k ∘ self`: exchanges the values `k` and `k+1`.
    pub fn left_mul_adjacent(&self, k: usize) -> Self {
        let images = self
            .images
            .iter()
            .map(|&v| {
                if v == k {
                    k + 1
                } else if v == k + 1 {
                    k
                } else {
                    v
                }
            })
            .collect();
        Permutation { images }
    }

    /// `{(i, j) : i < j, σ(i) > σ(j)}`.
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn length(&self) -> usize {
        self.inversions().len()
    }

    /// Values `k` with `ℓ(s_k σ) < ℓ(σ)`, i.e. `σ⁻¹(k) > σ⁻¹(k+1)`.
    pub fn left_descents(&self) -> Vec<usize> {
        let inv = self.inverse();
        (0..self.n().saturating_sub(1))
            .filter(|&k| inv.images[k] > inv.images[k + 1])
            .collect()
    }

    /// A reduced word `[w_1, ..., w_l]` with `σ = s_{w_1} ... s_{w_l}`, peeling off the
    /// leftmost descent at each step.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length());
        let mut cur = self.clone();
        while let Some(&k) = cur.left_descents().first() {
            word.push(k);
            cur = cur.left_mul_adjacent(k);
        }
        word
    }

    /// Every reduced word of `σ`.
    pub fn all_reduced_words(&self) -> Vec<Vec<usize>> {
        if self.is_identity() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for k in self.left_descents() {
            for mut tail in self.left_mul_adjacent(k).all_reduced_words() {
                tail.insert(0, k);
                out.push(tail);
            }
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.images.iter().map(|i| i + 1).join(" "))
    }
}

/// All of `S_n` in lexicographic order of one-line notation.
pub fn permutations(n: usize) -> impl Iterator<Item = Permutation> {
    (0..n).permutations(n).map(|images| Permutation { images })
}

/// The `η ∈ S_n` increasing on the first `k` positions and decreasing on the rest,
/// ordered lexicographically by the image set of the first `k` positions.
pub fn shuffles(k: usize, n: usize) -> Result<Vec<Permutation>> {
    if k > n {
        return Err(Error::Precondition(format!(
            "shuffle needs k <= n, got k={k}, n={n}"
        )));
    }
    Ok((0..n)
        .combinations(k)
        .map(|head| {
            let mut images = head.clone();
            let mut tail: Vec<usize> = (0..n).filter(|v| !head.contains(v)).collect();
            tail.reverse();
            images.extend(tail);
            Permutation { images }
        })
        .collect())
}

/// Diagonal braiding `c(x_i ⊗ x_j) = q_ij x_j ⊗ x_i` with `q_ij = e^{πi m_ij}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidingMatrix {
    m: Vec<Vec<Rational>>,
}

impl BraidingMatrix {
    pub fn new(m: Vec<Vec<Rational>>) -> Result<Self> {
        let r = m.len();
        if r == 0 || m.iter().any(|row| row.len() != r) {
            return Err(Error::Precondition(
                "braiding matrix must be square with rank >= 1".into(),
            ));
        }
        let m = m
            .into_iter()
            .map(|row| row.iter().map(|x| rem_euclid(x, 2)).collect())
            .collect();
        Ok(BraidingMatrix { m })
    }

    /// Every entry equal to `m`.
    pub fn uniform(rank: usize, m: Rational) -> Self {
        BraidingMatrix::new(vec![vec![m; rank]; rank]).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn exponent(&self, i: usize, j: usize) -> &Rational {
        &self.m[i][j]
    }

    pub fn q(&self, i: usize, j: usize) -> PhaseExponent {
        PhaseExponent::new(self.m[i][j].clone())
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.q(i, j).eval()
    }

    /// Relabels generators: entry `(i, j)` of the result is `q_{π(i) π(j)}`.
    pub fn relabel(&self, pi: &Permutation) -> Self {
        let r = self.rank();
        let m = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| self.m[pi.image(i)][pi.image(j)].clone())
                    .collect()
            })
            .collect();
        BraidingMatrix { m }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: BraidingJson =
            serde_json::from_str(s).map_err(|e| Error::parse(s, e.to_string()))?;
        let m = raw
            .m
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| parse_rational(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let b = BraidingMatrix::new(m)?;
        if b.rank() != raw.rank {
            return Err(Error::parse(s, "rank does not match matrix size"));
        }
        Ok(b)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(BraidingJson {
            rank: self.rank(),
            m: self
                .m
                .iter()
                .map(|row| row.iter().map(|x| x.to_string()).collect())
                .collect(),
        })
        .unwrap()
    }
}

#[derive(Serialize, Deserialize)]
struct BraidingJson {
    rank: usize,
    m: Vec<Vec<String>>,
}

/// Evaluates `q(σ)` along a reduced word of `σ` using the inductive rule
/// `q(s_k τ) = q_{f(τ⁻¹(k)), f(τ⁻¹(k+1))} q(τ)`.
pub fn braiding_factor_along(
    q: &BraidingMatrix,
    colors: &[usize],
    word: &[usize],
) -> Result<PhaseExponent> {
    let n = colors.len();
    let mut tau = Permutation::identity(n);
    let mut acc = PhaseExponent::one();
    for &k in word.iter().rev() {
        let inv = tau.inverse();
        let (a, b) = (inv.image(k), inv.image(k + 1));
        if a > b {
            return Err(Error::Precondition(format!("word {word:?} is not reduced")));
        }
        acc += &q.q(colors[a], colors[b]);
        tau = tau.left_mul_adjacent(k);
    }
    Ok(acc)
}

/// Braiding factor of `σ` for the coloring `colors` (inductive definition).
pub fn braiding_factor(q: &BraidingMatrix, colors: &[usize], sigma: &Permutation) -> PhaseExponent {
    assert_eq!(colors.len(), sigma.n(), "coloring length must equal n");
    braiding_factor_along(q, colors, &sigma.reduced_word()).unwrap()
}

/// The table `σ ↦ q(σ)` over all of `S_n`, lexicographic.
pub fn quantum_symmetrizer_coefficients(
    q: &BraidingMatrix,
    colors: &[usize],
    cap: usize,
) -> Result<Vec<(Permutation, PhaseExponent)>> {
    let n = colors.len();
    if n > cap {
        return Err(Error::FactorialLimit { n, cap });
    }
    if colors.iter().any(|&c| c >= q.rank()) {
        return Err(Error::Precondition("color outside braiding rank".into()));
    }
    Ok(permutations(n)
        .map(|s| {
            let f = braiding_factor(q, colors, &s);
            (s, f)
        })
        .collect())
}
