use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{int, is_integer, parse_rational, Rational};

/// Coordinates in the fixed basis `α_1, ..., α_rank`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(pub Vec<Rational>);

impl LatticePoint {
    pub fn zero(rank: usize) -> Self {
        LatticePoint(vec![Rational::zero(); rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![Rational::zero(); rank];
        v[i] = Rational::one();
        LatticePoint(v)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        LatticePoint(c.iter().map(|&x| int(x)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        LatticePoint(self.0.iter().map(|x| x * s).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    /// JSON coordinates: integers where integral, `"p/q"` strings otherwise.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.0
                .iter()
                .map(|x| {
                    if is_integer(x) {
                        serde_json::Value::from(
                            x.to_integer().to_string().parse::<i64>().unwrap_or(0),
                        )
                    } else {
                        serde_json::Value::from(x.to_string())
                    }
                })
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::parse(&v.to_string(), "lattice point must be an array"))?;
        arr.iter()
            .map(|x| match x {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(int)
                    .ok_or_else(|| Error::parse(&n.to_string(), "coordinate must be an integer")),
                serde_json::Value::String(s) => parse_rational(s),
                other => Err(Error::parse(&other.to_string(), "bad coordinate")),
            })
            .collect::<Result<Vec<_>>>()
            .map(LatticePoint)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add for &LatticePoint {
    type Output = LatticePoint;
    fn add(self, o: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticePoint {
    type Output = LatticePoint;
    fn sub(self, o: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| -a).collect())
    }
}

/// Symmetric rational Gram matrix of the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    gram: Vec<Vec<Rational>>,
    denominator: BigInt,
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    rank: usize,
    gram: Vec<Vec<String>>,
}

impl Lattice {
    pub fn new(gram: Vec<Vec<Rational>>) -> Result<Self> {
        let r = gram.len();
        if r == 0 || gram.iter().any(|row| row.len() != r) {
            return Err(Error::Precondition(
                "gram matrix must be square with rank >= 1".into(),
            ));
        }
        for i in 0..r {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Precondition(format!(
                        "gram matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let denominator = gram
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        Ok(Lattice { gram, denominator })
    }

    pub fn from_ints(gram: &[&[i64]]) -> Result<Self> {
        Lattice::new(
            gram.iter()
                .map(|row| row.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    /// Rank one with `(α, α) = norm`.
    pub fn rank_one(norm: Rational) -> Self {
        Lattice::new(vec![vec![norm]]).unwrap()
    }

    pub fn sl2() -> Self {
        Lattice::from_ints(&[&[2]]).unwrap()
    }

    pub fn sl3() -> Self {
        Lattice::from_ints(&[&[2, -1], &[-1, 2]]).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    /// Least `N` with every Gram entry in `(1/N)ℤ`.
    pub fn common_denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn is_integral(&self) -> bool {
        self.denominator.is_one()
    }

    pub fn inner(&self, a: &LatticePoint, b: &LatticePoint) -> Rational {
        let mut s = Rational::zero();
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                if !bj.is_zero() {
                    s += ai * &self.gram[i][j] * bj;
                }
            }
        }
        s
    }

    /// `(α_i, β)`.
    pub fn basis_inner(&self, i: usize, b: &LatticePoint) -> Rational {
        b.0.iter()
            .zip(&self.gram[i])
            .filter(|(bj, _)| !bj.is_zero())
            .map(|(bj, g)| bj * g)
            .sum()
    }

    pub fn check_point(&self, p: &LatticePoint) -> Result<()> {
        if p.rank() != self.rank() {
            return Err(Error::Precondition(format!(
                "lattice point {p} has rank {}, lattice has rank {}",
                p.rank(),
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: LatticeJson =
            serde_json::from_str(s).map_err(|e| Error::parse(s, e.to_string()))?;
        let gram = raw
            .gram
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| parse_rational(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let l = Lattice::new(gram)?;
        if l.rank() != raw.rank {
            return Err(Error::parse(s, "rank does not match gram size"));
        }
        Ok(l)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(LatticeJson {
            rank: self.rank(),
            gram: self
                .gram
                .iter()
                .map(|row| row.iter().map(|x| x.to_string()).collect())
                .collect(),
        })
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn inner_products() {
        let l = Lattice::sl3();
        let a1 = LatticePoint::basis(2, 0);
        let a2 = LatticePoint::basis(2, 1);
        assert_eq!(l.inner(&a1, &a2), int(-1));
        assert_eq!(l.inner(&(&a1 + &a2), &(&a1 + &a2)), int(2));
        assert_eq!(l.basis_inner(0, &(&a1 + &a2)), int(1));
    }

    #[test]
    fn denominators_and_json() {
        let l = Lattice::new(vec![vec![rat(2, 3), rat(1, 2)], vec![rat(1, 2), int(1)]]).unwrap();
        assert_eq!(*l.common_denominator(), BigInt::from(6));
        let back = Lattice::from_json(&l.to_json().to_string()).unwrap();
        assert_eq!(back, l);
        assert!(Lattice::new(vec![vec![int(1), int(0)], vec![int(1), int(1)]]).is_err());
        let p = LatticePoint(vec![int(3), rat(-1, 4)]);
        assert_eq!(LatticePoint::from_json(&p.to_json()).unwrap(), p);
    }
}
