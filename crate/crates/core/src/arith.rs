//! Exact scalars and multi-indices.
//!
//! Every count and identity side in this crate is an exact rational. Values
//! that are mathematically integral (every multinomial at an integer argument)
//! come out with denominator one.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Scalar = BigRational;

/// Integer as a scalar.
pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

/// Report rendering: `"p"` for integers, `"p/q"` otherwise.
pub fn render(s: &Scalar) -> String {
    s.to_string()
}

pub fn parse_scalar(s: &str) -> Result<Scalar> {
    Scalar::from_str(s.trim()).map_err(|_| Error::Parse(format!("not an exact rational: {s:?}")))
}

/// Fixed-length integer vector.
///
/// Entries may be negative (`k - e_i` with `k_i = 0`); operations that need
/// natural entries check for it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<i64>);

impl MultiIndex {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyIndex);
        }
        Ok(MultiIndex(entries))
    }

    /// Like [`MultiIndex::new`] but additionally rejects negative entries.
    pub fn natural(entries: Vec<i64>, what: &'static str) -> Result<Self> {
        let idx = Self::new(entries)?;
        idx.require_natural(what)?;
        Ok(idx)
    }

    pub fn zeros(m: usize) -> Self {
        assert!(m >= 1, "dimension must be positive");
        MultiIndex(vec![0; m])
    }

    /// The unit vector `e_i`, with `i` counted from 1.
    pub fn unit(m: usize, i: usize) -> Self {
        assert!((1..=m).contains(&i), "unit index {i} out of 1..={m}");
        let mut v = vec![0; m];
        v[i - 1] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Entry `i`, counted from 1.
    pub fn get(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    /// `|a|`, the entry sum.
    pub fn norm(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_natural(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn require_natural(&self, what: &'static str) -> Result<()> {
        if self.is_natural() {
            Ok(())
        } else {
            Err(Error::NegativeEntry { what, value: self.to_string() })
        }
    }

    pub fn require_dim(&self, other: &MultiIndex) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { left: self.dim(), right: other.dim() })
        }
    }

    /// Scalar product `a·b`.
    pub fn dot(&self, other: &MultiIndex) -> Result<i64> {
        self.require_dim(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.require_dim(other)?;
        Ok(MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.require_dim(other)?;
        Ok(MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// `a!` = `a_1! ... a_m!`.
    pub fn factorial(&self) -> Result<Scalar> {
        self.require_natural("factorial argument")?;
        Ok(Scalar::from_integer(self.factorial_int()))
    }

    fn factorial_int(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &e in &self.0 {
            for t in 2..=e {
                acc *= t;
            }
        }
        acc
    }

    /// All `k` with `0 <= k <= self` componentwise, in lexicographic order.
    /// Empty when `self` has a negative entry.
    pub fn box_iter(&self) -> BoxIter {
        BoxIter {
            bound: self.0.clone(),
            next: if self.is_natural() { Some(vec![0; self.dim()]) } else { None },
        }
    }

    /// Number of points in [`MultiIndex::box_iter`].
    pub fn box_size(&self) -> usize {
        if !self.is_natural() {
            return 0;
        }
        self.0.iter().map(|&e| e as usize + 1).product()
    }

    /// Comma-separated entries, the CLI syntax.
    pub fn to_csv(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad multi-index entry {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        MultiIndex::new(entries)
    }
}

/// Lexicographic iterator over a box `0..=bound`.
#[derive(Debug, Clone)]
pub struct BoxIter {
    bound: Vec<i64>,
    next: Option<Vec<i64>>,
}

impl Iterator for BoxIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = succ.len();
        while pos > 0 {
            pos -= 1;
            if succ[pos] < self.bound[pos] {
                succ[pos] += 1;
                succ[pos + 1..].iter_mut().for_each(|e| *e = 0);
                self.next = Some(succ);
                break;
            }
        }
        Some(MultiIndex(current))
    }
}

/// `x(x-1)...(x-len+1)`; one when `len == 0`.
pub fn falling_factorial(x: &Scalar, len: i64) -> Scalar {
    let mut acc = Scalar::one();
    let mut t = x.clone();
    for _ in 0..len {
        acc *= &t;
        t -= Scalar::one();
    }
    acc
}

/// The multinomial coefficient `C(x, n)`.
///
/// `x(x-1)...(x-|n|+1) / n!` when every entry of `n` is nonnegative and
/// exactly zero otherwise. Total: the convolution sums rely on out-of-range
/// terms vanishing silently.
pub fn multinomial(x: &Scalar, n: &MultiIndex) -> Scalar {
    if !n.is_natural() {
        return Scalar::zero();
    }
    falling_factorial(x, n.norm()) / Scalar::from_integer(n.factorial_int())
}

/// One-dimensional binomial `C(x, k)`, built as a running product of
/// `(x - i)/(i + 1)`. Zero for negative `k`.
pub fn binomial(x: &Scalar, k: i64) -> Scalar {
    let mut acc = Scalar::one();
    for i in 0..k.max(0) {
        acc *= (x - int(i)) / int(i + 1);
    }
    if k < 0 {
        Scalar::zero()
    } else {
        acc
    }
}

/// `z^k` = `z_1^{k_1} ... z_m^{k_m}` with `0^0 = 1`.
pub fn monomial_power(z: &MultiIndex, k: &MultiIndex) -> Result<Scalar> {
    z.require_dim(k)?;
    k.require_natural("exponent")?;
    let mut acc = BigInt::one();
    for (&base, &e) in z.entries().iter().zip(k.entries()) {
        acc *= BigInt::from(base).pow(e as u32);
    }
    Ok(Scalar::from_integer(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn dot_examples() {
        assert_eq!(mi(&[1, 2]).dot(&mi(&[3, 1])).unwrap(), 5);
        assert_eq!(mi(&[0, 0]).dot(&mi(&[4, 7])).unwrap(), 0);
        assert_eq!(mi(&[2, 1, 3]).dot(&mi(&[1, 1, 1])).unwrap(), 6);
        assert_eq!(
            mi(&[1]).dot(&mi(&[1, 2])),
            Err(Error::DimensionMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn norm_examples() {
        assert_eq!(mi(&[2, 1]).norm(), 3);
        assert_eq!(MultiIndex::zeros(3).norm(), 0);
        assert_eq!(mi(&[1, 4, 2]).norm(), 7);
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(mi(&[2, 3]).factorial().unwrap(), int(12));
        assert_eq!(mi(&[0, 0]).factorial().unwrap(), int(1));
        assert_eq!(mi(&[1, 1, 4]).factorial().unwrap(), int(24));
        assert!(matches!(mi(&[1, -1]).factorial(), Err(Error::NegativeEntry { .. })));
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(&int(5), &mi(&[2, 1])), int(30));
        let half = Scalar::new(1.into(), 2.into());
        assert_eq!(multinomial(&half, &MultiIndex::zeros(3)), int(1));
        assert_eq!(multinomial(&int(3), &mi(&[-1, 2])), int(0));
        assert_eq!(multinomial(&int(-2), &mi(&[1])), int(-2));
    }

    #[test]
    fn multinomial_at_rational_argument() {
        // C(1/2, (2)) = (1/2)(-1/2)/2 = -1/8
        let half = Scalar::new(1.into(), 2.into());
        assert_eq!(multinomial(&half, &mi(&[2])), Scalar::new((-1).into(), 8.into()));
    }

    #[test]
    fn monomial_power_examples() {
        assert_eq!(monomial_power(&mi(&[2, 3]), &mi(&[1, 2])).unwrap(), int(18));
        assert_eq!(monomial_power(&mi(&[9, 4]), &mi(&[0, 0])).unwrap(), int(1));
        assert_eq!(monomial_power(&mi(&[0, 5]), &mi(&[0, 1])).unwrap(), int(5));
        assert!(monomial_power(&mi(&[2]), &mi(&[-1])).is_err());
    }

    #[test]
    fn box_iter_is_lexicographic() {
        let pts: Vec<String> = mi(&[1, 2]).box_iter().map(|k| k.to_string()).collect();
        assert_eq!(pts, ["0,0", "0,1", "0,2", "1,0", "1,1", "1,2"]);
        assert_eq!(mi(&[1, 2]).box_size(), 6);
        assert_eq!(mi(&[0]).box_iter().count(), 1);
        assert_eq!(mi(&[1, -1]).box_iter().count(), 0);
    }

    #[test]
    fn parse_and_render() {
        assert_eq!("1, 2,3".parse::<MultiIndex>().unwrap(), mi(&[1, 2, 3]));
        assert!("".parse::<MultiIndex>().is_err());
        assert!("1,x".parse::<MultiIndex>().is_err());
        assert_eq!(render(&int(7)), "7");
        assert_eq!(render(&Scalar::new(6.into(), 4.into())), "3/2");
        assert_eq!(parse_scalar("-3/2").unwrap(), Scalar::new((-3).into(), 2.into()));
    }

    fn all_natural_up_to(m: usize, total: i64) -> Vec<MultiIndex> {
        let mut bound = MultiIndex::zeros(m);
        bound.0.iter_mut().for_each(|e| *e = total);
        bound.box_iter().filter(|k| k.norm() <= total).collect()
    }

    #[test]
    fn multinomial_times_factorial_is_falling_factorial() {
        for x in -10..=10 {
            for n in all_natural_up_to(2, 5) {
                let lhs = multinomial(&int(x), &n) * n.factorial().unwrap();
                assert_eq!(lhs, falling_factorial(&int(x), n.norm()));
            }
        }
    }

    #[test]
    fn multinomial_splits_through_one_dimension() {
        for x in -10..=10 {
            for n in all_natural_up_to(3, 5) {
                let total = MultiIndex::new(vec![n.norm()]).unwrap();
                // (|n| choose n_1, ..., n_m) = |n|! / n!
                let arrangements =
                    falling_factorial(&int(n.norm()), n.norm()) / n.factorial().unwrap();
                let rhs = multinomial(&int(x), &total) * arrangements;
                let lhs = multinomial(&int(x), &n);
                assert_eq!(lhs, rhs);
                assert!(lhs.is_integer());
            }
        }
    }

    #[test]
    fn vandermonde_is_the_flat_case() {
        for x in 0..=8 {
            for y in 0..=8 {
                for n in 0..=6 {
                    let sum: Scalar = (0..=n)
                        .map(|k| {
                            multinomial(&int(x), &mi(&[k])) * multinomial(&int(y), &mi(&[n - k]))
                        })
                        .sum();
                    assert_eq!(sum, multinomial(&int(x + y), &mi(&[n])));
                }
            }
        }
    }

    #[test]
    fn binomial_agrees_with_multinomial() {
        for x in -6..=9 {
            for k in -2..=6 {
                assert_eq!(binomial(&int(x), k), multinomial(&int(x), &mi(&[k])));
            }
        }
    }
}
