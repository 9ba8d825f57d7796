//! Truncated multivariate power series in `u_1..u_m` with exact rational
//! coefficients, and the checks of the two generating functions built on the
//! series `v` defined by `v = 1 + Σ_i u_i v^{z_i}`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::{int, multinomial, render, MultiIndex, Scalar};
use crate::error::{Error, Result};
use crate::report::{Counterexample, EvalReport, Verdict};

/// Exponents with nonnegative entries and total degree `<= order`, in
/// lexicographic order.
pub fn exponents(m: usize, order: u32) -> impl Iterator<Item = MultiIndex> {
    let bound = MultiIndex::new(vec![order as i64; m]).expect("m >= 1");
    bound.box_iter().filter(move |e| e.norm() <= order as i64)
}

/// Power series truncated at total degree `order`. Absent exponents are zero;
/// nothing above the order is stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    vars: usize,
    order: u32,
    coeffs: BTreeMap<MultiIndex, Scalar>,
}

impl TruncatedSeries {
    pub fn zero(vars: usize, order: u32) -> Self {
        assert!(vars >= 1, "series needs at least one variable");
        TruncatedSeries { vars, order, coeffs: BTreeMap::new() }
    }

    pub fn constant(vars: usize, order: u32, c: Scalar) -> Self {
        let mut s = Self::zero(vars, order);
        s.set(MultiIndex::zeros(vars), c);
        s
    }

    pub fn one(vars: usize, order: u32) -> Self {
        Self::constant(vars, order, Scalar::one())
    }

    /// `u_i`, with `i` counted from 1.
    pub fn variable(vars: usize, order: u32, i: usize) -> Self {
        let mut s = Self::zero(vars, order);
        s.set(MultiIndex::unit(vars, i), Scalar::one());
        s
    }

    /// Builds from a coefficient function over every exponent up to `order`.
    pub fn from_fn(vars: usize, order: u32, mut f: impl FnMut(&MultiIndex) -> Scalar) -> Self {
        let mut s = Self::zero(vars, order);
        for e in exponents(vars, order) {
            let c = f(&e);
            s.set(e, c);
        }
        s
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeff(&self, e: &MultiIndex) -> Scalar {
        self.coeffs.get(e).cloned().unwrap_or_default()
    }

    /// Sets a coefficient; zero values and exponents past the order are dropped.
    pub fn set(&mut self, e: MultiIndex, c: Scalar) {
        assert_eq!(e.dim(), self.vars, "exponent dimension");
        if e.norm() > self.order as i64 || c.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, c);
        }
    }

    /// Nonzero coefficients in exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn require_compatible(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::DimensionMismatch { left: self.vars, right: other.vars });
        }
        if self.order != other.order {
            return Err(Error::precondition(format!(
                "series orders differ ({} vs {})",
                self.order, other.order
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            let sum = out.coeff(e) + c;
            out.set(e.clone(), sum);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.vars, self.order);
        for (e, v) in &self.coeffs {
            out.set(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.require_compatible(other)?;
        let mut acc: BTreeMap<MultiIndex, Scalar> = BTreeMap::new();
        for (e1, c1) in &self.coeffs {
            let room = self.order as i64 - e1.norm();
            for (e2, c2) in &other.coeffs {
                if e2.norm() <= room {
                    *acc.entry(e1.add(e2)?).or_default() += c1 * c2;
                }
            }
        }
        let mut out = Self::zero(self.vars, self.order);
        for (e, c) in acc {
            out.set(e, c);
        }
        Ok(out)
    }

    /// `self^e` by repeated squaring; `self^0 = 1`.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.vars, self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same shape");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same shape");
            }
        }
        acc
    }

    /// `1/self`, via `c^{-1} Σ_{e<=N} (-t)^e` where `self = c(1 + t)`.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeff(&MultiIndex::zeros(self.vars));
        if c0.is_zero() {
            return Err(Error::NonUnit);
        }
        let inv = c0.recip();
        let neg_t = self.scale(&-&inv).add(&Self::one(self.vars, self.order))?;
        let mut term = Self::one(self.vars, self.order);
        let mut acc = term.clone();
        for _ in 0..self.order {
            term = term.mul(&neg_t)?;
            acc = acc.add(&term)?;
        }
        Ok(acc.scale(&inv))
    }

    /// Coefficients keyed by comma-separated exponent.
    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.coeffs.iter().map(|(e, c)| (e.to_csv(), render(c))).collect()
    }
}

/// `1 + Σ_i u_i v^{z_i}`.
fn functional_step(v: &TruncatedSeries, z: &MultiIndex) -> TruncatedSeries {
    let (m, order) = (v.vars(), v.order());
    let mut next = TruncatedSeries::one(m, order);
    for i in 1..=m {
        let term = TruncatedSeries::variable(m, order, i).mul(&v.pow(z.get(i) as u32)).expect("same shape");
        next = next.add(&term).expect("same shape");
    }
    next
}

/// The series `v` with `v = 1 + Σ_i u_i v^{z_i}`, through total degree `order`.
///
/// Fixed-point iteration from `v = 1`; iteration `t` settles every coefficient
/// of total degree `<= t`, so `order` iterations suffice.
pub fn solve_functional_equation(z: &MultiIndex, order: u32) -> Result<TruncatedSeries> {
    z.require_natural("z")?;
    let m = z.dim();
    let mut v = TruncatedSeries::one(m, order);
    for _ in 0..order {
        v = functional_step(&v, z);
    }
    Ok(v)
}

/// `v - 1 - Σ_i u_i v^{z_i}`.
pub fn functional_equation_residual(v: &TruncatedSeries, z: &MultiIndex) -> Result<TruncatedSeries> {
    if z.dim() != v.vars() {
        return Err(Error::DimensionMismatch { left: z.dim(), right: v.vars() });
    }
    v.sub(&functional_step(v, z))
}

fn compare(check: &str, left: &TruncatedSeries, right: &TruncatedSeries, x: i64, z: &MultiIndex) -> EvalReport {
    let mismatch = exponents(left.vars(), left.order()).find(|e| left.coeff(e) != right.coeff(e));
    let mut report = EvalReport::new(check, Verdict::equal_if(mismatch.is_none()))
        .param("x", x)
        .param("z", z)
        .param("order", left.order())
        .detail("coefficients_compared", exponents(left.vars(), left.order()).count())
        .note("x is restricted to positive integers");
    if let Some(e) = mismatch {
        report.counterexample = Some(
            Counterexample::new("coefficients differ")
                .at("exponent", e.to_csv())
                .sides(render(&left.coeff(&e)), render(&right.coeff(&e))),
        );
    }
    report
}

fn check_x(x: i64) -> Result<()> {
    if x < 1 {
        return Err(Error::precondition(format!(
            "generating-function checks require x >= 1 (x = {x})"
        )));
    }
    Ok(())
}

/// `Σ_k x/(x+k·z) C(x+k·z, k) u^k = v^x`, coefficientwise through `order`.
pub fn check_generating_function_1(x: i64, z: &MultiIndex, order: u32) -> Result<EvalReport> {
    check_x(x)?;
    z.require_natural("z")?;
    let xs = int(x);
    let left = TruncatedSeries::from_fn(z.dim(), order, |k| {
        let top = &xs + int(k.dot(z).expect("same dimension"));
        &xs / &top * multinomial(&top, k)
    });
    let right = solve_functional_equation(z, order)?.pow(x as u32);
    Ok(compare("generating-function-1", &left, &right, x, z))
}

/// `Σ_k C(x+k·z, k) u^k = v^x / (1 - Σ_i z_i u_i v^{z_i - 1})`, requires
/// every `z_i >= 1`.
pub fn check_generating_function_2(x: i64, z: &MultiIndex, order: u32) -> Result<EvalReport> {
    check_x(x)?;
    if z.entries().iter().any(|&e| e < 1) {
        return Err(Error::precondition(format!(
            "second generating function requires every z_i >= 1 (z = {z})"
        )));
    }
    let m = z.dim();
    let xs = int(x);
    let left = TruncatedSeries::from_fn(m, order, |k| {
        multinomial(&(&xs + int(k.dot(z).expect("same dimension"))), k)
    });
    let v = solve_functional_equation(z, order)?;
    let mut denom = TruncatedSeries::one(m, order);
    for i in 1..=m {
        let term = TruncatedSeries::variable(m, order, i)
            .mul(&v.pow(z.get(i) as u32 - 1))?
            .scale(&int(z.get(i)));
        denom = denom.sub(&term)?;
    }
    let right = v.pow(x as u32).mul(&denom.reciprocal()?)?;
    Ok(compare("generating-function-2", &left, &right, x, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    fn univariate(s: &TruncatedSeries) -> Vec<Scalar> {
        (0..=s.order() as i64).map(|k| s.coeff(&mi(&[k]))).collect()
    }

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn product_of_conjugates() {
        let u = TruncatedSeries::variable(1, 2, 1);
        let one = TruncatedSeries::one(1, 2);
        let s = one.add(&u).unwrap().mul(&one.sub(&u).unwrap()).unwrap();
        assert_eq!(univariate(&s), ints(&[1, 0, -1]));
    }

    #[test]
    fn pow_zero_is_one() {
        let s = TruncatedSeries::from_fn(2, 3, |e| int(e.norm() + 2));
        assert_eq!(s.pow(0), TruncatedSeries::one(2, 3));
        assert_eq!(s.pow(3), s.mul(&s).unwrap().mul(&s).unwrap());
    }

    #[test]
    fn geometric_reciprocal() {
        let one = TruncatedSeries::one(1, 3);
        let s = one.sub(&TruncatedSeries::variable(1, 3, 1)).unwrap();
        assert_eq!(univariate(&s.reciprocal().unwrap()), ints(&[1, 1, 1, 1]));
        assert_eq!(one.reciprocal().unwrap(), one);
        assert_eq!(TruncatedSeries::variable(1, 3, 1).reciprocal(), Err(Error::NonUnit));
    }

    #[test]
    fn mismatched_shapes() {
        let a = TruncatedSeries::one(1, 3);
        assert!(a.add(&TruncatedSeries::one(2, 3)).is_err());
        assert!(a.mul(&TruncatedSeries::one(1, 4)).is_err());
    }

    #[test]
    fn truncation_drops_high_terms() {
        let mut s = TruncatedSeries::zero(2, 2);
        s.set(mi(&[2, 1]), int(5));
        assert!(s.is_zero());
    }

    #[test]
    fn functional_equation_closed_forms() {
        // v = 1 + u v  =>  v = 1/(1-u)
        let v = solve_functional_equation(&mi(&[1]), 6).unwrap();
        assert_eq!(univariate(&v), ints(&[1; 7]));
        // v = 1 + u
        let v = solve_functional_equation(&mi(&[0]), 5).unwrap();
        assert_eq!(univariate(&v), ints(&[1, 1, 0, 0, 0, 0]));
        let v = solve_functional_equation(&mi(&[2]), 0).unwrap();
        assert_eq!(v, TruncatedSeries::one(1, 0));
    }

    #[test]
    fn catalan_numbers_from_recurrence() {
        let n = 10;
        let mut catalan = vec![int(1)];
        for k in 0..n {
            let next: Scalar = (0..=k).map(|i| &catalan[i] * &catalan[k - i]).sum();
            catalan.push(next);
        }
        let v = solve_functional_equation(&mi(&[2]), n as u32).unwrap();
        assert_eq!(univariate(&v), catalan);
    }

    #[test]
    fn generating_function_examples() {
        let r = check_generating_function_1(1, &mi(&[1]), 6).unwrap();
        assert!(r.is_success());
        let r = check_generating_function_1(2, &mi(&[2]), 6).unwrap();
        assert!(r.is_success());
        let r = check_generating_function_2(1, &mi(&[1]), 5).unwrap();
        assert!(r.is_success());
        let r = check_generating_function_2(3, &mi(&[1, 2]), 6).unwrap();
        assert!(r.is_success(), "{}", r.to_json());
        for x in [1, 3] {
            assert!(check_generating_function_1(x, &mi(&[2, 3]), 0).unwrap().is_success());
            assert!(check_generating_function_2(x, &mi(&[2, 3]), 0).unwrap().is_success());
        }
    }

    #[test]
    fn generating_function_independent_sides() {
        // x = 1, z = 1: left coefficients 1/(1+k) C(1+k, k) = 1; second: k + 1
        let v = solve_functional_equation(&mi(&[1]), 5).unwrap();
        let two = TruncatedSeries::from_fn(1, 5, |k| int(k.norm() + 1));
        let inv = TruncatedSeries::one(1, 5).sub(&TruncatedSeries::variable(1, 5, 1)).unwrap();
        assert_eq!(v.mul(&inv.reciprocal().unwrap()).unwrap(), two);
    }

    #[test]
    fn generating_function_preconditions() {
        assert!(check_generating_function_1(0, &mi(&[1]), 3).is_err());
        assert!(check_generating_function_2(1, &mi(&[0, 1]), 3).is_err());
    }
}
