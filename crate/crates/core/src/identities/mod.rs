//! Exact evaluators for both sides of the convolution identities, and the
//! catalog that drives grid certification.
//!
//! `C(x, n)` below is [`multinomial`]. The one-variable evaluators (Abel,
//! Rothe, Gould, Jensen) use [`binomial`] instead, a separately written
//! product, so the multivariable evaluators at `m = 1` can be checked against
//! them.
//!
//! Rational-function evaluators refuse points where a summand's denominator
//! vanishes and report the offending `k` as [`Error::Pole`].

mod grid;

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{binomial, int, monomial_power, multinomial, MultiIndex, Scalar};
use crate::error::{Error, Result};

pub use grid::{
    check_gould_epsilon_chain, verify_identity_at_point, verify_identity_on_grid, GridRange,
    IdentitySpec, DEFAULT_GRID_RANGE,
};

/// Left and right side of one identity at one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sides {
    pub left: Scalar,
    pub right: Scalar,
}

impl Sides {
    pub fn holds(&self) -> bool {
        self.left == self.right
    }
}

fn pole(factor: impl Into<String>, k: impl ToString) -> Error {
    Error::Pole { factor: factor.into(), k: k.to_string() }
}

fn nonzero(value: Scalar, factor: &str, k: impl ToString) -> Result<Scalar> {
    if value.is_zero() {
        Err(pole(factor, k))
    } else {
        Ok(value)
    }
}

fn check_index_pair(n: &MultiIndex, z: &MultiIndex) -> Result<()> {
    n.require_dim(z)?;
    n.require_natural("n")?;
    z.require_natural("z")
}

fn check_scalar_pair(n: i64, z: i64) -> Result<()> {
    if n < 0 {
        return Err(Error::NegativeEntry { what: "n", value: n.to_string() });
    }
    if z < 0 {
        return Err(Error::NegativeEntry { what: "z", value: z.to_string() });
    }
    Ok(())
}

fn pow(base: &Scalar, e: i64) -> Scalar {
    (0..e).fold(int(1), |acc, _| acc * base)
}

// ---------------------------------------------------------------------------
// one-variable identities

/// `x (x - kz)^{k-1}`; the `k = 0` term is `x / x = 1` and needs `x != 0`.
fn abel_head(x: &Scalar, z: i64, k: i64) -> Result<Scalar> {
    if k == 0 {
        nonzero(x.clone(), "x", 0)?;
        return Ok(int(1));
    }
    Ok(x * pow(&(x - int(k * z)), k - 1))
}

/// `Σ_k C(n,k) x (x-kz)^{k-1} (y+kz)^{n-k}` against `(x+y)^n`.
pub fn eval_abel_1(x: &Scalar, y: &Scalar, z: i64, n: i64) -> Result<Sides> {
    check_scalar_pair(n, z)?;
    let mut left = Scalar::zero();
    for k in 0..=n {
        left += binomial(&int(n), k) * abel_head(x, z, k)? * pow(&(y + int(k * z)), n - k);
    }
    Ok(Sides { left, right: pow(&(x + y), n) })
}

/// `Σ_k C(n,k) x (y+nz) (x-kz)^{k-1} (y+kz)^{n-k-1}` against
/// `(x+y+nz)(x+y)^{n-1}`.
///
/// The second Abel form. With a bare `y` in place of `y + nz` the sum is not
/// a polynomial once `z != 0` (at `n = 1` it is `y(x+y+z)/(y+z)`), so the
/// factor is `y + nz`. Negative powers occur only at `k = 0` (in `x`),
/// `k = n` (in `y + nz`) and on the right when `n = 0`; each is evaluated as
/// a quotient.
pub fn eval_abel_2(x: &Scalar, y: &Scalar, z: i64, n: i64) -> Result<Sides> {
    check_scalar_pair(n, z)?;
    let lead = y + int(n * z);
    let mut left = Scalar::zero();
    for k in 0..=n {
        let tail_base = y + int(k * z);
        let tail = if k == n {
            &lead / nonzero(tail_base, "y + nz", k)?
        } else {
            &lead * pow(&tail_base, n - k - 1)
        };
        left += binomial(&int(n), k) * abel_head(x, z, k)? * tail;
    }
    let sum = x + y;
    let right = if n == 0 {
        &sum / nonzero(sum.clone(), "x + y", 0)?
    } else {
        (&sum + int(n * z)) * pow(&sum, n - 1)
    };
    Ok(Sides { left, right })
}

/// `Σ_k x/(x-kz) C(x-kz,k) C(y+kz,n-k)` against `C(x+y,n)`.
pub fn eval_rothe_1(x: &Scalar, y: &Scalar, z: i64, n: i64) -> Result<Sides> {
    check_scalar_pair(n, z)?;
    let mut left = Scalar::zero();
    for k in 0..=n {
        let base = nonzero(x - int(k * z), "x - kz", k)?;
        left += x / &base * binomial(&base, k) * binomial(&(y + int(k * z)), n - k);
    }
    Ok(Sides { left, right: binomial(&(x + y), n) })
}

/// `Σ_k xy/((x-kz)(y-(n-k)z)) C(x-kz,k) C(y-(n-k)z,n-k)` against
/// `(x+y)/(x+y-nz) C(x+y-nz,n)`.
pub fn eval_rothe_2(x: &Scalar, y: &Scalar, z: i64, n: i64) -> Result<Sides> {
    check_scalar_pair(n, z)?;
    let mut left = Scalar::zero();
    for k in 0..=n {
        let a = nonzero(x - int(k * z), "x - kz", k)?;
        let b = nonzero(y - int((n - k) * z), "y - (n-k)z", k)?;
        left += x * y / (&a * &b) * binomial(&a, k) * binomial(&b, n - k);
    }
    let c = nonzero(x + y - int(n * z), "x + y - nz", "-")?;
    let right = (x + y) / &c * binomial(&c, n);
    Ok(Sides { left, right })
}

/// `Σ_k C(x-kz,k) C(y+kz,n-k)` against the same sum with `x+ε`, `y-ε`.
pub fn eval_gould(x: &Scalar, y: &Scalar, z: i64, eps: &Scalar, n: i64) -> Result<Sides> {
    check_scalar_pair(n, z)?;
    let side = |x: &Scalar, y: &Scalar| -> Scalar {
        (0..=n)
            .map(|k| binomial(&(x - int(k * z)), k) * binomial(&(y + int(k * z)), n - k))
            .sum()
    };
    Ok(Sides { left: side(x, y), right: side(&(x + eps), &(y - eps)) })
}

/// `Σ_k C(x+kz,k) C(y-kz,n-k)` against `Σ_k C(x+y-k,n-k) z^k`.
pub fn eval_jensen(x: &Scalar, y: &Scalar, z: i64, n: i64) -> Result<Sides> {
    check_scalar_pair(n, z)?;
    let mut left = Scalar::zero();
    let mut right = Scalar::zero();
    for k in 0..=n {
        left += binomial(&(x + int(k * z)), k) * binomial(&(y - int(k * z)), n - k);
        right += binomial(&(x + y - int(k)), n - k) * pow(&int(z), k);
    }
    Ok(Sides { left, right })
}

// ---------------------------------------------------------------------------
// multivariable identities

struct Term {
    k: MultiIndex,
    rest: MultiIndex,
    kz: i64,
    rest_z: i64,
}

fn terms(n: &MultiIndex, z: &MultiIndex) -> Result<Vec<Term>> {
    n.box_iter()
        .map(|k| {
            let rest = n.sub(&k)?;
            Ok(Term { kz: k.dot(z)?, rest_z: rest.dot(z)?, k, rest })
        })
        .collect()
}

/// First form: `Σ_k x/(x-k·z) C(x-k·z,k) C(y+k·z,n-k)` against `C(x+y,n)`.
pub fn eval_raney_mohanty_1(x: &Scalar, y: &Scalar, n: &MultiIndex, z: &MultiIndex) -> Result<Sides> {
    check_index_pair(n, z)?;
    let mut left = Scalar::zero();
    for t in terms(n, z)? {
        let base = nonzero(x - int(t.kz), "x - k·z", &t.k)?;
        left += x / &base * multinomial(&base, &t.k) * multinomial(&(y + int(t.kz)), &t.rest);
    }
    Ok(Sides { left, right: multinomial(&(x + y), n) })
}

/// `Σ_k xy/((x-k·z)(y-(n-k)·z)) C(x-k·z,k) C(y-(n-k)·z,n-k)`.
fn second_form_left(x: &Scalar, y: &Scalar, n: &MultiIndex, z: &MultiIndex) -> Result<Scalar> {
    let mut left = Scalar::zero();
    for t in terms(n, z)? {
        let a = nonzero(x - int(t.kz), "x - k·z", &t.k)?;
        let b = nonzero(y - int(t.rest_z), "y - (n-k)·z", &t.k)?;
        left += x * y / (&a * &b) * multinomial(&a, &t.k) * multinomial(&b, &t.rest);
    }
    Ok(left)
}

/// Second form, against `(x+y)/(x+y-n·z) C(x+y-n·z, n)`.
pub fn eval_raney_mohanty_2(x: &Scalar, y: &Scalar, n: &MultiIndex, z: &MultiIndex) -> Result<Sides> {
    check_index_pair(n, z)?;
    let left = second_form_left(x, y, n, z)?;
    let c = nonzero(x + y - int(n.dot(z)?), "x + y - n·z", "-")?;
    let right = (x + y) / &c * multinomial(&c, n);
    Ok(Sides { left, right })
}

/// `Σ_k C(x+k·z,k) C(y-k·z,n-k)` against `Σ_k C(x+y-|k|,n-k) C(|k|,k) z^k`.
pub fn eval_mohanty_handa(x: &Scalar, y: &Scalar, n: &MultiIndex, z: &MultiIndex) -> Result<Sides> {
    check_index_pair(n, z)?;
    let mut right = Scalar::zero();
    for t in terms(n, z)? {
        let kk = t.k.norm();
        right += multinomial(&(x + y - int(kk)), &t.rest)
            * multinomial(&int(kk), &t.k)
            * monomial_power(z, &t.k)?;
    }
    Ok(Sides { left: jensen_sum(x, y, n, z)?, right })
}

/// `Σ_k C(x+k·z,k) C(y-k·z,n-k)`.
fn jensen_sum(x: &Scalar, y: &Scalar, n: &MultiIndex, z: &MultiIndex) -> Result<Scalar> {
    Ok(terms(n, z)?
        .into_iter()
        .map(|t| multinomial(&(x + int(t.kz)), &t.k) * multinomial(&(y - int(t.kz)), &t.rest))
        .sum())
}

/// `G(x, y) = Σ_k C(x-k·z,k) C(y+k·z,n-k)`, invariant under `x+ε, y-ε`.
fn gould_sum(x: &Scalar, y: &Scalar, n: &MultiIndex, z: &MultiIndex) -> Result<Scalar> {
    Ok(terms(n, z)?
        .into_iter()
        .map(|t| multinomial(&(x - int(t.kz)), &t.k) * multinomial(&(y + int(t.kz)), &t.rest))
        .sum())
}

/// `G(x, y)` against `G(x+ε, y-ε)`.
pub fn eval_gould_mohanty(
    x: &Scalar,
    y: &Scalar,
    eps: &Scalar,
    n: &MultiIndex,
    z: &MultiIndex,
) -> Result<Sides> {
    check_index_pair(n, z)?;
    Ok(Sides { left: gould_sum(x, y, n, z)?, right: gould_sum(&(x + eps), &(y - eps), n, z)? })
}

/// The unit case `G(p, q) = G(p+1, q-1)`. At `p >= n·z`, `q >= 1` the two
/// sides count the words of weight `p+q+n·z` with a prefix of weight `p`,
/// respectively `p+1`.
pub fn eval_unit_shift(p: &Scalar, q: &Scalar, n: &MultiIndex, z: &MultiIndex) -> Result<Sides> {
    eval_gould_mohanty(p, q, &int(1), n, z)
}

/// `Σ_k C(p-k·z+j-1, k-e_i) C(q+k·z-j, n-k)`.
fn overshoot_sum(
    p: &Scalar,
    q: &Scalar,
    n: &MultiIndex,
    z: &MultiIndex,
    i: usize,
    j: i64,
) -> Result<Scalar> {
    let e_i = MultiIndex::unit(n.dim(), i);
    let mut acc = Scalar::zero();
    for t in terms(n, z)? {
        acc += multinomial(&(p - int(t.kz) + int(j - 1)), &t.k.sub(&e_i)?)
            * multinomial(&(q + int(t.kz) - int(j)), &t.rest);
    }
    Ok(acc)
}

/// Case-by-case count of `Γ_{p+q+n·z,n}` from the factorization:
/// `Σ_k [C(p-k·z,k) C(q+k·z,n-k) + Σ_i Σ_{j=1}^{z_i} C(p-k·z+j-1,k-e_i) C(q+k·z-j,n-k)]`
/// against `C(p+q, n)`.
pub fn eval_factorization_count(
    p: &Scalar,
    q: &Scalar,
    n: &MultiIndex,
    z: &MultiIndex,
) -> Result<Sides> {
    check_index_pair(n, z)?;
    let mut left = gould_sum(p, q, n, z)?;
    for i in 1..=n.dim() {
        for j in 1..=z.get(i) {
            left += overshoot_sum(p, q, n, z, i, j)?;
        }
    }
    Ok(Sides { left, right: multinomial(&(p + q), n) })
}

fn check_overshoot_index(n: &MultiIndex, z: &MultiIndex, i: usize, j: i64) -> Result<()> {
    if !(1..=n.dim()).contains(&i) {
        return Err(Error::precondition(format!("requires 1 <= i <= m (i = {i}, m = {})", n.dim())));
    }
    let zi = z.get(i);
    if !(1..=zi).contains(&j) {
        return Err(Error::precondition(format!("requires 1 <= j <= z_i (j = {j}, z_{i} = {zi})")));
    }
    Ok(())
}

/// Each overshoot sum is independent of `j`:
/// `Σ_k C(p-k·z+j-1,k-e_i) C(q+k·z-j,n-k)` against
/// `Σ_k C(p-k·z-1,k-e_i) C(q+k·z,n-k)`, for `1 <= j <= z_i`.
pub fn eval_overshoot_shift(
    p: &Scalar,
    q: &Scalar,
    n: &MultiIndex,
    z: &MultiIndex,
    i: usize,
    j: i64,
) -> Result<Sides> {
    check_index_pair(n, z)?;
    check_overshoot_index(n, z, i, j)?;
    Ok(Sides {
        left: overshoot_sum(p, q, n, z, i, j)?,
        right: overshoot_sum(p, q, n, z, i, 0)?,
    })
}

/// The factorization count with the `j` sums collapsed:
/// `Σ_k (C(p-k·z,k) + Σ_i z_i C(p-k·z-1,k-e_i)) C(q+k·z,n-k)` against `C(p+q,n)`.
pub fn eval_collapsed_count(p: &Scalar, q: &Scalar, n: &MultiIndex, z: &MultiIndex) -> Result<Sides> {
    check_index_pair(n, z)?;
    let m = n.dim();
    let mut left = Scalar::zero();
    for t in terms(n, z)? {
        let base = p - int(t.kz);
        let mut head = multinomial(&base, &t.k);
        for i in 1..=m {
            head += int(z.get(i)) * multinomial(&(&base - int(1)), &t.k.sub(&MultiIndex::unit(m, i))?);
        }
        left += head * multinomial(&(q + int(t.kz)), &t.rest);
    }
    Ok(Sides { left, right: multinomial(&(p + q), n) })
}

/// `C(p-k·z-1, k-e_i)` against `k_i/(p-k·z) C(p-k·z, k)`; pole at `p = k·z`.
pub fn check_absorption(p: &Scalar, k: &MultiIndex, z: &MultiIndex, i: usize) -> Result<Sides> {
    check_index_pair(k, z)?;
    if !(1..=k.dim()).contains(&i) {
        return Err(Error::precondition(format!("requires 1 <= i <= m (i = {i}, m = {})", k.dim())));
    }
    let base = p - int(k.dot(z)?);
    let left = multinomial(&(&base - int(1)), &k.sub(&MultiIndex::unit(k.dim(), i))?);
    let denom = nonzero(base.clone(), "p - k·z", k)?;
    let right = int(k.get(i)) / denom * multinomial(&base, k);
    Ok(Sides { left, right })
}

/// Left side of the second form against its split
/// `1/(x+y-n·z) (Σ_k xy/(x-k·z) CC + Σ_k xy/(y-(n-k)·z) CC)`,
/// `CC = C(x-k·z,k) C(y-(n-k)·z,n-k)`.
pub fn check_second_form_split(x: &Scalar, y: &Scalar, n: &MultiIndex, z: &MultiIndex) -> Result<Sides> {
    check_index_pair(n, z)?;
    let left = second_form_left(x, y, n, z)?;
    let c = nonzero(x + y - int(n.dot(z)?), "x + y - n·z", "-")?;
    let mut by_x = Scalar::zero();
    let mut by_y = Scalar::zero();
    for t in terms(n, z)? {
        let a = nonzero(x - int(t.kz), "x - k·z", &t.k)?;
        let b = nonzero(y - int(t.rest_z), "y - (n-k)·z", &t.k)?;
        let cc = multinomial(&a, &t.k) * multinomial(&b, &t.rest);
        by_x += x * y / &a * &cc;
        by_y += x * y / &b * &cc;
    }
    Ok(Sides { left, right: (by_x + by_y) / c })
}

/// `Σ_k C(x+k·z,k) C(y-k·z,n-k)` against
/// `C(x+y,n) + Σ_i Σ_k z_i C(x-1+k·z,k-e_i) C(y-k·z,n-k)`.
pub fn check_mh_expansion(x: &Scalar, y: &Scalar, n: &MultiIndex, z: &MultiIndex) -> Result<Sides> {
    check_index_pair(n, z)?;
    let m = n.dim();
    let mut right = multinomial(&(x + y), n);
    for i in 1..=m {
        let e_i = MultiIndex::unit(m, i);
        for t in terms(n, z)? {
            right += int(z.get(i))
                * multinomial(&(x - int(1) + int(t.kz)), &t.k.sub(&e_i)?)
                * multinomial(&(y - int(t.kz)), &t.rest);
        }
    }
    Ok(Sides { left: jensen_sum(x, y, n, z)?, right })
}

// ---------------------------------------------------------------------------
// catalog

/// Catalog entries, with their CLI names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum IdentityId {
    Abel1,
    Abel2,
    Rothe1,
    Rothe2,
    Gould,
    Jensen,
    GouldMohanty,
    GmhSpecial,
    RaneyMohanty1,
    RaneyMohanty2,
    MohantyHanda,
    Kmx,
    Kmpink,
    Pkroth,
    Absorption,
    Rm2Decomposition,
    MhExpansion,
}

impl IdentityId {
    pub const ALL: [IdentityId; 17] = [
        IdentityId::Abel1,
        IdentityId::Abel2,
        IdentityId::Rothe1,
        IdentityId::Rothe2,
        IdentityId::Gould,
        IdentityId::Jensen,
        IdentityId::GouldMohanty,
        IdentityId::GmhSpecial,
        IdentityId::RaneyMohanty1,
        IdentityId::RaneyMohanty2,
        IdentityId::MohantyHanda,
        IdentityId::Kmx,
        IdentityId::Kmpink,
        IdentityId::Pkroth,
        IdentityId::Absorption,
        IdentityId::Rm2Decomposition,
        IdentityId::MhExpansion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Abel1 => "abel-1",
            IdentityId::Abel2 => "abel-2",
            IdentityId::Rothe1 => "rothe-1",
            IdentityId::Rothe2 => "rothe-2",
            IdentityId::Gould => "gould",
            IdentityId::Jensen => "jensen",
            IdentityId::GouldMohanty => "gould-mohanty",
            IdentityId::GmhSpecial => "gmh-special",
            IdentityId::RaneyMohanty1 => "raney-mohanty-1",
            IdentityId::RaneyMohanty2 => "raney-mohanty-2",
            IdentityId::MohantyHanda => "mohanty-handa",
            IdentityId::Kmx => "kmx",
            IdentityId::Kmpink => "kmpink",
            IdentityId::Pkroth => "pkroth",
            IdentityId::Absorption => "absorption",
            IdentityId::Rm2Decomposition => "rm2-decomposition",
            IdentityId::MhExpansion => "mh-expansion",
        }
    }

    /// Only defined for `m = 1`.
    pub fn is_univariate(self) -> bool {
        matches!(
            self,
            IdentityId::Abel1
                | IdentityId::Abel2
                | IdentityId::Rothe1
                | IdentityId::Rothe2
                | IdentityId::Gould
                | IdentityId::Jensen
        )
    }

    /// Takes the extra index `i` (and `j` for `kmpink`).
    pub fn is_indexed(self) -> bool {
        matches!(self, IdentityId::Kmpink | IdentityId::Absorption)
    }

    /// Free variables, in evaluation order.
    pub fn variables(self) -> &'static [&'static str] {
        match self {
            IdentityId::Gould | IdentityId::GouldMohanty => &["x", "y", "eps"],
            IdentityId::GmhSpecial | IdentityId::Kmx | IdentityId::Kmpink | IdentityId::Pkroth => {
                &["p", "q"]
            }
            IdentityId::Absorption => &["p"],
            _ => &["x", "y"],
        }
    }

    /// Per-variable degree bounds for `(left - right) · D`, where `D` is the
    /// product of the distinct linear denominators (1 for polynomial
    /// identities). Agreement at `bound + 1` admissible values of each
    /// variable, nested, proves the identity.
    pub fn degree_bounds(self, n: &MultiIndex, z: &MultiIndex) -> Result<Vec<usize>> {
        let big_n = n.norm() as usize;
        let mut shifts: Vec<i64> = n.box_iter().map(|k| k.dot(z)).collect::<Result<_>>()?;
        shifts.sort_unstable();
        shifts.dedup();
        let distinct = shifts.len();
        let vars = self.variables().len();
        Ok(match self {
            IdentityId::Abel1 => vec![big_n + 1; 2],
            IdentityId::Abel2 => vec![big_n + 2; 2],
            IdentityId::Rothe1 | IdentityId::RaneyMohanty1 => vec![big_n + distinct + 1, big_n],
            IdentityId::Rothe2 | IdentityId::RaneyMohanty2 | IdentityId::Rm2Decomposition => {
                vec![big_n + distinct + 2; 2]
            }
            IdentityId::Absorption => vec![big_n + 1],
            _ => vec![big_n; vars],
        })
    }

    /// Evaluates both sides at `point` (one value per [`IdentityId::variables`]).
    /// Indexed identities need `index`.
    pub fn evaluate(
        self,
        point: &[Scalar],
        n: &MultiIndex,
        z: &MultiIndex,
        index: Option<(usize, i64)>,
    ) -> Result<Sides> {
        let vars = self.variables();
        if point.len() != vars.len() {
            return Err(Error::DimensionMismatch { left: point.len(), right: vars.len() });
        }
        n.require_dim(z)?;
        if self.is_univariate() && n.dim() != 1 {
            return Err(Error::precondition(format!("{} is defined for m = 1 only", self.name())));
        }
        let (n1, z1) = (n.entries()[0], z.entries()[0]);
        let v = |i: usize| &point[i];
        match self {
            IdentityId::Abel1 => eval_abel_1(v(0), v(1), z1, n1),
            IdentityId::Abel2 => eval_abel_2(v(0), v(1), z1, n1),
            IdentityId::Rothe1 => eval_rothe_1(v(0), v(1), z1, n1),
            IdentityId::Rothe2 => eval_rothe_2(v(0), v(1), z1, n1),
            IdentityId::Gould => eval_gould(v(0), v(1), z1, v(2), n1),
            IdentityId::Jensen => eval_jensen(v(0), v(1), z1, n1),
            IdentityId::GouldMohanty => eval_gould_mohanty(v(0), v(1), v(2), n, z),
            IdentityId::GmhSpecial => eval_unit_shift(v(0), v(1), n, z),
            IdentityId::RaneyMohanty1 => eval_raney_mohanty_1(v(0), v(1), n, z),
            IdentityId::RaneyMohanty2 => eval_raney_mohanty_2(v(0), v(1), n, z),
            IdentityId::MohantyHanda => eval_mohanty_handa(v(0), v(1), n, z),
            IdentityId::Kmx => eval_factorization_count(v(0), v(1), n, z),
            IdentityId::Kmpink => {
                let (i, j) = index.ok_or_else(|| Error::precondition("kmpink needs i and j"))?;
                eval_overshoot_shift(v(0), v(1), n, z, i, j)
            }
            IdentityId::Pkroth => eval_collapsed_count(v(0), v(1), n, z),
            IdentityId::Absorption => {
                let (i, _) = index.ok_or_else(|| Error::precondition("absorption needs i"))?;
                check_absorption(v(0), n, z, i)
            }
            IdentityId::Rm2Decomposition => check_second_form_split(v(0), v(1), n, z),
            IdentityId::MhExpansion => check_mh_expansion(v(0), v(1), n, z),
        }
    }

    /// Every admissible `(i, j)` for indexed identities; `[None]` otherwise.
    /// For `absorption` the `j` slot is unused and set to 0.
    pub fn admissible_indices(self, z: &MultiIndex) -> Vec<Option<(usize, i64)>> {
        match self {
            IdentityId::Kmpink => (1..=z.dim())
                .flat_map(|i| (1..=z.get(i)).map(move |j| Some((i, j))))
                .collect(),
            IdentityId::Absorption => (1..=z.dim()).map(|i| Some((i, 0))).collect(),
            _ => vec![None],
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| {
            let names: Vec<&str> = IdentityId::ALL.iter().map(|id| id.name()).collect();
            Error::Parse(format!("unknown identity {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[i64]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn raney_mohanty_empty_range() {
        for (x, y) in [(3, 4), (-2, 7), (5, -5)] {
            let s = eval_raney_mohanty_1(&int(x), &int(y), &mi(&[0, 0]), &mi(&[1, 2])).unwrap();
            assert_eq!(s.left, int(1));
            assert_eq!(s.right, int(1));
        }
    }

    #[test]
    fn rothe_with_flat_grading_is_vandermonde() {
        // brute force C(3,k) C(4,2-k) summed by hand: 6 + 12 + 3
        let s = eval_rothe_1(&int(3), &int(4), 0, 2).unwrap();
        assert_eq!(s.left, int(21));
        assert_eq!(s.right, int(21));
    }

    #[test]
    fn unit_shift_small_case() {
        // C(1,0)C(1,1) + C(0,1)C(2,0) = 1 and C(2,0)C(0,1) + C(1,1)C(1,0) = 1
        let s = eval_unit_shift(&int(1), &int(1), &mi(&[1]), &mi(&[1])).unwrap();
        assert_eq!(s, Sides { left: int(1), right: int(1) });
    }

    #[test]
    fn absorption_example() {
        let s = check_absorption(&int(5), &mi(&[2]), &mi(&[1]), 1).unwrap();
        assert_eq!(s.left, int(2));
        assert_eq!(s.right, int(2));
        assert!(matches!(
            check_absorption(&int(2), &mi(&[2]), &mi(&[1]), 1),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn poles_are_reported() {
        assert!(matches!(eval_rothe_1(&int(2), &int(1), 1, 3), Err(Error::Pole { .. })));
        assert!(matches!(eval_abel_1(&int(0), &int(1), 1, 3), Err(Error::Pole { .. })));
        assert!(matches!(eval_abel_2(&int(1), &int(-3), 1, 3), Err(Error::Pole { .. })));
        assert!(matches!(
            eval_raney_mohanty_2(&int(4), &int(1), &mi(&[1, 1]), &mi(&[1, 2])),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn abel_small_values() {
        // n = 1: 1·(y)^1 + 1·x·(x-z)^0 = x + y
        let s = eval_abel_1(&int(3), &int(5), 2, 1).unwrap();
        assert_eq!((s.left, s.right), (int(8), int(8)));
        // n = 0 on the company identity: x y x^{-1} y^{-1} = 1 = (x+y)/(x+y)
        let s = eval_abel_2(&int(3), &int(5), 2, 0).unwrap();
        assert_eq!((s.left, s.right), (int(1), int(1)));
        // n = 1: (y+z) + x(y+z)/(y+z) = x + y + z, including at y = 0
        let s = eval_abel_2(&int(1), &int(0), 1, 1).unwrap();
        assert_eq!((s.left, s.right), (int(2), int(2)));
    }

    #[test]
    fn bare_y_companion_form_is_not_an_identity() {
        // Σ C(n,k) x y (x-kz)^{k-1} (y+kz)^{n-k-1} at n = 1, z = 1, x = 1, y = 0
        let (x, y, z) = (int(1), int(0), int(1));
        let left = &y + &x * &y / (&y + &z);
        assert_eq!(left, int(0));
        assert_eq!(eval_abel_2(&x, &y, 1, 1).unwrap().right, int(2));
    }

    #[test]
    fn negative_entry_terms_vanish() {
        // k with k_1 = 0 makes k - e_1 negative: those terms must drop out
        let s = eval_collapsed_count(&int(7), &int(3), &mi(&[0, 2]), &mi(&[1, 3])).unwrap();
        assert!(s.holds());
        let s = eval_overshoot_shift(&int(7), &int(3), &mi(&[0, 2]), &mi(&[2, 3]), 1, 2).unwrap();
        assert_eq!(s.left, int(0));
        assert_eq!(s.right, int(0));
    }

    #[test]
    fn overshoot_index_is_checked() {
        let (n, z) = (mi(&[1, 1]), mi(&[1, 2]));
        assert!(eval_overshoot_shift(&int(5), &int(2), &n, &z, 1, 2).is_err());
        assert!(eval_overshoot_shift(&int(5), &int(2), &n, &z, 3, 1).is_err());
        assert!(eval_overshoot_shift(&int(5), &int(2), &n, &z, 2, 2).unwrap().holds());
    }

    #[test]
    fn identity_names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        }
        assert!("rothe-3".parse::<IdentityId>().is_err());
    }

    #[test]
    fn univariate_entries_reject_higher_dimension() {
        let r = IdentityId::Gould.evaluate(&[int(1), int(2), int(3)], &mi(&[1, 1]), &mi(&[1, 1]), None);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
