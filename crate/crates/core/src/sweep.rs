//! Desk-scale parameter sweeps: each runs one family of checks over every
//! parameter tuple in a fixed grid and folds the outcomes into one report.
//!
//! Cases run in parallel on the ambient rayon pool; results are merged in
//! case order, so reports do not depend on the thread count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::arith::{int, multinomial, render, MultiIndex, Scalar};
use crate::bijections::{verify_raney_decomposition, verify_shift_class};
use crate::error::{Error, Result};
use crate::identities::{
    check_gould_epsilon_chain, eval_gould, eval_gould_mohanty, eval_jensen, eval_mohanty_handa,
    eval_raney_mohanty_1, eval_rothe_1, verify_identity_on_grid, IdentityId, IdentitySpec, Sides,
};
use crate::report::{Counterexample, EvalReport, Verdict};
use crate::series::{
    check_generating_function_1, check_generating_function_2, functional_equation_residual,
    solve_functional_equation,
};
use crate::words::{count_prefix_class, count_words, enumerate_words, GradedAlphabet, WordClassSpec};

/// Largest word weight enumerated by the sweeps.
pub const MAX_WEIGHT: i64 = 14;
/// Largest `|n|` (or `|k|`) in every sweep.
pub const MAX_NORM: i64 = 4;
/// Truncation order of the series sweep.
pub const SERIES_ORDER: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SweepId {
    Counting,
    PrefixClass,
    Shift,
    ShiftBy,
    Raney,
    Identities,
    Specialization,
    GeneratingFunctions,
}

impl SweepId {
    pub const ALL: [SweepId; 8] = [
        SweepId::Counting,
        SweepId::PrefixClass,
        SweepId::Shift,
        SweepId::ShiftBy,
        SweepId::Raney,
        SweepId::Identities,
        SweepId::Specialization,
        SweepId::GeneratingFunctions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepId::Counting => "counting",
            SweepId::PrefixClass => "prefix-class",
            SweepId::Shift => "shift",
            SweepId::ShiftBy => "shift-by",
            SweepId::Raney => "raney",
            SweepId::Identities => "identities",
            SweepId::Specialization => "specialization",
            SweepId::GeneratingFunctions => "generating-functions",
        }
    }

    pub fn run(self) -> Result<EvalReport> {
        match self {
            SweepId::Counting => counting_sweep(),
            SweepId::PrefixClass => prefix_class_sweep(),
            SweepId::Shift => shift_sweep(false),
            SweepId::ShiftBy => shift_sweep(true),
            SweepId::Raney => raney_sweep(),
            SweepId::Identities => identities_sweep(),
            SweepId::Specialization => specialization_sweep(),
            SweepId::GeneratingFunctions => generating_functions_sweep(),
        }
    }
}

impl fmt::Display for SweepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepId::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| {
            let names: Vec<&str> = SweepId::ALL.iter().map(|id| id.name()).collect();
            Error::Parse(format!("unknown sweep {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

/// Every vector of length `m` with entries from `values`.
pub fn gradings(m: usize, values: &[i64]) -> Vec<MultiIndex> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(|v| MultiIndex::new(v).expect("m >= 1")).collect()
}

/// Natural vectors of length `m` with `|n| <= max_norm`, lexicographic.
pub fn bounded_indices(m: usize, max_norm: i64) -> Vec<MultiIndex> {
    MultiIndex::new(vec![max_norm; m])
        .expect("m >= 1")
        .box_iter()
        .filter(|n| n.norm() <= max_norm)
        .collect()
}

/// Outcome of one case: an optional failure plus named tallies.
#[derive(Debug, Default)]
struct Outcome {
    failure: Option<Counterexample>,
    tallies: Vec<&'static str>,
}

impl Outcome {
    fn pass() -> Self {
        Outcome::default()
    }

    fn fail(c: Counterexample) -> Self {
        Outcome { failure: Some(c), tallies: Vec::new() }
    }

    fn from_report(r: &EvalReport) -> Self {
        if r.is_success() {
            return Outcome::pass();
        }
        let mut c = r
            .counterexample
            .clone()
            .unwrap_or_else(|| Counterexample::new(format!("{} failed", r.check)));
        for (k, v) in &r.parameters {
            c.point.entry(k.clone()).or_insert_with(|| v.clone());
        }
        c.point.insert("check".into(), r.check.clone());
        Outcome::fail(c)
    }

    fn tally(mut self, tag: &'static str) -> Self {
        self.tallies.push(tag);
        self
    }
}

fn run_cases<C: Sync>(
    sweep: SweepId,
    cases: &[C],
    f: impl Fn(&C) -> Result<Outcome> + Sync,
) -> Result<EvalReport> {
    let outcomes: Vec<Outcome> = cases.par_iter().map(&f).collect::<Result<_>>()?;
    let mut tallies: BTreeMap<&str, usize> = BTreeMap::new();
    let mut failures = 0usize;
    let mut first = None;
    for o in outcomes {
        for t in o.tallies {
            *tallies.entry(t).or_default() += 1;
        }
        if let Some(c) = o.failure {
            failures += 1;
            first.get_or_insert(c);
        }
    }
    let mut report = EvalReport::new(format!("sweep:{sweep}"), Verdict::pass_if(failures == 0))
        .detail("cases", cases.len())
        .detail("failures", failures);
    for (k, v) in tallies {
        report = report.detail(k, v);
    }
    report.counterexample = first;
    Ok(report)
}

fn alphabet(z: &MultiIndex) -> GradedAlphabet {
    GradedAlphabet::new(z.clone()).expect("sweep gradings are natural")
}

/// `#Γ_{p,k}` by enumeration against the closed form, for `m ∈ {1,2}`,
/// `z_i ∈ 0..=3`, `p <= 14`, `|k| <= 4`. Where `p >= k·z` the bare
/// multinomial `C(p - k·z, k)` must match too; below that the class is empty
/// while the bare multinomial can be nonzero, and such cases are tallied.
pub fn counting_sweep() -> Result<EvalReport> {
    let mut cases = Vec::new();
    for m in 1..=2 {
        for z in gradings(m, &[0, 1, 2, 3]) {
            for k in bounded_indices(m, MAX_NORM) {
                for p in 0..=MAX_WEIGHT {
                    cases.push((z.clone(), k.clone(), p));
                }
            }
        }
    }
    let report = run_cases(SweepId::Counting, &cases, |(z, k, p)| {
        let a = alphabet(z);
        let enumerated = enumerate_words(&WordClassSpec::new(*p, k.clone()), &a)?.count();
        let closed = count_words(*p, k, &a)?;
        let shift = p - k.dot(z)?;
        let bare = multinomial(&int(shift), k);
        let fail = |what: &str, v: &Scalar| {
            Outcome::fail(
                Counterexample::new(format!("enumeration differs from {what}"))
                    .at("p", p)
                    .at("k", k)
                    .at("z", z)
                    .sides(enumerated.to_string(), render(v)),
            )
        };
        Ok(if int(enumerated as i64) != closed {
            fail("the closed form", &closed)
        } else if shift >= 0 && int(enumerated as i64) != bare {
            fail("the multinomial", &bare)
        } else if shift < 0 {
            let o = Outcome::pass().tally("below_domain");
            if bare != Scalar::default() {
                o.tally("below_domain_nonzero_multinomial")
            } else {
                o
            }
        } else {
            Outcome::pass()
        })
    })?;
    Ok(report.note("below_domain counts cases with p < k·z; the class is empty there"))
}

/// `#Γ^{(p)}_{p+q,n}` by enumeration against the convolution sum, for
/// `p, q >= n·z`, `p + q <= 14`.
pub fn prefix_class_sweep() -> Result<EvalReport> {
    let mut cases = Vec::new();
    for m in 1..=2 {
        for z in gradings(m, &[0, 1, 2, 3]) {
            for n in bounded_indices(m, MAX_NORM) {
                let nz = n.dot(&z)?;
                for p in nz..=MAX_WEIGHT {
                    for q in nz..=MAX_WEIGHT - p {
                        cases.push((z.clone(), n.clone(), p, q));
                    }
                }
            }
        }
    }
    run_cases(SweepId::PrefixClass, &cases, |(z, n, p, q)| {
        let a = alphabet(z);
        let spec = WordClassSpec::with_prefix(p + q, n.clone(), *p);
        let enumerated = enumerate_words(&spec, &a)?.count();
        let closed = count_prefix_class(*p, *q, n, &a)?;
        Ok(if int(enumerated as i64) == closed {
            Outcome::pass()
        } else {
            Outcome::fail(
                Counterexample::new("enumeration differs from the convolution")
                    .at("p", p)
                    .at("q", q)
                    .at("n", n)
                    .at("z", z)
                    .sides(enumerated.to_string(), render(&closed)),
            )
        })
    })
}

/// `(z, n, p, q)` with `z_i ∈ {1,2,3}`, `|n| <= 4`, `p >= n·z`, `q >= 1`,
/// `p + q + n·z <= 14`.
pub fn bijection_grid() -> Vec<(MultiIndex, MultiIndex, i64, i64)> {
    let mut cases = Vec::new();
    for m in 1..=2 {
        for z in gradings(m, &[1, 2, 3]) {
            for n in bounded_indices(m, MAX_NORM) {
                let nz = n.dot(&z).expect("same dimension");
                for p in nz..=MAX_WEIGHT {
                    for q in 1..=MAX_WEIGHT - p - nz {
                        cases.push((z.clone(), n.clone(), p, q));
                    }
                }
            }
        }
    }
    cases
}

/// The unit shift (or every `r`-fold shift with `1 <= r <= q`) on each class
/// of [`bijection_grid`].
pub fn shift_sweep(all_r: bool) -> Result<EvalReport> {
    let mut cases = Vec::new();
    for (z, n, p, q) in bijection_grid() {
        let rs = if all_r { 1..=q } else { 1..=1 };
        for r in rs {
            cases.push((z.clone(), n.clone(), p, q, r));
        }
    }
    let id = if all_r { SweepId::ShiftBy } else { SweepId::Shift };
    run_cases(id, &cases, |(z, n, p, q, r)| {
        Ok(Outcome::from_report(&verify_shift_class(*p, *q, n, *r, &alphabet(z))?))
    })
}

/// The factorization tallies against the decomposition on each class of
/// [`bijection_grid`].
pub fn raney_sweep() -> Result<EvalReport> {
    let cases = bijection_grid();
    run_cases(SweepId::Raney, &cases, |(z, n, p, q)| {
        Ok(Outcome::from_report(&verify_raney_decomposition(*p, *q, n, &alphabet(z))?))
    })
}

/// Every catalog identity on its certification grid for `m ∈ {1,2}`
/// (univariate ones at `m = 1`), `|n| <= 4`, `z_i ∈ {0,1,3}`, plus the
/// ε-step chain on a few points.
pub fn identities_sweep() -> Result<EvalReport> {
    let mut cases = Vec::new();
    for id in IdentityId::ALL {
        let dims: &[usize] = if id.is_univariate() { &[1] } else { &[1, 2] };
        for &m in dims {
            for z in gradings(m, &[0, 1, 3]) {
                for n in bounded_indices(m, MAX_NORM) {
                    cases.push(IdentitySpec::new(id, n, z.clone()));
                }
            }
        }
    }
    let report = run_cases(SweepId::Identities, &cases, |spec| {
        Ok(Outcome::from_report(&verify_identity_on_grid(spec)?).tally(spec.id.name()))
    })?;

    let mut chains = Vec::new();
    for m in 1..=2 {
        for z in gradings(m, &[0, 1, 3]) {
            for n in bounded_indices(m, 2) {
                for (x, y, eps) in [(2, 5, 3), (-3, 4, -2), (7, 1, 4)] {
                    chains.push((z.clone(), n.clone(), x, y, eps));
                }
            }
        }
    }
    let chain_report = run_cases(SweepId::Identities, &chains, |(z, n, x, y, eps)| {
        Ok(Outcome::from_report(&check_gould_epsilon_chain(&int(*x), &int(*y), *eps, n, z)?))
    })?;
    Ok(merge(report, chain_report, "epsilon_chains"))
}

/// Folds a secondary sweep into `main`, keeping the first counterexample.
fn merge(mut main: EvalReport, extra: EvalReport, label: &str) -> EvalReport {
    let count = |r: &EvalReport, k: &str| r.details.get(k).and_then(|v| v.as_u64()).unwrap_or(0);
    let failures = count(&main, "failures") + count(&extra, "failures");
    let cases = count(&extra, "cases");
    main.verdict = Verdict::pass_if(main.is_success() && extra.is_success());
    if main.counterexample.is_none() {
        main.counterexample = extra.counterexample;
    }
    main.detail(label, cases).detail("failures", failures)
}

type Classical = fn(&Scalar, &Scalar, &Scalar, i64, i64) -> Result<Sides>;
type Multivariable = fn(&Scalar, &Scalar, &Scalar, &MultiIndex, &MultiIndex) -> Result<Sides>;

/// The classical evaluators against their `m = 1` multivariable forms.
pub const SPECIALIZATIONS: [(&str, Classical, Multivariable); 3] = [
    (
        "gould-mohanty/gould",
        |x, y, e, z, n| eval_gould(x, y, z, e, n),
        |x, y, e, n, z| eval_gould_mohanty(x, y, e, n, z),
    ),
    (
        "raney-mohanty-1/rothe-1",
        |x, y, _, z, n| eval_rothe_1(x, y, z, n),
        |x, y, _, n, z| eval_raney_mohanty_1(x, y, n, z),
    ),
    (
        "mohanty-handa/jensen",
        |x, y, _, z, n| eval_jensen(x, y, z, n),
        |x, y, _, n, z| eval_mohanty_handa(x, y, n, z),
    ),
];

/// Pointwise agreement of [`SPECIALIZATIONS`] over `x, y ∈ -6..=10`,
/// `ε ∈ {-2, 1, 3}`, `z ∈ 0..=3`, `n ∈ 0..=4`. A pole on one side must be
/// a pole on the other.
pub fn specialization_sweep() -> Result<EvalReport> {
    let mut cases = Vec::new();
    for idx in 0..SPECIALIZATIONS.len() {
        for z in 0..=3 {
            for n in 0..=MAX_NORM {
                cases.push((idx, z, n));
            }
        }
    }
    run_cases(SweepId::Specialization, &cases, |&(idx, z, n)| {
        let (name, classical, multi) = SPECIALIZATIONS[idx];
        let (zm, nm) = (MultiIndex::new(vec![z])?, MultiIndex::new(vec![n])?);
        for x in -6..=10 {
            for y in -6..=10 {
                for eps in [-2, 1, 3] {
                    let (xs, ys, es) = (int(x), int(y), int(eps));
                    let a = classical(&xs, &ys, &es, z, n);
                    let b = multi(&xs, &ys, &es, &nm, &zm);
                    let agree = match (&a, &b) {
                        (Ok(a), Ok(b)) => a == b,
                        (Err(_), Err(_)) => true,
                        _ => false,
                    };
                    if !agree {
                        let show = |s: &Result<Sides>| match s {
                            Ok(s) => format!("{} = {}", render(&s.left), render(&s.right)),
                            Err(e) => e.to_string(),
                        };
                        return Ok(Outcome::fail(
                            Counterexample::new(format!("{name} disagree"))
                                .at("x", x)
                                .at("y", y)
                                .at("eps", eps)
                                .at("n", n)
                                .at("z", z)
                                .sides(show(&a), show(&b)),
                        ));
                    }
                }
            }
        }
        Ok(Outcome::pass())
    })
}

/// Functional-equation residual and both generating functions for
/// `m ∈ {1,2}`, `z_i ∈ {1,2,3}`, `x ∈ 1..=4`, order 8.
pub fn generating_functions_sweep() -> Result<EvalReport> {
    let mut cases = Vec::new();
    for m in 1..=2 {
        for z in gradings(m, &[1, 2, 3]) {
            for x in 1..=4 {
                cases.push((z.clone(), x));
            }
        }
    }
    run_cases(SweepId::GeneratingFunctions, &cases, |(z, x)| {
        let v = solve_functional_equation(z, SERIES_ORDER)?;
        let residual = functional_equation_residual(&v, z)?;
        if !residual.is_zero() {
            let (e, c) = residual.terms().next().expect("nonzero residual");
            return Ok(Outcome::fail(
                Counterexample::new("functional equation residual is nonzero")
                    .at("z", z)
                    .at("exponent", e.to_csv())
                    .sides(render(c), "0".into()),
            ));
        }
        for report in [
            check_generating_function_1(*x, z, SERIES_ORDER)?,
            check_generating_function_2(*x, z, SERIES_ORDER)?,
        ] {
            if !report.is_success() {
                return Ok(Outcome::from_report(&report));
            }
        }
        Ok(Outcome::pass())
    })
}
