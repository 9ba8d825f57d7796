//! Degree-bounded grid certification.
//!
//! Let `P = (left - right) · D`, where `D` clears the linear denominators, and
//! let `d_v` bound the degree of `P` in variable `v`. The grid is nested: the
//! outermost variable takes `d + 1` admissible values; for each of them the
//! next variable takes its own `d + 1` admissible values, and so on. If both
//! sides agree at every leaf, each innermost slice of `P` has more roots than
//! its degree and vanishes identically, and the argument lifts one variable at
//! a time. Because admissible values are chosen per slice, pole points only
//! ever cost extra evaluations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{gould_sum, IdentityId, Sides};
use crate::arith::{int, render, MultiIndex, Scalar};
use crate::error::{Error, Result};
use crate::report::{Counterexample, EvalReport, GridSummary, Verdict};

/// Inclusive integer range scanned for admissible values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridRange {
    pub start: i64,
    pub end: i64,
}

pub const DEFAULT_GRID_RANGE: GridRange = GridRange { start: 0, end: 63 };

impl fmt::Display for GridRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl FromStr for GridRange {
    type Err = Error;

    /// `A..B`, both ends included.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("grid range must look like A..B, got {s:?}"));
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        let start = a.trim().parse().map_err(|_| bad())?;
        let end = b.trim().parse().map_err(|_| bad())?;
        if start > end {
            return Err(Error::Parse(format!("empty grid range {s:?}")));
        }
        Ok(GridRange { start, end })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentitySpec {
    pub id: IdentityId,
    pub n: MultiIndex,
    pub z: MultiIndex,
    /// `(i, j)` for indexed identities; `None` checks every admissible index.
    pub index: Option<(usize, i64)>,
    pub range: GridRange,
}

impl IdentitySpec {
    pub fn new(id: IdentityId, n: MultiIndex, z: MultiIndex) -> Self {
        IdentitySpec { id, n, z, index: None, range: DEFAULT_GRID_RANGE }
    }

    fn validate(&self) -> Result<Vec<Option<(usize, i64)>>> {
        self.n.require_dim(&self.z)?;
        self.n.require_natural("n")?;
        self.z.require_natural("z")?;
        if self.id.is_univariate() && self.n.dim() != 1 {
            return Err(Error::precondition(format!("{} is defined for m = 1 only", self.id)));
        }
        match self.index {
            Some(idx) if self.id.is_indexed() => {
                let allowed = self.id.admissible_indices(&self.z);
                if !allowed.contains(&Some(idx)) {
                    return Err(Error::precondition(format!(
                        "{} index (i = {}, j = {}) is not admissible for z = {}",
                        self.id, idx.0, idx.1, self.z
                    )));
                }
                Ok(vec![Some(idx)])
            }
            Some(_) => Err(Error::precondition(format!("{} takes no index", self.id))),
            None => Ok(self.id.admissible_indices(&self.z)),
        }
    }

    fn base_report(&self, verdict: Verdict) -> EvalReport {
        let mut r = EvalReport::new(self.id.name(), verdict).param("n", &self.n).param("z", &self.z);
        if let Some((i, j)) = self.index {
            r = r.param("i", i);
            if self.id == IdentityId::Kmpink {
                r = r.param("j", j);
            }
        }
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Certified,
    Exhausted,
    Mismatch,
}

struct Search<'a> {
    spec: &'a IdentitySpec,
    index: Option<(usize, i64)>,
    vars: &'static [&'static str],
    bounds: &'a [usize],
    evaluated: usize,
    skipped: Vec<String>,
    counterexample: Option<Counterexample>,
}

impl Search<'_> {
    /// `name=value` for variables `from..`, plus the index.
    fn describe(&self, point: &[i64], from: usize) -> String {
        let mut parts: Vec<String> =
            (from..point.len()).map(|v| format!("{}={}", self.vars[v], point[v])).collect();
        if let Some((i, j)) = self.index {
            parts.push(format!("i={i}"));
            if self.spec.id == IdentityId::Kmpink {
                parts.push(format!("j={j}"));
            }
        }
        parts.join(",")
    }

    fn leaf(&mut self, point: &[i64]) -> Result<Outcome> {
        let values: Vec<Scalar> = point.iter().map(|&v| int(v)).collect();
        self.evaluated += 1;
        match self.spec.id.evaluate(&values, &self.spec.n, &self.spec.z, self.index) {
            Ok(sides) if sides.holds() => Ok(Outcome::Certified),
            Ok(Sides { left, right }) => {
                let mut c = Counterexample::new("sides differ").sides(render(&left), render(&right));
                for (name, v) in self.vars.iter().zip(point) {
                    c = c.at(name, v);
                }
                if let Some((i, j)) = self.index {
                    c = c.at("i", i);
                    if self.spec.id == IdentityId::Kmpink {
                        c = c.at("j", j);
                    }
                }
                self.counterexample = Some(c);
                Ok(Outcome::Mismatch)
            }
            Err(Error::Pole { .. }) => {
                self.skipped.push(self.describe(point, 0));
                Ok(Outcome::Exhausted)
            }
            Err(e) => Err(e),
        }
    }

    /// Chooses values for variable `level - 1` and recurses inward.
    fn slice(&mut self, level: usize, point: &mut Vec<i64>) -> Result<Outcome> {
        if level == 0 {
            return self.leaf(point);
        }
        let var = level - 1;
        let need = self.bounds[var] + 1;
        let mut got = 0;
        let range = self.spec.range;
        for value in range.start..=range.end {
            point[var] = value;
            let mark = self.skipped.len();
            match self.slice(level - 1, point)? {
                Outcome::Certified => {
                    got += 1;
                    if got == need {
                        return Ok(Outcome::Certified);
                    }
                }
                Outcome::Mismatch => return Ok(Outcome::Mismatch),
                Outcome::Exhausted if level > 1 => {
                    // one line per abandoned slice rather than one per pole
                    self.skipped.truncate(mark);
                    let at = self.describe(point, var);
                    self.skipped.push(format!("{at} (no admissible {})", self.vars[var - 1]));
                }
                Outcome::Exhausted => {}
            }
        }
        Ok(Outcome::Exhausted)
    }
}

/// Certifies `spec` on a nested pole-free grid sized by the degree bounds.
pub fn verify_identity_on_grid(spec: &IdentitySpec) -> Result<EvalReport> {
    let indices = spec.validate()?;
    let vars = spec.id.variables();
    let bounds = spec.id.degree_bounds(&spec.n, &spec.z)?;
    let mut evaluated = 0;
    let mut skipped = Vec::new();
    let mut counterexample = None;
    for index in &indices {
        let mut search = Search {
            spec,
            index: *index,
            vars,
            bounds: &bounds,
            evaluated: 0,
            skipped: Vec::new(),
            counterexample: None,
        };
        let mut point = vec![spec.range.start; vars.len()];
        let outcome = search.slice(vars.len(), &mut point)?;
        evaluated += search.evaluated;
        skipped.extend(search.skipped);
        match outcome {
            Outcome::Certified => {}
            Outcome::Mismatch => {
                counterexample = search.counterexample;
                break;
            }
            Outcome::Exhausted => {
                return Err(Error::GridExhausted(format!(
                    "{} needs {} admissible values per variable in {}; enlarge the range",
                    spec.id,
                    bounds.iter().max().unwrap_or(&0) + 1,
                    spec.range
                )))
            }
        }
    }

    let rational = matches!(
        spec.id,
        IdentityId::Abel1
            | IdentityId::Abel2
            | IdentityId::Rothe1
            | IdentityId::Rothe2
            | IdentityId::RaneyMohanty1
            | IdentityId::RaneyMohanty2
            | IdentityId::Rm2Decomposition
            | IdentityId::Absorption
    );
    let certificate = if counterexample.is_some() {
        "none: counterexample found".to_owned()
    } else if rational {
        format!(
            "rational-function identity in {} (agreement at degree-bound + 1 pole-free values per variable after clearing denominators)",
            vars.join(",")
        )
    } else {
        format!(
            "polynomial identity in {} (agreement at degree-bound + 1 values per variable)",
            vars.join(",")
        )
    };
    let grid = GridSummary {
        variables: vars.iter().map(|s| s.to_string()).collect(),
        degree_bounds: vars.iter().map(|s| s.to_string()).zip(bounds.iter().copied()).collect(),
        range: spec.range.to_string(),
        points_evaluated: evaluated,
        poles_skipped: skipped,
        certificate,
    };
    let mut report = spec.base_report(Verdict::equal_if(counterexample.is_none()));
    if let Some(c) = &counterexample {
        report.left = c.left.clone();
        report.right = c.right.clone();
    }
    if indices.is_empty() {
        report = report.note(format!("no admissible (i, j) for z = {}; vacuously equal", spec.z));
    }
    if spec.id.is_indexed() && spec.index.is_none() {
        report = report.detail("indices_checked", indices.len());
    }
    report.grid = Some(grid);
    report.counterexample = counterexample;
    Ok(report)
}

/// Evaluates `spec` at one point. Indexed identities need `spec.index`.
pub fn verify_identity_at_point(
    spec: &IdentitySpec,
    point: &BTreeMap<String, Scalar>,
) -> Result<EvalReport> {
    spec.validate()?;
    if spec.id.is_indexed() && spec.index.is_none() {
        return Err(Error::precondition(format!("{} at a point needs --i (and --j)", spec.id)));
    }
    let vars = spec.id.variables();
    if let Some(extra) = point.keys().find(|k| !vars.contains(&k.as_str())) {
        return Err(Error::precondition(format!(
            "{} has no variable {extra:?}; expected {}",
            spec.id,
            vars.join(",")
        )));
    }
    let values = vars
        .iter()
        .map(|v| {
            point.get(*v).cloned().ok_or_else(|| {
                Error::precondition(format!("{} at a point needs a value for {v}", spec.id))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sides = spec.id.evaluate(&values, &spec.n, &spec.z, spec.index)?;
    let mut report = spec.base_report(Verdict::equal_if(sides.holds()));
    for (name, v) in vars.iter().zip(&values) {
        report = report.param(name, render(v));
    }
    if !sides.holds() {
        let mut c = Counterexample::new("sides differ").sides(render(&sides.left), render(&sides.right));
        for (name, v) in vars.iter().zip(&values) {
            c = c.at(name, render(v));
        }
        report.counterexample = Some(c);
    }
    report.left = Some(render(&sides.left));
    report.right = Some(render(&sides.right));
    Ok(report)
}

/// Replays the reduction of the ε-identity to unit steps: checks
/// `G(x+e, y-e) = G(x+e+1, y-e-1)` for each step between 0 and `eps`, so that
/// `G(x, y) = G(x+eps, y-eps)` follows by chaining.
pub fn check_gould_epsilon_chain(
    x: &Scalar,
    y: &Scalar,
    eps: i64,
    n: &MultiIndex,
    z: &MultiIndex,
) -> Result<EvalReport> {
    n.require_dim(z)?;
    n.require_natural("n")?;
    z.require_natural("z")?;
    let dir = eps.signum();
    let mut ok = true;
    let mut failure = None;
    let mut e = 0;
    while e != eps {
        let here = gould_sum(&(x + int(e)), &(y - int(e)), n, z)?;
        let next = gould_sum(&(x + int(e + dir)), &(y - int(e + dir)), n, z)?;
        if here != next {
            ok = false;
            failure = Some(
                Counterexample::new("unit step fails")
                    .at("x", render(&(x + int(e))))
                    .at("y", render(&(y - int(e))))
                    .sides(render(&here), render(&next)),
            );
            break;
        }
        e += dir;
    }
    let start = gould_sum(x, y, n, z)?;
    let end = gould_sum(&(x + int(eps)), &(y - int(eps)), n, z)?;
    let mut report = EvalReport::new("gould-mohanty-chain", Verdict::equal_if(ok && start == end))
        .param("x", render(x))
        .param("y", render(y))
        .param("eps", eps)
        .param("n", n)
        .param("z", z)
        .detail("steps", eps.unsigned_abs());
    report.left = Some(render(&start));
    report.right = Some(render(&end));
    report.counterexample = failure;
    Ok(report)
}
