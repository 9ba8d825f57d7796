//! Executes a [`RunConfig`] and renders its result.

use serde_json::{json, Value};

use raney_core::arith::{multinomial, render, int};
use raney_core::bijections::{
    raney_factorize, raney_unfactorize, shift_by, shift_down_by, verify_raney_decomposition,
    verify_shift_class,
};
use raney_core::identities::{verify_identity_at_point, IdentityId, IdentitySpec, DEFAULT_GRID_RANGE};
use raney_core::series::{check_generating_function_1, check_generating_function_2, solve_functional_equation};
use raney_core::words::{count_words, enumerate_words, GradedAlphabet, Word, WordClassSpec};
use raney_core::{verify_identity_on_grid, Error, EvalReport, MultiIndex, Result, Verdict};

use crate::config::{parse_grid_range, parse_identity, parse_point, parse_sweep, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Mismatch,
}

/// Rendered result of one config.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub status: Status,
}

impl Outcome {
    fn report(mut r: EvalReport, config: &RunConfig) -> Self {
        if let Some(c) = r.counterexample.as_mut() {
            c.rerun = Some(config.command_line());
        }
        let status = if r.is_success() { Status::Pass } else { Status::Mismatch };
        Outcome { json: r.to_json_value(), text: r.to_text(), status }
    }

    /// A report whose text form is just `text` (single-word results).
    fn with_text(r: EvalReport, config: &RunConfig, text: String) -> Self {
        Outcome { text, ..Outcome::report(r, config) }
    }
}

fn alphabet(z: &MultiIndex) -> Result<GradedAlphabet> {
    GradedAlphabet::new(z.clone())
}

/// Parses `word` and checks it lies in `Γ^{(r)}_{p+q+n·z,n}`.
fn class_word(word: &str, p: i64, q: i64, n: &MultiIndex, r: i64, a: &GradedAlphabet) -> Result<Word> {
    let w = Word::parse(word, a)?;
    n.require_dim(a.grading())?;
    let total = p + q + n.dot(a.grading())?;
    let spec = WordClassSpec::with_prefix(total, n.clone(), r);
    if !w.is_member(&spec, a) {
        return Err(Error::Precondition(format!(
            "word \"{w}\" is not in the class of weight {total} with letter counts {n} and a prefix of weight {r} \
             (it has weight {}, counts {})",
            w.weight(a),
            w.letter_counts(a)
        )));
    }
    Ok(w)
}

pub fn execute(config: &RunConfig) -> Result<Outcome> {
    match config {
        RunConfig::Count { z, p, k } => {
            let a = alphabet(z)?;
            k.require_dim(z)?;
            k.require_natural("k")?;
            let formula = count_words(*p, k, &a)?;
            let enumerated = enumerate_words(&WordClassSpec::new(*p, k.clone()), &a)?.count();
            let mut r = EvalReport::new("count", Verdict::equal_if(formula == int(enumerated as i64)))
                .param("p", p)
                .param("k", k)
                .param("z", z)
                .detail("formula", render(&formula))
                .detail("enumerated", enumerated);
            let shift = p - k.dot(z)?;
            if shift < 0 {
                r = r
                    .detail("multinomial", render(&multinomial(&int(shift), k)))
                    .note("p < k·z: the class is empty; the multinomial at a negative argument is not a count");
            }
            r.left = Some(render(&formula));
            r.right = Some(enumerated.to_string());
            if !r.is_success() {
                r.counterexample = Some(
                    raney_core::Counterexample::new("formula differs from enumeration")
                        .sides(render(&formula), enumerated.to_string()),
                );
            }
            Ok(Outcome::report(r, config))
        }
        RunConfig::Enumerate { z, p, k, r } => {
            let a = alphabet(z)?;
            let spec = match r {
                Some(r) => WordClassSpec::with_prefix(*p, k.clone(), *r),
                None => WordClassSpec::new(*p, k.clone()),
            };
            k.require_natural("k")?;
            let words: Vec<String> = enumerate_words(&spec, &a)?.map(|w| w.to_string()).collect();
            let text = words.join("\n");
            Ok(Outcome { json: json!(words), text, status: Status::Pass })
        }
        RunConfig::BijectionShift { z, p, q, n, r, word, inverse } => {
            let a = alphabet(z)?;
            let steps = r.unwrap_or(1);
            match word {
                None => Ok(Outcome::report(verify_shift_class(*p, *q, n, steps, &a)?, config)),
                Some(word) => {
                    if steps < 1 || steps > *q {
                        return Err(Error::Precondition(format!("requires q >= r >= 1 (q = {q}, r = {steps})")));
                    }
                    let (from, to) = if *inverse { (p + steps, *p) } else { (*p, p + steps) };
                    let w = class_word(word, *p, *q, n, from, &a)?;
                    let image =
                        if *inverse { shift_down_by(&w, *p, steps, &a)? } else { shift_by(&w, *p, steps, &a)? };
                    let back =
                        if *inverse { shift_by(&image, *p, steps, &a)? } else { shift_down_by(&image, *p, steps, &a)? };
                    let ok = back == w && class_word(&image.to_string(), *p, *q, n, to, &a).is_ok();
                    let r = EvalReport::new(if *inverse { "shift-inverse" } else { "shift" }, Verdict::pass_if(ok))
                        .param("p", p)
                        .param("q", q)
                        .param("n", n)
                        .param("r", steps)
                        .param("z", z)
                        .detail("input", w.to_string())
                        .detail("output", image.to_string())
                        .detail("round_trip", back == w);
                    let text = image.to_string();
                    Ok(Outcome::with_text(r, config, text))
                }
            }
        }
        RunConfig::BijectionRaney { z, p, q, n, word } => {
            let a = alphabet(z)?;
            match word {
                None => Ok(Outcome::report(verify_raney_decomposition(*p, *q, n, &a)?, config)),
                Some(word) => {
                    let w = class_word(word, *p, *q, n, 0, &a)?;
                    let f = raney_factorize(&w, *p, &a)?;
                    let back = raney_unfactorize(&f, *p, &a)?;
                    let factorization = serde_json::to_value(&f).map_err(|e| Error::Internal(e.to_string()))?;
                    let r = EvalReport::new("raney", Verdict::pass_if(back == w))
                        .param("p", p)
                        .param("q", q)
                        .param("n", n)
                        .param("z", z)
                        .detail("input", w.to_string())
                        .detail("factorization", factorization)
                        .detail("round_trip", back == w);
                    Ok(Outcome::report(r, config))
                }
            }
        }
        RunConfig::Verify { identity, n, z, grid_range, point, i, j } => {
            let id = parse_identity(identity)?;
            let index = match (id, i, j) {
                (_, None, None) => None,
                (IdentityId::Kmpink, Some(i), Some(j)) => Some((*i, *j)),
                (IdentityId::Kmpink, _, _) => {
                    return Err(Error::Precondition("kmpink takes both --i and --j".into()))
                }
                (IdentityId::Absorption, Some(i), None) => Some((*i, 0)),
                (IdentityId::Absorption, _, Some(_)) => {
                    return Err(Error::Precondition("absorption takes --i only".into()))
                }
                _ => return Err(Error::Precondition(format!("{id} takes no --i/--j"))),
            };
            let range = grid_range.as_deref().map(parse_grid_range).transpose()?.unwrap_or(DEFAULT_GRID_RANGE);
            let spec = IdentitySpec { id, n: n.clone(), z: z.clone(), index, range };
            let report = match point {
                Some(pt) => verify_identity_at_point(&spec, &parse_point(pt)?)?,
                None => verify_identity_on_grid(&spec)?,
            };
            Ok(Outcome::report(report, config))
        }
        RunConfig::SeriesSolve { z, order } => {
            let v = solve_functional_equation(z, *order)?;
            let map = v.to_map();
            let text = map.iter().map(|(e, c)| format!("{e}: {c}")).collect::<Vec<_>>().join("\n");
            Ok(Outcome { json: json!(map), text, status: Status::Pass })
        }
        RunConfig::SeriesCheck1 { x, z, order } => {
            Ok(Outcome::report(check_generating_function_1(*x, z, *order)?, config))
        }
        RunConfig::SeriesCheck2 { x, z, order } => {
            Ok(Outcome::report(check_generating_function_2(*x, z, *order)?, config))
        }
        RunConfig::Sweep { name } => Ok(Outcome::report(parse_sweep(name)?.run()?, config)),
    }
}
