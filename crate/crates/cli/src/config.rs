//! One runnable check. The same structure backs the command line and the
//! entries of a suite manifest, so every report can name the exact command
//! that reproduces it.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use raney_core::arith::{parse_scalar, MultiIndex, Scalar};
use raney_core::identities::{GridRange, IdentityId};
use raney_core::sweep::SweepId;
use raney_core::{Error, Result};

/// Manifest form: a JSON object with a `command` tag and the remaining
/// fields named like the long flags (`grid-range`, not `grid_range`).
/// Multi-indices may be given as `"1,2"`, `[1, 2]` or, with one entry, `3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", rename_all_fields = "kebab-case", deny_unknown_fields)]
pub enum RunConfig {
    Count {
        #[serde(with = "index")]
        z: MultiIndex,
        p: i64,
        #[serde(with = "index")]
        k: MultiIndex,
    },
    Enumerate {
        #[serde(with = "index")]
        z: MultiIndex,
        p: i64,
        #[serde(with = "index")]
        k: MultiIndex,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        r: Option<i64>,
    },
    BijectionShift {
        #[serde(with = "index")]
        z: MultiIndex,
        p: i64,
        q: i64,
        #[serde(with = "index")]
        n: MultiIndex,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        r: Option<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        word: Option<String>,
        #[serde(default, skip_serializing_if = "is_false")]
        inverse: bool,
    },
    BijectionRaney {
        #[serde(with = "index")]
        z: MultiIndex,
        p: i64,
        q: i64,
        #[serde(with = "index")]
        n: MultiIndex,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        word: Option<String>,
    },
    Verify {
        identity: String,
        #[serde(with = "index")]
        n: MultiIndex,
        #[serde(with = "index")]
        z: MultiIndex,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid_range: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        point: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        i: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        j: Option<i64>,
    },
    SeriesSolve {
        #[serde(with = "index")]
        z: MultiIndex,
        order: u32,
    },
    SeriesCheck1 {
        x: i64,
        #[serde(with = "index")]
        z: MultiIndex,
        order: u32,
    },
    SeriesCheck2 {
        x: i64,
        #[serde(with = "index")]
        z: MultiIndex,
        order: u32,
    },
    Sweep {
        name: String,
    },
}

fn is_false(b: &bool) -> bool {
    !*b
}

mod index {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Form {
        Text(String),
        Single(i64),
        List(Vec<i64>),
    }

    pub fn serialize<S: Serializer>(v: &MultiIndex, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_csv())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<MultiIndex, D::Error> {
        let form = Form::deserialize(d)
            .map_err(|_| serde::de::Error::custom("expected a multi-index: \"1,2\", [1, 2] or an integer"))?;
        let parsed = match form {
            Form::Text(t) => t.parse(),
            Form::Single(v) => MultiIndex::new(vec![v]),
            Form::List(v) => MultiIndex::new(v),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

impl RunConfig {
    /// Command-line arguments (after the binary name) that run this config.
    pub fn to_args(&self) -> Vec<String> {
        let mut a = Args::default();
        match self {
            RunConfig::Count { z, p, k } => {
                a.words(&["count"]);
                a.flag("z", z.to_csv()).flag("p", p).flag("k", k.to_csv());
            }
            RunConfig::Enumerate { z, p, k, r } => {
                a.words(&["enumerate"]);
                a.flag("z", z.to_csv()).flag("p", p).flag("k", k.to_csv()).opt("r", r);
            }
            RunConfig::BijectionShift { z, p, q, n, r, word, inverse } => {
                a.words(&["bijection", "shift"]);
                a.flag("z", z.to_csv()).flag("p", p).flag("q", q).flag("n", n.to_csv());
                a.opt("r", r).opt("word", word);
                if *inverse {
                    a.words(&["--inverse"]);
                }
            }
            RunConfig::BijectionRaney { z, p, q, n, word } => {
                a.words(&["bijection", "raney"]);
                a.flag("z", z.to_csv()).flag("p", p).flag("q", q).flag("n", n.to_csv()).opt("word", word);
            }
            RunConfig::Verify { identity, n, z, grid_range, point, i, j } => {
                a.words(&["verify", identity]);
                a.flag("n", n.to_csv()).flag("z", z.to_csv());
                a.opt("grid-range", grid_range).opt("point", point).opt("i", i).opt("j", j);
            }
            RunConfig::SeriesSolve { z, order } => {
                a.words(&["series", "solve"]);
                a.flag("z", z.to_csv()).flag("order", order);
            }
            RunConfig::SeriesCheck1 { x, z, order } | RunConfig::SeriesCheck2 { x, z, order } => {
                let which = if matches!(self, RunConfig::SeriesCheck1 { .. }) { "check1" } else { "check2" };
                a.words(&["series", which]);
                a.flag("x", x).flag("z", z.to_csv()).flag("order", order);
            }
            RunConfig::Sweep { name } => {
                a.words(&["sweep", name]);
            }
        }
        a.0
    }

    /// Shell-ready rerun command.
    pub fn command_line(&self) -> String {
        let mut out = String::from("raney");
        for arg in self.to_args() {
            out.push(' ');
            out.push_str(&shell_quote(&arg));
        }
        out
    }
}

#[derive(Default)]
struct Args(Vec<String>);

impl Args {
    fn words(&mut self, w: &[&str]) -> &mut Self {
        self.0.extend(w.iter().map(|s| s.to_string()));
        self
    }

    fn flag(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.0.push(format!("--{name}"));
        self.0.push(value.to_string());
        self
    }

    fn opt<T: std::fmt::Display>(&mut self, name: &str, value: &Option<T>) -> &mut Self {
        if let Some(v) = value {
            self.flag(name, v);
        }
        self
    }
}

fn shell_quote(s: &str) -> String {
    let plain = !s.is_empty()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || ",.=_-/:".contains(c));
    if plain {
        s.to_owned()
    } else {
        format!("'{}'", s.replace('\'', r"'\''"))
    }
}

pub fn parse_identity(s: &str) -> Result<IdentityId> {
    s.parse()
}

pub fn parse_sweep(s: &str) -> Result<SweepId> {
    s.parse()
}

pub fn parse_grid_range(s: &str) -> Result<GridRange> {
    s.parse()
}

/// `x=1,y=-2,eps=3/2`.
pub fn parse_point(s: &str) -> Result<BTreeMap<String, Scalar>> {
    s.split(',')
        .map(|pair| {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("point entries look like name=value, got {pair:?}")))?;
            Ok((k.trim().to_owned(), parse_scalar(v)?))
        })
        .collect()
}
