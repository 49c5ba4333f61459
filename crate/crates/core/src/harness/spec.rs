//! Experiment spec files.
//!
//! A spec file is a JSON object with an `experiments` array:
//!
//! ```json
//! {"experiments": [
//!   {"name": "exp-1", "sizes": "800,200,80,20", "p": 0.7, "q": 0.3,
//!    "repeats": 10, "expect": "largest exact",
//!    "published": {"ours": "Largest cluster", "acx": "All clusters"}}
//! ]}
//! ```
//!
//! `sizes` is either an array of integers or a string of comma-separated terms,
//! where `AxB` stands for `B` clusters of size `A`. Trial `i` samples its graph with
//! seed `seed + i` and runs the algorithm with seed `i`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recovery::Profile;
use crate::sbm::SbmSpec;

/// Default base seed for graph sampling.
pub const DEFAULT_SEED: u64 = 1000;

/// Parses `"1200,1x1800"`-style size lists.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    let bad = |msg: String| Error::InvalidSpec(msg);
    let mut out = Vec::new();
    for term in text.split(',').map(str::trim) {
        if term.is_empty() {
            return Err(bad(format!("empty term in size list {text:?}")));
        }
        let (size, count) = match term.split_once(['x', 'X']) {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (term, "1"),
        };
        let size: usize = size.parse().map_err(|_| bad(format!("bad cluster size {size:?}")))?;
        let count: usize = count.parse().map_err(|_| bad(format!("bad repeat count {count:?}")))?;
        if count == 0 {
            return Err(bad(format!("zero repeat count in {term:?}")));
        }
        if out.len().saturating_add(count) > crate::io::DEFAULT_MAX_VERTICES {
            return Err(bad("too many clusters".into()));
        }
        out.extend(std::iter::repeat_n(size, count));
    }
    Ok(out)
}

/// Inverse of [`parse_sizes`] for sorted lists, run-length encoding repeats.
pub fn format_sizes(sizes: &[usize]) -> String {
    let mut terms = Vec::new();
    let mut i = 0;
    while i < sizes.len() {
        let j = i + sizes[i..].iter().take_while(|&&s| s == sizes[i]).count();
        terms.push(if j - i > 2 {
            format!("{}x{}", sizes[i], j - i)
        } else {
            vec![sizes[i].to_string(); j - i].join(",")
        });
        i = j;
    }
    terms.join(",")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum SizesRepr {
    List(Vec<usize>),
    Text(String),
}

fn de_sizes<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<usize>, D::Error> {
    match SizesRepr::deserialize(d)? {
        SizesRepr::List(v) => Ok(v),
        SizesRepr::Text(s) => parse_sizes(&s).map_err(serde::de::Error::custom),
    }
}

/// What a trial must achieve, besides emitting no partial or empty sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Expectation {
    LargestExact,
    /// The `k` largest clusters are all recovered exactly.
    TopExact(usize),
    AllExact,
    /// At least `k` clusters recovered exactly.
    CountAtLeast(usize),
}

impl FromStr for Expectation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let number = |x: &str| {
            x.trim()
                .parse::<usize>()
                .ok()
                .filter(|&k| k >= 1)
                .ok_or_else(|| Error::InvalidSpec(format!("bad count in expectation {s:?}")))
        };
        if t == "largest exact" {
            Ok(Self::LargestExact)
        } else if t == "all exact" {
            Ok(Self::AllExact)
        } else if let Some(k) = t.strip_prefix("top-").and_then(|r| r.strip_suffix(" exact")) {
            Ok(Self::TopExact(number(k)?))
        } else if let Some(k) = t.strip_prefix("count >=").or_else(|| t.strip_prefix("count ≥")) {
            Ok(Self::CountAtLeast(number(k)?))
        } else {
            Err(Error::InvalidSpec(format!("unknown expectation {s:?}")))
        }
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LargestExact => f.write_str("largest exact"),
            Self::TopExact(k) => write!(f, "top-{k} exact"),
            Self::AllExact => f.write_str("all exact"),
            Self::CountAtLeast(k) => write!(f, "count >= {k}"),
        }
    }
}

impl TryFrom<String> for Expectation {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Expectation> for String {
    fn from(e: Expectation) -> Self {
        e.to_string()
    }
}

/// Which algorithm a spec exercises.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Runner {
    /// Recursive peeling on a sampled SBM graph.
    Peel,
    /// Clustering through a faulty oracle with bias `delta`, targeting size `s`.
    Noisy { delta: f64, s: usize },
}

/// Outcomes quoted from the published tables, shown next to measured results.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublishedRow {
    #[serde(default)]
    pub ours: Option<String>,
    #[serde(default)]
    pub acx: Option<String>,
}

fn default_repeats() -> usize {
    10
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_profile() -> Profile {
    Profile::Empirical
}

fn default_runner() -> Runner {
    Runner::Peel
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    #[serde(deserialize_with = "de_sizes")]
    pub sizes: Vec<usize>,
    /// For oracle runs these are ignored; the oracle fixes `p = (1 + delta) / 2`.
    #[serde(default)]
    pub p: f64,
    #[serde(default)]
    pub q: f64,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_profile")]
    pub profile: Profile,
    #[serde(default = "default_runner")]
    pub runner: Runner,
    pub expect: Expectation,
    #[serde(default)]
    pub k_prime_override: Option<usize>,
    #[serde(default)]
    pub published: PublishedRow,
}

impl ExperimentSpec {
    pub fn n(&self) -> usize {
        self.sizes.iter().fold(0usize, |a, &b| a.saturating_add(b))
    }

    /// Sorted sizes, and the model probabilities the trials actually use.
    pub fn model(&self) -> (Vec<usize>, f64, f64) {
        let mut sizes = self.sizes.clone();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let (p, q) = match self.runner {
            Runner::Peel => (self.p, self.q),
            Runner::Noisy { delta, .. } => ((1.0 + delta) / 2.0, (1.0 - delta) / 2.0),
        };
        (sizes, p, q)
    }

    pub fn sbm(&self, trial: usize) -> Result<SbmSpec> {
        let (sizes, p, q) = self.model();
        SbmSpec::new(sizes, p, q, self.seed.wrapping_add(trial as u64))
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::InvalidSpec("experiment name is empty".into()));
        }
        if self.repeats == 0 {
            return Err(Error::InvalidSpec(format!("{}: repeats must be at least 1", self.name)));
        }
        if self.n() > crate::io::DEFAULT_MAX_VERTICES {
            return Err(Error::InvalidSpec(format!("{}: n = {} is too large", self.name, self.n())));
        }
        let (sizes, p, q) = self.model();
        SbmSpec::new(sizes, p, q, 0)?;
        if let Runner::Noisy { delta, s } = self.runner {
            if !(delta > 0.0 && delta <= 1.0) || s == 0 || s > self.n() {
                return Err(Error::InvalidSpec(format!(
                    "{}: need delta in (0, 1] and s in 1..=n",
                    self.name
                )));
            }
        } else if !(self.p > self.q) {
            return Err(Error::InvalidSpec(format!("{}: need p > q", self.name)));
        }
        let k = self.model().0.len();
        match self.expect {
            Expectation::TopExact(t) | Expectation::CountAtLeast(t) if t > k => Err(
                Error::InvalidSpec(format!("{}: expectation asks for {t} of {k} clusters", self.name)),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub experiments: Vec<ExperimentSpec>,
}

/// Parses and validates a spec file.
pub fn parse_experiment_specs(text: &str) -> Result<Vec<ExperimentSpec>> {
    let file: SpecFile = serde_json::from_str(text)?;
    for spec in &file.experiments {
        spec.validate()?;
    }
    Ok(file.experiments)
}
