//! Property suites for the supporting lemmas and appendix propositions.
//!
//! Each suite draws a seeded corpus. Case `i` of suite `s` under seed `k`
//! reads only the stream labelled `suite/s/case{i}`, so each failure can be
//! reproduced on its own from the echoed input or from `(k, s, i)`. Cases
//! are independent. They run through [`crate::par::map`] and are merged in
//! case order, so results do not depend on thread count.
//!
//! Every checked statement is a theorem, so a `false` on an input that
//! meets the preconditions is a failure (a bug). Inputs that miss a
//! precondition are *skipped*. Resource-limit skips are counted separately.

pub mod appendix;
pub mod corpus;
mod suites;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::groebner::{Budget, GroebnerError};
use crate::invariants::InvariantError;
use crate::par::{self, Parallelism};
use crate::poly::PolyError;

pub use appendix::{check_a1, check_a2, check_a3, check_a4, minor_ideal, A2Outcome, CheckError};

pub const SUITE_SCHEMA: &str = "kohnlab-suite/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    I4,
    I5,
    I6,
    Iii4,
    Iii5,
    A1,
    A2,
    A3,
    A4,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::I4,
        Suite::I5,
        Suite::I6,
        Suite::Iii4,
        Suite::Iii5,
        Suite::A1,
        Suite::A2,
        Suite::A3,
        Suite::A4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::I4 => "i4",
            Suite::I5 => "i5",
            Suite::I6 => "i6",
            Suite::Iii4 => "iii4",
            Suite::Iii5 => "iii5",
            Suite::A1 => "a1",
            Suite::A2 => "a2",
            Suite::A3 => "a3",
            Suite::A4 => "a4",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Suite::I4 => "monomial m-primary I: p <= q <= (n+2) p, p from the Newton polyhedron",
            Suite::I5 => "m-primary I: q <= s <= C(n+q-1, q-1)",
            Suite::I6 => "f(0) = 0, I m-primary of colength m <= 12: f^sigma in I for some sigma <= m^2",
            Suite::Iii4 => "monomial domain, n generic combinations h: colength(h) <= p^n and ord0 J(h) <= colength(h)",
            Suite::Iii5 => "n generic combinations h of a non-monomial m-primary ideal: ord0 J(h) <= colength(h)",
            Suite::A1 => "(g) m-primary, rho in its radical: rho J(g) in (g)",
            Suite::A2 => "isolated critical point: f^(n+1) in the gradient ideal",
            Suite::A3 => "(F) m-primary, 1 <= nu < n: the nu x nu minor Jacobians contain a power of m",
            Suite::A4 => "(h) m-primary: J(h) not in (h)",
        }
    }

    pub fn default_cases(self) -> usize {
        match self {
            Suite::I4 | Suite::I5 => 100,
            Suite::I6 | Suite::Iii4 | Suite::Iii5 => 50,
            Suite::A1 | Suite::A2 | Suite::A4 => 30,
            Suite::A3 => 10,
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides each suite's default case count.
    pub cases: Option<usize>,
    pub budget: Budget,
    #[serde(skip)]
    pub parallelism: Parallelism,
}

impl SuiteConfig {
    pub fn with_seed(seed: u64) -> Self {
        SuiteConfig {
            seed,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipKind {
    Precondition,
    Resource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub case: usize,
    pub stream: String,
    pub input: Value,
    pub reason: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip: Option<SkipKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub schema: String,
    pub suite: String,
    pub statement: String,
    pub seed: u64,
    pub cases_run: usize,
    pub passed: usize,
    pub skipped: Vec<CaseRecord>,
    pub failures: Vec<CaseRecord>,
    /// Named counters, e.g. how many cases exercised a sub-claim.
    pub tallies: BTreeMap<String, u64>,
    /// Wall-clock milliseconds. It is the only field that is not a
    /// function of the seed, so it is optional and can be stripped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn resource_skips(&self) -> usize {
        self.skipped.iter().filter(|s| s.skip == Some(SkipKind::Resource)).count()
    }

    pub fn tally(&self, key: &str) -> u64 {
        self.tallies.get(key).copied().unwrap_or(0)
    }
}

/// Why a case did not pass.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Verdict {
    Skip(SkipKind, String),
    Fail(String),
}

impl From<CheckError> for Verdict {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Precondition(r) => Verdict::Skip(SkipKind::Precondition, r),
            CheckError::Resource(r) => Verdict::Skip(SkipKind::Resource, r),
            CheckError::Internal(r) => Verdict::Fail(r),
        }
    }
}

impl From<GroebnerError> for Verdict {
    fn from(e: GroebnerError) -> Self {
        CheckError::from(e).into()
    }
}

impl From<PolyError> for Verdict {
    fn from(e: PolyError) -> Self {
        Verdict::Fail(e.to_string())
    }
}

impl From<InvariantError> for Verdict {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::Groebner(g) => g.into(),
            InvariantError::NotFinite => Verdict::Skip(SkipKind::Precondition, e.to_string()),
            other => Verdict::Fail(other.to_string()),
        }
    }
}

pub(crate) type CaseResult = Result<Vec<&'static str>, Verdict>;

/// Per-case state: the seeded stream and the input echo.
pub(crate) struct Case {
    pub index: usize,
    pub rng: rand_chacha::ChaCha8Rng,
    pub budget: Budget,
    pub echo: serde_json::Map<String, Value>,
}

impl Case {
    pub fn echo(&mut self, key: &str, value: impl Serialize) {
        self.echo
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn echo_polys(&mut self, key: &str, polys: &[crate::Polynomial]) {
        let strings: Vec<String> = polys.iter().map(|p| p.to_string()).collect();
        self.echo(key, strings);
    }

    pub fn sampler(&mut self) -> corpus::Sampler<'_> {
        corpus::Sampler { rng: &mut self.rng }
    }
}

pub(crate) fn ensure(cond: bool, reason: impl FnOnce() -> String) -> Result<(), Verdict> {
    if cond {
        Ok(())
    } else {
        Err(Verdict::Fail(reason()))
    }
}

fn run_case(suite: Suite, config: &SuiteConfig, index: usize) -> (CaseRecord, Result<Vec<&'static str>, Verdict>) {
    let stream = format!("suite/{}/case{index}", suite.name());
    let mut case = Case {
        index,
        rng: crate::engine::rng::stream(config.seed, &stream),
        budget: config.budget,
        echo: serde_json::Map::new(),
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| suites::run(suite, &mut case))).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(Verdict::Fail(format!("panicked: {msg}")))
    });
    let record = CaseRecord {
        case: index,
        stream,
        input: Value::Object(std::mem::take(&mut case.echo)),
        reason: String::new(),
        skip: None,
    };
    (record, outcome)
}

/// Runs one suite. `wall_time_ms` is filled in.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> SuiteResult {
    let start = Instant::now();
    let count = config.cases.unwrap_or_else(|| suite.default_cases());
    let outcomes = par::map(config.parallelism, (0..count).collect(), |i| run_case(suite, config, i));
    let mut result = SuiteResult {
        schema: SUITE_SCHEMA.into(),
        suite: suite.name().into(),
        statement: suite.statement().into(),
        seed: config.seed,
        cases_run: count,
        passed: 0,
        skipped: Vec::new(),
        failures: Vec::new(),
        tallies: BTreeMap::new(),
        wall_time_ms: None,
    };
    for (mut record, outcome) in outcomes {
        match outcome {
            Ok(tags) => {
                result.passed += 1;
                for t in tags {
                    *result.tallies.entry(t.to_string()).or_default() += 1;
                }
            }
            Err(Verdict::Skip(kind, reason)) => {
                record.reason = reason;
                record.skip = Some(kind);
                result.skipped.push(record);
            }
            Err(Verdict::Fail(reason)) => {
                record.reason = reason;
                result.failures.push(record);
            }
        }
    }
    result.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    result
}

/// Runs every suite in a fixed order.
pub fn run_lemma_suites(config: &SuiteConfig) -> Vec<SuiteResult> {
    Suite::ALL.iter().map(|&s| run_suite(s, config)).collect()
}

#[cfg(test)]
mod tests;
