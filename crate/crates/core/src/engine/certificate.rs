//! Convergence certificates and their exhaustive verifier.
//!
//! A certificate claims, for each level `n`, that every `r`-subset `s` of the
//! materialized stream whose minimum sits at position `>= t_n` satisfies
//! `d(f(s), c_n) <= 2^{-n}`. The finite set the convergence definition asks
//! for is the stream prefix below `t_n`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::function::TupleFunction;
use crate::dyadic::Dyadic;
use crate::error::Result;
use crate::space::{LocatedLimit, Point, Space};
use crate::stream::Budget;
use crate::subsets::subsets_with_min_position;

/// Which construction produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Cover,
    Inductive,
    Product,
    Nice,
}

impl Engine {
    pub fn as_str(&self) -> &'static str {
        match self {
            Engine::Cover => "cover",
            Engine::Inductive => "inductive",
            Engine::Product => "product",
            Engine::Nice => "nice",
        }
    }
}

impl core::str::FromStr for Engine {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cover" => Ok(Engine::Cover),
            "inductive" => Ok(Engine::Inductive),
            "product" => Ok(Engine::Product),
            "nice" => Ok(Engine::Nice),
            _ => Err(crate::error::Error::InvalidArgument(alloc::format!(
                "unknown engine `{s}`"
            ))),
        }
    }
}

/// Level `n` is claimed from stream position `threshold` on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelClaim {
    pub n: usize,
    pub threshold: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FuelReport {
    pub oracle_calls: u64,
    pub stream_fuel_spent: u64,
    pub max_materialize: usize,
    pub max_oracle_calls: u64,
    pub window: usize,
}

impl FuelReport {
    pub fn from_budget(budget: &Budget, stream_fuel_spent: u64) -> Self {
        FuelReport {
            oracle_calls: budget.oracle_calls(),
            stream_fuel_spent,
            max_materialize: budget.fuel.max_materialize,
            max_oracle_calls: budget.fuel.max_oracle_calls,
            window: budget.fuel.window,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceCertificate {
    pub arity: usize,
    pub space: Space,
    /// Materialized prefix of the convergent subsequence `B`.
    pub prefix: Vec<u64>,
    pub limit: LocatedLimit,
    pub levels: Vec<LevelClaim>,
    pub engine: Engine,
    pub fuel_report: FuelReport,
}

impl ConvergenceCertificate {
    pub fn max_level(&self) -> Option<usize> {
        self.levels.last().map(|l| l.n)
    }

    pub fn threshold(&self, n: usize) -> Option<usize> {
        self.levels.get(n).map(|l| l.threshold)
    }

    /// Certificate for `g` derived from one for `lift(g)`: same limit and
    /// thresholds over the prefix minus its last element, since
    /// `g(u) = lift(g)(u ∪ {b})` for any later `b`.
    pub fn lowered(&self) -> Option<ConvergenceCertificate> {
        if self.arity < 2 || self.prefix.is_empty() {
            return None;
        }
        let mut c = self.clone();
        c.arity -= 1;
        c.prefix.pop();
        Some(c)
    }
}

/// Why a certificate was rejected.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    ArityMismatch {
        certificate: usize,
        function: usize,
    },
    SpaceMismatch,
    StreamNotIncreasing {
        position: usize,
    },
    MalformedLevels,
    CenterOutsideSpace {
        level: usize,
    },
    ThresholdsDecreasing {
        level: usize,
    },
    VacuousThreshold {
        level: usize,
    },
    ModulusViolated {
        level: usize,
    },
    Counterexample {
        tuple: Vec<u64>,
        level: usize,
        distance: Dyadic,
    },
    EvaluationFailed {
        tuple: Vec<u64>,
        message: String,
    },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::ArityMismatch {
                certificate,
                function,
            } => {
                write!(
                    f,
                    "certificate arity {certificate} but function arity {function}"
                )
            }
            Failure::SpaceMismatch => f.write_str("certificate space differs from function target"),
            Failure::StreamNotIncreasing { position } => {
                write!(
                    f,
                    "stream prefix not strictly increasing at position {position}"
                )
            }
            Failure::MalformedLevels => f.write_str("levels must be 0..=L with one center each"),
            Failure::CenterOutsideSpace { level } => {
                write!(f, "center at level {level} is not a point of the space")
            }
            Failure::ThresholdsDecreasing { level } => {
                write!(f, "threshold decreases at level {level}")
            }
            Failure::VacuousThreshold { level } => {
                write!(f, "threshold at level {level} leaves no tuple to check")
            }
            Failure::ModulusViolated { level } => write!(
                f,
                "Cauchy modulus violated between levels {level} and {}",
                level + 1
            ),
            Failure::Counterexample {
                tuple,
                level,
                distance,
            } => {
                write!(
                    f,
                    "tuple {tuple:?} is at distance {distance} from the level-{level} center"
                )
            }
            Failure::EvaluationFailed { tuple, message } => {
                write!(f, "evaluation at {tuple:?} failed: {message}")
            }
        }
    }
}

/// Outcome of [`verify_certificate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub failure: Option<Failure>,
    /// Number of tuples evaluated.
    pub tuples_checked: usize,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.failure.is_none()
    }
}

/// Re-checks every level claim on every `r`-subset of the materialized
/// prefix, plus the structural invariants, with exact arithmetic.
pub fn verify_certificate(f: &TupleFunction, cert: &ConvergenceCertificate) -> Verdict {
    let reject = |failure| Verdict {
        failure: Some(failure),
        tuples_checked: 0,
    };
    if cert.arity != f.arity() {
        return reject(Failure::ArityMismatch {
            certificate: cert.arity,
            function: f.arity(),
        });
    }
    if &cert.space != f.target() {
        return reject(Failure::SpaceMismatch);
    }
    if let Some(p) = cert.prefix.windows(2).position(|w| w[0] >= w[1]) {
        return reject(Failure::StreamNotIncreasing { position: p + 1 });
    }
    if cert.levels.is_empty()
        || cert.levels.len() != cert.limit.centers.len()
        || cert.levels.iter().enumerate().any(|(i, l)| l.n != i)
    {
        return reject(Failure::MalformedLevels);
    }
    if let Some(level) = cert
        .limit
        .centers
        .iter()
        .position(|c| !cert.space.contains(c))
    {
        return reject(Failure::CenterOutsideSpace { level });
    }
    if let Some(w) = cert
        .levels
        .windows(2)
        .find(|w| w[1].threshold < w[0].threshold)
    {
        return reject(Failure::ThresholdsDecreasing { level: w[1].n });
    }
    let last_start = cert.prefix.len().checked_sub(cert.arity);
    if let Some(l) = cert
        .levels
        .iter()
        .find(|l| last_start.is_none_or(|m| l.threshold > m))
    {
        return reject(Failure::VacuousThreshold { level: l.n });
    }
    let radii: Vec<Dyadic> = cert
        .levels
        .iter()
        .map(|l| Dyadic::pow2_neg(l.n as u64))
        .collect();
    let mut checked = 0;
    for (pos, s) in subsets_with_min_position(&cert.prefix, cert.arity) {
        let active = cert.levels.partition_point(|l| l.threshold <= pos);
        if active == 0 {
            continue;
        }
        checked += 1;
        let value = match f.eval(&s) {
            Ok(v) => v,
            Err(e) => {
                return Verdict {
                    failure: Some(Failure::EvaluationFailed {
                        tuple: s,
                        message: e.to_string(),
                    }),
                    tuples_checked: checked,
                }
            }
        };
        for level in 0..active {
            let d = match cert.space.distance(&value, &cert.limit.centers[level]) {
                Ok(d) => d,
                Err(e) => {
                    return Verdict {
                        failure: Some(Failure::EvaluationFailed {
                            tuple: s,
                            message: e.to_string(),
                        }),
                        tuples_checked: checked,
                    }
                }
            };
            if d > radii[level] {
                return Verdict {
                    failure: Some(Failure::Counterexample {
                        tuple: s,
                        level,
                        distance: d,
                    }),
                    tuples_checked: checked,
                };
            }
        }
    }
    let failure = match cert.limit.modulus_violation(&cert.space) {
        Ok(Some(level)) => Some(Failure::ModulusViolated { level }),
        Ok(None) => None,
        Err(_) => Some(Failure::CenterOutsideSpace { level: 0 }),
    };
    Verdict {
        failure,
        tuples_checked: checked,
    }
}

/// Least nondecreasing thresholds under which every level claim holds on
/// `prefix`. A level whose claim fails on every position gets
/// `prefix.len()`, which the verifier rejects as vacuous.
pub fn minimal_thresholds(
    f: &TupleFunction,
    prefix: &[u64],
    centers: &[Point],
) -> Result<Vec<usize>> {
    let space = f.target();
    let radii: Vec<Dyadic> = (0..centers.len())
        .map(|n| Dyadic::pow2_neg(n as u64))
        .collect();
    let mut least = alloc::vec![0usize; centers.len()];
    for (pos, s) in subsets_with_min_position(prefix, f.arity()) {
        let value = f.eval(&s)?;
        for (n, c) in centers.iter().enumerate() {
            if least[n] <= pos && space.distance(&value, c)? > radii[n] {
                least[n] = pos + 1;
            }
        }
    }
    let mut running = 0;
    for t in least.iter_mut() {
        running = running.max(*t);
        *t = running;
    }
    Ok(least)
}

pub(crate) fn claims(thresholds: &[usize]) -> Vec<LevelClaim> {
    thresholds
        .iter()
        .enumerate()
        .map(|(n, &threshold)| LevelClaim { n, threshold })
        .collect()
}
