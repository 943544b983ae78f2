use alloc::vec::Vec;

use super::certificate::{claims, minimal_thresholds, ConvergenceCertificate, Engine, FuelReport};
use super::function::TupleFunction;
use crate::error::{Error, Result};
use crate::ramsey::infinite_ramsey_extract;
use crate::space::{LocatedLimit, Point};
use crate::stream::{pseudo_intersection, Budget, NatStream};

/// How far an extraction goes: cover levels `0..=levels`, and how many
/// stream elements the certificate covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Plan {
    pub levels: usize,
    pub prefix: usize,
}

impl Plan {
    pub fn new(levels: usize, prefix: usize) -> Self {
        Plan { levels, prefix }
    }

    pub(crate) fn check(&self, arity: usize) -> Result<()> {
        if self.levels == 0 {
            return Err(Error::InvalidArgument(
                "at least one level is required".into(),
            ));
        }
        if self.prefix < self.levels + arity + 1 {
            return Err(Error::InvalidArgument(alloc::format!(
                "prefix length {} too short for {} levels at arity {arity}",
                self.prefix,
                self.levels
            )));
        }
        Ok(())
    }
}

/// A convergent subsequence: the lazy stream and its certificate.
#[derive(Debug, Clone)]
pub struct Convergent {
    pub stream: NatStream,
    pub certificate: ConvergenceCertificate,
}

/// Cover extractor: at each level `n` the cover by `2^{-n}`-balls colors
/// `[ℕ]^r` through `f`; a homogeneous `A_n ⊆ A_{n-1}` pins the ball, its
/// center becomes `c_n`, and the diagonal through `A_0 ⊇ A_1 ⊇ …` is the
/// convergent subsequence.
pub fn extract_convergent(
    f: &TupleFunction,
    base: &NatStream,
    plan: Plan,
    budget: &Budget,
) -> Result<Convergent> {
    plan.check(f.arity())?;
    let (chain, centers) = nested_balls(f, base, plan.levels, budget)?;
    let stream = pseudo_intersection(chain, &budget.fuel);
    let prefix = stream
        .materialize(plan.prefix)
        .map_err(|e| e.at_level(Some(plan.levels), &centers))?;
    let thresholds = minimal_thresholds(f, &prefix, &centers)?;
    let certificate = ConvergenceCertificate {
        arity: f.arity(),
        space: f.target().clone(),
        prefix,
        limit: LocatedLimit::new(centers),
        levels: claims(&thresholds),
        engine: Engine::Cover,
        fuel_report: FuelReport::from_budget(budget, stream.fuel_spent()),
    };
    Ok(Convergent {
        stream,
        certificate,
    })
}

/// Like [`extract_convergent`] but over a possibly finite base: the
/// certificate covers as many elements as exist, up to `plan.prefix`, and
/// running short of the minimum is a fuel error.
pub(crate) fn extract_available(
    f: &TupleFunction,
    base: &NatStream,
    plan: Plan,
    engine: Engine,
    budget: &Budget,
) -> Result<Convergent> {
    let (chain, centers) = nested_balls(f, base, plan.levels, budget)?;
    let stream = pseudo_intersection(chain, &budget.fuel);
    let prefix = stream.materialize_available(plan.prefix)?;
    if prefix.len() < plan.levels + f.arity() + 1 {
        return Err(Error::exhausted(crate::error::Resource::FiniteSource)
            .at_level(Some(plan.levels), &centers));
    }
    let report = FuelReport::from_budget(budget, stream.fuel_spent());
    let certificate = recertify(f, prefix, centers, engine, report)?;
    Ok(Convergent {
        stream,
        certificate,
    })
}

/// The nested homogeneous streams `A_0 ⊇ … ⊇ A_L` and the ball centers
/// they pin.
pub(crate) fn nested_balls(
    f: &TupleFunction,
    base: &NatStream,
    levels: usize,
    budget: &Budget,
) -> Result<(Vec<NatStream>, Vec<Point>)> {
    let mut chain = Vec::with_capacity(levels + 1);
    let mut centers = Vec::with_capacity(levels + 1);
    let mut current = base.clone();
    for n in 0..=levels {
        let cover = f.target().cover(n)?;
        let coloring = f.induced_coloring(&cover);
        let h = infinite_ramsey_extract(&coloring, &current, budget)
            .map_err(|e| e.at_level(n.checked_sub(1), &centers))?;
        let center = cover
            .center(h.color)
            .ok_or(Error::NotCovered { level: n })?;
        centers.push(center);
        current = h.stream.clone();
        chain.push(h.stream);
    }
    Ok((chain, centers))
}

/// Rebuilds a certificate for `f` over another prefix of the same limit,
/// recomputing minimal thresholds.
pub(crate) fn recertify(
    f: &TupleFunction,
    prefix: Vec<u64>,
    centers: Vec<Point>,
    engine: Engine,
    report: FuelReport,
) -> Result<ConvergenceCertificate> {
    let thresholds = minimal_thresholds(f, &prefix, &centers)?;
    Ok(ConvergenceCertificate {
        arity: f.arity(),
        space: f.target().clone(),
        prefix,
        limit: LocatedLimit::new(centers),
        levels: claims(&thresholds),
        engine,
        fuel_report: report,
    })
}
