use alloc::vec;
use alloc::vec::Vec;

use super::certificate::{Engine, FuelReport};
use super::convergent::{extract_available, extract_convergent, recertify, Convergent, Plan};
use super::function::TupleFunction;
use crate::dyadic::Dyadic;
use crate::error::{Error, Resource, Result};
use crate::space::{LocatedLimit, Point};
use crate::stream::{Budget, NatStream};
use crate::subsets::subsets;

#[derive(Debug, Clone)]
pub struct InductiveExtraction {
    /// The certified subsequence; its stream is the finite certified prefix.
    pub convergent: Convergent,
    /// Anchors `a_0 < a_1 < …` in the order they were fixed.
    pub anchors: Vec<u64>,
    /// Limit of `s ↦ f({a_n} ∪ s)`, located two levels deeper than the plan.
    pub anchor_limits: Vec<LocatedLimit>,
}

/// Induction on arity. Fix the least element `a_n` of the current stream,
/// make `f({a_n} ∪ ·)` convergent on the rest with the lazy `(r-1)`-ary
/// cover extractor, and repeat inside the resulting stream. The anchor limits form a sequence in `K`; a convergent
/// subsequence of it, thinned by a greedy diagonal so that each later element
/// clears the bounds of the earlier ones, is the output.
pub fn inductive_extract(
    f: &TupleFunction,
    base: &NatStream,
    plan: Plan,
    budget: &Budget,
) -> Result<InductiveExtraction> {
    plan.check(f.arity())?;
    if f.arity() == 1 {
        let mut convergent = extract_convergent(f, base, plan, budget)?;
        convergent.certificate.engine = Engine::Inductive;
        return Ok(InductiveExtraction {
            convergent,
            anchors: vec![],
            anchor_limits: vec![],
        });
    }
    let levels = plan.levels;
    let deep = levels + 2;
    let sub_plan = Plan::new(deep, deep + f.arity() + 1);
    let count = 2 * plan.prefix + budget.window();

    let mut anchors = Vec::with_capacity(count);
    let mut anchor_limits = Vec::with_capacity(count);
    let mut current = base.clone();
    for _ in 0..count {
        let a = current.get(0)?;
        let rest = NatStream::above(&current, a, &budget.fuel);
        let sub = extract_convergent(&f.fix_min(a), &rest, sub_plan, budget)?;
        anchors.push(a);
        anchor_limits.push(sub.certificate.limit);
        current = sub.stream;
    }

    let located: Vec<Point> = anchor_limits
        .iter()
        .map(|l| l.centers[deep].clone())
        .collect();
    let table = located.clone();
    let g = TupleFunction::new(1, f.target().clone(), move |s| {
        table
            .get(s[0] as usize)
            .cloned()
            .ok_or_else(|| Error::Eval(alloc::format!("no anchor {}", s[0])))
    });
    let indices = NatStream::from_list((0..count as u64).collect())?;
    let m = extract_available(
        &g,
        &indices,
        Plan::new(levels + 1, count),
        Engine::Inductive,
        budget,
    )?;
    let entry: Vec<usize> = m.certificate.levels.iter().map(|l| l.threshold).collect();
    let centers: Vec<Point> = m.certificate.limit.centers[1..].to_vec();
    let b: Vec<u64> = m
        .certificate
        .prefix
        .iter()
        .map(|&i| anchors[i as usize])
        .collect();

    let mut picks = vec![0usize];
    while picks.len() < plan.prefix {
        let j = picks.len() - 1;
        let k = picks[j];
        let bounds = greedy_bounds(f, &b, k, &centers)?;
        let bound = (0..=levels.min(j + 1))
            .filter(|&i| k >= entry[i + 1])
            .map(|i| bounds[i])
            .max()
            .unwrap_or(0);
        match (k + 1..b.len()).find(|&q| b[q] >= bound) {
            Some(q) => picks.push(q),
            None => break,
        }
    }
    let c: Vec<u64> = picks.iter().map(|&k| b[k]).collect();
    if c.len() < plan.prefix {
        let mut e = Error::exhausted(Resource::FiniteSource).at_level(Some(levels), &centers);
        if let Error::FuelExhausted(x) = &mut e {
            x.prefix = c;
        }
        return Err(e);
    }
    let stream = NatStream::from_list(c.clone())?;
    let report = FuelReport::from_budget(budget, current.fuel_spent());
    let certificate = recertify(f, c, centers, Engine::Inductive, report)?;
    Ok(InductiveExtraction {
        convergent: Convergent {
            stream,
            certificate,
        },
        anchors,
        anchor_limits,
    })
}

/// For each level `i`, the least value `x` such that every `s ⊆ b` with
/// minimum `b[k]` and all other elements `>= x` lies within `2^{-i}` of
/// `centers[i]` (0 if every such `s` does).
fn greedy_bounds(f: &TupleFunction, b: &[u64], k: usize, centers: &[Point]) -> Result<Vec<u64>> {
    let space = f.target();
    let radii: Vec<Dyadic> = (0..centers.len())
        .map(|i| Dyadic::pow2_neg(i as u64))
        .collect();
    let mut bounds = vec![0u64; centers.len()];
    for rest in subsets(&b[k + 1..], f.arity() - 1) {
        let mut s = Vec::with_capacity(f.arity());
        s.push(b[k]);
        s.extend_from_slice(&rest);
        let value = f.eval(&s)?;
        for (i, c) in centers.iter().enumerate() {
            if rest[0] >= bounds[i] && space.distance(&value, c)? > radii[i] {
                bounds[i] = rest[0] + 1;
            }
        }
    }
    Ok(bounds)
}
