use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cell::RefCell;

use super::certificate::{verify_certificate, ConvergenceCertificate, Engine, Failure, FuelReport};
use super::convergent::{extract_available, extract_convergent, recertify, Convergent, Plan};
use super::function::TupleFunction;
use crate::dyadic::Dyadic;
use crate::error::{Error, Resource, Result};
use crate::space::LocatedLimit;
use crate::stream::{pseudo_intersection, Budget, Chain, LazyChain, NatStream};
use crate::subsets::{colex_subsets, subsets};

/// Tail limit of `n ↦ f(s ∪ {n})` for one `(r-1)`-set `s`.
#[derive(Debug, Clone)]
pub struct Section {
    pub set: Vec<u64>,
    /// 1-ary certificate for the section over its own stream above `max s`.
    pub certificate: ConvergenceCertificate,
}

impl Section {
    pub fn limit(&self) -> &LocatedLimit {
        &self.certificate.limit
    }
}

/// An `r`-nice convergent subsequence at materialized scale.
#[derive(Debug, Clone)]
pub struct NiceSystem {
    pub arity: usize,
    pub stream: NatStream,
    /// Convergence of `f` itself on the stream.
    pub top: ConvergenceCertificate,
    /// One entry per `(r-1)`-subset of the certified prefix, in lexicographic order.
    pub sections: Vec<Section>,
    /// `g(s) = x_s`, tabulated on the certified prefix.
    pub induced_function: Option<TupleFunction>,
    pub induced: Option<Box<NiceSystem>>,
}

impl NiceSystem {
    pub fn section(&self, s: &[u64]) -> Option<&Section> {
        self.sections.iter().find(|x| x.set == s)
    }

    /// Every limit in the system: the top limit, each section limit, then
    /// the induced system's, recursively.
    pub fn limits(&self) -> Vec<&LocatedLimit> {
        let mut out = alloc::vec![&self.top.limit];
        out.extend(self.sections.iter().map(Section::limit));
        if let Some(sub) = &self.induced {
            out.extend(sub.limits());
        }
        out
    }

    /// First level where the induced system's limit strays from the top
    /// limit by more than `2·2^{-n}` plus the location error of the `x_s`.
    pub fn coherence_violation(&self) -> Result<Option<usize>> {
        let Some(sub) = &self.induced else {
            return Ok(None);
        };
        let space = &self.top.space;
        let ours = &self.top.limit.centers;
        let theirs = &sub.top.limit.centers;
        let slack = Dyadic::pow2_neg(ours.len() as u64);
        for n in 0..ours.len().min(theirs.len()) {
            let allowed = Dyadic::pow2_neg(n as u64) + Dyadic::pow2_neg(n as u64) + slack.clone();
            if space.distance(&ours[n], &theirs[n])? > allowed {
                return Ok(Some(n));
            }
        }
        sub.coherence_violation()
    }
}

/// Where [`verify_nice`] found a problem: `depth` counts induced systems
/// from the top, `section` names the `(r-1)`-set if a section failed.
#[derive(Debug, Clone, PartialEq)]
pub struct NiceFailure {
    pub depth: usize,
    pub section: Option<Vec<u64>>,
    pub failure: Failure,
}

/// Verifies the top certificate, every section certificate, and the induced
/// system, recursively.
pub fn verify_nice(f: &TupleFunction, sys: &NiceSystem) -> core::result::Result<(), NiceFailure> {
    verify_at(f, sys, 0)
}

fn verify_at(
    f: &TupleFunction,
    sys: &NiceSystem,
    depth: usize,
) -> core::result::Result<(), NiceFailure> {
    if let Some(failure) = verify_certificate(f, &sys.top).failure {
        return Err(NiceFailure {
            depth,
            section: None,
            failure,
        });
    }
    for s in &sys.sections {
        if let Some(failure) = verify_certificate(&f.section(&s.set), &s.certificate).failure {
            return Err(NiceFailure {
                depth,
                section: Some(s.set.clone()),
                failure,
            });
        }
    }
    match (&sys.induced, &sys.induced_function) {
        (Some(sub), Some(g)) => verify_at(g, sub, depth + 1),
        _ => Ok(()),
    }
}

/// Nice extractor: make `f` convergent on `S`, enumerate `[S]^{r-1}`
/// colexicographically as `s_0, s_1, …`, shrink `S` once per `s_k` so the
/// section at `s_k` converges above `max s_k`, and diagonalize. The section
/// limits define an `(r-1)`-ary function, treated the same way.
pub fn extract_nice(
    f: &TupleFunction,
    base: &NatStream,
    plan: Plan,
    budget: &Budget,
) -> Result<NiceSystem> {
    plan.check(f.arity())?;
    nice(f, base, plan, budget, false)
}

fn nice(
    f: &TupleFunction,
    base: &NatStream,
    plan: Plan,
    budget: &Budget,
    finite: bool,
) -> Result<NiceSystem> {
    let conv = if finite {
        extract_available(f, base, plan, Engine::Nice, budget)?
    } else {
        extract_convergent(f, base, plan, budget)?
    };
    let Convergent {
        stream: s_stream,
        mut certificate,
    } = conv;
    certificate.engine = Engine::Nice;
    let r = f.arity();
    if r == 1 {
        return Ok(NiceSystem {
            arity: 1,
            stream: s_stream,
            top: certificate,
            sections: Vec::new(),
            induced_function: None,
            induced: None,
        });
    }

    let levels = plan.levels;
    let s_prefix = certificate.prefix.clone();
    let last = *s_prefix.last().expect("certified prefix is nonempty");
    let sets = colex_subsets(&s_prefix, r - 1);
    let index: BTreeMap<Vec<u64>, usize> = sets
        .iter()
        .cloned()
        .enumerate()
        .map(|(k, s)| (s, k))
        .collect();
    let section_plan = Plan::new(levels + 1, levels + 4);
    let found: Rc<RefCell<Vec<ConvergenceCertificate>>> = Rc::default();

    let chain = {
        let (f, budget, found, sets) = (f.clone(), budget.clone(), found.clone(), sets.clone());
        let first = s_stream.clone();
        Shared(Rc::new(RefCell::new(LazyChain::new(
            move |k, built: &[NatStream]| {
                if k == 0 {
                    return Ok(first.clone());
                }
                let Some(s) = sets.get(k - 1) else {
                    return Ok(built[k - 1].clone());
                };
                let above = NatStream::above(
                    &built[k - 1],
                    *s.last().expect("nonempty set"),
                    &budget.fuel,
                );
                let sec = extract_convergent(&f.section(s), &above, section_plan, &budget)?;
                found.borrow_mut().push(sec.certificate);
                Ok(sec.stream)
            },
        ))))
    };
    let t_stream = pseudo_intersection(chain.clone(), &budget.fuel);
    let mut t_prefix = Vec::new();
    while t_prefix.len() < plan.prefix {
        let x = t_stream.get(t_prefix.len())?;
        if x > last {
            break;
        }
        t_prefix.push(x);
    }
    if t_prefix.len() < levels + r + 1 {
        return Err(Error::exhausted(Resource::FiniteSource)
            .at_level(Some(levels), &certificate.limit.centers));
    }

    let mut sections = Vec::new();
    let mut table = BTreeMap::new();
    for s in subsets(&t_prefix, r - 1) {
        let k = index[&s];
        chain.clone().link(k + 1)?;
        let cert = found.borrow()[k].clone();
        table.insert(s.clone(), cert.limit.centers[levels + 1].clone());
        sections.push(Section {
            set: s,
            certificate: cert,
        });
    }
    let report = FuelReport::from_budget(budget, t_stream.fuel_spent());
    let top = recertify(
        f,
        t_prefix.clone(),
        certificate.limit.centers,
        Engine::Nice,
        report,
    )?;
    let g = TupleFunction::from_table(r - 1, f.target().clone(), table);
    let list = NatStream::from_list(t_prefix.clone())?;
    let induced = nice(&g, &list, Plan::new(levels, t_prefix.len()), budget, true)?;
    Ok(NiceSystem {
        arity: r,
        stream: NatStream::from_list(t_prefix)?,
        top,
        sections,
        induced_function: Some(g),
        induced: Some(Box::new(induced)),
    })
}

struct Shared<C>(Rc<RefCell<C>>);

impl<C> Clone for Shared<C> {
    fn clone(&self) -> Self {
        Shared(self.0.clone())
    }
}

impl<C: Chain> Chain for Shared<C> {
    fn link(&mut self, n: usize) -> Result<NatStream> {
        self.0.borrow_mut().link(n)
    }
}
