//! Finite and effective infinite Ramsey extraction.
//!
//! [`find_homogeneous_exact`] is a complete brute-force search on `[0, N)`.
//! [`infinite_ramsey_extract`] is the lazy end-homogeneous construction:
//! for arity `r > 1` it picks `a_0 < a_1 < …` and thins the rest of the
//! stream so that `c(t ∪ {x})` depends only on `t` for every `(r-1)`-subset
//! `t` of the chosen elements and every later `x`. That defines an
//! `(r-1)`-ary coloring of the `a_i`, handled the same way down to the
//! arity-1 pigeonhole pass.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use crate::error::{Error, Result};
use crate::stream::{pseudo_intersection, Budget, NatStream};
use crate::subsets::{insert_sorted, subsets, subsets_with_min_position};

type Rule = Rc<dyn Fn(&[u64]) -> Result<u64>>;

/// A total coloring of sorted `arity`-tuples with colors `0..palette`.
#[derive(Clone)]
pub struct Coloring {
    arity: usize,
    palette: u64,
    rule: Rule,
}

impl Coloring {
    pub fn new(arity: usize, palette: u64, rule: impl Fn(&[u64]) -> Result<u64> + 'static) -> Self {
        Coloring {
            arity,
            palette,
            rule: Rc::new(rule),
        }
    }

    pub fn constant(arity: usize, color: u64) -> Self {
        Coloring::new(arity, color + 1, move |_| Ok(color))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn palette(&self) -> u64 {
        self.palette
    }

    /// Color of the sorted tuple `s`.
    pub fn color(&self, s: &[u64]) -> Result<u64> {
        if s.len() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                found: s.len(),
            });
        }
        let c = (self.rule)(s)?;
        if c >= self.palette {
            return Err(Error::Eval(alloc::format!(
                "color {c} outside palette of size {}",
                self.palette
            )));
        }
        Ok(c)
    }

    /// The `(arity - 1)`-ary coloring `s ↦ c({a} ∪ s)` on tuples above `a`.
    pub fn fix_min(&self, a: u64) -> Coloring {
        let parent = self.clone();
        Coloring::new(self.arity - 1, self.palette, move |s| {
            parent.color(&insert_sorted(s, a))
        })
    }
}

impl fmt::Debug for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Coloring")
            .field("arity", &self.arity)
            .field("palette", &self.palette)
            .finish_non_exhaustive()
    }
}

/// A set that is homogeneous once its first `discarded` elements are
/// dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityWitness {
    pub subset: Vec<u64>,
    pub color: u64,
    pub discarded: usize,
}

impl HomogeneityWitness {
    /// Exhaustive check of every `r`-subset past the discarded prefix.
    /// Returns the first offending tuple.
    pub fn counterexample(&self, c: &Coloring) -> Result<Option<Vec<u64>>> {
        let tail = &self.subset[self.discarded.min(self.subset.len())..];
        for s in subsets(tail, c.arity()) {
            if c.color(&s)? != self.color {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }

    pub fn holds(&self, c: &Coloring) -> Result<bool> {
        Ok(self.counterexample(c)?.is_none())
    }
}

/// Lexicographically least monochromatic `m`-subset of `[0, n)`, if any.
pub fn find_homogeneous_exact(
    c: &Coloring,
    n: u64,
    m: usize,
) -> Result<Option<HomogeneityWitness>> {
    let r = c.arity();
    if (n as usize) < r || m < r {
        return Err(Error::InvalidArgument(alloc::format!(
            "need N, m >= r = {r}"
        )));
    }
    let mut chosen: Vec<u64> = Vec::with_capacity(m);
    let mut color = None;
    if search(c, n, m, &mut chosen, &mut color)? {
        Ok(Some(HomogeneityWitness {
            subset: chosen,
            color: color.unwrap_or(0),
            discarded: 0,
        }))
    } else {
        Ok(None)
    }
}

fn search(
    c: &Coloring,
    n: u64,
    m: usize,
    chosen: &mut Vec<u64>,
    color: &mut Option<u64>,
) -> Result<bool> {
    if chosen.len() == m {
        return Ok(true);
    }
    let start = chosen.last().map_or(0, |&x| x + 1);
    let remaining = (m - chosen.len()) as u64;
    let r = c.arity();
    for x in start..n {
        if n - x < remaining {
            break;
        }
        // New r-subsets all contain x as their maximum.
        let saved = *color;
        let mut ok = true;
        for s in subsets(chosen, r - 1) {
            let mut t = s;
            t.push(x);
            let col = c.color(&t)?;
            match *color {
                None => *color = Some(col),
                Some(k) if k != col => {
                    ok = false;
                    break;
                }
                Some(_) => {}
            }
        }
        if ok {
            chosen.push(x);
            if search(c, n, m, chosen, color)? {
                return Ok(true);
            }
            chosen.pop();
        }
        *color = saved;
    }
    Ok(false)
}

/// A homogeneous substream and its color.
#[derive(Debug, Clone)]
pub struct Homogeneous {
    pub stream: NatStream,
    pub color: u64,
}

type PointColor = Rc<dyn Fn(u64) -> Result<u64>>;

/// Arity-1 pigeonhole under fuel: scans `source` from position `start` and
/// keeps the first color class to collect `window` members.
fn pigeonhole(
    source: &NatStream,
    start: usize,
    color_of: PointColor,
    budget: &Budget,
) -> Result<Homogeneous> {
    let window = budget.window();
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    let mut recent: VecDeque<u64> = VecDeque::with_capacity(window);
    let mut i = start;
    let chosen = loop {
        let step = source.get(i).and_then(|x| {
            budget.charge()?;
            color_of(x)
        });
        let col = match step {
            Ok(col) => col,
            Err(Error::FuelExhausted(mut ex)) => {
                let live: BTreeSet<u64> = recent.iter().copied().collect();
                ex.live_colors = live.into_iter().collect();
                if ex.prefix.is_empty() {
                    ex.prefix = source.prefix();
                }
                return Err(Error::FuelExhausted(ex));
            }
            Err(e) => return Err(e),
        };
        i += 1;
        if recent.len() == window {
            recent.pop_front();
        }
        recent.push_back(col);
        let count = counts.entry(col).or_insert(0);
        *count += 1;
        if *count >= window {
            break col;
        }
    };
    let fuel = budget.fuel;
    let keep_budget = budget.clone();
    let source = source.clone();
    let mut cursor = start;
    let stream = NatStream::from_generator(
        move |_: &[u64]| loop {
            let x = source.get(cursor)?;
            cursor += 1;
            keep_budget.charge()?;
            if color_of(x)? == chosen {
                return Ok(x);
            }
        },
        fuel.max_materialize,
    );
    Ok(Homogeneous {
        stream,
        color: chosen,
    })
}

/// Lazily extracts a substream of `base` on which `c` is constant.
///
/// Every `r`-subset of any materialized prefix of the result has the
/// returned color.
pub fn infinite_ramsey_extract(
    c: &Coloring,
    base: &NatStream,
    budget: &Budget,
) -> Result<Homogeneous> {
    extract_from(c, base, 0, budget)
}

/// [`infinite_ramsey_extract`] on the elements of `base` at positions
/// `>= start`.
fn extract_from(
    c: &Coloring,
    base: &NatStream,
    start: usize,
    budget: &Budget,
) -> Result<Homogeneous> {
    match c.arity() {
        0 => Err(Error::InvalidArgument(
            "coloring arity must be at least 1".into(),
        )),
        1 => {
            let c = c.clone();
            pigeonhole(base, start, Rc::new(move |x| c.color(&[x])), budget)
        }
        r => {
            let end = end_homogeneous(c, base, start, budget);
            let colors = end.colors;
            let induced = Coloring::new(r - 1, c.palette(), move |t| {
                colors
                    .borrow()
                    .get(t)
                    .copied()
                    .ok_or_else(|| Error::Eval(alloc::format!("no recorded color for {t:?}")))
            });
            extract_from(&induced, &end.stream, 0, budget)
        }
    }
}

struct EndHomogeneous {
    stream: NatStream,
    colors: Rc<RefCell<BTreeMap<Vec<u64>, u64>>>,
}

/// `a_0 < a_1 < …` such that `c(t ∪ {x})` depends only on `t` whenever `t`
/// is an `(r-1)`-subset of the `a_i` and `x` a later `a_j`; `colors[t]`
/// records that color.
fn end_homogeneous(
    c: &Coloring,
    base: &NatStream,
    start: usize,
    budget: &Budget,
) -> EndHomogeneous {
    let colors: Rc<RefCell<BTreeMap<Vec<u64>, u64>>> = Rc::new(RefCell::new(BTreeMap::new()));
    let record = colors.clone();
    let c = c.clone();
    let budget = budget.clone();
    let fuel = budget.fuel;
    let mut current = base.clone();
    let mut offset = start;
    let mut chosen: Vec<u64> = Vec::new();
    let stream = NatStream::from_generator(
        move |_: &[u64]| {
            let a = current.get(offset)?;
            offset += 1;
            for mut t in subsets(&chosen, c.arity() - 2) {
                t.push(a);
                let tc = c.clone();
                let key = t.clone();
                let h = pigeonhole(
                    &current,
                    offset,
                    Rc::new(move |x| {
                        let mut s = key.clone();
                        s.push(x);
                        tc.color(&s)
                    }),
                    &budget,
                )?;
                record.borrow_mut().insert(t, h.color);
                current = h.stream;
                offset = 0;
            }
            chosen.push(a);
            Ok(a)
        },
        fuel.max_materialize,
    );
    EndHomogeneous { stream, colors }
}

/// Color and discard bound of one member of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlmostHomogeneous {
    pub color: u64,
    /// Elements before this position of the joint stream may violate.
    pub discard: usize,
}

/// A stream almost homogeneous for every coloring of a family.
#[derive(Debug, Clone)]
pub struct FamilyExtraction {
    pub stream: NatStream,
    pub members: Vec<AlmostHomogeneous>,
}

impl FamilyExtraction {
    /// Witness for member `i` over the first `len` elements of the stream.
    pub fn witness(&self, i: usize, len: usize) -> Result<HomogeneityWitness> {
        let m = self
            .members
            .get(i)
            .ok_or_else(|| Error::InvalidArgument("no such member".into()))?;
        Ok(HomogeneityWitness {
            subset: self.stream.materialize(len)?,
            color: m.color,
            discarded: m.discard,
        })
    }
}

/// Chains the extractor through `cs` (`A_{i+1}` homogeneous for `cs[i]`
/// inside `A_i`) and diagonalizes: the result differs from `A_{i+1}` only in
/// its first `i` elements.
pub fn almost_homogeneous_family(
    cs: &[Coloring],
    base: &NatStream,
    budget: &Budget,
) -> Result<FamilyExtraction> {
    let Some(first) = cs.first() else {
        return Err(Error::InvalidArgument("empty family".into()));
    };
    if let Some(bad) = cs.iter().find(|c| c.arity() != first.arity()) {
        return Err(Error::DimensionMismatch {
            expected: first.arity(),
            found: bad.arity(),
        });
    }
    let mut links = Vec::with_capacity(cs.len());
    let mut members = Vec::with_capacity(cs.len());
    let mut current = base.clone();
    for (i, c) in cs.iter().enumerate() {
        let h = infinite_ramsey_extract(c, &current, budget)?;
        members.push(AlmostHomogeneous {
            color: h.color,
            discard: i,
        });
        current = h.stream.clone();
        links.push(h.stream);
    }
    Ok(FamilyExtraction {
        stream: pseudo_intersection(links, &budget.fuel),
        members,
    })
}

/// First tuple (with its minimum past `discard`) whose color differs from
/// `color`, scanning every `r`-subset of `prefix`.
pub fn homogeneity_counterexample(
    c: &Coloring,
    prefix: &[u64],
    color: u64,
    discard: usize,
) -> Result<Option<Vec<u64>>> {
    for (pos, s) in subsets_with_min_position(prefix, c.arity()) {
        if pos >= discard && c.color(&s)? != color {
            return Ok(Some(s));
        }
    }
    Ok(None)
}
