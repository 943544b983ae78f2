//! Finite-scale smallness for the ideals `FIN^n`: splitting trees, the
//! thinning that makes `f''[B]^n` small, increasing tuples `B^{↑n}`, and the
//! avoidance criterion for the `G` function.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::engine::{extract_convergent, Plan, TupleFunction};
use crate::error::{Error, Result};
use crate::space::{Point, Space};
use crate::stream::{Budget, NatStream};
use crate::subsets::subsets;

/// A finite set of `dim`-tuples of naturals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TupleSet {
    dim: usize,
    elements: BTreeSet<Vec<u64>>,
}

impl TupleSet {
    pub fn new(dim: usize, tuples: impl IntoIterator<Item = Vec<u64>>) -> Result<Self> {
        let mut elements = BTreeSet::new();
        for t in tuples {
            if t.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: t.len(),
                });
            }
            elements.insert(t);
        }
        Ok(TupleSet { dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, t: &[u64]) -> bool {
        self.elements.contains(t)
    }

    /// Tuples in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.elements.iter()
    }

    /// `{t : (k, t…) ∈ X}`, one dimension lower.
    pub fn section(&self, k: u64) -> TupleSet {
        let elements = self
            .elements
            .range(alloc::vec![k]..)
            .take_while(|t| t[0] == k)
            .map(|t| t[1..].to_vec())
            .collect();
        TupleSet {
            dim: self.dim - 1,
            elements,
        }
    }

    /// Distinct first coordinates, ascending.
    pub fn heads(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self.elements.iter().map(|t| t[0]).collect();
        out.dedup();
        out
    }
}

/// A tree of tuples of length `<= depth` in which each node shorter than
/// `depth` has at least `branching` children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingTree {
    pub branching: usize,
    pub depth: usize,
    /// All nodes including the empty root, in lexicographic order.
    pub nodes: BTreeSet<Vec<u64>>,
}

impl SplittingTree {
    pub fn leaves(&self) -> impl Iterator<Item = &Vec<u64>> {
        self.nodes.iter().filter(move |t| t.len() == self.depth)
    }

    pub fn children(&self, node: &[u64]) -> Vec<u64> {
        self.nodes
            .iter()
            .filter(|t| t.len() == node.len() + 1 && t.starts_with(node))
            .map(|t| t[node.len()])
            .collect()
    }

    /// Checks prefix-closure, the branching condition at every internal node,
    /// and (if given) that every leaf lies in `within`.
    pub fn check(&self, within: Option<&TupleSet>) -> bool {
        if !self.nodes.contains(&Vec::new()) {
            return false;
        }
        self.nodes.iter().all(|t| {
            let closed = t.is_empty() || self.nodes.contains(&t[..t.len() - 1]);
            let shape = match t.len().cmp(&self.depth) {
                core::cmp::Ordering::Less => self.children(t).len() >= self.branching,
                core::cmp::Ordering::Equal => within.is_none_or(|x| x.contains(t)),
                core::cmp::Ordering::Greater => false,
            };
            closed && shape
        })
    }
}

/// Decides whether `x` contains the leaves of a `b`-splitting tree of full
/// depth, returning the lexicographically least one.
pub fn has_splitting_tree(x: &TupleSet, b: usize) -> Option<SplittingTree> {
    let leaves = least_tree(x, b)?;
    let mut nodes = BTreeSet::new();
    for leaf in leaves {
        for i in 0..=leaf.len() {
            nodes.insert(leaf[..i].to_vec());
        }
    }
    nodes.insert(Vec::new());
    Some(SplittingTree {
        branching: b,
        depth: x.dim,
        nodes,
    })
}

fn least_tree(x: &TupleSet, b: usize) -> Option<Vec<Vec<u64>>> {
    if x.dim == 0 {
        return Some(alloc::vec![Vec::new()]);
    }
    let mut leaves = Vec::new();
    let mut found = 0;
    for k in x.heads() {
        if found == b {
            break;
        }
        if let Some(sub) = least_tree(&x.section(k), b) {
            found += 1;
            leaves.extend(sub.into_iter().map(|mut t| {
                t.insert(0, k);
                t
            }));
        }
    }
    (found >= b).then_some(leaves)
}

/// All strictly increasing `n`-tuples from `b`.
pub fn up_arrow(b: &[u64], n: usize) -> Result<TupleSet> {
    check_increasing(b)?;
    TupleSet::new(n, subsets(b, n))
}

/// Whether `a` misses every increasing tuple drawn from `b ∖ [0, cut)`.
pub fn check_avoidance(a: &TupleSet, b: &[u64], cut: u64) -> Result<bool> {
    check_increasing(b)?;
    let hit = a.iter().any(|t| {
        t.windows(2).all(|w| w[0] < w[1])
            && t.iter().all(|x| *x >= cut && b.binary_search(x).is_ok())
    });
    Ok(!hit)
}

fn check_increasing(b: &[u64]) -> Result<()> {
    match b.windows(2).find(|w| w[0] >= w[1]) {
        Some(w) => Err(Error::NotIncreasing {
            last: w[0],
            got: w[1],
        }),
        None => Ok(()),
    }
}

/// `(ω+1)^n`, the compactification the tuple functions here land in.
pub fn omega_power(n: usize) -> Space {
    Space::Product(alloc::vec![Space::OmegaPlusOne; n])
}

/// `G(s)` = the increasing enumeration of the `(r+1)`-set `s`.
pub fn g_function(r: usize) -> TupleFunction {
    TupleFunction::new(r + 1, omega_power(r + 1), |s| {
        Ok(Point::Tuple(s.iter().map(|&k| Point::Nat(k)).collect()))
    })
}

/// A `⌊m/(r+1)⌋`-splitting tree of depth `r+1` inside `B^{↑(r+1)}`: level-1
/// nodes are the first `h` elements, and a node ending at position `j` has
/// the next `h` elements as children.
pub fn mad_diagnostic(b: &[u64], r: usize) -> Result<SplittingTree> {
    check_increasing(b)?;
    let depth = r + 1;
    let needed = 2 * depth;
    if b.len() < needed {
        return Err(Error::InsufficientLength {
            needed,
            found: b.len(),
        });
    }
    let h = b.len() / depth;
    let mut nodes = BTreeSet::new();
    let mut frontier: Vec<(Vec<u64>, Option<usize>)> = alloc::vec![(Vec::new(), None)];
    nodes.insert(Vec::new());
    for _ in 0..depth {
        let mut next = Vec::new();
        for (node, last) in frontier {
            let from = last.map_or(0, |j| j + 1);
            for j in from..from + h {
                let mut child = node.clone();
                child.push(b[j]);
                nodes.insert(child.clone());
                next.push((child, Some(j)));
            }
        }
        frontier = next;
    }
    Ok(SplittingTree {
        branching: h,
        depth,
        nodes,
    })
}

/// Which branch of the smallness argument produced the stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmallCase {
    /// Arity 1: every value has first coordinate `k`.
    Column(u64),
    /// Arity 1: at most one value per first coordinate.
    PartialFunction,
    /// The limit has a finite coordinate, so that coordinate is constant.
    Pinned { coordinate: usize, value: u64 },
    /// Every limit coordinate is ∞.
    Spread,
}

impl fmt::Display for SmallCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmallCase::Column(k) => write!(f, "column {{{k}}}×ℕ"),
            SmallCase::PartialFunction => f.write_str("partial function"),
            SmallCase::Pinned { coordinate, value } => {
                write!(f, "coordinate {coordinate} pinned at {value}")
            }
            SmallCase::Spread => f.write_str("all limit coordinates infinite"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SmallExtraction {
    pub stream: NatStream,
    /// The materialized prefix the tree check ran on.
    pub prefix: Vec<u64>,
    pub case: SmallCase,
    /// Whether `f''[prefix]^n` contains no `b`-splitting tree.
    pub tree_free: bool,
}

/// Thins `base` so that the image of `f : [ℕ]^n → ℕ^{n+1}` becomes small.
///
/// Arity 1 chooses between a column and a partial function: a column wins
/// if some first coordinate collects `window` members within the first
/// `window²` scanned elements. Higher arity fixes anchors `k_0 < k_1 < …`,
/// thins the rest so every one-coordinate projection of `f({k_i} ∪ ·)` is
/// small, then makes `f` converge in `(ω+1)^{n+1}` along the anchors.
pub fn fin_small_extract(
    f: &TupleFunction,
    base: &NatStream,
    b: usize,
    plan: Plan,
    budget: &Budget,
) -> Result<SmallExtraction> {
    if b < 2 {
        return Err(Error::InvalidArgument(
            "splitting parameter must be at least 2".into(),
        ));
    }
    let n = f.arity();
    if *f.target() != omega_power(n + 1) {
        return Err(Error::InvalidArgument(alloc::format!(
            "expected a function into {}",
            omega_power(n + 1)
        )));
    }
    let (stream, case) = if n == 1 {
        column_or_partial(f, base, budget)?
    } else {
        anchored(f, base, b, plan, budget)?
    };
    let prefix = stream.materialize_available(plan.prefix)?;
    let image = image(f, &prefix)?;
    let tree_free = has_splitting_tree(&image, b).is_none();
    Ok(SmallExtraction {
        stream,
        prefix,
        case,
        tree_free,
    })
}

fn naturals_of(p: &Point) -> Result<Vec<u64>> {
    match p {
        Point::Tuple(cs) => cs
            .iter()
            .map(|c| match c {
                Point::Nat(k) => Ok(*k),
                other => Err(Error::Eval(alloc::format!(
                    "expected a natural, got {other}"
                ))),
            })
            .collect(),
        other => Err(Error::Eval(alloc::format!("expected a tuple, got {other}"))),
    }
}

fn image(f: &TupleFunction, prefix: &[u64]) -> Result<TupleSet> {
    let mut out = Vec::new();
    for s in subsets(prefix, f.arity()) {
        out.push(naturals_of(&f.eval(&s)?)?);
    }
    TupleSet::new(f.arity() + 1, out)
}

fn column_or_partial(
    f: &TupleFunction,
    base: &NatStream,
    budget: &Budget,
) -> Result<(NatStream, SmallCase)> {
    let window = budget.window();
    let head = {
        let f = f.clone();
        let budget = budget.clone();
        move |k: u64| -> Result<u64> {
            budget.charge()?;
            Ok(naturals_of(&f.eval(&[k])?)?[0])
        }
    };
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    let mut column = None;
    for i in 0..window * window {
        let c = head(base.get(i)?)?;
        let seen = counts.entry(c).or_insert(0);
        *seen += 1;
        if *seen >= window {
            column = Some(c);
            break;
        }
    }
    Ok(match column {
        Some(c) => (
            NatStream::filter(base, move |k| Ok(head(k)? == c), &budget.fuel),
            SmallCase::Column(c),
        ),
        None => {
            let mut used = BTreeSet::new();
            let keep = move |k| Ok(used.insert(head(k)?));
            (
                NatStream::filter(base, keep, &budget.fuel),
                SmallCase::PartialFunction,
            )
        }
    })
}

fn anchored(
    f: &TupleFunction,
    base: &NatStream,
    b: usize,
    plan: Plan,
    budget: &Budget,
) -> Result<(NatStream, SmallCase)> {
    let n = f.arity();
    let mut current = base.clone();
    let (f_anchor, budget_anchor) = (f.clone(), budget.clone());
    let anchors = NatStream::from_generator(
        move |_: &[u64]| {
            let k = current.get(0)?;
            current = NatStream::above(&current, k, &budget_anchor.fuel);
            let section = f_anchor.fix_min(k);
            for j in 0..=n {
                let projected = drop_coordinate(&section, j);
                current = fin_small_extract(&projected, &current, b, plan, &budget_anchor)?.stream;
            }
            Ok(k)
        },
        budget.fuel.max_materialize,
    );
    let conv = extract_convergent(f, &anchors, plan, budget)?;
    let cert = &conv.certificate;
    let levels = plan.levels;
    let start = cert.threshold(levels).unwrap_or(0);
    let kept = cert.prefix[start..].to_vec();
    let center = cert
        .limit
        .at(levels)
        .cloned()
        .unwrap_or(Point::Tuple(Vec::new()));
    let pinned = match &center {
        Point::Tuple(cs) => cs.iter().enumerate().find_map(|(i, c)| match c {
            Point::Nat(m) if (*m as usize) + 2 <= levels => Some(SmallCase::Pinned {
                coordinate: i,
                value: *m,
            }),
            _ => None,
        }),
        _ => None,
    };
    Ok((
        NatStream::from_list(kept)?,
        pinned.unwrap_or(SmallCase::Spread),
    ))
}

/// `s ↦ f(s)` with coordinate `j` removed.
fn drop_coordinate(f: &TupleFunction, j: usize) -> TupleFunction {
    let g = f.clone();
    let dim = match f.target() {
        Space::Product(spaces) => spaces.len() - 1,
        _ => 0,
    };
    TupleFunction::new(f.arity(), omega_power(dim), move |s| match g.eval(s)? {
        Point::Tuple(mut cs) => {
            cs.remove(j);
            Ok(Point::Tuple(cs))
        }
        other => Err(Error::Eval(alloc::format!("expected a tuple, got {other}"))),
    })
}
