//! Lazily materialized, strictly increasing streams of naturals.
//!
//! A [`NatStream`] stands in for an infinite subset of ℕ: a deterministic
//! generator plus the prefix it has produced so far. Every stream carries a
//! cap on how many elements it may produce, and running into that cap is a
//! reported [`Error::FuelExhausted`], never a silently short answer.

use alloc::boxed::Box;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cell::{Cell, RefCell};
use core::fmt;

use crate::error::{Error, Resource, Result};

/// Finite budget for an extraction run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fuel {
    /// Maximum number of elements any single stream may produce.
    pub max_materialize: usize,
    /// Maximum number of function/coloring evaluations in one run.
    pub max_oracle_calls: u64,
    /// Pigeonhole quota: a color class wins once it has this many members.
    pub window: usize,
}

impl Fuel {
    pub fn new(max_materialize: usize, max_oracle_calls: u64, window: usize) -> Result<Self> {
        if max_materialize == 0 || max_oracle_calls == 0 || window == 0 {
            return Err(Error::InvalidArgument(
                "fuel limits must be positive".into(),
            ));
        }
        Ok(Fuel {
            max_materialize,
            max_oracle_calls,
            window,
        })
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel {
            max_materialize: 200_000,
            max_oracle_calls: 50_000_000,
            window: 8,
        }
    }
}

/// Fuel limits plus the shared oracle-call meter of one run.
#[derive(Clone)]
pub struct Budget {
    pub fuel: Fuel,
    calls: Rc<Cell<u64>>,
}

impl Budget {
    pub fn new(fuel: Fuel) -> Self {
        Budget {
            fuel,
            calls: Rc::new(Cell::new(0)),
        }
    }

    /// Counts one oracle evaluation.
    pub fn charge(&self) -> Result<()> {
        let used = self.calls.get();
        if used >= self.fuel.max_oracle_calls {
            return Err(Error::exhausted(Resource::OracleCalls));
        }
        self.calls.set(used + 1);
        Ok(())
    }

    pub fn oracle_calls(&self) -> u64 {
        self.calls.get()
    }

    pub fn window(&self) -> usize {
        self.fuel.window
    }
}

impl fmt::Debug for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Budget")
            .field("fuel", &self.fuel)
            .field("oracle_calls", &self.calls.get())
            .finish()
    }
}

/// Produces the next element given the prefix materialized so far.
pub trait Generator {
    fn next(&mut self, prefix: &[u64]) -> Result<u64>;
}

impl<F> Generator for F
where
    F: FnMut(&[u64]) -> Result<u64>,
{
    fn next(&mut self, prefix: &[u64]) -> Result<u64> {
        self(prefix)
    }
}

struct State {
    prefix: Vec<u64>,
    generator: Box<dyn Generator>,
    fuel_spent: u64,
    cap: usize,
}

/// Shared handle to a lazily materialized strictly increasing stream.
///
/// Cloning is cheap and clones observe the same prefix.
#[derive(Clone)]
pub struct NatStream(Rc<RefCell<State>>);

impl NatStream {
    pub fn from_generator(generator: impl Generator + 'static, cap: usize) -> Self {
        NatStream(Rc::new(RefCell::new(State {
            prefix: Vec::new(),
            generator: Box::new(generator),
            fuel_spent: 0,
            cap,
        })))
    }

    /// ℕ itself.
    pub fn naturals(fuel: &Fuel) -> Self {
        Self::arithmetic(0, 1, fuel)
    }

    /// `start, start + step, start + 2·step, …`
    pub fn arithmetic(start: u64, step: u64, fuel: &Fuel) -> Self {
        let step = step.max(1);
        Self::from_generator(
            move |prefix: &[u64]| {
                (prefix.len() as u64)
                    .checked_mul(step)
                    .and_then(|x| x.checked_add(start))
                    .ok_or_else(|| Error::exhausted(Resource::Materialize))
            },
            fuel.max_materialize,
        )
    }

    /// A finite stream; asking past its end is a [`Resource::FiniteSource`]
    /// exhaustion.
    pub fn from_list(items: Vec<u64>) -> Result<Self> {
        if let Some(w) = items.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing {
                last: w[0],
                got: w[1],
            });
        }
        let s = Self::from_generator(
            |_: &[u64]| -> Result<u64> { Err(Error::exhausted(Resource::FiniteSource)) },
            usize::MAX,
        );
        {
            let mut st = s.0.borrow_mut();
            st.prefix = items;
        }
        Ok(s)
    }

    /// Elements of `parent` satisfying `keep`, in order.
    pub fn filter<P>(parent: &NatStream, mut keep: P, fuel: &Fuel) -> Self
    where
        P: FnMut(u64) -> Result<bool> + 'static,
    {
        let parent = parent.clone();
        let mut cursor = 0usize;
        Self::from_generator(
            move |_: &[u64]| loop {
                let x = parent.get(cursor)?;
                cursor += 1;
                if keep(x)? {
                    return Ok(x);
                }
            },
            fuel.max_materialize,
        )
    }

    /// Elements of `parent` strictly greater than `bound`.
    pub fn above(parent: &NatStream, bound: u64, fuel: &Fuel) -> Self {
        Self::filter(parent, move |x| Ok(x > bound), fuel)
    }

    /// Elements of `parent` from position `skip` on.
    pub fn skip(parent: &NatStream, skip: usize, fuel: &Fuel) -> Self {
        let parent = parent.clone();
        Self::from_generator(
            move |prefix: &[u64]| parent.get(skip + prefix.len()),
            fuel.max_materialize,
        )
    }

    /// The element at `index`, materializing as needed.
    pub fn get(&self, index: usize) -> Result<u64> {
        if let Some(&x) = self.0.borrow().prefix.get(index) {
            return Ok(x);
        }
        self.extend_to(index + 1)?;
        Ok(self.0.borrow().prefix[index])
    }

    /// The first `m` elements.
    pub fn materialize(&self, m: usize) -> Result<Vec<u64>> {
        self.extend_to(m).map_err(|e| self.attach_prefix(e))?;
        Ok(self.0.borrow().prefix[..m].to_vec())
    }

    /// Up to `m` elements; fuel exhaustion ends the list early instead of
    /// failing. Other errors propagate.
    pub fn materialize_available(&self, m: usize) -> Result<Vec<u64>> {
        match self.extend_to(m) {
            Ok(()) | Err(Error::FuelExhausted(_)) => {}
            Err(e) => return Err(e),
        }
        let st = self.0.borrow();
        Ok(st.prefix[..m.min(st.prefix.len())].to_vec())
    }

    /// Whether `x` belongs to the stream; materializes up to the first
    /// element `>= x`.
    pub fn contains(&self, x: u64) -> Result<bool> {
        let mut i = 0;
        loop {
            {
                let st = self.0.borrow();
                match st.prefix.binary_search(&x) {
                    Ok(_) => return Ok(true),
                    Err(pos) if pos < st.prefix.len() => return Ok(false),
                    Err(_) => i = i.max(st.prefix.len()),
                }
            }
            self.get(i)?;
        }
    }

    /// Snapshot of the materialized prefix.
    pub fn prefix(&self) -> Vec<u64> {
        self.0.borrow().prefix.clone()
    }

    pub fn materialized_len(&self) -> usize {
        self.0.borrow().prefix.len()
    }

    /// Number of generator invocations so far.
    pub fn fuel_spent(&self) -> u64 {
        self.0.borrow().fuel_spent
    }

    fn extend_to(&self, m: usize) -> Result<()> {
        let mut st = self.0.borrow_mut();
        while st.prefix.len() < m {
            if st.prefix.len() >= st.cap {
                return Err(Error::exhausted(Resource::Materialize));
            }
            st.fuel_spent += 1;
            let State {
                prefix, generator, ..
            } = &mut *st;
            let x = generator.next(prefix)?;
            if let Some(&last) = prefix.last() {
                if x <= last {
                    return Err(Error::NotIncreasing { last, got: x });
                }
            }
            prefix.push(x);
        }
        Ok(())
    }

    fn attach_prefix(&self, mut e: Error) -> Error {
        if let Error::FuelExhausted(ex) = &mut e {
            if ex.prefix.is_empty() {
                ex.prefix = self.prefix();
            }
        }
        e
    }
}

impl fmt::Debug for NatStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let st = self.0.borrow();
        f.debug_struct("NatStream")
            .field("prefix", &st.prefix)
            .field("fuel_spent", &st.fuel_spent)
            .finish()
    }
}

/// A decreasing chain `A_0 ⊇ A_1 ⊇ …` whose links are produced on demand.
pub trait Chain {
    fn link(&mut self, n: usize) -> Result<NatStream>;
}

/// A finite chain; links past the end repeat the last one.
impl Chain for Vec<NatStream> {
    fn link(&mut self, n: usize) -> Result<NatStream> {
        self.get(n)
            .or_else(|| self.last())
            .cloned()
            .ok_or_else(|| Error::InvalidArgument("empty chain".into()))
    }
}

/// Chain whose links come from a closure, cached once built.
pub struct LazyChain<F> {
    make: F,
    built: Vec<NatStream>,
}

impl<F> LazyChain<F>
where
    F: FnMut(usize, &[NatStream]) -> Result<NatStream>,
{
    /// `make(n, earlier_links)` builds link `n`.
    pub fn new(make: F) -> Self {
        LazyChain {
            make,
            built: Vec::new(),
        }
    }
}

impl<F> Chain for LazyChain<F>
where
    F: FnMut(usize, &[NatStream]) -> Result<NatStream>,
{
    fn link(&mut self, n: usize) -> Result<NatStream> {
        while self.built.len() <= n {
            let next = (self.make)(self.built.len(), &self.built)?;
            self.built.push(next);
        }
        Ok(self.built[n].clone())
    }
}

/// Greedy diagonal through a decreasing chain: `b_n` is the least element
/// of `A_n` above `b_{n-1}`, so `B \ A_n ⊆ {b_0, …, b_{n-1}}`.
///
/// Each chosen `b_n` is checked against every earlier link; a miss is a
/// [`Error::ChainViolation`].
pub fn pseudo_intersection(chain: impl Chain + 'static, fuel: &Fuel) -> NatStream {
    let mut chain = chain;
    let mut cursors: Vec<usize> = Vec::new();
    let mut links: Vec<NatStream> = Vec::new();
    NatStream::from_generator(
        move |prefix: &[u64]| {
            let n = prefix.len();
            while links.len() <= n {
                links.push(chain.link(links.len())?);
                cursors.push(0);
            }
            let link = &links[n];
            let mut i = cursors[n];
            let b = loop {
                let x = link.get(i)?;
                i += 1;
                if prefix.last().is_none_or(|&last| x > last) {
                    break x;
                }
            };
            cursors[n] = i;
            for (m, earlier) in links[..n].iter().enumerate() {
                if !earlier.contains(b)? {
                    return Err(Error::ChainViolation {
                        link: n,
                        missing_from: m,
                        element: b,
                    });
                }
            }
            Ok(b)
        },
        fuel.max_materialize,
    )
}
