use alloc::format;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::ramsey::Coloring;
use crate::space::{CoverLevel, Point, Space};
use crate::subsets::insert_sorted;

type Rule = Rc<dyn Fn(&[u64]) -> Result<Point>>;

/// A total map from sorted `arity`-tuples of naturals into `target`.
#[derive(Clone)]
pub struct TupleFunction {
    arity: usize,
    target: Space,
    rule: Rule,
}

impl TupleFunction {
    pub fn new(
        arity: usize,
        target: Space,
        rule: impl Fn(&[u64]) -> Result<Point> + 'static,
    ) -> Self {
        TupleFunction {
            arity,
            target,
            rule: Rc::new(rule),
        }
    }

    pub fn constant(arity: usize, target: Space, p: Point) -> Self {
        TupleFunction::new(arity, target, move |_| Ok(p.clone()))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    /// Value at the sorted tuple `s`; checks arity and membership.
    pub fn eval(&self, s: &[u64]) -> Result<Point> {
        if s.len() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                found: s.len(),
            });
        }
        let p = (self.rule)(s)?;
        if !self.target.contains(&p) {
            return Err(Error::Eval(format!(
                "value {p} at {s:?} is not a point of {}",
                self.target
            )));
        }
        Ok(p)
    }

    /// `f(s) = g(s \ {max s})`, one arity higher.
    pub fn lift(&self) -> TupleFunction {
        let g = self.clone();
        TupleFunction::new(self.arity + 1, self.target.clone(), move |s| {
            g.eval(&s[..s.len() - 1])
        })
    }

    /// `s ↦ f({a} ∪ s)`, one arity lower.
    pub fn fix_min(&self, a: u64) -> TupleFunction {
        let f = self.clone();
        TupleFunction::new(self.arity - 1, self.target.clone(), move |s| {
            f.eval(&insert_sorted(s, a))
        })
    }

    /// `s ↦ f(s ∪ {n})` for a fixed `(arity-1)`-set `s`, as a function of `n`.
    pub fn section(&self, s: &[u64]) -> TupleFunction {
        let f = self.clone();
        let s: Vec<u64> = s.to_vec();
        TupleFunction::new(1, self.target.clone(), move |n| {
            f.eval(&insert_sorted(&s, n[0]))
        })
    }

    /// Coordinate `i` of a function into a product.
    pub fn project(&self, i: usize) -> Result<TupleFunction> {
        let space = match &self.target {
            Space::Product(spaces) => spaces.get(i).cloned(),
            Space::Countable(inner) => Some((**inner).clone()),
            _ => None,
        }
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no coordinate {i}", self.target)))?;
        let f = self.clone();
        Ok(TupleFunction::new(self.arity, space, move |s| {
            f.eval(s)?
                .coordinate(i)
                .cloned()
                .ok_or_else(|| Error::Eval(format!("missing coordinate {i}")))
        }))
    }

    /// The coloring `s ↦ locate(f(s))` induced by a cover.
    pub fn induced_coloring(&self, cover: &CoverLevel) -> Coloring {
        let f = self.clone();
        let cover = cover.clone();
        Coloring::new(self.arity, cover.len(), move |s| cover.locate(&f.eval(s)?))
    }

    /// The coloring `s ↦ k` of a function into `Discrete(palette)`.
    pub fn coloring(&self) -> Result<Coloring> {
        let Space::Discrete(palette) = self.target else {
            return Err(Error::InvalidArgument(format!(
                "a coloring needs a discrete target, not {}",
                self.target
            )));
        };
        let f = self.clone();
        Ok(Coloring::new(self.arity, palette, move |s| {
            match f.eval(s)? {
                Point::Discrete(k) => Ok(k),
                p => Err(Error::Eval(format!("{p} is not a color"))),
            }
        }))
    }

    /// Reads a finite table; tuples outside it are evaluation errors.
    pub fn from_table(
        arity: usize,
        target: Space,
        table: alloc::collections::BTreeMap<Vec<u64>, Point>,
    ) -> Self {
        TupleFunction::new(arity, target, move |s| {
            table
                .get(s)
                .cloned()
                .ok_or_else(|| Error::Eval(format!("no tabulated value at {s:?}")))
        })
    }
}

impl fmt::Debug for TupleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TupleFunction")
            .field("arity", &self.arity)
            .field("target", &self.target)
            .finish_non_exhaustive()
    }
}
