//! A small exact expression language for tuple functions and colorings.
//!
//! ```text
//! expr := term (('+' | '-') term)*
//! term := atom (('*' | 'mod') atom)*
//! atom := int | xK | pow2neg(expr) | min(expr, expr) | max(expr, expr)
//!       | '(' expr (',' expr)* ')' | if(expr cmp expr, expr, expr)
//! cmp  := '<' | '<=' | '='
//! ```
//!
//! `x0 < x1 < …` is the sorted input tuple. Integers promote to dyadics;
//! a parenthesized single expression is grouping, two or more make a tuple.

mod ast;
mod eval;
mod parser;
mod types;

pub use ast::{BinOp, Cmp, Expr};
pub use eval::{eval, Value};
pub use parser::parse;
pub use types::{shape_for, type_of, Shape, Type};

use alloc::rc::Rc;

use crate::engine::TupleFunction;
use crate::error::{Error, Result};
use crate::space::{Point, Space};

/// A type-checked expression bound to an arity and a target space.
#[derive(Debug, Clone)]
pub struct Program {
    pub expr: Expr,
    pub arity: usize,
    pub target: Space,
    shape: Shape,
}

impl Program {
    pub fn new(expr: Expr, arity: usize, target: Space) -> Result<Self> {
        let ty = type_of(&expr, arity)?;
        let shape = shape_for(&ty, &target)?;
        Ok(Program {
            expr,
            arity,
            target,
            shape,
        })
    }

    /// Value at `s` as a point of the target; values outside the space
    /// (e.g. `2` in `[0,1]`) are evaluation errors.
    pub fn eval(&self, s: &[u64]) -> Result<Point> {
        let p = eval::to_point(&eval(&self.expr, s)?, &self.shape, &self.target)?;
        if !self.target.contains(&p) {
            return Err(Error::Eval(alloc::format!(
                "value {p} at {s:?} is not a point of {}",
                self.target
            )));
        }
        Ok(p)
    }

    pub fn into_function(self) -> TupleFunction {
        let p = Rc::new(self);
        TupleFunction::new(p.arity, p.target.clone(), move |s| p.eval(s))
    }
}

/// Parses and checks `src` as an `arity`-ary function into `target`.
pub fn compile(src: &str, arity: usize, target: &Space) -> Result<Program> {
    Program::new(parse(src)?, arity, target.clone())
}
