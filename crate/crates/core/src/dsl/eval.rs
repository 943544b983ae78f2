use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ast::{BinOp, Cmp, Expr};
use super::types::Shape;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::space::{Point, Space};

/// Largest `|e|` accepted by `pow2neg`.
const MAX_SHIFT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(BigInt),
    Dyadic(Dyadic),
    Tuple(Vec<Value>),
}

impl Value {
    fn dyadic(&self) -> Result<Dyadic> {
        match self {
            Value::Int(n) => Ok(Dyadic::new(n.clone(), 0)),
            Value::Dyadic(d) => Ok(d.clone()),
            Value::Tuple(_) => Err(Error::Eval("expected a number, got a tuple".into())),
        }
    }

    fn int(&self) -> Result<&BigInt> {
        match self {
            Value::Int(n) => Ok(n),
            _ => Err(Error::Eval("expected an integer".into())),
        }
    }
}

fn numeric(
    a: Value,
    b: Value,
    int: impl Fn(&BigInt, &BigInt) -> BigInt,
    dy: impl Fn(Dyadic, Dyadic) -> Dyadic,
) -> Result<Value> {
    match (&a, &b) {
        (Value::Int(x), Value::Int(y)) => Ok(Value::Int(int(x, y))),
        _ => Ok(Value::Dyadic(dy(a.dyadic()?, b.dyadic()?))),
    }
}

/// Evaluates `e` on the sorted tuple `xs`.
pub fn eval(e: &Expr, xs: &[u64]) -> Result<Value> {
    match e {
        Expr::Int(n) => Ok(Value::Int(n.clone())),
        Expr::Var(i) => xs
            .get(*i)
            .map(|&x| Value::Int(BigInt::from(x)))
            .ok_or_else(|| Error::Eval(format!("x{i} is not bound"))),
        Expr::Binary(op, a, b) => {
            let (a, b) = (eval(a, xs)?, eval(b, xs)?);
            match op {
                BinOp::Add => numeric(a, b, |x, y| x + y, |x, y| x + y),
                BinOp::Sub => numeric(a, b, |x, y| x - y, |x, y| x - y),
                BinOp::Mul => numeric(a, b, |x, y| x * y, |x, y| x * y),
                BinOp::Mod => {
                    let m = b.int()?.abs();
                    if m.is_zero() {
                        return Err(Error::Eval("modulus is zero".into()));
                    }
                    Ok(Value::Int(a.int()?.mod_floor(&m)))
                }
            }
        }
        Expr::Pow2Neg(x) => {
            let k = eval(x, xs)?;
            let k = k.int()?;
            let shift = k
                .abs()
                .to_u64()
                .filter(|s| *s <= MAX_SHIFT)
                .ok_or_else(|| Error::Eval(format!("pow2neg exponent {k} is out of range")))?;
            Ok(Value::Dyadic(if k.is_negative() {
                Dyadic::new(BigInt::one() << shift, 0)
            } else {
                Dyadic::pow2_neg(shift)
            }))
        }
        Expr::Min(a, b) => numeric(
            eval(a, xs)?,
            eval(b, xs)?,
            |x, y| x.min(y).clone(),
            Dyadic::min,
        ),
        Expr::Max(a, b) => numeric(
            eval(a, xs)?,
            eval(b, xs)?,
            |x, y| x.max(y).clone(),
            Dyadic::max,
        ),
        Expr::Tuple(items) => items
            .iter()
            .map(|x| eval(x, xs))
            .collect::<Result<_>>()
            .map(Value::Tuple),
        Expr::If {
            cmp,
            lhs,
            rhs,
            then,
            otherwise,
        } => {
            let (l, r) = (eval(lhs, xs)?.dyadic()?, eval(rhs, xs)?.dyadic()?);
            let holds = match cmp {
                Cmp::Lt => l < r,
                Cmp::Le => l <= r,
                Cmp::Eq => l == r,
            };
            eval(if holds { then } else { otherwise }, xs)
        }
    }
}

fn natural(v: &Value) -> Result<u64> {
    let n = v.int()?;
    n.to_u64()
        .ok_or_else(|| Error::Eval(format!("{n} is not a natural number")))
}

/// Converts a value to a point of `space` along a checked shape.
pub fn to_point(v: &Value, shape: &Shape, space: &Space) -> Result<Point> {
    let items = |v: &Value| -> Result<Vec<Value>> {
        match v {
            Value::Tuple(items) => Ok(items.clone()),
            _ => Err(Error::Eval("expected a tuple".into())),
        }
    };
    match (shape, space) {
        (Shape::Number, _) => Ok(Point::scalar(v.dyadic()?)),
        (Shape::Natural, Space::Discrete(_)) => Ok(Point::Discrete(natural(v)?)),
        (Shape::Natural, _) => Ok(Point::Nat(natural(v)?)),
        (Shape::Bits { tuple }, _) => {
            let raw = if *tuple {
                items(v)?
            } else {
                alloc::vec![v.clone()]
            };
            let mut bits = raw
                .iter()
                .map(|b| match natural(b)? {
                    0 => Ok(false),
                    1 => Ok(true),
                    n => Err(Error::Eval(format!("bit {n} is not 0 or 1"))),
                })
                .collect::<Result<Vec<bool>>>()?;
            let tail = bits
                .pop()
                .ok_or_else(|| Error::Eval("empty bit sequence".into()))?;
            Ok(Point::bits(bits, tail))
        }
        (Shape::Components(_), Space::UnitCube(_)) => items(v)?
            .iter()
            .map(Value::dyadic)
            .collect::<Result<_>>()
            .map(Point::Cube),
        (Shape::Components(shapes), Space::Product(spaces)) => items(v)?
            .iter()
            .zip(shapes.iter().zip(spaces))
            .map(|(x, (sh, sp))| to_point(x, sh, sp))
            .collect::<Result<_>>()
            .map(Point::Tuple),
        (Shape::Constant(inner), Space::Product(spaces)) => {
            Ok(Point::Tuple(alloc::vec![to_point(
                v, &inner[0], &spaces[0]
            )?]))
        }
        (Shape::Constant(inner), Space::Countable(sp)) => {
            Ok(Point::seq(Vec::new(), to_point(v, &inner[0], sp)?))
        }
        (Shape::Sequence { items: shapes }, Space::Countable(sp)) => {
            let mut coords = items(v)?
                .iter()
                .zip(shapes)
                .map(|(x, sh)| to_point(x, sh, sp))
                .collect::<Result<Vec<_>>>()?;
            let tail = coords
                .pop()
                .ok_or_else(|| Error::Eval("empty sequence".into()))?;
            Ok(Point::seq(coords, tail))
        }
        _ => Err(Error::Eval(format!("value does not fit {space}"))),
    }
}
