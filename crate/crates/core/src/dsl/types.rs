use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use super::ast::{BinOp, Expr};
use crate::error::{Error, Result};
use crate::space::Space;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Type {
    Int,
    Dyadic,
    Tuple(Vec<Type>),
}

impl Type {
    fn is_numeric(&self) -> bool {
        matches!(self, Type::Int | Type::Dyadic)
    }
}

fn numeric(t: Type, what: &str) -> Result<Type> {
    if t.is_numeric() {
        Ok(t)
    } else {
        Err(Error::Type(format!("{what} needs a number, got a tuple")))
    }
}

fn join(a: Type, b: Type) -> Result<Type> {
    match (a, b) {
        (Type::Int, Type::Int) => Ok(Type::Int),
        (a, b) if a.is_numeric() && b.is_numeric() => Ok(Type::Dyadic),
        (Type::Tuple(xs), Type::Tuple(ys)) if xs.len() == ys.len() => xs
            .into_iter()
            .zip(ys)
            .map(|(x, y)| join(x, y))
            .collect::<Result<_>>()
            .map(Type::Tuple),
        (a, b) => Err(Error::Type(format!(
            "branches have incompatible types {a:?} and {b:?}"
        ))),
    }
}

/// Type of `e` with variables `x0..x{arity-1}`.
pub fn type_of(e: &Expr, arity: usize) -> Result<Type> {
    match e {
        Expr::Int(_) => Ok(Type::Int),
        Expr::Var(i) if *i < arity => Ok(Type::Int),
        Expr::Var(i) => Err(Error::Type(format!("x{i} is not defined at arity {arity}"))),
        Expr::Binary(BinOp::Mod, a, b) => {
            if matches!(&**b, Expr::Int(n) if n.is_zero()) {
                return Err(Error::Type("modulus by literal zero".into()));
            }
            match (type_of(a, arity)?, type_of(b, arity)?) {
                (Type::Int, Type::Int) => Ok(Type::Int),
                _ => Err(Error::Type("`mod` needs integers".into())),
            }
        }
        Expr::Binary(op, a, b) => {
            let what = format!("`{op:?}`");
            join(
                numeric(type_of(a, arity)?, &what)?,
                numeric(type_of(b, arity)?, &what)?,
            )
        }
        Expr::Pow2Neg(x) => match type_of(x, arity)? {
            Type::Int => Ok(Type::Dyadic),
            _ => Err(Error::Type("pow2neg needs an integer exponent".into())),
        },
        Expr::Min(a, b) | Expr::Max(a, b) => join(
            numeric(type_of(a, arity)?, "min/max")?,
            numeric(type_of(b, arity)?, "min/max")?,
        ),
        Expr::Tuple(items) => items
            .iter()
            .map(|x| type_of(x, arity))
            .collect::<Result<_>>()
            .map(Type::Tuple),
        Expr::If {
            lhs,
            rhs,
            then,
            otherwise,
            ..
        } => {
            numeric(type_of(lhs, arity)?, "a comparison")?;
            numeric(type_of(rhs, arity)?, "a comparison")?;
            join(type_of(then, arity)?, type_of(otherwise, arity)?)
        }
    }
}

/// How values of a type become points of a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Number,
    Natural,
    /// Cantor bits: a tuple whose last entry repeats, or one constant bit.
    Bits {
        tuple: bool,
    },
    Components(Vec<Shape>),
    /// Countable power: listed coordinates, the last one repeated.
    Sequence {
        items: Vec<Shape>,
    },
    Constant(Vec<Shape>),
}

/// Matches a value type against the point shape of `space`.
pub fn shape_for(t: &Type, space: &Space) -> Result<Shape> {
    let mismatch = || Error::Type(format!("a value of type {t:?} does not fit {space}"));
    match (space, t) {
        (Space::UnitCube(1), t) if t.is_numeric() => Ok(Shape::Number),
        (Space::UnitCube(d), Type::Tuple(items))
            if items.len() == *d && items.iter().all(Type::is_numeric) =>
        {
            Ok(Shape::Components(alloc::vec![Shape::Number; *d]))
        }
        (Space::OmegaPlusOne | Space::Discrete(_), Type::Int) => Ok(Shape::Natural),
        (Space::Cantor, Type::Int) => Ok(Shape::Bits { tuple: false }),
        (Space::Cantor, Type::Tuple(items)) if items.iter().all(|x| *x == Type::Int) => {
            Ok(Shape::Bits { tuple: true })
        }
        (Space::Product(spaces), t) if spaces.len() == 1 => {
            Ok(Shape::Constant(alloc::vec![shape_for(t, &spaces[0])?]))
        }
        (Space::Product(spaces), Type::Tuple(items)) if items.len() == spaces.len() => items
            .iter()
            .zip(spaces)
            .map(|(x, s)| shape_for(x, s))
            .collect::<Result<_>>()
            .map(Shape::Components),
        (Space::Countable(inner), t) => {
            if let Type::Tuple(items) = t {
                if let Ok(items) = items
                    .iter()
                    .map(|x| shape_for(x, inner))
                    .collect::<Result<Vec<_>>>()
                {
                    return Ok(Shape::Sequence { items });
                }
            }
            shape_for(t, inner)
                .map(|s| Shape::Constant(alloc::vec![s]))
                .map_err(|_| mismatch())
        }
        _ => Err(mismatch()),
    }
}
