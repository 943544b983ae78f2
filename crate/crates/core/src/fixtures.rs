//! Named tuple functions.
//!
//! | name | default arity | default target | value at `x0 < x1 < …` |
//! |---|---|---|---|
//! | `mad-pair` | 2 | `product(omega1,omega1)` | `(x0, x1)` |
//! | `min-decay` | 2 | `unit-cube:1` | `2^{-(x0+1)}` |
//! | `sum-decay` | 2 | `unit-cube:1` | `Σ 2^{-(xi+1)}` |
//! | `min-parity` | 2 | `discrete:2` | `x0 mod 2` |
//! | `G(r)` | `r+1` | `product(omega1,…)` | `(x0, …, xr)` |
//! | `const(p)` | 2 | `unit-cube:1` | `p` (a dyadic or a constant expression) |
//! | `lift-of(g)` | `arity(g)+1` | that of `g` | `g(x0, …, x{r-2})` |
//!
//! Any target the value fits (under the DSL's shape rules) may replace the
//! default.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dsl::{compile, Program};
use crate::dyadic::Dyadic;
use crate::engine::TupleFunction;
use crate::error::{Error, Result};
use crate::fin::omega_power;
use crate::space::Space;

pub const NAMES: &[&str] = &[
    "mad-pair",
    "min-decay",
    "sum-decay",
    "min-parity",
    "G(r)",
    "const(p)",
    "lift-of(g)",
];

/// Looks up a fixture; `arity` and `target` override the defaults.
pub fn builtin(name: &str, arity: Option<usize>, target: Option<&Space>) -> Result<TupleFunction> {
    let name = name.trim();
    if let Some(inner) = call(name, "lift-of") {
        let inner_arity = match arity {
            Some(0 | 1) => {
                return Err(Error::InvalidArgument(
                    "lift-of needs arity at least 2".into(),
                ))
            }
            Some(a) => Some(a - 1),
            None => None,
        };
        return Ok(builtin(inner, inner_arity, target)?.lift());
    }
    let (src, default_arity, default_target) = source(name, arity)?;
    let arity = arity.unwrap_or(default_arity);
    if arity == 0 {
        return Err(Error::InvalidArgument("arity must be at least 1".into()));
    }
    let target = match (target, default_target) {
        (Some(t), _) => t.clone(),
        (None, Some(t)) => t,
        (None, None) => {
            return Err(Error::InvalidArgument(format!(
                "fixture `{name}` needs a target space"
            )))
        }
    };
    let program: Program = compile(&src, arity, &target)?;
    Ok(program.into_function())
}

fn call<'a>(name: &'a str, head: &str) -> Option<&'a str> {
    name.strip_prefix(head)?
        .trim()
        .strip_prefix('(')?
        .strip_suffix(')')
}

/// DSL source, default arity, default target.
fn source(name: &str, arity: Option<usize>) -> Result<(String, usize, Option<Space>)> {
    let vars = |r: usize| (0..r).map(|i| format!("x{i}")).collect::<Vec<_>>();
    let r = arity.unwrap_or(2);
    Ok(match name {
        "mad-pair" => {
            if r != 2 {
                return Err(Error::InvalidArgument("mad-pair has arity 2".into()));
            }
            ("(x0, x1)".into(), 2, Some(omega_power(2)))
        }
        "min-decay" => ("pow2neg(x0 + 1)".into(), 2, Some(Space::UnitCube(1))),
        "sum-decay" => {
            let terms: Vec<String> = vars(r)
                .iter()
                .map(|x| format!("pow2neg({x} + 1)"))
                .collect();
            (terms.join(" + "), 2, Some(Space::UnitCube(1)))
        }
        "min-parity" => ("x0 mod 2".into(), 2, Some(Space::Discrete(2))),
        _ => {
            if let Some(k) = call(name, "G") {
                let k: usize = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::UnknownFixture(name.into()))?;
                if k == 0 || arity.is_some_and(|a| a != k + 1) {
                    return Err(Error::InvalidArgument(format!(
                        "G({k}) has arity {}",
                        k + 1
                    )));
                }
                (
                    format!("({})", vars(k + 1).join(", ")),
                    k + 1,
                    Some(omega_power(k + 1)),
                )
            } else if let Some(p) = call(name, "const") {
                match p.trim().parse::<Dyadic>() {
                    Ok(d) => (dyadic_source(&d), 2, Some(Space::UnitCube(1))),
                    Err(_) => (p.into(), 2, None),
                }
            } else {
                return Err(Error::UnknownFixture(name.into()));
            }
        }
    })
}

fn dyadic_source(d: &Dyadic) -> String {
    let n = d.numerator();
    if n.sign() == num_bigint::Sign::Minus {
        format!("0 - {} * pow2neg({})", -n, d.exponent())
    } else {
        format!("{n} * pow2neg({})", d.exponent())
    }
}
