//! JSON encodings of points, certificates and tuple sets.
//!
//! Points: integers for ω and discrete coordinates, `"inf"` for ∞,
//! `{"num": n, "exp": e}` for dyadics (`num` as a string when it does not fit
//! an i64), arrays for tuples, `{"bits": [...], "tail": b}` for Cantor points
//! and `{"coords": [...], "tail": p}` for countable-product points.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use topo_ramsey::engine::{ConvergenceCertificate, Engine, FuelReport, LevelClaim};
use topo_ramsey::fin::{SplittingTree, TupleSet};
use topo_ramsey::{Dyadic, LocatedLimit, Point, Space};

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct FormatError(pub String);

fn bad(msg: impl Into<String>) -> FormatError {
    FormatError(msg.into())
}

pub fn dyadic_to_json(d: &Dyadic) -> Value {
    let num = match i64::try_from(d.numerator()) {
        Ok(n) => json!(n),
        Err(_) => json!(d.numerator().to_string()),
    };
    json!({ "num": num, "exp": d.exponent() })
}

pub fn dyadic_from_json(v: &Value) -> Result<Dyadic, FormatError> {
    let exp = v
        .get("exp")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("dyadic needs an integer `exp`"))?;
    let num: num_bigint::BigInt = match v.get("num") {
        Some(Value::Number(n)) => n
            .as_i64()
            .ok_or_else(|| bad("dyadic `num` must be an integer"))?
            .into(),
        Some(Value::String(s)) => s.parse().map_err(|_| bad(format!("bad numerator `{s}`")))?,
        _ => return Err(bad("dyadic needs `num`")),
    };
    let d = Dyadic::new(num, exp);
    if d.exponent() != exp {
        return Err(bad("dyadic is not in lowest terms"));
    }
    Ok(d)
}

pub fn point_to_json(p: &Point) -> Value {
    match p {
        Point::Cube(xs) if xs.len() == 1 => dyadic_to_json(&xs[0]),
        Point::Cube(xs) => Value::Array(xs.iter().map(dyadic_to_json).collect()),
        Point::Nat(n) | Point::Discrete(n) => json!(n),
        Point::Inf => json!("inf"),
        Point::Bits { prefix, tail } => {
            json!({ "bits": prefix.iter().map(|&b| u8::from(b)).collect::<Vec<_>>(), "tail": u8::from(*tail) })
        }
        Point::Tuple(cs) => Value::Array(cs.iter().map(point_to_json).collect()),
        Point::Seq { coords, tail } => {
            json!({ "coords": coords.iter().map(point_to_json).collect::<Vec<_>>(), "tail": point_to_json(tail) })
        }
    }
}

pub fn point_from_json(v: &Value, space: &Space) -> Result<Point, FormatError> {
    let array = |v: &Value| {
        v.as_array()
            .cloned()
            .ok_or_else(|| bad(format!("expected an array for a point of {space}")))
    };
    let p = match space {
        Space::UnitCube(1) => Point::scalar(dyadic_from_json(v)?),
        Space::UnitCube(_) => Point::Cube(
            array(v)?
                .iter()
                .map(dyadic_from_json)
                .collect::<Result<_, _>>()?,
        ),
        Space::OmegaPlusOne => match v {
            Value::String(s) if s == "inf" => Point::Inf,
            _ => Point::Nat(
                v.as_u64()
                    .ok_or_else(|| bad("expected a natural or \"inf\""))?,
            ),
        },
        Space::Discrete(_) => Point::Discrete(v.as_u64().ok_or_else(|| bad("expected a natural"))?),
        Space::Cantor => {
            let bit = |b: &Value| match b.as_u64() {
                Some(0) => Ok(false),
                Some(1) => Ok(true),
                _ => Err(bad("bits must be 0 or 1")),
            };
            let bits = v
                .get("bits")
                .map(array)
                .transpose()?
                .ok_or_else(|| bad("cantor point needs `bits`"))?;
            let tail = bit(v
                .get("tail")
                .ok_or_else(|| bad("cantor point needs `tail`"))?)?;
            Point::bits(bits.iter().map(bit).collect::<Result<_, _>>()?, tail)
        }
        Space::Product(spaces) => {
            let items = array(v)?;
            if items.len() != spaces.len() {
                return Err(bad(format!("expected {} coordinates", spaces.len())));
            }
            Point::Tuple(
                items
                    .iter()
                    .zip(spaces)
                    .map(|(x, s)| point_from_json(x, s))
                    .collect::<Result<_, _>>()?,
            )
        }
        Space::Countable(inner) => {
            let coords = v
                .get("coords")
                .map(array)
                .transpose()?
                .ok_or_else(|| bad("sequence needs `coords`"))?;
            let tail = point_from_json(
                v.get("tail").ok_or_else(|| bad("sequence needs `tail`"))?,
                inner,
            )?;
            Point::seq(
                coords
                    .iter()
                    .map(|x| point_from_json(x, inner))
                    .collect::<Result<_, _>>()?,
                tail,
            )
        }
    };
    if !space.contains(&p) {
        return Err(bad(format!("{p} is not a point of {space}")));
    }
    Ok(p)
}

/// Where the certified function came from, so `verify` can rebuild it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionSource {
    Fixture(String),
    Dsl(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelJson {
    pub n: usize,
    pub threshold: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuelJson {
    pub oracle_calls: u64,
    pub stream_fuel_spent: u64,
    pub max_materialize: usize,
    pub max_oracle_calls: u64,
    pub window: usize,
}

impl From<&FuelReport> for FuelJson {
    fn from(r: &FuelReport) -> Self {
        FuelJson {
            oracle_calls: r.oracle_calls,
            stream_fuel_spent: r.stream_fuel_spent,
            max_materialize: r.max_materialize,
            max_oracle_calls: r.max_oracle_calls,
            window: r.window,
        }
    }
}

/// The certificate file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub engine: String,
    pub function: FunctionSource,
    pub arity: usize,
    pub space: String,
    pub stream_prefix: Vec<u64>,
    pub limit_centers: Vec<Value>,
    pub levels: Vec<LevelJson>,
    pub fuel_report: FuelJson,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub partial: bool,
}

impl CertificateJson {
    pub fn from_certificate(cert: &ConvergenceCertificate, function: FunctionSource) -> Self {
        CertificateJson {
            engine: cert.engine.as_str().into(),
            function,
            arity: cert.arity,
            space: cert.space.to_string(),
            stream_prefix: cert.prefix.clone(),
            limit_centers: cert.limit.centers.iter().map(point_to_json).collect(),
            levels: cert
                .levels
                .iter()
                .map(|l| LevelJson {
                    n: l.n,
                    threshold: l.threshold,
                })
                .collect(),
            fuel_report: (&cert.fuel_report).into(),
            partial: false,
        }
    }

    pub fn to_certificate(&self) -> Result<ConvergenceCertificate, FormatError> {
        let space: Space = self
            .space
            .parse()
            .map_err(|e| bad(format!("bad space: {e}")))?;
        let engine: Engine = self.engine.parse().map_err(|e| bad(format!("{e}")))?;
        let centers = self
            .limit_centers
            .iter()
            .map(|v| point_from_json(v, &space))
            .collect::<Result<_, _>>()?;
        let f = &self.fuel_report;
        Ok(ConvergenceCertificate {
            arity: self.arity,
            space,
            prefix: self.stream_prefix.clone(),
            limit: LocatedLimit::new(centers),
            levels: self
                .levels
                .iter()
                .map(|l| LevelClaim {
                    n: l.n,
                    threshold: l.threshold,
                })
                .collect(),
            engine,
            fuel_report: FuelReport {
                oracle_calls: f.oracle_calls,
                stream_fuel_spent: f.stream_fuel_spent,
                max_materialize: f.max_materialize,
                max_oracle_calls: f.max_oracle_calls,
                window: f.window,
            },
        })
    }

    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }
}

pub fn tuple_set_from_json(v: &Value) -> Result<TupleSet, FormatError> {
    let rows = v
        .as_array()
        .ok_or_else(|| bad("expected an array of integer arrays"))?;
    let tuples: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| bad("expected an integer array"))?
                .iter()
                .map(|x| x.as_u64().ok_or_else(|| bad("expected a natural")))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let dim = tuples.first().map_or(0, Vec::len);
    TupleSet::new(dim, tuples).map_err(|e| bad(e.to_string()))
}

pub fn tree_to_json(t: &SplittingTree) -> Value {
    json!({
        "branching": t.branching,
        "depth": t.depth,
        "leaves": t.leaves().collect::<Vec<_>>(),
    })
}
