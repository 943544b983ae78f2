//! Convergent-subsequence extractors for functions on `[ℕ]^r`.

mod certificate;
mod convergent;
mod function;
mod inductive;
mod nice;
mod product;

pub use certificate::{
    minimal_thresholds, verify_certificate, ConvergenceCertificate, Engine, Failure, FuelReport,
    LevelClaim, Verdict,
};
pub use convergent::{extract_convergent, Convergent, Plan};
pub use function::TupleFunction;
pub use inductive::{inductive_extract, InductiveExtraction};
pub use nice::{extract_nice, verify_nice, NiceFailure, NiceSystem, Section};
pub use product::{extract_product, ProductExtraction};

/// `lift(g)(s) = g(s \ {max s})`.
pub fn lift_coloring(g: &TupleFunction) -> TupleFunction {
    g.lift()
}

use crate::error::Result;
use crate::stream::{Budget, NatStream};

/// Runs the chosen engine.
pub fn extract_with(
    engine: Engine,
    f: &TupleFunction,
    base: &NatStream,
    plan: Plan,
    budget: &Budget,
) -> Result<Convergent> {
    match engine {
        Engine::Cover => extract_convergent(f, base, plan, budget),
        Engine::Inductive => inductive_extract(f, base, plan, budget).map(|x| x.convergent),
        Engine::Product => extract_product(f, base, plan, budget).map(|x| x.convergent),
        Engine::Nice => {
            let sys = extract_nice(f, base, plan, budget)?;
            Ok(Convergent {
                stream: sys.stream.clone(),
                certificate: sys.top,
            })
        }
    }
}
