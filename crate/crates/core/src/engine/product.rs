use alloc::vec::Vec;

use super::certificate::{ConvergenceCertificate, Engine, FuelReport};
use super::convergent::{extract_convergent, recertify, Convergent, Plan};
use super::function::TupleFunction;
use crate::error::{Error, Result};
use crate::space::{Point, Space};
use crate::stream::{pseudo_intersection, Budget, NatStream};

#[derive(Debug, Clone)]
pub struct ProductExtraction {
    pub convergent: Convergent,
    /// One certificate per extracted coordinate, all over the final prefix.
    pub coordinates: Vec<ConvergenceCertificate>,
}

/// Product extractor: coordinate `i` is made convergent inside the stream
/// left by coordinate `i-1`; the diagonal through these streams converges in
/// every coordinate at once. Coordinates past the last level are fixed at the
/// base point of their factor, where the product metric no longer sees them.
pub fn extract_product(
    f: &TupleFunction,
    base: &NatStream,
    plan: Plan,
    budget: &Budget,
) -> Result<ProductExtraction> {
    plan.check(f.arity())?;
    let (dims, countable) = match f.target() {
        Space::Product(spaces) => (spaces.len().min(plan.levels + 1), false),
        Space::Countable(_) => (plan.levels + 1, true),
        other => {
            return Err(Error::InvalidArgument(alloc::format!(
                "product engine needs a product target, got {other}"
            )))
        }
    };
    let mut chain = Vec::with_capacity(dims);
    let mut coordinate_centers = Vec::with_capacity(dims);
    let mut current = base.clone();
    for i in 0..dims {
        let conv = extract_convergent(&f.project(i)?, &current, plan, budget)?;
        coordinate_centers.push(conv.certificate.limit.centers);
        current = conv.stream.clone();
        chain.push(conv.stream);
    }
    let stream = pseudo_intersection(chain, &budget.fuel);
    let prefix = stream.materialize(plan.prefix)?;
    let report = FuelReport::from_budget(budget, stream.fuel_spent());

    let mut coordinates = Vec::with_capacity(dims);
    for (i, centers) in coordinate_centers.iter().enumerate() {
        coordinates.push(recertify(
            &f.project(i)?,
            prefix.clone(),
            centers.clone(),
            Engine::Product,
            report,
        )?);
    }
    let centers = (0..=plan.levels)
        .map(|n| assemble(f.target(), countable, &coordinate_centers, n))
        .collect();
    let certificate = recertify(f, prefix, centers, Engine::Product, report)?;
    Ok(ProductExtraction {
        convergent: Convergent {
            stream,
            certificate,
        },
        coordinates,
    })
}

fn assemble(space: &Space, countable: bool, coordinate_centers: &[Vec<Point>], n: usize) -> Point {
    let known: Vec<Point> = coordinate_centers.iter().map(|c| c[n].clone()).collect();
    match space {
        Space::Countable(inner) if countable => Point::seq(known, inner.base_point()),
        Space::Product(spaces) => {
            let mut coords = known;
            coords.extend(spaces[coords.len()..].iter().map(Space::base_point));
            Point::Tuple(coords)
        }
        _ => unreachable!("checked by caller"),
    }
}
