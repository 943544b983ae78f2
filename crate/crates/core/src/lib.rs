//! Certified convergent-subsequence extraction for functions `[ℕ]^r → K`
//! into compact metric spaces.
//!
//! Infinite subsets of ℕ are modeled as lazy [`NatStream`]s under an
//! explicit [`Fuel`] budget. Extractors return a [`ConvergenceCertificate`]
//! that [`verify_certificate`] re-checks by exhaustive enumeration with
//! exact dyadic arithmetic.

#![no_std]

extern crate alloc;

pub mod dsl;
pub mod dyadic;
pub mod engine;
pub mod error;
pub mod fin;
pub mod fixtures;
pub mod ramsey;
pub mod space;
pub mod stream;
pub mod subsets;

pub use dyadic::Dyadic;
pub use engine::{
    extract_convergent, extract_nice, extract_product, extract_with, inductive_extract,
    lift_coloring, verify_certificate, verify_nice, ConvergenceCertificate, Convergent, Engine,
    NiceSystem, Plan, TupleFunction, Verdict,
};
pub use error::{Error, Exhaustion, Resource, Result};
pub use ramsey::{
    almost_homogeneous_family, find_homogeneous_exact, homogeneity_counterexample,
    infinite_ramsey_extract, Coloring, HomogeneityWitness, Homogeneous,
};
pub use space::{CoverLevel, LocatedLimit, Point, Space};
pub use stream::{pseudo_intersection, Budget, Chain, Fuel, LazyChain, NatStream};
