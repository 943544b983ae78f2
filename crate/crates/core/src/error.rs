use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::space::Point;

/// Which budget ran dry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resource {
    /// A stream hit `Fuel::max_materialize`.
    Materialize,
    /// The shared oracle counter hit `Fuel::max_oracle_calls`.
    OracleCalls,
    /// A stream backed by a finite list was asked for more than it holds.
    FiniteSource,
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Resource::Materialize => "materialization limit",
            Resource::OracleCalls => "oracle-call limit",
            Resource::FiniteSource => "end of finite source",
        })
    }
}

/// Partial progress carried by [`Error::FuelExhausted`].
#[derive(Debug, Clone, PartialEq)]
pub struct Exhaustion {
    pub resource: Resource,
    /// Deepest cover level whose extraction finished, if any.
    pub deepest_level: Option<usize>,
    /// Limit centers of the finished levels.
    pub centers: Vec<Point>,
    /// Materialized prefix of the stream that was being extended.
    pub prefix: Vec<u64>,
    /// Colors seen in the last scan window of a pigeonhole pass.
    pub live_colors: Vec<u64>,
}

impl Exhaustion {
    pub fn new(resource: Resource) -> Self {
        Exhaustion {
            resource,
            deepest_level: None,
            centers: Vec::new(),
            prefix: Vec::new(),
            live_colors: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("fuel exhausted ({})", .0.resource)]
    FuelExhausted(Box<Exhaustion>),
    #[error(
        "chain violation: element {element} of link {link} is missing from link {missing_from}"
    )]
    ChainViolation {
        link: usize,
        missing_from: usize,
        element: u64,
    },
    #[error("point does not belong to the space")]
    SpaceMismatch,
    #[error("point is not covered by any center at level {level}")]
    NotCovered { level: usize },
    #[error("cover at level {level} has more than 2^64 centers")]
    CoverTooLarge { level: usize },
    #[error("evaluation failed: {0}")]
    Eval(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("insufficient length: need at least {needed}, found {found}")]
    InsufficientLength { needed: usize, found: usize },
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("type error: {0}")]
    Type(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("stream produced {got} after {last}; streams must be strictly increasing")]
    NotIncreasing { last: u64, got: u64 },
}

impl Error {
    pub fn exhausted(resource: Resource) -> Self {
        Error::FuelExhausted(Box::new(Exhaustion::new(resource)))
    }

    pub fn is_fuel_exhausted(&self) -> bool {
        matches!(self, Error::FuelExhausted(_))
    }

    /// Records the deepest finished level on a fuel error; other errors
    /// pass through.
    pub(crate) fn at_level(mut self, level: Option<usize>, centers: &[Point]) -> Self {
        if let Error::FuelExhausted(ex) = &mut self {
            if ex.deepest_level.is_none() {
                ex.deepest_level = level;
                ex.centers = centers.to_vec();
            }
        }
        self
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
