//! Built-in compact metric spaces with dyadic-valued metrics.
//!
//! Each space admits, for every level `n`, a finite cover by closed balls of
//! radius `2^{-n}`. Covers are indexed lexicographically and located
//! analytically; the induced coloring `p ↦ locate(p)` is first-match over
//! that order.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Space {
    /// `[0,1]^d` with the max metric.
    UnitCube(usize),
    /// ℕ ∪ {∞} with `d(m,n) = |2^{-m} - 2^{-n}|`, `d(m,∞) = 2^{-m}`.
    OmegaPlusOne,
    /// `{0,1}^ℕ` with `d(x,y) = 2^{-i}`, `i` the first index where they differ.
    Cantor,
    /// `k` points at mutual distance 1.
    Discrete(u64),
    /// Finite product with `d = sup_i min(2^{-i}, d_i)`.
    Product(Vec<Space>),
    /// Countable power `X^ℕ` with the same clamped sup metric.
    Countable(Box<Space>),
}

/// A point of some [`Space`]. Constructors keep eventually-constant
/// representations canonical so that `==` agrees with distance zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Cube(Vec<Dyadic>),
    Nat(u64),
    Inf,
    /// Cantor point: explicit prefix, then `tail` forever.
    Bits {
        prefix: Vec<bool>,
        tail: bool,
    },
    Discrete(u64),
    Tuple(Vec<Point>),
    /// Countable-product point: explicit coordinates, then `tail` forever.
    Seq {
        coords: Vec<Point>,
        tail: Box<Point>,
    },
}

impl Point {
    pub fn scalar(x: Dyadic) -> Self {
        Point::Cube(vec![x])
    }

    pub fn bits(mut prefix: Vec<bool>, tail: bool) -> Self {
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        Point::Bits { prefix, tail }
    }

    pub fn seq(mut coords: Vec<Point>, tail: Point) -> Self {
        while coords.last() == Some(&tail) {
            coords.pop();
        }
        Point::Seq {
            coords,
            tail: Box::new(tail),
        }
    }

    /// Coordinate `i` of a `Tuple` or `Seq` point.
    pub fn coordinate(&self, i: usize) -> Option<&Point> {
        match self {
            Point::Tuple(cs) => cs.get(i),
            Point::Seq { coords, tail } => Some(coords.get(i).unwrap_or(tail)),
            _ => None,
        }
    }

    fn bit(prefix: &[bool], tail: bool, i: usize) -> bool {
        prefix.get(i).copied().unwrap_or(tail)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, items: &[impl fmt::Display]) -> fmt::Result {
            f.write_str("(")?;
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        }
        match self {
            Point::Cube(xs) if xs.len() == 1 => write!(f, "{}", xs[0]),
            Point::Cube(xs) => list(f, xs),
            Point::Nat(n) | Point::Discrete(n) => write!(f, "{n}"),
            Point::Inf => f.write_str("∞"),
            Point::Bits { prefix, tail } => {
                for &b in prefix {
                    f.write_str(if b { "1" } else { "0" })?;
                }
                write!(f, "({})^ω", u8::from(*tail))
            }
            Point::Tuple(cs) => list(f, cs),
            Point::Seq { coords, tail } => {
                f.write_str("[")?;
                for c in coords {
                    write!(f, "{c}, ")?;
                }
                write!(f, "{tail}…]")
            }
        }
    }
}

fn clamp_exp(i: usize) -> Dyadic {
    Dyadic::pow2_neg(i as u64)
}

impl Space {
    /// Whether `p` is a point of this space.
    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (Space::UnitCube(d), Point::Cube(xs)) => {
                xs.len() == *d && xs.iter().all(|x| !x.is_negative() && *x <= Dyadic::one())
            }
            (Space::OmegaPlusOne, Point::Nat(_) | Point::Inf) => true,
            (Space::Cantor, Point::Bits { .. }) => true,
            (Space::Discrete(k), Point::Discrete(x)) => x < k,
            (Space::Product(spaces), Point::Tuple(cs)) => {
                spaces.len() == cs.len() && spaces.iter().zip(cs).all(|(s, c)| s.contains(c))
            }
            (Space::Countable(x), Point::Seq { coords, tail }) => {
                x.contains(tail) && coords.iter().all(|c| x.contains(c))
            }
            _ => false,
        }
    }

    /// Exact distance between two points of this space.
    pub fn distance(&self, p: &Point, q: &Point) -> Result<Dyadic> {
        if !self.contains(p) || !self.contains(q) {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.distance_unchecked(p, q))
    }

    fn distance_unchecked(&self, p: &Point, q: &Point) -> Dyadic {
        match (self, p, q) {
            (Space::UnitCube(_), Point::Cube(xs), Point::Cube(ys)) => xs
                .iter()
                .zip(ys)
                .map(|(x, y)| (x - y).abs())
                .fold(Dyadic::zero(), Dyadic::max),
            (Space::OmegaPlusOne, a, b) => match (a, b) {
                (Point::Nat(m), Point::Nat(n)) => {
                    (&Dyadic::pow2_neg(*m) - &Dyadic::pow2_neg(*n)).abs()
                }
                (Point::Nat(m), Point::Inf) | (Point::Inf, Point::Nat(m)) => Dyadic::pow2_neg(*m),
                _ => Dyadic::zero(),
            },
            (
                Space::Cantor,
                Point::Bits {
                    prefix: px,
                    tail: tx,
                },
                Point::Bits {
                    prefix: py,
                    tail: ty,
                },
            ) => {
                let span = px.len().max(py.len());
                let first = (0..span)
                    .find(|&i| Point::bit(px, *tx, i) != Point::bit(py, *ty, i))
                    .or(if tx != ty { Some(span) } else { None });
                first.map_or_else(Dyadic::zero, clamp_exp)
            }
            (Space::Discrete(_), a, b) => {
                if a == b {
                    Dyadic::zero()
                } else {
                    Dyadic::one()
                }
            }
            (Space::Product(spaces), Point::Tuple(xs), Point::Tuple(ys)) => spaces
                .iter()
                .zip(xs.iter().zip(ys))
                .enumerate()
                .map(|(i, (s, (x, y)))| s.distance_unchecked(x, y).min(clamp_exp(i)))
                .fold(Dyadic::zero(), Dyadic::max),
            (
                Space::Countable(inner),
                Point::Seq {
                    coords: cx,
                    tail: tx,
                },
                Point::Seq {
                    coords: cy,
                    tail: ty,
                },
            ) => {
                let span = cx.len().max(cy.len());
                let head = (0..span)
                    .map(|i| {
                        let x = cx.get(i).unwrap_or(tx);
                        let y = cy.get(i).unwrap_or(ty);
                        inner.distance_unchecked(x, y).min(clamp_exp(i))
                    })
                    .fold(Dyadic::zero(), Dyadic::max);
                head.max(inner.distance_unchecked(tx, ty).min(clamp_exp(span)))
            }
            _ => unreachable!("membership checked by caller"),
        }
    }

    /// A fixed point used for coordinates a cover leaves free.
    pub fn base_point(&self) -> Point {
        match self {
            Space::UnitCube(d) => Point::Cube(vec![Dyadic::zero(); *d]),
            Space::OmegaPlusOne => Point::Inf,
            Space::Cantor => Point::bits(Vec::new(), false),
            Space::Discrete(_) => Point::Discrete(0),
            Space::Product(spaces) => Point::Tuple(spaces.iter().map(Space::base_point).collect()),
            Space::Countable(inner) => Point::seq(Vec::new(), inner.base_point()),
        }
    }

    /// Number of centers at level `n`.
    fn cover_len(&self, n: usize) -> Result<u128> {
        let too_large = || Error::CoverTooLarge { level: n };
        let side = |n: usize| -> Result<u128> {
            1u128
                .checked_shl(n as u32)
                .filter(|_| n < 64)
                .map(|s| s + 1)
                .ok_or_else(too_large)
        };
        let len = match self {
            Space::UnitCube(d) => {
                let s = side(n)?;
                (0..*d)
                    .try_fold(1u128, |acc, _| acc.checked_mul(s))
                    .ok_or_else(too_large)?
            }
            Space::OmegaPlusOne => n as u128 + 1,
            Space::Cantor => {
                if n >= 64 {
                    return Err(too_large());
                }
                1u128 << n
            }
            Space::Discrete(k) => *k as u128,
            Space::Product(spaces) => {
                let mut acc = 1u128;
                for s in spaces.iter().take(n) {
                    acc = acc.checked_mul(s.cover_len(n)?).ok_or_else(too_large)?;
                }
                acc
            }
            Space::Countable(inner) => {
                let per = inner.cover_len(n)?;
                (0..n)
                    .try_fold(1u128, |acc, _| acc.checked_mul(per))
                    .ok_or_else(too_large)?
            }
        };
        if len > u64::MAX as u128 {
            return Err(too_large());
        }
        Ok(len)
    }

    /// Center number `idx` of the level-`n` cover.
    fn cover_center(&self, n: usize, idx: u64) -> Point {
        match self {
            Space::UnitCube(d) => {
                let side = (1u64 << n) + 1;
                let mut digits = vec![0u64; *d];
                let mut rest = idx;
                for slot in digits.iter_mut().rev() {
                    *slot = rest % side;
                    rest /= side;
                }
                Point::Cube(
                    digits
                        .into_iter()
                        .map(|j| Dyadic::new(j, n as u64))
                        .collect(),
                )
            }
            Space::OmegaPlusOne => {
                if (idx as usize) < n {
                    Point::Nat(idx)
                } else {
                    Point::Inf
                }
            }
            Space::Cantor => {
                let prefix = (0..n).map(|i| (idx >> (n - 1 - i)) & 1 == 1).collect();
                Point::bits(prefix, false)
            }
            Space::Discrete(_) => Point::Discrete(idx),
            Space::Product(spaces) => {
                let radices: Vec<u64> = spaces
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        if i < n {
                            s.cover_len(n).unwrap_or(1) as u64
                        } else {
                            1
                        }
                    })
                    .collect();
                let digits = mixed_radix_decode(idx, &radices);
                Point::Tuple(
                    spaces
                        .iter()
                        .zip(digits)
                        .enumerate()
                        .map(|(i, (s, j))| {
                            if i < n {
                                s.cover_center(n, j)
                            } else {
                                s.base_point()
                            }
                        })
                        .collect(),
                )
            }
            Space::Countable(inner) => {
                let per = inner.cover_len(n).unwrap_or(1) as u64;
                let digits = mixed_radix_decode(idx, &vec![per; n]);
                Point::seq(
                    digits
                        .into_iter()
                        .map(|j| inner.cover_center(n, j))
                        .collect(),
                    inner.base_point(),
                )
            }
        }
    }

    /// Index of the first level-`n` center whose closed ball contains `p`.
    fn cover_locate(&self, n: usize, p: &Point) -> u64 {
        match (self, p) {
            (Space::UnitCube(_), Point::Cube(xs)) => {
                let side = (1u64 << n) + 1;
                xs.iter().fold(0u64, |acc, x| {
                    let j = (x.ceil_scaled(n as u64) - BigInt::from(1u8)).max(BigInt::zero());
                    acc * side + j.to_u64().unwrap_or(0)
                })
            }
            (Space::OmegaPlusOne, Point::Nat(m)) => {
                let m = *m as usize;
                if m < n {
                    m as u64
                } else if m == n && n > 0 {
                    (n - 1) as u64
                } else {
                    n as u64
                }
            }
            (Space::OmegaPlusOne, _) => n as u64,
            (Space::Cantor, Point::Bits { prefix, tail }) => (0..n).fold(0u64, |acc, i| {
                (acc << 1) | u64::from(Point::bit(prefix, *tail, i))
            }),
            (Space::Discrete(_), Point::Discrete(x)) => {
                if n == 0 {
                    0
                } else {
                    *x
                }
            }
            (Space::Product(spaces), Point::Tuple(cs)) => {
                spaces.iter().zip(cs).take(n).fold(0u64, |acc, (s, c)| {
                    acc * s.cover_len(n).unwrap_or(1) as u64 + s.cover_locate(n, c)
                })
            }
            (Space::Countable(inner), Point::Seq { .. }) => {
                let per = inner.cover_len(n).unwrap_or(1) as u64;
                (0..n).fold(0u64, |acc, i| {
                    acc * per + inner.cover_locate(n, p.coordinate(i).expect("seq coordinate"))
                })
            }
            _ => unreachable!("membership checked by caller"),
        }
    }

    /// The level-`n` cover by closed balls of radius `2^{-n}`.
    pub fn cover(&self, n: usize) -> Result<CoverLevel> {
        let len = self.cover_len(n)? as u64;
        Ok(CoverLevel {
            level: n,
            space: self.clone(),
            len,
        })
    }
}

fn mixed_radix_decode(mut idx: u64, radices: &[u64]) -> Vec<u64> {
    let mut digits = vec![0u64; radices.len()];
    for (slot, &r) in digits.iter_mut().zip(radices).rev() {
        *slot = idx % r.max(1);
        idx /= r.max(1);
    }
    digits
}

/// A finite cover of a space by balls of radius `2^{-level}`.
///
/// Centers are produced on demand; `len` is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverLevel {
    pub level: usize,
    pub space: Space,
    len: u64,
}

impl CoverLevel {
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn radius(&self) -> Dyadic {
        Dyadic::pow2_neg(self.level as u64)
    }

    pub fn center(&self, idx: u64) -> Option<Point> {
        (idx < self.len).then(|| self.space.cover_center(self.level, idx))
    }

    pub fn centers(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len).map(|i| self.space.cover_center(self.level, i))
    }

    /// First center (in list order) whose ball contains `p`: the induced
    /// coloring of the space at this level.
    pub fn locate(&self, p: &Point) -> Result<u64> {
        if !self.space.contains(p) {
            return Err(Error::SpaceMismatch);
        }
        let idx = self.space.cover_locate(self.level, p);
        match self.center(idx) {
            Some(c) if self.space.distance_unchecked(p, &c) <= self.radius() => Ok(idx),
            _ => Err(Error::NotCovered { level: self.level }),
        }
    }

    /// Reference implementation of [`CoverLevel::locate`]: scan every center.
    pub fn locate_by_scan(&self, p: &Point) -> Result<u64> {
        if !self.space.contains(p) {
            return Err(Error::SpaceMismatch);
        }
        let r = self.radius();
        self.centers()
            .position(|c| self.space.distance_unchecked(p, &c) <= r)
            .map(|i| i as u64)
            .ok_or(Error::NotCovered { level: self.level })
    }
}

/// A limit point given by one cover center per level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocatedLimit {
    pub centers: Vec<Point>,
}

impl LocatedLimit {
    pub fn new(centers: Vec<Point>) -> Self {
        LocatedLimit { centers }
    }

    pub fn max_level(&self) -> Option<usize> {
        self.centers.len().checked_sub(1)
    }

    pub fn at(&self, n: usize) -> Option<&Point> {
        self.centers.get(n)
    }

    /// First level `n` with `d(c_n, c_{n+1}) > 2^{-n} + 2^{-(n+1)}`.
    pub fn modulus_violation(&self, space: &Space) -> Result<Option<usize>> {
        for (n, w) in self.centers.windows(2).enumerate() {
            let bound = &Dyadic::pow2_neg(n as u64) + &Dyadic::pow2_neg(n as u64 + 1);
            if space.distance(&w[0], &w[1])? > bound {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::UnitCube(d) => write!(f, "unit-cube:{d}"),
            Space::OmegaPlusOne => f.write_str("omega1"),
            Space::Cantor => f.write_str("cantor"),
            Space::Discrete(k) => write!(f, "discrete:{k}"),
            Space::Product(spaces) => {
                f.write_str("product(")?;
                for (i, s) in spaces.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_str(")")
            }
            Space::Countable(inner) => write!(f, "countable({inner})"),
        }
    }
}

impl FromStr for Space {
    type Err = Error;

    /// Parses descriptors such as `unit-cube:2`, `omega1`, `cantor`,
    /// `discrete:3`, `product(omega1,omega1)` and `countable(unit-cube:1)`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = DescriptorParser {
            src: compact.as_bytes(),
            pos: 0,
        };
        let space = p.space()?;
        if p.pos != p.src.len() {
            return Err(p.fail());
        }
        Ok(space)
    }
}

struct DescriptorParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl DescriptorParser<'_> {
    fn fail(&self) -> Error {
        Error::InvalidArgument(alloc::format!(
            "bad space descriptor `{}` at offset {}",
            String::from_utf8_lossy(self.src),
            self.pos
        ))
    }

    fn word(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'-')
        {
            self.pos += 1;
        }
        core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64> {
        if !self.eat(b':') {
            return Err(self.fail());
        }
        let w = self.word().to_string();
        w.parse().map_err(|_| self.fail())
    }

    fn space(&mut self) -> Result<Space> {
        let w = self.word().to_string();
        match w.as_str() {
            "unit-cube" => {
                let d = self.number()?;
                if d == 0 {
                    return Err(self.fail());
                }
                Ok(Space::UnitCube(d as usize))
            }
            "omega1" | "omega+1" => Ok(Space::OmegaPlusOne),
            "cantor" => Ok(Space::Cantor),
            "discrete" => {
                let k = self.number()?;
                if k == 0 {
                    return Err(self.fail());
                }
                Ok(Space::Discrete(k))
            }
            "product" => {
                if !self.eat(b'(') {
                    return Err(self.fail());
                }
                let mut parts = vec![self.space()?];
                while self.eat(b',') {
                    parts.push(self.space()?);
                }
                if !self.eat(b')') {
                    return Err(self.fail());
                }
                Ok(Space::Product(parts))
            }
            "countable" => {
                if !self.eat(b'(') {
                    return Err(self.fail());
                }
                let inner = self.space()?;
                if !self.eat(b')') {
                    return Err(self.fail());
                }
                Ok(Space::Countable(Box::new(inner)))
            }
            _ => Err(self.fail()),
        }
    }
}
