//! Exact dyadic rationals `m / 2^e`.
//!
//! Every metric value in the crate is a [`Dyadic`], so certificate checks
//! reduce to integer comparisons.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact dyadic rational in canonical form: the numerator is odd, or
/// the value is zero with exponent zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            num: BigInt::one(),
            exp: 0,
        }
    }

    /// `num / 2^exp`, normalized.
    pub fn new(num: impl Into<BigInt>, exp: u64) -> Self {
        let mut d = Dyadic {
            num: num.into(),
            exp,
        };
        d.normalize();
        d
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(n, 0)
    }

    /// `2^{-k}`.
    pub fn pow2_neg(k: u64) -> Self {
        Dyadic {
            num: BigInt::one(),
            exp: k,
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            num: self.num.abs(),
            exp: self.exp,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Largest integer `j` with `j <= self * 2^shift`.
    pub fn floor_scaled(&self, shift: u64) -> BigInt {
        if shift >= self.exp {
            &self.num << (shift - self.exp) as usize
        } else {
            self.num
                .div_floor(&(BigInt::one() << (self.exp - shift) as usize))
        }
    }

    /// Smallest integer `j` with `j >= self * 2^shift`.
    pub fn ceil_scaled(&self, shift: u64) -> BigInt {
        if shift >= self.exp {
            &self.num << (shift - self.exp) as usize
        } else {
            self.num
                .div_ceil(&(BigInt::one() << (self.exp - shift) as usize))
        }
    }

    /// Returns the value as `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.exp == 0 {
            self.num.to_i64()
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0).min(self.exp);
        if tz > 0 {
            self.num >>= tz as usize;
            self.exp -= tz;
        }
    }

    /// Brings both numerators to the common exponent `max(e1, e2)`.
    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u64) {
        match self.exp.cmp(&other.exp) {
            Ordering::Equal => (self.num.clone(), other.num.clone(), self.exp),
            Ordering::Less => (
                &self.num << (other.exp - self.exp) as usize,
                other.num.clone(),
                other.exp,
            ),
            Ordering::Greater => (
                self.num.clone(),
                &other.num << (self.exp - other.exp) as usize,
                self.exp,
            ),
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else if self.exp <= 64 {
            write!(f, "{}/{}", self.num, BigInt::one() << self.exp as usize)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed dyadic literal `{0}`")]
pub struct ParseDyadicError(pub String);

impl core::str::FromStr for Dyadic {
    type Err = ParseDyadicError;

    /// Accepts `n`, `n/d` with `d` a power of two, and `n/2^e`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseDyadicError(String::from(s));
        let s = s.trim();
        let Some((n, d)) = s.split_once('/') else {
            let num: BigInt = s.parse().map_err(|_| bad())?;
            return Ok(Dyadic::new(num, 0));
        };
        let num: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d = d.trim();
        let exp = if let Some(e) = d.strip_prefix("2^") {
            e.parse::<u64>().map_err(|_| bad())?
        } else {
            let den: u64 = d.parse().map_err(|_| bad())?;
            if den == 0 || !den.is_power_of_two() {
                return Err(bad());
            }
            den.trailing_zeros() as u64
        };
        Ok(Dyadic::new(num, exp))
    }
}
