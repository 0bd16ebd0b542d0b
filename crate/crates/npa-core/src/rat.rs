//! Exact rational scalars.
//!
//! Every weight, probability and metric value in this crate is a [`Rat`]:
//! an arbitrary-precision rational kept in lowest terms with a positive
//! denominator. There is no floating point anywhere in the library; decimal
//! output is rendering only.
//!
//! Values that fit in machine words are stored inline and computed with
//! 128-bit intermediates; anything larger falls back to big-integer
//! rationals. The representation is canonical (inline whenever possible),
//! so structural equality, ordering and hashing agree with the values.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// An exact rational number.
#[derive(Clone)]
pub struct Rat(Repr);

#[derive(Clone)]
enum Repr {
    /// Lowest terms, denominator positive.
    Small(i64, i64),
    /// Lowest terms, denominator positive, out of `Small` range.
    Big(Box<BigRational>),
}

/// Error parsing a rational from its textual `p/q` (or integer `p`) form.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatParseError {
    #[error("invalid rational {0:?}")]
    Invalid(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Canonical value from 128-bit intermediates; `den` must be nonzero.
/// Inputs here never reach `i128::MIN`, since they are sums of products of
/// `i64`s.
fn from_i128(num: i128, den: i128) -> Rat {
    debug_assert!(den != 0);
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    let g = gcd_u128(num.unsigned_abs(), den as u128);
    let (num, den) = if g > 1 {
        (num / g as i128, den / g as i128)
    } else {
        (num, den)
    };
    match (i64::try_from(num), i64::try_from(den)) {
        (Ok(n), Ok(d)) => Rat(Repr::Small(n, d)),
        _ => Rat(Repr::Big(Box::new(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))),
    }
}

/// Canonical value from a big rational: demoted to the inline form when it
/// fits.
fn from_big(r: BigRational) -> Rat {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Rat(Repr::Small(n, d)),
        _ => Rat(Repr::Big(Box::new(r))),
    }
}

impl Rat {
    /// `numer / denom`, reduced. Panics if `denom` is zero.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        from_big(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        from_big(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rat(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rat(Repr::Small(1, 1))
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n == 0,
            Repr::Big(_) => false,
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    /// True iff the value lies in the closed unit interval.
    pub fn is_probability(&self) -> bool {
        !self.is_negative() && *self <= Rat::one()
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = Rat::one();
        for _ in 0..exp {
            out = out * self;
        }
        out
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => (**r).clone(),
        }
    }

    /// Decimal rendering with `digits` fractional digits, rounded half away
    /// from zero. Display only; never used in computation.
    pub fn to_decimal(&self, digits: usize) -> String {
        let sign = if self.is_negative() { "-" } else { "" };
        let scale = BigInt::from(10).pow(digits as u32);
        // round(|x| * 10^digits) = floor((2*|numer|*scale + denom) / (2*denom))
        let numer = self.numer().abs();
        let denom = self.denom();
        let scaled = (BigInt::from(2) * numer * scale + &denom) / (BigInt::from(2) * denom);
        let s = scaled.to_string();
        if digits == 0 {
            return format!("{sign}{s}");
        }
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int_part, frac_part) = s.split_at(s.len() - digits);
        format!("{sign}{int_part}.{frac_part}")
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Self) -> bool {
        // Both variants are canonical, so equal values share a variant.
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Hash for Rat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // Canonical representation makes hashing by numerator/denominator
        // digits consistent with equality across variants.
        self.numer().hash(state);
        self.denom().hash(state);
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = RatParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = || RatParseError::Invalid(s.to_string());
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s).map_err(|_| invalid())?;
                Ok(Rat::from_int(n))
            }
            Some((n, d)) => {
                let n = BigInt::from_str(n).map_err(|_| invalid())?;
                let d = BigInt::from_str(d).map_err(|_| invalid())?;
                if d.is_zero() {
                    return Err(RatParseError::ZeroDenominator(s.to_string()));
                }
                Ok(Rat::new(n, d))
            }
        }
    }
}

fn add_rats(x: &Rat, y: &Rat) -> Rat {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            let num = *a as i128 * *d as i128 + *c as i128 * *b as i128;
            let den = *b as i128 * *d as i128;
            from_i128(num, den)
        }
        _ => from_big(x.to_big() + y.to_big()),
    }
}

fn sub_rats(x: &Rat, y: &Rat) -> Rat {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            let num = *a as i128 * *d as i128 - *c as i128 * *b as i128;
            let den = *b as i128 * *d as i128;
            from_i128(num, den)
        }
        _ => from_big(x.to_big() - y.to_big()),
    }
}

fn mul_rats(x: &Rat, y: &Rat) -> Rat {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
        }
        _ => from_big(x.to_big() * y.to_big()),
    }
}

fn div_rats(x: &Rat, y: &Rat) -> Rat {
    match (&x.0, &y.0) {
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            assert!(*c != 0, "division by zero");
            from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128)
        }
        _ => from_big(x.to_big() / y.to_big()),
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $func:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                $func(&self, &rhs)
            }
        }
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                $func(self, rhs)
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                $func(&self, rhs)
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                $func(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_rats);
forward_binop!(Sub, sub, sub_rats);
forward_binop!(Mul, mul, mul_rats);
forward_binop!(Div, div, div_rats);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => from_i128(-(*n as i128), *d as i128),
            Repr::Big(r) => from_big(-(**r).clone()),
        }
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        *self = add_rats(self, rhs);
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        *self = sub_rats(self, rhs);
    }
}

impl std::iter::Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}
