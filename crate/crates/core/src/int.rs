//! Arbitrary-precision integers with an inline fast path.
//!
//! Interval bounds are almost always small, so [`Int`] keeps values that fit
//! in an `i64` inline and only spills to a heap-allocated [`BigInt`] when an
//! operation overflows. The representation is canonical: a value is stored
//! as `Big` only if it does not fit in an `i64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

/// An arbitrary-precision integer.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Int(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    pub const ZERO: Int = Int(Repr::Small(0));
    pub const ONE: Int = Int(Repr::Small(1));

    pub fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int(Repr::Small(v)),
            None => Int(Repr::Big(Box::new(b))),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match &self.0 {
            Repr::Small(v) => BigInt::from(*v),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(v) => Some(*v),
            Repr::Big(_) => None,
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(v) => v.signum() as i32,
            Repr::Big(b) => match b.sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Int {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// `⌊self / d⌋`. Panics if `d` is zero.
    pub fn div_floor(&self, d: &Int) -> Int {
        assert!(!d.is_zero(), "division by zero");
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &d.0) {
            if !(*a == i64::MIN && *b == -1) {
                return Int(Repr::Small(Integer::div_floor(a, b)));
            }
        }
        Int::from_big(Integer::div_floor(&self.to_big(), &d.to_big()))
    }

    /// `⌈self / d⌉`. Panics if `d` is zero.
    pub fn div_ceil(&self, d: &Int) -> Int {
        -(&(-self)).div_floor(d)
    }

    /// Exact division; the caller guarantees `d` divides `self`.
    pub fn div_exact(&self, d: &Int) -> Int {
        self.div_floor(d)
    }

    pub fn is_multiple_of(&self, d: &Int) -> bool {
        if d.is_zero() {
            return self.is_zero();
        }
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &d.0) {
            if *b != -1 {
                return a % b == 0;
            }
            return true;
        }
        self.to_big().is_multiple_of(&d.to_big())
    }

    pub fn gcd(&self, other: &Int) -> Int {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &other.0) {
            if *a != i64::MIN && *b != i64::MIN {
                return Int(Repr::Small(a.gcd(b)));
            }
        }
        Int::from_big(self.to_big().gcd(&other.to_big()))
    }

    pub fn pow(&self, n: u32) -> Int {
        if let Repr::Small(a) = &self.0 {
            if let Some(v) = a.checked_pow(n) {
                return Int(Repr::Small(v));
            }
        }
        Int::from_big(Pow::pow(self.to_big(), n))
    }

    /// `⌊ⁿ√self⌋` for `self ≥ 0`.
    pub fn nth_root_floor(&self, n: u32) -> Int {
        debug_assert!(!self.is_negative() && n >= 1);
        match &self.0 {
            Repr::Small(v) => Int(Repr::Small(v.nth_root(n))),
            Repr::Big(b) => Int::from_big(b.nth_root(n)),
        }
    }

    /// `⌈ⁿ√self⌉` for `self ≥ 0`.
    pub fn nth_root_ceil(&self, n: u32) -> Int {
        let r = self.nth_root_floor(n);
        if &r.pow(n) == self {
            r
        } else {
            &r + &Int::ONE
        }
    }

    pub fn min(self, other: Int) -> Int {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Int) -> Int {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Default for Int {
    fn default() -> Self {
        Int::ZERO
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int(Repr::Small(v))
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Self {
        Int(Repr::Small(v as i64))
    }
}

impl From<u32> for Int {
    fn from(v: u32) -> Self {
        Int(Repr::Small(v as i64))
    }
}

impl From<usize> for Int {
    fn from(v: usize) -> Self {
        Int::from_big(BigInt::from(v))
    }
}

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Self {
        Int::from_big(v)
    }
}

impl From<&Int> for BigInt {
    fn from(v: &Int) -> Self {
        v.to_big()
    }
}

impl FromStr for Int {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(v) = s.parse::<i64>() {
            return Ok(Int(Repr::Small(v)));
        }
        Ok(Int::from_big(s.parse::<BigInt>()?))
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            // a Big value is always outside the i64 range
            (Repr::Big(a), Repr::Small(_)) => {
                if a.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            (Repr::Small(_), Repr::Big(b)) => {
                if b.is_negative() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            (Repr::Big(a), Repr::Big(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a, 'b> $tr<&'b Int> for &'a Int {
            type Output = Int;
            fn $method(self, rhs: &'b Int) -> Int {
                if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
                    if let Some(v) = a.$checked(*b) {
                        return Int(Repr::Small(v));
                    }
                }
                Int::from_big(self.to_big().$method(rhs.to_big()))
            }
        }
        impl $tr<Int> for Int {
            type Output = Int;
            fn $method(self, rhs: Int) -> Int {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $tr<&'b Int> for Int {
            type Output = Int;
            fn $method(self, rhs: &'b Int) -> Int {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        match &self.0 {
            Repr::Small(v) => match v.checked_neg() {
                Some(n) => Int(Repr::Small(n)),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Repr::Big(b) => Int::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        -&self
    }
}

impl Zero for Int {
    fn zero() -> Self {
        Int::ZERO
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl One for Int {
    fn one() -> Self {
        Int::ONE
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => write!(f, "{v}"),
            Repr::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Int {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match &self.0 {
            Repr::Small(v) => s.serialize_i64(*v),
            Repr::Big(b) => s.serialize_str(&b.to_string()),
        }
    }
}

/// An integer extended with the two infinities; used for interval bounds.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtInt {
    NegInf,
    Fin(Int),
    PosInf,
}

impl ExtInt {
    pub fn fin(&self) -> Option<&Int> {
        match self {
            ExtInt::Fin(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtInt::Fin(_))
    }

    pub fn signum(&self) -> i32 {
        match self {
            ExtInt::NegInf => -1,
            ExtInt::Fin(v) => v.signum(),
            ExtInt::PosInf => 1,
        }
    }

    pub fn neg(&self) -> ExtInt {
        match self {
            ExtInt::NegInf => ExtInt::PosInf,
            ExtInt::Fin(v) => ExtInt::Fin(-v),
            ExtInt::PosInf => ExtInt::NegInf,
        }
    }

    fn inf_with_sign(s: i32) -> ExtInt {
        if s < 0 {
            ExtInt::NegInf
        } else {
            ExtInt::PosInf
        }
    }

    /// Sum of two bounds. `∞ + (−∞)` never arises for bounds of the same side.
    pub fn add(&self, other: &ExtInt) -> ExtInt {
        match (self, other) {
            (ExtInt::Fin(a), ExtInt::Fin(b)) => ExtInt::Fin(a + b),
            (ExtInt::Fin(_), inf) | (inf, ExtInt::Fin(_)) => inf.clone(),
            (a, b) => {
                debug_assert!(a == b, "adding opposite infinities");
                a.clone()
            }
        }
    }

    /// Product of two bounds with `0 · ∞ = 0`, the convention that makes the
    /// endpoint products of intervals give the correct infimum and supremum.
    pub fn mul(&self, other: &ExtInt) -> ExtInt {
        match (self, other) {
            (ExtInt::Fin(a), ExtInt::Fin(b)) => ExtInt::Fin(a * b),
            _ => {
                let s = self.signum() * other.signum();
                if s == 0 {
                    ExtInt::Fin(Int::ZERO)
                } else {
                    ExtInt::inf_with_sign(s)
                }
            }
        }
    }

    pub fn pow(&self, n: u32) -> ExtInt {
        match self {
            ExtInt::Fin(v) => ExtInt::Fin(v.pow(n)),
            ExtInt::PosInf => ExtInt::PosInf,
            ExtInt::NegInf => {
                if n % 2 == 0 {
                    ExtInt::PosInf
                } else {
                    ExtInt::NegInf
                }
            }
        }
    }
}

impl From<Int> for ExtInt {
    fn from(v: Int) -> Self {
        ExtInt::Fin(v)
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> Self {
        ExtInt::Fin(Int::from(v))
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => f.write_str("-inf"),
            ExtInt::Fin(v) => write!(f, "{v}"),
            ExtInt::PosInf => f.write_str("+inf"),
        }
    }
}

impl fmt::Debug for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
