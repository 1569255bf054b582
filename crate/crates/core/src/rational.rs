//! Exact rational intervals, used when fraction simplification leaves
//! non-integer bounds.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, Signed, ToPrimitive, Zero};

use crate::int::{ExtInt, Int};
use crate::interval::IntegerInterval;

/// An exact rational number. Values whose numerator and denominator fit in
/// an `i128` are kept inline; the representation is canonical.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Rational(Q);

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Q {
    Small(Ratio<i128>),
    Big(BigRational),
}

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
        Rational::from_big(BigRational::new(num.into(), den.into()))
    }

    pub fn from_int(v: &Int) -> Rational {
        match v.to_i64() {
            Some(x) => Rational(Q::Small(Ratio::from_integer(x as i128))),
            None => Rational::from_big(BigRational::from_integer(v.to_big())),
        }
    }

    fn from_big(q: BigRational) -> Rational {
        match (q.numer().to_i128(), q.denom().to_i128()) {
            (Some(n), Some(d)) => Rational(Q::Small(Ratio::new_raw(n, d))),
            _ => Rational(Q::Big(q)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Q::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Q::Big(q) => q.clone(),
        }
    }

    pub fn zero() -> Rational {
        Rational(Q::Small(Ratio::zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == 0
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Q::Small(r) => r.numer().signum() as i32,
            Q::Big(q) => {
                if q.is_zero() {
                    0
                } else if q.is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }

    fn add(&self, o: &Rational) -> Rational {
        if let (Q::Small(a), Q::Small(b)) = (&self.0, &o.0) {
            if let Some(r) = a.checked_add(b) {
                return Rational(Q::Small(r));
            }
        }
        Rational::from_big(self.to_big() + o.to_big())
    }

    /// `self / o` with `o ≠ 0`.
    fn div(&self, o: &Rational) -> Rational {
        if let (Q::Small(a), Q::Small(b)) = (&self.0, &o.0) {
            if let Some(r) = a.checked_div(b) {
                return Rational(Q::Small(r));
            }
        }
        Rational::from_big(self.to_big() / o.to_big())
    }

    pub fn floor(&self) -> Int {
        match &self.0 {
            Q::Small(r) => Int::from_big(BigInt::from(r.floor().to_integer())),
            Q::Big(q) => Int::from_big(q.floor().to_integer()),
        }
    }

    pub fn ceil(&self) -> Int {
        match &self.0 {
            Q::Small(r) => Int::from_big(BigInt::from(r.ceil().to_integer())),
            Q::Big(q) => Int::from_big(q.ceil().to_integer()),
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, o: &Rational) -> Ordering {
        match (&self.0, &o.0) {
            (Q::Small(a), Q::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, o: &Rational) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Q::Small(r) => write!(f, "{r}"),
            Q::Big(q) => write!(f, "{q}"),
        }
    }
}

/// A rational number or an infinity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum QBound {
    NegInf,
    Fin(Rational),
    PosInf,
}

impl QBound {
    fn signum(&self) -> i32 {
        match self {
            QBound::NegInf => -1,
            QBound::PosInf => 1,
            QBound::Fin(q) => q.signum(),
        }
    }

    fn add(&self, o: &QBound) -> QBound {
        match (self, o) {
            (QBound::Fin(a), QBound::Fin(b)) => QBound::Fin(a.add(b)),
            (QBound::Fin(_), inf) | (inf, _) => inf.clone(),
        }
    }

    /// `p / q` with `q ≠ 0`; a finite value over an infinity is 0.
    fn quot(p: &QBound, q: &QBound) -> QBound {
        match (p, q) {
            (QBound::Fin(a), QBound::Fin(b)) => QBound::Fin(a.div(b)),
            (QBound::Fin(_), _) => QBound::Fin(Rational::zero()),
            _ if p.signum() * q.signum() < 0 => QBound::NegInf,
            _ => QBound::PosInf,
        }
    }

    pub fn floor(&self) -> ExtInt {
        match self {
            QBound::Fin(q) => ExtInt::Fin(q.floor()),
            QBound::NegInf => ExtInt::NegInf,
            QBound::PosInf => ExtInt::PosInf,
        }
    }

    pub fn ceil(&self) -> ExtInt {
        match self {
            QBound::Fin(q) => ExtInt::Fin(q.ceil()),
            QBound::NegInf => ExtInt::NegInf,
            QBound::PosInf => ExtInt::PosInf,
        }
    }
}

impl From<&ExtInt> for QBound {
    fn from(x: &ExtInt) -> QBound {
        match x {
            ExtInt::NegInf => QBound::NegInf,
            ExtInt::PosInf => QBound::PosInf,
            ExtInt::Fin(v) => QBound::Fin(Rational::from_int(v)),
        }
    }
}

impl fmt::Display for QBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QBound::NegInf => f.write_str("-inf"),
            QBound::PosInf => f.write_str("+inf"),
            QBound::Fin(q) => write!(f, "{q}"),
        }
    }
}

/// Which side of a rational interval to turn into an integer half-line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `{x ∈ ℤ | x ≤ sup}`
    AtMost,
    /// `{x ∈ ℤ | x ≥ inf}`
    AtLeast,
}

/// A closed interval of rationals, possibly unbounded or empty.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    lo: QBound,
    hi: QBound,
}

impl RationalInterval {
    pub fn empty() -> RationalInterval {
        RationalInterval { lo: QBound::PosInf, hi: QBound::NegInf }
    }

    pub fn unbounded() -> RationalInterval {
        RationalInterval { lo: QBound::NegInf, hi: QBound::PosInf }
    }

    pub fn new(lo: QBound, hi: QBound) -> RationalInterval {
        if lo > hi || lo == QBound::PosInf || hi == QBound::NegInf {
            RationalInterval::empty()
        } else {
            RationalInterval { lo, hi }
        }
    }

    /// `[a/b, c/d]` from machine integers; handy in tests.
    pub fn ratio(a: i64, b: i64, c: i64, d: i64) -> RationalInterval {
        let q = |n: i64, m: i64| QBound::Fin(Rational::new(n, m));
        RationalInterval::new(q(a, b), q(c, d))
    }

    pub fn is_empty(&self) -> bool {
        self.lo == QBound::PosInf
    }

    pub fn lo(&self) -> &QBound {
        &self.lo
    }

    pub fn hi(&self) -> &QBound {
        &self.hi
    }

    fn contains_zero(&self) -> bool {
        !self.is_empty() && self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn add(&self, o: &RationalInterval) -> RationalInterval {
        if self.is_empty() || o.is_empty() {
            return RationalInterval::empty();
        }
        RationalInterval { lo: self.lo.add(&o.lo), hi: self.hi.add(&o.hi) }
    }

    /// Smallest closed interval containing `{u ∈ ℚ | ∃x ∈ self ∃y ∈ den, u·y = x}`.
    pub fn div(&self, den: &RationalInterval) -> RationalInterval {
        if self.is_empty() || den.is_empty() {
            return RationalInterval::empty();
        }
        if self.contains_zero() && den.contains_zero() {
            return RationalInterval::unbounded();
        }
        let (a, b, c, d) = (&self.lo, &self.hi, &den.lo, &den.hi);
        let (cs, ds) = (c.signum(), d.signum());
        if cs == 0 && ds == 0 {
            return RationalInterval::empty();
        }
        if cs < 0 && ds > 0 {
            // two rays
            return RationalInterval::unbounded();
        }
        let num_pos = a.signum() > 0;
        let q = QBound::quot;
        if cs == 0 {
            // den = [0, d] with d > 0; quotients grow without bound near 0
            return if num_pos {
                RationalInterval::new(q(a, d), QBound::PosInf)
            } else {
                RationalInterval::new(QBound::NegInf, q(b, d))
            };
        }
        if ds == 0 {
            return if num_pos {
                RationalInterval::new(QBound::NegInf, q(a, c))
            } else {
                RationalInterval::new(q(b, c), QBound::PosInf)
            };
        }
        let num_class = if a.signum() >= 0 {
            Ordering::Greater
        } else if b.signum() <= 0 {
            Ordering::Less
        } else {
            Ordering::Equal
        };
        let (lo, hi) = match (cs > 0, num_class) {
            (true, Ordering::Greater) => (q(a, d), q(b, c)),
            (true, Ordering::Less) => (q(a, c), q(b, d)),
            (true, Ordering::Equal) => (q(a, c), q(b, c)),
            (false, Ordering::Greater) => (q(b, d), q(a, c)),
            (false, Ordering::Less) => (q(b, c), q(a, d)),
            (false, Ordering::Equal) => (q(b, d), q(a, d)),
        };
        RationalInterval::new(lo, hi)
    }

    /// The integer half-line `≤self` or `≥self`.
    pub fn to_halfline(&self, side: Side) -> IntegerInterval {
        if self.is_empty() {
            return IntegerInterval::EMPTY;
        }
        match side {
            Side::AtMost => IntegerInterval::from_bounds(ExtInt::NegInf, self.hi.floor()),
            Side::AtLeast => IntegerInterval::from_bounds(self.lo.ceil(), ExtInt::PosInf),
        }
    }

    /// The integers in the interval.
    pub fn to_integers(&self) -> IntegerInterval {
        if self.is_empty() {
            return IntegerInterval::EMPTY;
        }
        IntegerInterval::from_bounds(self.lo.ceil(), self.hi.floor())
    }
}

impl From<&IntegerInterval> for RationalInterval {
    fn from(x: &IntegerInterval) -> RationalInterval {
        if x.is_empty() {
            return RationalInterval::empty();
        }
        RationalInterval { lo: x.lo().into(), hi: x.hi().into() }
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("{}")
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

impl fmt::Debug for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
