//! Integer interval arithmetic.
//!
//! An [`IntegerInterval`] is a possibly unbounded set of consecutive
//! integers. Addition, subtraction, intersection and root extraction are
//! exact on intervals; multiplication, division and exponentiation return the
//! `int(·)` closure of the exact result set, i.e. the smallest interval that
//! contains it, or all of ℤ when that set is infinite.
//!
//! The operations here are pure. Counting of operations for statistics is
//! done by [`OpCounters`](crate::OpCounters), which wraps them.

use std::fmt;

use crate::int::{ExtInt, Int};

/// Shape of an interval, as distinguished by the solver's domain type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntervalKind {
    Empty,
    Bounded,
    /// `{x | x ≥ lo}`
    LeftBounded,
    /// `{x | x ≤ hi}`
    RightBounded,
    Unbounded,
}

/// A set of consecutive integers `[lo..hi]` where either bound may be
/// infinite.
///
/// The empty interval has a single representation, so structural equality
/// coincides with set equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerInterval {
    // invariant: either (lo, hi) = (PosInf, NegInf) for the empty interval, or
    // lo != PosInf, hi != NegInf and lo <= hi.
    lo: ExtInt,
    hi: ExtInt,
}

impl IntegerInterval {
    pub const EMPTY: IntegerInterval = IntegerInterval { lo: ExtInt::PosInf, hi: ExtInt::NegInf };
    pub const UNBOUNDED: IntegerInterval = IntegerInterval { lo: ExtInt::NegInf, hi: ExtInt::PosInf };

    /// Builds `[lo..hi]`, normalizing crossed bounds to the empty interval.
    pub fn from_bounds(lo: ExtInt, hi: ExtInt) -> IntegerInterval {
        if lo > hi || lo == ExtInt::PosInf || hi == ExtInt::NegInf {
            IntegerInterval::EMPTY
        } else {
            IntegerInterval { lo, hi }
        }
    }

    pub fn new(lo: impl Into<Int>, hi: impl Into<Int>) -> IntegerInterval {
        IntegerInterval::from_bounds(ExtInt::Fin(lo.into()), ExtInt::Fin(hi.into()))
    }

    pub fn singleton(v: impl Into<Int>) -> IntegerInterval {
        let v = v.into();
        IntegerInterval { lo: ExtInt::Fin(v.clone()), hi: ExtInt::Fin(v) }
    }

    /// `{x | x ≥ lo}`
    pub fn at_least(lo: impl Into<Int>) -> IntegerInterval {
        IntegerInterval { lo: ExtInt::Fin(lo.into()), hi: ExtInt::PosInf }
    }

    /// `{x | x ≤ hi}`
    pub fn at_most(hi: impl Into<Int>) -> IntegerInterval {
        IntegerInterval { lo: ExtInt::NegInf, hi: ExtInt::Fin(hi.into()) }
    }

    pub fn empty() -> IntegerInterval {
        IntegerInterval::EMPTY
    }

    pub fn unbounded() -> IntegerInterval {
        IntegerInterval::UNBOUNDED
    }

    pub fn kind(&self) -> IntervalKind {
        match (&self.lo, &self.hi) {
            (ExtInt::PosInf, _) => IntervalKind::Empty,
            (ExtInt::Fin(_), ExtInt::Fin(_)) => IntervalKind::Bounded,
            (ExtInt::Fin(_), _) => IntervalKind::LeftBounded,
            (_, ExtInt::Fin(_)) => IntervalKind::RightBounded,
            _ => IntervalKind::Unbounded,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo == ExtInt::PosInf
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Lower bound; `PosInf` for the empty interval.
    pub fn lo(&self) -> &ExtInt {
        &self.lo
    }

    /// Upper bound; `NegInf` for the empty interval.
    pub fn hi(&self) -> &ExtInt {
        &self.hi
    }

    pub fn lo_int(&self) -> Option<&Int> {
        self.lo.fin()
    }

    pub fn hi_int(&self) -> Option<&Int> {
        self.hi.fin()
    }

    /// The value of a singleton interval.
    pub fn as_singleton(&self) -> Option<&Int> {
        match (&self.lo, &self.hi) {
            (ExtInt::Fin(a), ExtInt::Fin(b)) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn is_singleton(&self) -> bool {
        self.as_singleton().is_some()
    }

    pub fn contains(&self, v: &Int) -> bool {
        let v = ExtInt::Fin(v.clone());
        self.lo <= v && v <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0 && !self.is_empty()
    }

    pub fn is_subset(&self, other: &IntegerInterval) -> bool {
        self.is_empty() || (other.lo <= self.lo && self.hi <= other.hi)
    }

    /// Number of elements of a bounded interval.
    pub fn size(&self) -> Option<Int> {
        if self.is_empty() {
            return Some(Int::ZERO);
        }
        match (&self.lo, &self.hi) {
            (ExtInt::Fin(a), ExtInt::Fin(b)) => Some(&(b - a) + &Int::ONE),
            _ => None,
        }
    }

    pub fn intersect(&self, other: &IntegerInterval) -> IntegerInterval {
        let lo = if self.lo >= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi <= other.hi { &self.hi } else { &other.hi };
        IntegerInterval::from_bounds(lo.clone(), hi.clone())
    }

    pub fn negate(&self) -> IntegerInterval {
        if self.is_empty() {
            return IntegerInterval::EMPTY;
        }
        IntegerInterval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, other: &IntegerInterval) -> IntegerInterval {
        if self.is_empty() || other.is_empty() {
            return IntegerInterval::EMPTY;
        }
        IntegerInterval { lo: self.lo.add(&other.lo), hi: self.hi.add(&other.hi) }
    }

    pub fn sub(&self, other: &IntegerInterval) -> IntegerInterval {
        self.add(&other.negate())
    }

    /// `{k·x | x ∈ self}` closed to an interval.
    pub fn scale(&self, k: &Int) -> IntegerInterval {
        if self.is_empty() {
            return IntegerInterval::EMPTY;
        }
        let k = ExtInt::Fin(k.clone());
        let a = self.lo.mul(&k);
        let b = self.hi.mul(&k);
        if a <= b {
            IntegerInterval { lo: a, hi: b }
        } else {
            IntegerInterval { lo: b, hi: a }
        }
    }

    /// `int(self · other)`.
    pub fn mul(&self, other: &IntegerInterval) -> IntegerInterval {
        if self.is_empty() || other.is_empty() {
            return IntegerInterval::EMPTY;
        }
        let (a, b, c, d) = (&self.lo, &self.hi, &other.lo, &other.hi);
        let (lo, hi) = match (sign_class(self), sign_class(other)) {
            (Sign::Pos, Sign::Pos) => (a.mul(c), b.mul(d)),
            (Sign::Pos, Sign::Neg) => (b.mul(c), a.mul(d)),
            (Sign::Pos, Sign::Mixed) => (b.mul(c), b.mul(d)),
            (Sign::Neg, Sign::Pos) => (a.mul(d), b.mul(c)),
            (Sign::Neg, Sign::Neg) => (b.mul(d), a.mul(c)),
            (Sign::Neg, Sign::Mixed) => (a.mul(d), a.mul(c)),
            (Sign::Mixed, Sign::Pos) => (a.mul(d), b.mul(d)),
            (Sign::Mixed, Sign::Neg) => (b.mul(c), a.mul(c)),
            (Sign::Mixed, Sign::Mixed) => {
                let (ad, bc) = (a.mul(d), b.mul(c));
                let (ac, bd) = (a.mul(c), b.mul(d));
                (ad.min(bc), ac.max(bd))
            }
        };
        IntegerInterval { lo, hi }
    }

    /// `int(self / den)` for the integer set division
    /// `X/Y = {u ∈ ℤ | ∃x ∈ X ∃y ∈ Y u·y = x}`.
    ///
    /// When `den` excludes zero the divisor bounds are first moved inwards to
    /// the nearest values that divide some element of `self`; the cost of
    /// that search is linear in the width of `den` in the worst case.
    pub fn div(&self, den: &IntegerInterval) -> IntegerInterval {
        if self.is_empty() || den.is_empty() {
            return IntegerInterval::EMPTY;
        }
        let num_zero = self.contains_zero();
        if den.contains_zero() {
            if num_zero {
                return IntegerInterval::UNBOUNDED;
            }
            if den.as_singleton().is_some() {
                // den = [0..0]
                return IntegerInterval::EMPTY;
            }
            if den.lo.signum() < 0 && den.hi.signum() > 0 {
                return match (self.lo.fin(), self.hi.fin()) {
                    (Some(a), Some(b)) => {
                        let e = a.abs().max(b.abs());
                        IntegerInterval::new(-&e, e)
                    }
                    _ => IntegerInterval::UNBOUNDED,
                };
            }
            return self.div_nonzero(&den.without_zero_endpoint(), true);
        }
        self.div_nonzero(den, true)
    }

    /// Weak division `self : den`: the endpoint formula applied without
    /// searching for divisors. It contains `self.div(den)` and coincides with
    /// it when both operands are singletons.
    pub fn div_weak(&self, den: &IntegerInterval) -> IntegerInterval {
        if self.is_empty() || den.is_empty() {
            return IntegerInterval::EMPTY;
        }
        if !den.contains_zero() {
            return quotient_hull(self, den);
        }
        let zero_end = den.lo.signum() == 0 || den.hi.signum() == 0;
        if !self.contains_zero() && zero_end && den.lo < den.hi {
            return quotient_hull(self, &den.without_zero_endpoint());
        }
        self.div(den)
    }

    /// Exact division by a non-zero constant, `{u | u·k ∈ self}`.
    pub fn div_const(&self, k: &Int) -> IntegerInterval {
        if k.is_zero() {
            return self.div(&IntegerInterval::singleton(Int::ZERO));
        }
        quotient_hull(self, &IntegerInterval::singleton(k.clone()))
    }

    /// `int(num / den)` where `num` is a half-line: `≥Q ∩ ≤Q` for
    /// `Q = num / den`.
    ///
    /// A bounded `num` is divided with [`div`](Self::div).
    pub fn div_halfline(num: &IntegerInterval, den: &IntegerInterval) -> IntegerInterval {
        match num.kind() {
            IntervalKind::Empty => IntegerInterval::EMPTY,
            IntervalKind::Bounded => num.div(den),
            IntervalKind::RightBounded | IntervalKind::Unbounded => div_at_most(&num.hi, den),
            // u·y ≥ l  ⟺  u·(−y) ≤ −l
            IntervalKind::LeftBounded => div_at_most(&num.lo.neg(), &den.negate()),
        }
    }

    /// `int(selfⁿ)` for `n ≥ 1`.
    pub fn pow(&self, n: u32) -> IntegerInterval {
        assert!(n >= 1, "exponent must be positive");
        if self.is_empty() {
            return IntegerInterval::EMPTY;
        }
        let (a, b) = (&self.lo, &self.hi);
        if n % 2 == 1 || a.signum() >= 0 {
            IntegerInterval { lo: a.pow(n), hi: b.pow(n) }
        } else if b.signum() <= 0 {
            IntegerInterval { lo: b.pow(n), hi: a.pow(n) }
        } else {
            IntegerInterval { lo: ExtInt::Fin(Int::ZERO), hi: a.pow(n).max(b.pow(n)) }
        }
    }

    /// The exact set `ⁿ√self = {x | xⁿ ∈ self}`, which for even `n` may
    /// consist of two intervals.
    pub fn root(&self, n: u32) -> IntervalUnion {
        assert!(n >= 1, "root degree must be positive");
        if self.is_empty() {
            return IntervalUnion::empty();
        }
        if n == 1 {
            return IntervalUnion::from(self.clone());
        }
        if n % 2 == 1 {
            let lo = match &self.lo {
                ExtInt::Fin(a) => ExtInt::Fin(root_ceil(a, n)),
                other => other.clone(),
            };
            let hi = match &self.hi {
                ExtInt::Fin(b) => ExtInt::Fin(root_floor(b, n)),
                other => other.clone(),
            };
            return IntervalUnion::from(IntegerInterval::from_bounds(lo, hi));
        }
        if self.hi.signum() < 0 {
            return IntervalUnion::empty();
        }
        let r_hi = match &self.hi {
            ExtInt::Fin(b) => ExtInt::Fin(b.nth_root_floor(n)),
            _ => ExtInt::PosInf,
        };
        let r_lo = match &self.lo {
            ExtInt::Fin(a) if a.is_positive() => a.nth_root_ceil(n),
            _ => Int::ZERO,
        };
        let pos = IntegerInterval::from_bounds(ExtInt::Fin(r_lo), r_hi);
        IntervalUnion::new(pos.negate(), pos)
    }

    /// `[l+1..h-1]`; infinite bounds are kept.
    pub fn interior(&self) -> IntegerInterval {
        if self.is_empty() {
            return IntegerInterval::EMPTY;
        }
        let lo = match &self.lo {
            ExtInt::Fin(l) => ExtInt::Fin(l + &Int::ONE),
            other => other.clone(),
        };
        let hi = match &self.hi {
            ExtInt::Fin(h) => ExtInt::Fin(h - &Int::ONE),
            other => other.clone(),
        };
        IntegerInterval::from_bounds(lo, hi)
    }

    /// Smallest interval containing every value.
    pub fn hull<'a>(values: impl IntoIterator<Item = &'a Int>) -> IntegerInterval {
        let mut it = values.into_iter();
        let Some(first) = it.next() else {
            return IntegerInterval::EMPTY;
        };
        let (mut lo, mut hi) = (first, first);
        for v in it {
            if v < lo {
                lo = v;
            }
            if v > hi {
                hi = v;
            }
        }
        IntegerInterval::new(lo.clone(), hi.clone())
    }

    /// Smallest interval containing both operands.
    pub fn join(&self, other: &IntegerInterval) -> IntegerInterval {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        IntegerInterval { lo: self.lo.clone().min(other.lo.clone()), hi: self.hi.clone().max(other.hi.clone()) }
    }

    /// `[c..d] − {0}` for a non-singleton `[c..d]` with 0 as one endpoint.
    fn without_zero_endpoint(&self) -> IntegerInterval {
        if self.lo.signum() == 0 {
            IntegerInterval { lo: ExtInt::Fin(Int::ONE), hi: self.hi.clone() }
        } else {
            IntegerInterval { lo: self.lo.clone(), hi: ExtInt::Fin(-Int::ONE) }
        }
    }

    /// Division by an interval that excludes zero, with the divisor bounds
    /// narrowed to actual divisors when `exact` is set.
    fn div_nonzero(&self, den: &IntegerInterval, exact: bool) -> IntegerInterval {
        if !exact || self.contains_zero() {
            return quotient_hull(self, den);
        }
        let Some(den) = narrow_divisors(self, den) else {
            return IntegerInterval::EMPTY;
        };
        let q = quotient_hull(self, &den);
        // zero is never a quotient when the numerator excludes it; the
        // endpoint limits can only touch it through an infinite divisor
        let lo = if q.lo.signum() == 0 { ExtInt::Fin(Int::ONE) } else { q.lo };
        let hi = if q.hi.signum() == 0 { ExtInt::Fin(-Int::ONE) } else { q.hi };
        IntegerInterval::from_bounds(lo, hi)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sign {
    Pos,
    Neg,
    Mixed,
}

fn sign_class(x: &IntegerInterval) -> Sign {
    if x.lo.signum() >= 0 {
        Sign::Pos
    } else if x.hi.signum() <= 0 {
        Sign::Neg
    } else {
        Sign::Mixed
    }
}

fn root_floor(v: &Int, n: u32) -> Int {
    if v.is_negative() {
        -v.abs().nth_root_ceil(n)
    } else {
        v.nth_root_floor(n)
    }
}

fn root_ceil(v: &Int, n: u32) -> Int {
    if v.is_negative() {
        -v.abs().nth_root_floor(n)
    } else {
        v.nth_root_ceil(n)
    }
}

/// A quotient bound `p / q` where `q` is non-zero, rounded towards
/// `+∞` (`up`) or `−∞`. An infinite divisor contributes the limit 0; an
/// infinite dividend dominates.
fn round_quotient(p: &ExtInt, q: &ExtInt, up: bool) -> ExtInt {
    match (p, q) {
        (ExtInt::Fin(p), ExtInt::Fin(q)) => {
            ExtInt::Fin(if up { p.div_ceil(q) } else { p.div_floor(q) })
        }
        (ExtInt::Fin(_), _) => ExtInt::Fin(Int::ZERO),
        _ => {
            if p.signum() * q.signum() < 0 {
                ExtInt::NegInf
            } else {
                ExtInt::PosInf
            }
        }
    }
}

/// `[⌈min A⌉..⌊max A⌋]` with `A` the endpoint quotients of `num` by a
/// divisor interval `den` that excludes zero.
fn quotient_hull(num: &IntegerInterval, den: &IntegerInterval) -> IntegerInterval {
    debug_assert!(!den.contains_zero());
    if num.is_empty() || den.is_empty() {
        return IntegerInterval::EMPTY;
    }
    let (a, b, c, d) = (&num.lo, &num.hi, &den.lo, &den.hi);
    let (min, max) = if den.lo.signum() > 0 {
        match sign_class(num) {
            Sign::Pos => ((a, d), (b, c)),
            Sign::Neg => ((a, c), (b, d)),
            Sign::Mixed => ((a, c), (b, c)),
        }
    } else {
        match sign_class(num) {
            Sign::Pos => ((b, d), (a, c)),
            Sign::Neg => ((b, c), (a, d)),
            Sign::Mixed => ((b, d), (a, d)),
        }
    };
    IntegerInterval::from_bounds(round_quotient(min.0, min.1, true), round_quotient(max.0, max.1, false))
}

/// Cap on candidate divisors tried per bound when narrowing a divisor
/// interval.
const NARROW_LIMIT: u32 = 1 << 16;

/// Does some multiple of `m > 0` lie in `num`?
fn has_multiple(m: &Int, num: &IntegerInterval) -> bool {
    match (&num.lo, &num.hi) {
        (ExtInt::Fin(a), ExtInt::Fin(b)) => b.div_floor(m) >= a.div_ceil(m),
        _ => true,
    }
}

/// Narrows a zero-free divisor interval to its least and greatest elements
/// that divide some element of `num` (which excludes zero). `None` when no
/// element of `den` divides any element of `num`.
fn narrow_divisors(num: &IntegerInterval, den: &IntegerInterval) -> Option<IntegerInterval> {
    let (Some(a), Some(b)) = (num.lo.fin(), num.hi.fin()) else {
        return Some(den.clone());
    };
    // work on magnitudes: den ⊆ [m1..m2] or den ⊆ [−m2..−m1]
    let positive = den.lo.signum() > 0;
    let (m1, m2) = if positive { (den.lo.clone(), den.hi.clone()) } else { (den.hi.neg(), den.lo.neg()) };
    let m1 = m1.fin().cloned().expect("inner divisor bound is finite");
    let reach = a.abs().max(b.abs());
    let width = &(b - a) + &Int::ONE;
    let top = match m2 {
        ExtInt::Fin(m) => m.min(reach.clone()),
        _ => reach.clone(),
    };
    if m1 > top {
        return None;
    }
    let ok = |m: &Int| m <= &width || has_multiple(m, num);
    let (a, b) = (a.abs().min(b.abs()), reach);
    // An `m` without a multiple in [a..b] has quotient q·m < a < b < (q+1)·m,
    // so the next candidate up is ⌈a/q⌉ with q = ⌊b/m⌋ and the next one down
    // is ⌊b/q⌋ with q = ⌈a/m⌉.
    let mut small = m1;
    let mut steps = 0;
    while !ok(&small) {
        let q = b.div_floor(&small);
        if q.is_zero() {
            return None;
        }
        small = a.div_ceil(&q);
        if small > top {
            return None;
        }
        steps += 1;
        if steps == NARROW_LIMIT {
            // give up on exactness; the bounds found so far are still sound
            return Some(if positive {
                IntegerInterval::new(small, top)
            } else {
                IntegerInterval::new(-top, -small)
            });
        }
    }
    let mut large = top;
    steps = 0;
    while !ok(&large) && steps < NARROW_LIMIT {
        large = b.div_floor(&a.div_ceil(&large));
        steps += 1;
    }
    Some(if positive {
        IntegerInterval::new(small, large)
    } else {
        IntegerInterval::new(-large, -small)
    })
}

/// `≥Q ∩ ≤Q` for `Q = {u | ∃y ∈ den, u·y ≤ h}`.
fn div_at_most(h: &ExtInt, den: &IntegerInterval) -> IntegerInterval {
    if den.is_empty() || *h == ExtInt::NegInf {
        return IntegerInterval::EMPTY;
    }
    let h_nonneg = h.signum() >= 0;
    let one = ExtInt::Fin(Int::ONE);
    let minus_one = ExtInt::Fin(-Int::ONE);
    let mut q = IntegerInterval::EMPTY;
    if h_nonneg {
        q = IntegerInterval::singleton(Int::ZERO);
    }
    // u ≥ 1 needs u·inf(den) ≤ h
    let c = &den.lo;
    let pos = match c.signum() {
        s if s < 0 => match (c, h) {
            (ExtInt::Fin(c), ExtInt::Fin(h)) => {
                IntegerInterval::from_bounds(ExtInt::Fin(h.div_ceil(c)).max(one.clone()), ExtInt::PosInf)
            }
            _ => IntegerInterval::from_bounds(one.clone(), ExtInt::PosInf),
        },
        0 if h_nonneg => IntegerInterval::from_bounds(one.clone(), ExtInt::PosInf),
        0 => IntegerInterval::EMPTY,
        _ => {
            let top = round_quotient(h, c, false);
            IntegerInterval::from_bounds(one.clone(), top)
        }
    };
    // u ≤ −1 needs u·sup(den) ≤ h
    let d = &den.hi;
    let neg = match d.signum() {
        s if s > 0 => match (d, h) {
            (ExtInt::Fin(d), ExtInt::Fin(h)) => {
                IntegerInterval::from_bounds(ExtInt::NegInf, ExtInt::Fin(h.div_floor(d)).min(minus_one.clone()))
            }
            _ => IntegerInterval::from_bounds(ExtInt::NegInf, minus_one.clone()),
        },
        0 if h_nonneg => IntegerInterval::from_bounds(ExtInt::NegInf, minus_one.clone()),
        0 => IntegerInterval::EMPTY,
        _ => {
            let bottom = round_quotient(h, d, true);
            IntegerInterval::from_bounds(bottom, minus_one.clone())
        }
    };
    q.join(&pos).join(&neg)
}

impl fmt::Display for IntegerInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.lo, &self.hi) {
            (ExtInt::PosInf, _) => f.write_str("{}"),
            (ExtInt::NegInf, ExtInt::PosInf) => f.write_str("Z"),
            (ExtInt::NegInf, h) => write!(f, "(-inf..{h}]"),
            (l, ExtInt::PosInf) => write!(f, "[{l}..+inf)"),
            (l, h) => write!(f, "[{l}..{h}]"),
        }
    }
}

impl fmt::Debug for IntegerInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for IntegerInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A union of at most two disjoint, non-adjacent intervals, sorted
/// ascending. Produced by even root extraction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntervalUnion {
    first: IntegerInterval,
    second: IntegerInterval,
}

impl IntervalUnion {
    pub fn empty() -> IntervalUnion {
        IntervalUnion { first: IntegerInterval::EMPTY, second: IntegerInterval::EMPTY }
    }

    /// Normalizes two intervals into a union: drops empty parts, merges
    /// overlapping or adjacent parts and sorts.
    pub fn new(a: IntegerInterval, b: IntegerInterval) -> IntervalUnion {
        if a.is_empty() {
            return IntervalUnion { first: b, second: IntegerInterval::EMPTY };
        }
        if b.is_empty() {
            return IntervalUnion { first: a, second: IntegerInterval::EMPTY };
        }
        let (a, b) = if a.lo <= b.lo { (a, b) } else { (b, a) };
        // adjacent when a.hi + 1 >= b.lo
        let touches = match (&a.hi, &b.lo) {
            (ExtInt::Fin(h), ExtInt::Fin(l)) => &(h + &Int::ONE) >= l,
            _ => true,
        };
        if touches {
            IntervalUnion { first: a.join(&b), second: IntegerInterval::EMPTY }
        } else {
            IntervalUnion { first: a, second: b }
        }
    }

    pub fn parts(&self) -> impl Iterator<Item = &IntegerInterval> {
        [&self.first, &self.second].into_iter().filter(|p| !p.is_empty())
    }

    pub fn len(&self) -> usize {
        self.parts().count()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    pub fn contains(&self, v: &Int) -> bool {
        self.parts().any(|p| p.contains(v))
    }

    /// Smallest interval containing the union.
    pub fn hull(&self) -> IntegerInterval {
        self.first.join(&self.second)
    }

    /// `int(d ∩ self)`: intersects each part with `d`, then takes the hull.
    pub fn intersect_hull(&self, d: &IntegerInterval) -> IntegerInterval {
        self.first.intersect(d).join(&self.second.intersect(d))
    }
}

impl From<IntegerInterval> for IntervalUnion {
    fn from(x: IntegerInterval) -> Self {
        IntervalUnion { first: x, second: IntegerInterval::EMPTY }
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.second.is_empty() {
            write!(f, "{}", self.first)
        } else {
            write!(f, "{} U {}", self.first, self.second)
        }
    }
}

impl fmt::Debug for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
