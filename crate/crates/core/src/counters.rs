use std::ops::AddAssign;

use serde::Serialize;

use crate::int::Int;
use crate::interval::{IntegerInterval, IntervalUnion};
use crate::rational::RationalInterval;

/// Tally of interval operations by category.
///
/// The solver performs every counted operation through one of these methods,
/// so a single `OpCounters` per solver run records everything it did.
/// Intersection is not counted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OpCounters {
    pub root: u64,
    pub exp: u64,
    pub div: u64,
    #[serde(rename = "multI")]
    pub mult_i: u64,
    #[serde(rename = "multF")]
    pub mult_f: u64,
    pub sum: u64,
    pub q_div: u64,
    pub q_sum: u64,
}

impl OpCounters {
    pub fn new() -> OpCounters {
        OpCounters::default()
    }

    pub fn total(&self) -> u64 {
        self.root + self.exp + self.div + self.mult_i + self.mult_f + self.sum + self.q_div + self.q_sum
    }

    pub fn add(&mut self, a: &IntegerInterval, b: &IntegerInterval) -> IntegerInterval {
        self.sum += 1;
        a.add(b)
    }

    pub fn sub(&mut self, a: &IntegerInterval, b: &IntegerInterval) -> IntegerInterval {
        self.sum += 1;
        a.sub(b)
    }

    pub fn scale(&mut self, a: &IntegerInterval, k: &Int) -> IntegerInterval {
        self.mult_f += 1;
        a.scale(k)
    }

    pub fn mul(&mut self, a: &IntegerInterval, b: &IntegerInterval) -> IntegerInterval {
        self.mult_i += 1;
        a.mul(b)
    }

    pub fn div(&mut self, a: &IntegerInterval, b: &IntegerInterval) -> IntegerInterval {
        self.div += 1;
        a.div(b)
    }

    pub fn div_weak(&mut self, a: &IntegerInterval, b: &IntegerInterval) -> IntegerInterval {
        self.div += 1;
        a.div_weak(b)
    }

    /// Strong or weak division depending on `weak`.
    pub fn divide(&mut self, a: &IntegerInterval, b: &IntegerInterval, weak: bool) -> IntegerInterval {
        if weak {
            self.div_weak(a, b)
        } else {
            self.div(a, b)
        }
    }

    pub fn div_halfline(&mut self, a: &IntegerInterval, b: &IntegerInterval) -> IntegerInterval {
        self.div += 1;
        IntegerInterval::div_halfline(a, b)
    }

    /// Division by a constant; a factor of ±1 is a multiplication by an
    /// integer factor.
    pub fn div_const(&mut self, a: &IntegerInterval, k: &Int) -> IntegerInterval {
        if k.abs() == Int::ONE {
            self.mult_f += 1;
            a.scale(k)
        } else {
            self.div += 1;
            a.div_const(k)
        }
    }

    pub fn pow(&mut self, a: &IntegerInterval, n: u32) -> IntegerInterval {
        self.exp += 1;
        a.pow(n)
    }

    pub fn root(&mut self, a: &IntegerInterval, n: u32) -> IntervalUnion {
        self.root += 1;
        a.root(n)
    }

    pub fn q_add(&mut self, a: &RationalInterval, b: &RationalInterval) -> RationalInterval {
        self.q_sum += 1;
        a.add(b)
    }

    pub fn q_div(&mut self, a: &RationalInterval, b: &RationalInterval) -> RationalInterval {
        self.q_div += 1;
        a.div(b)
    }
}

impl AddAssign for OpCounters {
    fn add_assign(&mut self, o: OpCounters) {
        self.root += o.root;
        self.exp += o.exp;
        self.div += o.div;
        self.mult_i += o.mult_i;
        self.mult_f += o.mult_f;
        self.sum += o.sum;
        self.q_div += o.q_div;
        self.q_sum += o.q_sum;
    }
}
