use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::expr::{Expr, VarId};
use crate::int::Int;

/// A product of variable powers `x₁ⁿ¹ · … · x_kⁿᵏ`, stored sparsely with
/// variables strictly increasing.
///
/// The ordering compares exponent vectors lexicographically, variable by
/// variable, with absent variables counting as exponent 0. Polynomials list
/// their monomials in descending order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PowerProduct(Vec<(VarId, u32)>);

impl PowerProduct {
    pub fn one() -> PowerProduct {
        PowerProduct(Vec::new())
    }

    pub fn var(v: VarId) -> PowerProduct {
        PowerProduct(vec![(v, 1)])
    }

    pub fn power(v: VarId, n: u32) -> PowerProduct {
        assert!(n >= 1);
        PowerProduct(vec![(v, n)])
    }

    /// Builds a power product from arbitrary `(variable, exponent)` pairs,
    /// adding up repeated variables and dropping zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, u32)>) -> PowerProduct {
        let mut m: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *m.entry(v).or_default() += e;
        }
        PowerProduct(m.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// A single variable to the first power.
    pub fn as_var(&self) -> Option<VarId> {
        match self.0.as_slice() {
            [(v, 1)] => Some(*v),
            _ => None,
        }
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|(v, _)| *v)
    }

    pub fn mul(&self, o: &PowerProduct) -> PowerProduct {
        PowerProduct::from_pairs(self.0.iter().chain(o.0.iter()).copied())
    }

    /// Does `o` divide `self`?
    pub fn divides(&self, o: &PowerProduct) -> bool {
        self.0.iter().all(|(v, e)| o.exponent(*v) >= *e)
    }

    /// `self / o`, assuming `o` divides `self`.
    pub fn div(&self, o: &PowerProduct) -> PowerProduct {
        debug_assert!(o.divides(self));
        PowerProduct(
            self.0
                .iter()
                .map(|(v, e)| (*v, e - o.exponent(*v)))
                .filter(|(_, e)| *e > 0)
                .collect(),
        )
    }

    /// The greatest common divisor of two power products.
    pub fn gcd(&self, o: &PowerProduct) -> PowerProduct {
        PowerProduct(
            self.0
                .iter()
                .filter_map(|(v, e)| {
                    let m = (*e).min(o.exponent(*v));
                    (m > 0).then_some((*v, m))
                })
                .collect(),
        )
    }

    pub fn eval(&self, point: &[Int]) -> Int {
        self.0.iter().fold(Int::ONE, |acc, (v, e)| &acc * &point[*v].pow(*e))
    }

    pub fn to_expr(&self) -> Expr {
        Expr::product(self.0.iter().map(|(v, e)| Expr::var(*v).pow_mul(*e)))
    }
}

impl Ord for PowerProduct {
    fn cmp(&self, o: &PowerProduct) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), o.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    // `self` has a positive exponent where `o` has none
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(&eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        c => return c,
                    },
                },
            }
        }
    }
}

impl PartialOrd for PowerProduct {
    fn partial_cmp(&self, o: &PowerProduct) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "v{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// `coeff · powers` with a non-zero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub coeff: Int,
    pub powers: PowerProduct,
}

impl Monomial {
    pub fn new(coeff: impl Into<Int>, powers: PowerProduct) -> Monomial {
        Monomial { coeff: coeff.into(), powers }
    }

    pub fn eval(&self, point: &[Int]) -> Int {
        &self.coeff * &self.powers.eval(point)
    }

    pub fn to_expr(&self) -> Expr {
        if self.powers.is_one() {
            Expr::Lit(self.coeff.clone())
        } else if self.coeff == Int::ONE {
            self.powers.to_expr()
        } else {
            Expr::Lit(self.coeff.clone()) * self.powers.to_expr()
        }
    }
}

/// A sum of monomials with pairwise distinct power products, sorted in
/// descending monomial order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Polynomial {
    monomials: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    /// Collects like terms and sorts. Zero coefficients are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = Monomial>) -> Polynomial {
        let mut m: BTreeMap<PowerProduct, Int> = BTreeMap::new();
        for t in terms {
            let c = m.entry(t.powers).or_insert(Int::ZERO);
            *c = &*c + &t.coeff;
        }
        let monomials = m
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(powers, coeff)| Monomial { coeff, powers })
            .collect();
        Polynomial { monomials }
    }

    /// Keeps the given order. Power products must be pairwise distinct and
    /// coefficients non-zero.
    pub fn from_ordered(monomials: Vec<Monomial>) -> Polynomial {
        debug_assert!(monomials.iter().all(|m| !m.coeff.is_zero()));
        Polynomial { monomials }
    }

    pub fn constant(c: impl Into<Int>) -> Polynomial {
        Polynomial::from_terms([Monomial::new(c, PowerProduct::one())])
    }

    pub fn from_expr(e: &Expr) -> Polynomial {
        match e {
            Expr::Var(v) => Polynomial::from_terms([Monomial::new(1, PowerProduct::var(*v))]),
            Expr::Lit(c) => Polynomial::constant(c.clone()),
            Expr::Neg(a) => Polynomial::from_expr(a).scale(&-Int::ONE),
            Expr::Add(a, b) => Polynomial::from_expr(a).add(&Polynomial::from_expr(b)),
            Expr::Sub(a, b) => Polynomial::from_expr(a).add(&Polynomial::from_expr(b).scale(&-Int::ONE)),
            Expr::Mul(a, b) => Polynomial::from_expr(a).mul(&Polynomial::from_expr(b)),
            Expr::Pow(a, n) => {
                let p = Polynomial::from_expr(a);
                (1..*n).fold(p.clone(), |acc, _| acc.mul(&p))
            }
            Expr::Root(..) | Expr::Div(..) => panic!("not a polynomial expression"),
        }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        Polynomial::from_terms(self.monomials.iter().chain(o.monomials.iter()).cloned())
    }

    pub fn scale(&self, k: &Int) -> Polynomial {
        Polynomial::from_terms(self.monomials.iter().map(|m| Monomial::new(&m.coeff * k, m.powers.clone())))
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        let mut terms = Vec::with_capacity(self.len() * o.len());
        for a in &self.monomials {
            for b in &o.monomials {
                terms.push(Monomial::new(&a.coeff * &b.coeff, a.powers.mul(&b.powers)));
            }
        }
        Polynomial::from_terms(terms)
    }

    /// Splits off the constant term.
    pub fn split_constant(&self) -> (Polynomial, Int) {
        let mut c = Int::ZERO;
        let mut rest = Vec::new();
        for m in &self.monomials {
            if m.powers.is_one() {
                c = m.coeff.clone();
            } else {
                rest.push(m.clone());
            }
        }
        (Polynomial { monomials: rest }, c)
    }

    /// Variables in increasing order.
    pub fn vars(&self) -> Vec<VarId> {
        let mut v: Vec<VarId> = self.monomials.iter().flat_map(|m| m.powers.vars()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Every monomial has degree ≤ 1.
    pub fn is_linear(&self) -> bool {
        self.monomials.iter().all(|m| m.powers.degree() <= 1)
    }

    /// No variable occurs in more than one monomial.
    pub fn is_simple(&self) -> bool {
        let mut seen = Vec::new();
        for m in &self.monomials {
            for v in m.powers.vars() {
                if seen.contains(&v) {
                    return false;
                }
                seen.push(v);
            }
        }
        true
    }

    pub fn eval(&self, point: &[Int]) -> Int {
        self.monomials.iter().fold(Int::ZERO, |acc, m| &acc + &m.eval(point))
    }

    pub fn to_expr(&self) -> Expr {
        Expr::sum(self.monomials.iter().map(Monomial::to_expr))
    }
}

/// Relation of a canonical polynomial constraint.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum RelOp {
    Eq,
    Leq,
    Neq,
}

/// Comparison operator of a source constraint.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Cmp {
    pub fn holds(self, a: &Int, b: &Int) -> bool {
        match self {
            Cmp::Lt => a < b,
            Cmp::Le => a <= b,
            Cmp::Eq => a == b,
            Cmp::Ne => a != b,
            Cmp::Ge => a >= b,
            Cmp::Gt => a > b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
        }
    }
}

/// `lhs op rhs` with a non-empty polynomial left-hand side and an integer
/// right-hand side.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolynomialConstraint {
    pub lhs: Polynomial,
    pub op: RelOp,
    pub rhs: Int,
}

/// Result of normalizing a source constraint.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Normalized {
    Constraint(PolynomialConstraint),
    /// Holds for every assignment.
    Trivial,
    /// Holds for no assignment.
    Infeasible,
}

impl PolynomialConstraint {
    pub fn new(lhs: Polynomial, op: RelOp, rhs: impl Into<Int>) -> PolynomialConstraint {
        PolynomialConstraint { lhs, op, rhs: rhs.into() }
    }

    pub fn holds(&self, point: &[Int]) -> bool {
        let v = self.lhs.eval(point);
        match self.op {
            RelOp::Eq => v == self.rhs,
            RelOp::Leq => v <= self.rhs,
            RelOp::Neq => v != self.rhs,
        }
    }

    /// Renders back to a source constraint.
    pub fn to_source(&self) -> (Expr, Cmp, Expr) {
        let cmp = match self.op {
            RelOp::Eq => Cmp::Eq,
            RelOp::Leq => Cmp::Le,
            RelOp::Neq => Cmp::Ne,
        };
        (self.lhs.to_expr(), cmp, Expr::Lit(self.rhs.clone()))
    }
}

/// Brings `lhs cmp rhs` into the form `s op b`: fully expanded, like terms
/// collected, constant on the right, and `<`, `>`, `≥` rewritten to `≤`
/// using integrality.
pub fn normalize(lhs: &Expr, cmp: Cmp, rhs: &Expr) -> Normalized {
    let diff = Polynomial::from_expr(lhs).add(&Polynomial::from_expr(rhs).scale(&-Int::ONE));
    let (s, c) = diff.split_constant();
    let b = -c;
    let (s, op, b) = match cmp {
        Cmp::Eq => (s, RelOp::Eq, b),
        Cmp::Ne => (s, RelOp::Neq, b),
        Cmp::Le => (s, RelOp::Leq, b),
        Cmp::Lt => (s, RelOp::Leq, &b - &Int::ONE),
        Cmp::Ge => (s.scale(&-Int::ONE), RelOp::Leq, -b),
        Cmp::Gt => (s.scale(&-Int::ONE), RelOp::Leq, &-b - &Int::ONE),
    };
    if s.is_empty() {
        let ok = match op {
            RelOp::Eq => b.is_zero(),
            RelOp::Neq => !b.is_zero(),
            RelOp::Leq => !b.is_negative(),
        };
        return if ok { Normalized::Trivial } else { Normalized::Infeasible };
    }
    Normalized::Constraint(PolynomialConstraint { lhs: s, op, rhs: b })
}
