//! Domain reduction rules.
//!
//! Each [`ReductionRule`] narrows the domain of one variable occurrence of
//! one constraint. Rules are built from [`Atom`]s, the constraint forms left
//! after decomposition: polynomial constraints, products `x·y = z` and
//! powers `x = yⁿ`.

use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

use crate::counters::OpCounters;
use crate::int::{ExtInt, Int};
use crate::interval::IntegerInterval;
use crate::model::{Expr, Monomial, Polynomial, PolynomialConstraint, PowerProduct, RelOp, VarId};
use crate::rational::{RationalInterval, Side};

/// Domains indexed by variable id.
pub type DomainStore = Vec<IntegerInterval>;

/// A constraint in one of the forms rules are generated for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomKind {
    Poly(PolynomialConstraint),
    /// `x·y = z`; `x` and `y` may coincide.
    Mul { x: VarId, y: VarId, z: VarId },
    /// `x = yⁿ` with `n > 1`.
    Pow { x: VarId, y: VarId, n: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub kind: AtomKind,
    /// The auxiliary variable this atom defines, if any.
    pub defines: Option<VarId>,
}

impl Atom {
    pub fn poly(c: PolynomialConstraint) -> Atom {
        Atom { kind: AtomKind::Poly(c), defines: None }
    }

    pub fn vars(&self) -> Vec<VarId> {
        match &self.kind {
            AtomKind::Poly(c) => c.lhs.vars(),
            AtomKind::Mul { x, y, z } => {
                let mut v = vec![*x, *y, *z];
                v.sort_unstable();
                v.dedup();
                v
            }
            AtomKind::Pow { x, y, .. } => vec![*x, *y],
        }
    }

    pub fn holds(&self, point: &[Int]) -> bool {
        match &self.kind {
            AtomKind::Poly(c) => c.holds(point),
            AtomKind::Mul { x, y, z } => &point[*x] * &point[*y] == point[*z],
            AtomKind::Pow { x, y, n } => point[*y].pow(*n) == point[*x],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RuleKind {
    LinearEq,
    LinearIneq,
    PolyEq,
    PolyIneq,
    PolyEqOpt,
    PolyIneqOpt,
    Mult1,
    Mult2,
    Mult3,
    Mult2w,
    Mult3w,
    Expo,
    RootX,
    Diseq,
}

#[derive(Clone, Debug)]
enum RuleData {
    /// `Σ aᵢ·xᵢ op b`, targeting term `j`.
    Linear { terms: Arc<[(VarId, Int)]>, rhs: Int, j: usize },
    /// Targets the occurrence `xⁿ` of the variable inside monomial `l`.
    Poly { c: Arc<PolynomialConstraint>, l: usize, n: u32, weak: bool, plan: Option<Arc<FractionPlan>> },
    Mul { x: VarId, y: VarId, z: VarId },
    Pow { x: VarId, y: VarId, n: u32 },
    Diseq { c: Arc<PolynomialConstraint> },
}

/// The fractions of the simplifying polynomial form, which depend only on
/// the constraint and the target occurrence.
#[derive(Clone, Debug)]
struct FractionPlan {
    /// The monomial `mₗ / tⁿ` whose sign decides the direction.
    s: Monomial,
    /// One `num / den` per distinct denominator power product.
    fractions: Vec<(Polynomial, Monomial)>,
}

impl FractionPlan {
    fn new(c: &PolynomialConstraint, l: usize, t: VarId, n: u32) -> FractionPlan {
        let m = &c.lhs.monomials()[l];
        let s = Monomial::new(m.coeff.clone(), m.powers.div(&PowerProduct::power(t, n)));
        // [b/s] and −[mᵢ/s], grouped by denominator power product
        let mut groups: Vec<(PowerProduct, Vec<(Monomial, Int)>)> = Vec::new();
        let mut push = |num: Monomial| {
            if num.coeff.is_zero() {
                return;
            }
            let (num, den) = simplify_fraction(num, &s);
            match groups.iter_mut().find(|(pp, _)| *pp == den.powers) {
                Some((_, g)) => g.push((num, den.coeff)),
                None => groups.push((den.powers, vec![(num, den.coeff)])),
            }
        };
        push(Monomial::new(c.rhs.clone(), PowerProduct::one()));
        for (i, mi) in c.lhs.monomials().iter().enumerate() {
            if i != l {
                push(Monomial::new(-&mi.coeff, mi.powers.clone()));
            }
        }
        let fractions = groups
            .into_iter()
            .map(|(pp, fracs)| {
                let lcm = fracs.iter().fold(Int::ONE, |acc, (_, d)| lcm(&acc, d));
                let p = Polynomial::from_terms(
                    fracs.iter().map(|(u, d)| Monomial::new(&u.coeff * &lcm.div_exact(d), u.powers.clone())),
                );
                (p, Monomial::new(lcm, pp))
            })
            .collect();
        FractionPlan { s, fractions }
    }
}

/// One domain reduction function.
#[derive(Clone, Debug)]
pub struct ReductionRule {
    pub kind: RuleKind,
    /// Index of the atom the rule was generated from.
    pub atom: usize,
    /// The variable whose domain the rule narrows.
    pub target: VarId,
    /// Variables whose domains the result depends on.
    pub reads: Vec<VarId>,
    data: RuleData,
}

/// Result of applying a rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleOutcome {
    Unchanged,
    Reduced(VarId),
    Failed(VarId),
}

/// Sign of a monomial whose variables exclude 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct RuleOptions {
    /// Use the fraction-simplifying form of the polynomial rules.
    pub optimized: bool,
    /// Use weak instead of exact interval division.
    pub weak: bool,
}

/// `int(e)` over the store: every operation of the expression replaced by
/// its interval counterpart.
pub fn eval_int(e: &Expr, store: &[IntegerInterval], ops: &mut OpCounters) -> IntegerInterval {
    match e {
        Expr::Var(v) => store[*v].clone(),
        Expr::Lit(c) => IntegerInterval::singleton(c.clone()),
        Expr::Neg(a) => {
            let a = eval_int(a, store, ops);
            ops.scale(&a, &-Int::ONE)
        }
        Expr::Add(a, b) => {
            let (a, b) = (eval_int(a, store, ops), eval_int(b, store, ops));
            ops.add(&a, &b)
        }
        Expr::Sub(a, b) => {
            let (a, b) = (eval_int(a, store, ops), eval_int(b, store, ops));
            ops.sub(&a, &b)
        }
        Expr::Mul(a, b) => match (a.as_ref(), b.as_ref()) {
            (Expr::Lit(k), other) | (other, Expr::Lit(k)) => {
                let x = eval_int(other, store, ops);
                ops.scale(&x, k)
            }
            _ => {
                let (a, b) = (eval_int(a, store, ops), eval_int(b, store, ops));
                ops.mul(&a, &b)
            }
        },
        Expr::Pow(a, n) => {
            let a = eval_int(a, store, ops);
            ops.pow(&a, *n)
        }
        Expr::Root(a, n) => {
            let a = eval_int(a, store, ops);
            ops.root(&a, *n).hull()
        }
        Expr::Div(a, b) => {
            let (a, b) = (eval_int(a, store, ops), eval_int(b, store, ops));
            ops.div(&a, &b)
        }
    }
}

/// `int` of a power product.
pub fn eval_power_product(pp: &PowerProduct, store: &[IntegerInterval], ops: &mut OpCounters) -> IntegerInterval {
    let mut acc: Option<IntegerInterval> = None;
    for &(v, e) in pp.factors() {
        let f = if e > 1 { ops.pow(&store[v], e) } else { store[v].clone() };
        acc = Some(match acc {
            None => f,
            Some(a) => ops.mul(&a, &f),
        });
    }
    acc.unwrap_or_else(|| IntegerInterval::singleton(Int::ONE))
}

/// `int` of a monomial.
pub fn eval_monomial(m: &Monomial, store: &[IntegerInterval], ops: &mut OpCounters) -> IntegerInterval {
    let p = eval_power_product(&m.powers, store, ops);
    if m.coeff == Int::ONE {
        p
    } else {
        ops.scale(&p, &m.coeff)
    }
}

/// `int` of a polynomial, summing monomials left to right.
pub fn eval_polynomial(p: &Polynomial, store: &[IntegerInterval], ops: &mut OpCounters) -> IntegerInterval {
    let mut acc: Option<IntegerInterval> = None;
    for m in p.monomials() {
        let t = eval_monomial(m, store, ops);
        acc = Some(match acc {
            None => t,
            Some(a) => ops.add(&a, &t),
        });
    }
    acc.unwrap_or_else(|| IntegerInterval::singleton(Int::ZERO))
}

/// `b − Σ_{i≠skip} int(mᵢ)`.
fn residual(c: &PolynomialConstraint, skip: usize, store: &[IntegerInterval], ops: &mut OpCounters) -> IntegerInterval {
    let mut r = IntegerInterval::singleton(c.rhs.clone());
    for (i, m) in c.lhs.monomials().iter().enumerate() {
        if i != skip {
            let t = eval_monomial(m, store, ops);
            r = ops.sub(&r, &t);
        }
    }
    r
}

fn write(store: &mut [IntegerInterval], v: VarId, new: IntegerInterval) -> RuleOutcome {
    if new.is_empty() {
        store[v] = IntegerInterval::EMPTY;
        RuleOutcome::Failed(v)
    } else if new != store[v] {
        debug_assert!(new.is_subset(&store[v]));
        store[v] = new;
        RuleOutcome::Reduced(v)
    } else {
        RuleOutcome::Unchanged
    }
}

/// `sign(m)` when no variable domain of `m` contains 0.
pub fn monomial_sign(m: &Monomial, store: &[IntegerInterval]) -> Option<Sign> {
    let mut negative = m.coeff.is_negative();
    for &(v, e) in m.powers.factors() {
        let d = &store[v];
        if d.is_empty() || d.contains_zero() {
            return None;
        }
        if d.hi().signum() < 0 && e % 2 == 1 {
            negative = !negative;
        }
    }
    Some(if negative { Sign::Minus } else { Sign::Plus })
}

impl ReductionRule {
    pub fn writes(&self) -> VarId {
        self.target
    }

    /// Applies the rule to the store, narrowing the target domain.
    pub fn apply(&self, store: &mut [IntegerInterval], ops: &mut OpCounters) -> RuleOutcome {
        let t = self.target;
        let new = match &self.data {
            RuleData::Linear { terms, rhs, j } => self.linear(terms, rhs, *j, store, ops),
            RuleData::Poly { c, l, n, weak, plan } => match plan {
                Some(plan) => match self.poly_opt(c, plan, *n, store, ops) {
                    Some(x) => x,
                    None => self.poly(c, *l, *n, *weak, store, ops),
                },
                _ => self.poly(c, *l, *n, *weak, store, ops),
            },
            RuleData::Mul { x, y, z } => match self.kind {
                RuleKind::Mult1 => ops.mul(&store[*x], &store[*y]).intersect(&store[*z]),
                RuleKind::Mult2 => ops.div(&store[*z], &store[*y]).intersect(&store[*x]),
                RuleKind::Mult3 => ops.div(&store[*z], &store[*x]).intersect(&store[*y]),
                RuleKind::Mult2w => ops.div_weak(&store[*z], &store[*y]).intersect(&store[*x]),
                RuleKind::Mult3w => ops.div_weak(&store[*z], &store[*x]).intersect(&store[*y]),
                _ => unreachable!(),
            },
            RuleData::Pow { x, y, n } => match self.kind {
                RuleKind::Expo => ops.pow(&store[*y], *n).intersect(&store[*x]),
                RuleKind::RootX => ops.root(&store[*x], *n).intersect_hull(&store[*y]),
                _ => unreachable!(),
            },
            RuleData::Diseq { c } => return self.diseq(c, store),
        };
        write(store, t, new)
    }

    fn linear(
        &self,
        terms: &[(VarId, Int)],
        rhs: &Int,
        j: usize,
        store: &[IntegerInterval],
        ops: &mut OpCounters,
    ) -> IntegerInterval {
        let mut r = IntegerInterval::singleton(rhs.clone());
        for (i, (v, a)) in terms.iter().enumerate() {
            if i == j {
                continue;
            }
            r = if *a == Int::ONE {
                ops.sub(&r, &store[*v])
            } else if *a == -Int::ONE {
                ops.add(&r, &store[*v])
            } else {
                let t = ops.scale(&store[*v], a);
                ops.sub(&r, &t)
            };
        }
        let (v, a) = &terms[j];
        let q = match self.kind {
            RuleKind::LinearEq => {
                if *a == Int::ONE {
                    r
                } else {
                    ops.div_const(&r, a)
                }
            }
            _ => {
                let h = match r.hi() {
                    ExtInt::Fin(h) => IntegerInterval::at_most(h.clone()),
                    _ if r.is_empty() => IntegerInterval::EMPTY,
                    _ => IntegerInterval::UNBOUNDED,
                };
                if *a == Int::ONE {
                    h
                } else if *a == -Int::ONE {
                    ops.scale(&h, a)
                } else {
                    ops.div_halfline(&h, &IntegerInterval::singleton(a.clone()))
                }
            }
        };
        q.intersect(&store[*v])
    }

    /// `int(D ∩ ⁿ√(R / s))` for equalities and `int(D ∩ ⁿ√((≤R) / s))` for
    /// inequalities.
    fn poly(
        &self,
        c: &PolynomialConstraint,
        l: usize,
        n: u32,
        weak: bool,
        store: &[IntegerInterval],
        ops: &mut OpCounters,
    ) -> IntegerInterval {
        let t = self.target;
        let r = residual(c, l, store, ops);
        let m = &c.lhs.monomials()[l];
        let s_pp = m.powers.div(&PowerProduct::power(t, n));
        let q = if s_pp.is_one() {
            match c.op {
                RelOp::Eq => ops.div_const(&r, &m.coeff),
                _ => ops.div_halfline(&halfline_at_most(&r), &IntegerInterval::singleton(m.coeff.clone())),
            }
        } else {
            let s = eval_monomial(&Monomial::new(m.coeff.clone(), s_pp), store, ops);
            match c.op {
                RelOp::Eq => ops.divide(&r, &s, weak),
                _ => ops.div_halfline(&halfline_at_most(&r), &s),
            }
        };
        if n == 1 {
            q.intersect(&store[t])
        } else {
            ops.root(&q, n).intersect_hull(&store[t])
        }
    }

    /// The fraction-simplifying form. `None` when some variable of `s` may
    /// be 0, in which case the plain form applies.
    fn poly_opt(
        &self,
        c: &PolynomialConstraint,
        plan: &FractionPlan,
        n: u32,
        store: &[IntegerInterval],
        ops: &mut OpCounters,
    ) -> Option<IntegerInterval> {
        let t = self.target;
        let sign = monomial_sign(&plan.s, store)?;
        let mut total: Option<RationalInterval> = None;
        for (p, d) in &plan.fractions {
            let num = eval_polynomial(p, store, ops);
            let den = eval_monomial(d, store, ops);
            let q = ops.q_div(&RationalInterval::from(&num), &RationalInterval::from(&den));
            total = Some(match total {
                None => q,
                Some(acc) => ops.q_add(&acc, &q),
            });
        }
        let total = total.unwrap_or_else(|| RationalInterval::from(&IntegerInterval::singleton(Int::ZERO)));
        let h = match (c.op, sign) {
            (RelOp::Eq, _) => total.to_integers(),
            (_, Sign::Plus) => total.to_halfline(Side::AtMost),
            (_, Sign::Minus) => total.to_halfline(Side::AtLeast),
        };
        Some(if n == 1 { h.intersect(&store[t]) } else { ops.root(&h, n).intersect_hull(&store[t]) })
    }

    fn diseq(&self, c: &PolynomialConstraint, store: &mut [IntegerInterval]) -> RuleOutcome {
        let t = self.target;
        let mut point = vec![Int::ZERO; store.len()];
        let vars = c.lhs.vars();
        for &v in &vars {
            if v != t {
                match store[v].as_singleton() {
                    Some(x) => point[v] = x.clone(),
                    None => return RuleOutcome::Unchanged,
                }
            }
        }
        if c.lhs.is_linear() {
            // a·t = b − Σ others
            let mut a = Int::ZERO;
            let mut r = c.rhs.clone();
            for m in c.lhs.monomials() {
                if m.powers.as_var() == Some(t) {
                    a = m.coeff.clone();
                } else {
                    r = &r - &m.eval(&point);
                }
            }
            if !r.is_multiple_of(&a) {
                return RuleOutcome::Unchanged;
            }
            let v = r.div_exact(&a);
            let d = &store[t];
            let new = if d.lo_int() == Some(&v) {
                IntegerInterval::from_bounds(ExtInt::Fin(&v + &Int::ONE), d.hi().clone())
            } else if d.hi_int() == Some(&v) {
                IntegerInterval::from_bounds(d.lo().clone(), ExtInt::Fin(&v - &Int::ONE))
            } else {
                return RuleOutcome::Unchanged;
            };
            write(store, t, new)
        } else {
            let Some(x) = store[t].as_singleton() else {
                return RuleOutcome::Unchanged;
            };
            point[t] = x.clone();
            if c.holds(&point) {
                RuleOutcome::Unchanged
            } else {
                write(store, t, IntegerInterval::EMPTY)
            }
        }
    }
}

fn halfline_at_most(r: &IntegerInterval) -> IntegerInterval {
    match r.hi() {
        ExtInt::Fin(h) => IntegerInterval::at_most(h.clone()),
        _ if r.is_empty() => IntegerInterval::EMPTY,
        _ => IntegerInterval::UNBOUNDED,
    }
}

fn lcm(a: &Int, b: &Int) -> Int {
    Int::from_big(a.to_big().lcm(&b.to_big()))
}

/// `[u/v]`: common powers and the coefficient gcd divided out, with the
/// denominator coefficient made positive.
pub fn simplify_fraction(u: Monomial, v: &Monomial) -> (Monomial, Monomial) {
    let g = u.powers.gcd(&v.powers);
    let k = u.coeff.gcd(&v.coeff);
    let mut nc = u.coeff.div_exact(&k);
    let mut dc = v.coeff.div_exact(&k);
    if dc.is_negative() {
        nc = -nc;
        dc = -dc;
    }
    (Monomial::new(nc, u.powers.div(&g)), Monomial::new(dc, v.powers.div(&g)))
}

/// Builds one rule per variable occurrence of every atom.
pub fn build_rules(atoms: &[Atom], opts: RuleOptions) -> Vec<ReductionRule> {
    let mut rules = Vec::new();
    for (ai, atom) in atoms.iter().enumerate() {
        match &atom.kind {
            AtomKind::Poly(c) => poly_rules(ai, c, opts, &mut rules),
            &AtomKind::Mul { x, y, z } => {
                let data = RuleData::Mul { x, y, z };
                let mk = |kind, target, reads: Vec<VarId>| ReductionRule { kind, atom: ai, target, reads, data: data.clone() };
                let (k2, k3) = if opts.weak { (RuleKind::Mult2w, RuleKind::Mult3w) } else { (RuleKind::Mult2, RuleKind::Mult3) };
                rules.push(mk(RuleKind::Mult1, z, dedup(vec![x, y])));
                if x == y {
                    rules.push(mk(k2, x, vec![x, z]));
                } else {
                    rules.push(mk(k2, x, vec![y, z]));
                    rules.push(mk(k3, y, vec![x, z]));
                }
            }
            &AtomKind::Pow { x, y, n } => {
                let data = RuleData::Pow { x, y, n };
                rules.push(ReductionRule { kind: RuleKind::Expo, atom: ai, target: x, reads: vec![y], data: data.clone() });
                let reads = if n % 2 == 0 { vec![x, y] } else { vec![x] };
                rules.push(ReductionRule { kind: RuleKind::RootX, atom: ai, target: y, reads, data });
            }
        }
    }
    rules
}

fn dedup(mut v: Vec<VarId>) -> Vec<VarId> {
    v.sort_unstable();
    v.dedup();
    v
}

fn poly_rules(ai: usize, c: &PolynomialConstraint, opts: RuleOptions, rules: &mut Vec<ReductionRule>) {
    let all_vars = c.lhs.vars();
    let occurs_elsewhere = |v: VarId, l: usize| {
        c.lhs.monomials().iter().enumerate().any(|(i, m)| i != l && m.powers.exponent(v) > 0)
    };
    let reads_for = |t: VarId, l: usize, self_dependent: bool| {
        all_vars.iter().copied().filter(|&v| v != t || self_dependent || occurs_elsewhere(t, l)).collect::<Vec<_>>()
    };
    if c.op == RelOp::Neq {
        let shared = Arc::new(c.clone());
        for (l, m) in c.lhs.monomials().iter().enumerate() {
            for t in m.powers.vars() {
                rules.push(ReductionRule {
                    kind: RuleKind::Diseq,
                    atom: ai,
                    target: t,
                    reads: reads_for(t, l, true),
                    data: RuleData::Diseq { c: shared.clone() },
                });
            }
        }
        return;
    }
    if c.lhs.is_linear() {
        let terms: Arc<[(VarId, Int)]> = c
            .lhs
            .monomials()
            .iter()
            .map(|m| (m.powers.as_var().expect("linear term"), m.coeff.clone()))
            .collect();
        let kind = if c.op == RelOp::Eq { RuleKind::LinearEq } else { RuleKind::LinearIneq };
        for (j, (t, _)) in terms.iter().enumerate() {
            rules.push(ReductionRule {
                kind,
                atom: ai,
                target: *t,
                reads: reads_for(*t, j, false),
                data: RuleData::Linear { terms: terms.clone(), rhs: c.rhs.clone(), j },
            });
        }
        return;
    }
    let shared = Arc::new(c.clone());
    let kind = match (c.op, opts.optimized) {
        (RelOp::Eq, false) => RuleKind::PolyEq,
        (RelOp::Eq, true) => RuleKind::PolyEqOpt,
        (_, false) => RuleKind::PolyIneq,
        (_, true) => RuleKind::PolyIneqOpt,
    };
    let plan = |l, t, n| opts.optimized.then(|| Arc::new(FractionPlan::new(c, l, t, n)));
    for (l, m) in c.lhs.monomials().iter().enumerate() {
        for &(t, n) in m.powers.factors() {
            rules.push(ReductionRule {
                kind,
                atom: ai,
                target: t,
                reads: reads_for(t, l, n % 2 == 0),
                data: RuleData::Poly { c: shared.clone(), l, n, weak: opts.weak, plan: plan(l, t, n) },
            });
        }
    }
}

/// Checks bounds consistency of `x·y = z`: every bound of every domain
/// extends to a real solution within the real hulls of the other domains.
pub fn is_bounds_consistent(x: &IntegerInterval, y: &IntegerInterval, z: &IntegerInterval) -> bool {
    let (Some((lx, hx)), Some((ly, hy)), Some((lz, hz))) = (bounds(x), bounds(y), bounds(z)) else {
        return false;
    };
    // a·[l..h] meets [lz..hz]
    let meets = |a: &Int, l: &Int, h: &Int| {
        let (p, q) = (a * l, a * h);
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        lo <= hz && lz <= hi
    };
    let products = [&lx * &ly, &lx * &hy, &hx * &ly, &hx * &hy];
    let pmin = products.iter().min().unwrap();
    let pmax = products.iter().max().unwrap();
    [&lx, &hx].iter().all(|a| meets(a, &ly, &hy))
        && [&ly, &hy].iter().all(|b| meets(b, &lx, &hx))
        && [&lz, &hz].iter().all(|c| pmin <= c && *c <= pmax)
}

fn bounds(x: &IntegerInterval) -> Option<(Int, Int)> {
    Some((x.lo_int()?.clone(), x.hi_int()?.clone()))
}
