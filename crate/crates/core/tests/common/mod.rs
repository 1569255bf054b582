//! Brute-force helpers shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use intprop::decompose::{AuxDefinition, DecomposedCsp};
use intprop::model::{normalize, Normalized};
use intprop::rules::{build_rules, Atom, AtomKind, ReductionRule, RuleOptions, RuleOutcome};
use intprop::{Cmp, Csp, Expr, Int, IntegerInterval, OpCounters, PolynomialConstraint};
use proptest::prelude::*;

pub fn bounded(r: i64) -> impl Strategy<Value = IntegerInterval> {
    (-r..=r, -r..=r).prop_map(|(a, b)| IntegerInterval::new(a.min(b), a.max(b)))
}

pub fn values(x: &IntegerInterval) -> Vec<i64> {
    if x.is_empty() {
        return vec![];
    }
    (x.lo_int().unwrap().to_i64().unwrap()..=x.hi_int().unwrap().to_i64().unwrap()).collect()
}

/// Every point of the box `doms`, in lexicographic order.
pub fn points(doms: &[IntegerInterval]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for d in doms {
        let vs = values(d);
        out = out.into_iter().flat_map(|p: Vec<i64>| vs.iter().map(move |&v| [p.clone(), vec![v]].concat())).collect();
    }
    out
}

pub fn ints(p: &[i64]) -> Vec<Int> {
    p.iter().map(|&v| Int::from(v)).collect()
}

/// Solutions of a CSP with bounded domains, by enumeration.
pub fn enumerate(csp: &Csp) -> BTreeSet<Vec<i64>> {
    points(&csp.domains()).into_iter().filter(|p| csp.verify(&ints(p))).collect()
}

/// Extends a point of the user variables with the values its auxiliaries
/// stand for.
pub fn extend(dec: &DecomposedCsp, user: &[Int]) -> Vec<Int> {
    let mut p = user.to_vec();
    for d in &dec.aux_defs {
        let v = match &d.def {
            AuxDefinition::PowerProduct(pp) => pp.eval(&p),
            AuxDefinition::Product(a, b) => &p[*a] * &p[*b],
            AuxDefinition::Power(a, n) => p[*a].pow(*n),
        };
        p.push(v);
    }
    p
}

/// Whether a point of the user variables extends to a solution of the
/// decomposed CSP. Auxiliaries are determined by their definitions, so the
/// extension is unique when it exists.
pub fn decomposed_holds(dec: &DecomposedCsp, user: &[Int]) -> bool {
    let p = extend(dec, user);
    !dec.infeasible && p.iter().zip(&dec.domains).all(|(v, d)| d.contains(v)) && dec.atoms.iter().all(|a| a.holds(&p))
}

pub fn to_i64(p: &[Int]) -> Vec<i64> {
    p.iter().map(|v| v.to_i64().unwrap()).collect()
}

/// `(x1, x2, x3, x4, n)` with `1 ≤ x1 < x2 < x3 < x4` and cube sum `n ≤ max`.
pub fn cubes_oracle(max: i64) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    let c = |x: i64| x * x * x;
    let mut a = 1;
    while c(a) <= max {
        let mut b = a + 1;
        while c(a) + c(b) <= max {
            let mut d = b + 1;
            while c(a) + c(b) + c(d) <= max {
                let mut e = d + 1;
                while c(a) + c(b) + c(d) + c(e) <= max {
                    out.insert(vec![a, b, d, e, c(a) + c(b) + c(d) + c(e)]);
                    e += 1;
                }
                d += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

fn permutations(items: &mut Vec<i64>, k: usize, out: &mut Vec<Vec<i64>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// `A/BC + D/EF + G/HI = 1` over permutations of the digits 1..9, with the
/// fractions in non-increasing order.
pub fn fractions_oracle() -> BTreeSet<Vec<i64>> {
    let mut perms = Vec::new();
    permutations(&mut (1..=9).collect(), 0, &mut perms);
    perms
        .into_iter()
        .filter(|p| {
            let (a, bc, d, ef, g, hi) = (p[0], 10 * p[1] + p[2], p[3], 10 * p[4] + p[5], p[6], 10 * p[7] + p[8]);
            a * ef * hi + d * bc * hi + g * bc * ef == bc * ef * hi && a * ef >= d * bc && d * hi >= g * ef
        })
        .collect()
}

/// `(B, K, Y, O, T)` with `3·KYOTO = TOKYO` in base `B ≤ max_base` and
/// distinct digits, `K` and `T` nonzero.
pub fn kyoto_oracle(max_base: i64) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    for b in 2..=max_base {
        let word = |ds: [i64; 5]| ds.iter().fold(0i64, |acc, &d| acc * b + d);
        for k in 1..b {
            for y in 0..b {
                for o in 0..b {
                    for t in 1..b {
                        let distinct = [k, y, o, t].iter().collect::<BTreeSet<_>>().len() == 4;
                        if distinct && 3 * word([k, y, o, t, o]) == word([t, o, k, y, o]) {
                            out.insert(vec![b, k, y, o, t]);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Exact result of a set operation, `None` when the set is infinite.
pub type Exact = Option<BTreeSet<i64>>;

pub fn pairs(x: &IntegerInterval, y: &IntegerInterval, f: impl Fn(i64, i64) -> i64) -> Exact {
    let mut s = BTreeSet::new();
    for a in values(x) {
        for b in values(y) {
            s.insert(f(a, b));
        }
    }
    Some(s)
}

/// `{u | ∃a ∈ x ∃b ∈ y, u·b = a}`.
pub fn exact_div(x: &IntegerInterval, y: &IntegerInterval) -> Exact {
    if x.contains_zero() && y.contains_zero() {
        return None;
    }
    let mut s = BTreeSet::new();
    for a in values(x) {
        for b in values(y) {
            if b != 0 && a % b == 0 {
                s.insert(a / b);
            }
        }
    }
    Some(s)
}

pub fn exact_pow(x: &IntegerInterval, n: u32) -> Exact {
    Some(values(x).into_iter().map(|a| a.pow(n)).collect())
}

/// `{v ∈ [-r..r] | vⁿ ∈ x}`; `r` must cover every root.
pub fn exact_root(x: &IntegerInterval, n: u32, r: i64) -> BTreeSet<i64> {
    (-r..=r).filter(|v| x.contains(&Int::from(v.pow(n)))).collect()
}

pub fn contains_set(iv: &IntegerInterval, exact: &Exact) -> bool {
    match exact {
        None => *iv == IntegerInterval::UNBOUNDED,
        Some(s) => s.iter().all(|v| iv.contains(&Int::from(*v))),
    }
}

/// The interval is exactly the hull of the set.
pub fn is_closure(iv: &IntegerInterval, exact: &Exact) -> bool {
    match exact {
        None => *iv == IntegerInterval::UNBOUNDED,
        Some(s) => *iv == IntegerInterval::hull(&s.iter().map(|v| Int::from(*v)).collect::<Vec<_>>()),
    }
}

pub fn interval(r: i64) -> impl Strategy<Value = IntegerInterval> {
    prop_oneof![1 => Just(IntegerInterval::EMPTY), 12 => bounded(r)]
}

/// All points of the box satisfying the atom.
pub fn atom_solutions(atom: &Atom, store: &[IntegerInterval]) -> Vec<Vec<i64>> {
    points(store).into_iter().filter(|p| atom.holds(&ints(p))).collect()
}

fn monomial_expr() -> impl Strategy<Value = Expr> {
    (prop_oneof![-3i64..=-1, 1i64..=3], prop::collection::vec((0usize..3, 1u32..=3), 1..=2)).prop_map(|(c, f)| {
        let mut e = Expr::lit(c);
        for (v, n) in f {
            e = e * Expr::var(v).pow_mul(n);
        }
        e
    })
}

pub fn polynomial_constraint() -> impl Strategy<Value = PolynomialConstraint> {
    (
        prop::collection::vec(monomial_expr(), 1..=3),
        prop_oneof![Just(Cmp::Eq), Just(Cmp::Le), Just(Cmp::Ge), Just(Cmp::Ne), Just(Cmp::Lt)],
        -10i64..=10,
    )
        .prop_filter_map("trivial", |(ms, cmp, b)| match normalize(&Expr::sum(ms), cmp, &Expr::lit(b)) {
            Normalized::Constraint(c) => Some(c),
            _ => None,
        })
}

/// Polynomial constraints and multiplication and power atoms over three
/// variables.
pub fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        3 => polynomial_constraint().prop_map(Atom::poly),
        1 => (0usize..3, 0usize..3, 0usize..3).prop_filter("z distinct", |(x, y, z)| z != x && z != y)
            .prop_map(|(x, y, z)| Atom { kind: AtomKind::Mul { x, y, z }, defines: None }),
        1 => (0usize..3, 0usize..3, 2u32..=3).prop_filter("distinct", |(x, y, _)| x != y)
            .prop_map(|(x, y, n)| Atom { kind: AtomKind::Pow { x, y, n }, defines: None }),
    ]
}

/// Applies every rule of the atom once to the store and checks that the
/// solutions are kept and only the target shrinks. Returns a description
/// of the first violation.
pub fn check_rules_on(atom: &Atom, store: &[IntegerInterval], opts: RuleOptions) -> Result<(), String> {
    let rules = build_rules(std::slice::from_ref(atom), opts);
    let before = atom_solutions(atom, store);
    for rule in &rules {
        let mut s = store.to_vec();
        let mut ops = OpCounters::new();
        let out = rule.apply(&mut s, &mut ops);
        for v in 0..store.len() {
            let ok = if v == rule.target { s[v].is_subset(&store[v]) } else { s[v] == store[v] };
            if !ok {
                return Err(format!("{:?} touched x{v} on {store:?}", rule.kind));
            }
        }
        match out {
            RuleOutcome::Failed(v) => {
                if v != rule.target || !before.is_empty() {
                    return Err(format!("{:?} failed on {store:?} with solutions", rule.kind));
                }
            }
            _ => {
                if atom_solutions(atom, &s) != before {
                    return Err(format!("{:?} lost solutions on {store:?}", rule.kind));
                }
            }
        }
        if out == RuleOutcome::Unchanged && s != store {
            return Err(format!("{:?} changed the store but reported no change", rule.kind));
        }
    }
    Ok(())
}

pub fn mult_rules(weak: bool) -> Vec<ReductionRule> {
    let atom = Atom { kind: AtomKind::Mul { x: 0, y: 1, z: 2 }, defines: None };
    build_rules(&[atom], RuleOptions { optimized: false, weak })
}

pub fn is_fixpoint(rules: &[ReductionRule], store: &[IntegerInterval]) -> bool {
    let mut ops = OpCounters::new();
    rules.iter().all(|r| r.apply(&mut store.to_vec(), &mut ops) == RuleOutcome::Unchanged)
}

/// Applies the rules round robin until nothing changes. False when a domain
/// becomes empty.
pub fn close(rules: &[ReductionRule], store: &mut [IntegerInterval]) -> bool {
    let mut ops = OpCounters::new();
    loop {
        let mut changed = false;
        for r in rules {
            match r.apply(store, &mut ops) {
                RuleOutcome::Failed(_) => return false,
                RuleOutcome::Reduced(_) => changed = true,
                RuleOutcome::Unchanged => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

fn interior_has_zero(x: &IntegerInterval) -> bool {
    x.interior().contains(&Int::ZERO)
}

/// Both factors have 0 strictly inside while the product excludes 0. Real
/// witnesses can then be fractions that integer division does not admit.
pub fn straddles_without_zero(x: &IntegerInterval, y: &IntegerInterval, z: &IntegerInterval) -> bool {
    interior_has_zero(x) && interior_has_zero(y) && !z.contains(&Int::ZERO)
}

/// Expressions with the extended operations over three variables.
pub fn extended_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![(0usize..3).prop_map(Expr::var), (-4i64..=4).prop_map(Expr::lit)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| -e),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), 1u32..=3).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
            (inner.clone(), 1u32..=3).prop_map(|(a, n)| Expr::Root(Box::new(a), n)),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
        ]
    })
}
