//! Rewriting of polynomial constraints with auxiliary variables, and the
//! rule schedule that follows the resulting variable hierarchy.
//!
//! The partial variants replace nonlinear power products by auxiliary
//! variables defined through `u - p = 0`. The full variants go further and
//! build every power product from products `x·y = z` and, when allowed,
//! powers `x = yⁿ`, so that only linear constraints remain besides those.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::counters::OpCounters;
use crate::interval::IntegerInterval;
use crate::model::{Csp, Monomial, Polynomial, PolynomialConstraint, PowerProduct, RelOp, VarId};
use crate::rules::{build_rules, eval_power_product, Atom, AtomKind, DomainStore, ReductionRule, RuleOptions};

/// How constraints are turned into reduction rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    /// Rules on the original constraints.
    #[serde(rename = "du")]
    DirectUnoptimized,
    /// Rules on the original constraints, with common powers divided out.
    #[serde(rename = "do")]
    DirectOptimized,
    /// One auxiliary per nonlinear power product.
    #[serde(rename = "pu")]
    PartialUnoptimized,
    /// Auxiliaries only until no variable occurs twice in a constraint.
    #[serde(rename = "po")]
    PartialOptimized,
    /// Full decomposition into linear constraints and products.
    #[serde(rename = "fm")]
    FullMultiplication,
    /// Full decomposition that also allows `x = y²`.
    #[serde(rename = "fs")]
    FullSquaring,
    /// Full decomposition that also allows `x = yⁿ`.
    #[serde(rename = "fe")]
    FullExponentiation,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::DirectUnoptimized,
        Variant::DirectOptimized,
        Variant::PartialUnoptimized,
        Variant::PartialOptimized,
        Variant::FullMultiplication,
        Variant::FullSquaring,
        Variant::FullExponentiation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::DirectUnoptimized => "du",
            Variant::DirectOptimized => "do",
            Variant::PartialUnoptimized => "pu",
            Variant::PartialOptimized => "po",
            Variant::FullMultiplication => "fm",
            Variant::FullSquaring => "fs",
            Variant::FullExponentiation => "fe",
        }
    }

    pub fn is_full(self) -> bool {
        matches!(self, Variant::FullMultiplication | Variant::FullSquaring | Variant::FullExponentiation)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Variant, String> {
        Variant::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| format!("unknown variant `{s}`"))
    }
}

/// What an auxiliary variable stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AuxDefinition {
    /// A power product over user variables, `u = p`.
    PowerProduct(PowerProduct),
    /// `u = x·y`.
    Product(VarId, VarId),
    /// `u = xⁿ`.
    Power(VarId, u32),
}

impl AuxDefinition {
    /// Variables the definition refers to.
    pub fn vars(&self) -> Vec<VarId> {
        match self {
            AuxDefinition::PowerProduct(p) => p.vars().collect(),
            &AuxDefinition::Product(x, y) if x == y => vec![x],
            &AuxDefinition::Product(x, y) => vec![x, y],
            &AuxDefinition::Power(x, _) => vec![x],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxDef {
    pub var: VarId,
    pub def: AuxDefinition,
}

/// A CSP rewritten for one variant, with its rules and schedule.
///
/// Variables `0..num_user` are those of the source CSP; auxiliaries follow
/// in order of definition, each defined only in terms of earlier ones. The
/// first `aux_defs.len()` atoms define the auxiliaries, in the same order,
/// and the remaining atoms are the rewritten constraints.
#[derive(Clone, Debug)]
pub struct DecomposedCsp {
    pub variant: Variant,
    pub names: Vec<String>,
    /// Initial domains, auxiliaries included.
    pub domains: DomainStore,
    pub num_user: usize,
    pub aux_defs: Vec<AuxDef>,
    pub atoms: Vec<Atom>,
    pub rules: Vec<ReductionRule>,
    pub schedule: Vec<usize>,
    /// For every variable, the rules that read it.
    pub watchers: Vec<Vec<usize>>,
    /// Some constraint normalized to a contradiction.
    pub infeasible: bool,
}

impl DecomposedCsp {
    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn is_aux(&self, v: VarId) -> bool {
        v >= self.num_user
    }

    pub fn aux_def(&self, v: VarId) -> Option<&AuxDef> {
        v.checked_sub(self.num_user).map(|k| &self.aux_defs[k])
    }

    /// Index of the atom defining auxiliary `v`.
    fn def_atom(&self, v: VarId) -> usize {
        v - self.num_user
    }
}

struct Builder {
    variant: Variant,
    num_user: usize,
    /// The power product over user variables each variable stands for.
    repr: Vec<PowerProduct>,
    defs: Vec<AuxDefinition>,
    terms: HashMap<PowerProduct, VarId>,
}

impl Builder {
    fn new(variant: Variant, num_user: usize) -> Builder {
        let repr: Vec<PowerProduct> = (0..num_user).map(PowerProduct::var).collect();
        let terms = repr.iter().cloned().zip(0..num_user).collect();
        Builder { variant, num_user, repr, defs: Vec::new(), terms }
    }

    fn add(&mut self, pp: PowerProduct, def: AuxDefinition) -> VarId {
        let v = self.num_user + self.defs.len();
        self.defs.push(def);
        self.repr.push(pp.clone());
        self.terms.insert(pp, v);
        v
    }

    /// Auxiliary equal to `pp` defined directly over user variables.
    fn flat(&mut self, pp: &PowerProduct) -> VarId {
        match self.terms.get(pp) {
            Some(&v) => v,
            None => self.add(pp.clone(), AuxDefinition::PowerProduct(pp.clone())),
        }
    }

    fn power(&mut self, x: VarId, n: u32) -> VarId {
        let pp = pow_pp(&self.repr[x], n);
        match self.terms.get(&pp) {
            Some(&v) => v,
            None => self.add(pp, AuxDefinition::Power(x, n)),
        }
    }

    /// Variable equal to `pp`, built from products and powers of existing
    /// variables. Larger sub-terms are built first; ties go to powers, then
    /// to powers of earlier variables and products of later ones.
    fn build(&mut self, pp: &PowerProduct) -> VarId {
        if let Some(&v) = self.terms.get(pp) {
            return v;
        }
        match self.variant {
            Variant::FullExponentiation => {
                for &(x, e) in pp.factors() {
                    if e > 1 {
                        self.power(x, e);
                    }
                }
            }
            Variant::FullSquaring => {
                for &(x, e) in pp.factors() {
                    let mut base = x;
                    let mut k = 2;
                    while k <= e {
                        base = self.power(base, 2);
                        k *= 2;
                    }
                }
            }
            _ => {}
        }
        while !self.terms.contains_key(pp) {
            let parts: Vec<VarId> = (0..self.repr.len()).filter(|&v| self.repr[v].divides(pp)).collect();
            let mut best: Option<(Candidate, PowerProduct)> = None;
            let mut consider = |c: Candidate, prod: PowerProduct, terms: &HashMap<PowerProduct, VarId>| {
                if !prod.divides(pp) || terms.contains_key(&prod) {
                    return;
                }
                let better = match &best {
                    None => true,
                    Some((b, bp)) => {
                        let (d, bd) = (prod.degree(), bp.degree());
                        if d != bd {
                            d > bd
                        } else if c.is_power() != b.is_power() {
                            c.is_power()
                        } else if c.is_power() {
                            prod > *bp
                        } else {
                            prod < *bp
                        }
                    }
                };
                if better {
                    best = Some((c, prod));
                }
            };
            for (i, &a) in parts.iter().enumerate() {
                for &b in &parts[i..] {
                    let prod = self.repr[a].mul(&self.repr[b]);
                    let c = if a == b && self.variant != Variant::FullMultiplication {
                        Candidate::Power(a, 2)
                    } else {
                        Candidate::Product(a, b)
                    };
                    consider(c, prod, &self.terms);
                }
                if self.variant == Variant::FullExponentiation {
                    let mut n = 3;
                    loop {
                        let prod = pow_pp(&self.repr[a], n);
                        if !prod.divides(pp) {
                            break;
                        }
                        consider(Candidate::Power(a, n), prod, &self.terms);
                        n += 1;
                    }
                }
            }
            let (c, prod) = best.expect("a power product of degree two or more has a divisor to build");
            match c {
                Candidate::Product(a, b) => self.add(prod, AuxDefinition::Product(a, b)),
                Candidate::Power(a, n) => self.add(prod, AuxDefinition::Power(a, n)),
            };
        }
        self.terms[pp]
    }
}

#[derive(Clone, Copy)]
enum Candidate {
    Product(VarId, VarId),
    Power(VarId, u32),
}

impl Candidate {
    fn is_power(self) -> bool {
        match self {
            Candidate::Power(..) => true,
            Candidate::Product(a, b) => a == b,
        }
    }
}

fn pow_pp(p: &PowerProduct, n: u32) -> PowerProduct {
    PowerProduct::from_pairs(p.factors().iter().map(|&(v, e)| (v, e * n)))
}

/// Replaces monomial `l` of `c` by `coeff · u`, keeping its position.
fn substitute(c: &PolynomialConstraint, l: usize, u: VarId) -> PolynomialConstraint {
    let monomials = c
        .lhs
        .monomials()
        .iter()
        .enumerate()
        .map(|(i, m)| if i == l { Monomial::new(m.coeff.clone(), PowerProduct::var(u)) } else { m.clone() })
        .collect();
    PolynomialConstraint::new(Polynomial::from_ordered(monomials), c.op, c.rhs.clone())
}

/// Monomial `l` shares a variable with another monomial.
fn has_duplicate(c: &PolynomialConstraint, l: usize) -> bool {
    let ms = c.lhs.monomials();
    ms[l].powers.vars().any(|v| ms.iter().enumerate().any(|(i, m)| i != l && m.powers.exponent(v) > 0))
}

/// Rewrites the constraints of `csp` for `variant` and generates rules and
/// schedule. `weak` selects weak interval division.
pub fn decompose(csp: &Csp, variant: Variant, weak: bool) -> DecomposedCsp {
    let num_user = csp.num_vars();
    let mut b = Builder::new(variant, num_user);
    let mut user: Vec<PolynomialConstraint> = Vec::new();
    for c in &csp.constraints {
        let mut c = c.clone();
        for l in 0..c.lhs.len() {
            let pp = c.lhs.monomials()[l].powers.clone();
            if pp.degree() < 2 {
                continue;
            }
            let u = match variant {
                Variant::DirectUnoptimized | Variant::DirectOptimized => continue,
                Variant::PartialUnoptimized => b.flat(&pp),
                Variant::PartialOptimized => {
                    if c.lhs.is_simple() {
                        break;
                    }
                    if !has_duplicate(&c, l) {
                        continue;
                    }
                    b.flat(&pp)
                }
                _ => b.build(&pp),
            };
            c = substitute(&c, l, u);
        }
        user.push(c);
    }

    // Drop auxiliaries that no constraint needs and renumber the rest.
    let mut used = vec![false; b.repr.len()];
    for c in &user {
        for v in c.lhs.vars() {
            used[v] = true;
        }
    }
    for k in (0..b.defs.len()).rev() {
        if used[num_user + k] {
            for v in b.defs[k].vars() {
                used[v] = true;
            }
        }
    }
    let mut renum = vec![usize::MAX; b.repr.len()];
    let mut next = 0;
    for (v, &u) in used.iter().enumerate() {
        if v < num_user || u {
            renum[v] = next;
            next += 1;
        }
    }
    let mut aux_defs = Vec::new();
    for (k, def) in b.defs.iter().enumerate() {
        let v = num_user + k;
        if !used[v] {
            continue;
        }
        let def = match def {
            AuxDefinition::PowerProduct(p) => AuxDefinition::PowerProduct(p.clone()),
            &AuxDefinition::Product(x, y) => AuxDefinition::Product(renum[x], renum[y]),
            &AuxDefinition::Power(x, n) => AuxDefinition::Power(renum[x], n),
        };
        aux_defs.push(AuxDef { var: renum[v], def });
    }
    let renumber = |c: &PolynomialConstraint| {
        let ms = c
            .lhs
            .monomials()
            .iter()
            .map(|m| {
                Monomial::new(m.coeff.clone(), PowerProduct::from_pairs(m.powers.factors().iter().map(|&(v, e)| (renum[v], e))))
            })
            .collect();
        PolynomialConstraint::new(Polynomial::from_ordered(ms), c.op, c.rhs.clone())
    };

    let mut names: Vec<String> = csp.variables.iter().map(|v| v.name.clone()).collect();
    let mut atoms = Vec::new();
    for (k, d) in aux_defs.iter().enumerate() {
        names.push(format!("_u{}", k + 1));
        let u = d.var;
        let kind = match &d.def {
            AuxDefinition::PowerProduct(p) => AtomKind::Poly(PolynomialConstraint::new(
                Polynomial::from_ordered(vec![Monomial::new(1, PowerProduct::var(u)), Monomial::new(-1, p.clone())]),
                RelOp::Eq,
                0,
            )),
            &AuxDefinition::Product(x, y) => AtomKind::Mul { x, y, z: u },
            &AuxDefinition::Power(y, n) => AtomKind::Pow { x: u, y, n },
        };
        atoms.push(Atom { kind, defines: Some(u) });
    }
    atoms.extend(user.iter().map(|c| Atom::poly(renumber(c))));

    let opts = RuleOptions { optimized: variant == Variant::DirectOptimized, weak };
    let rules = build_rules(&atoms, opts);
    let mut watchers = vec![Vec::new(); names.len()];
    for (i, r) in rules.iter().enumerate() {
        for &v in &r.reads {
            watchers[v].push(i);
        }
    }
    let mut dec = DecomposedCsp {
        variant,
        names,
        domains: csp.domains(),
        num_user,
        aux_defs,
        atoms,
        rules,
        schedule: Vec::new(),
        watchers,
        infeasible: csp.infeasible,
    };
    dec.domains = compute_aux_domains(&dec, &dec.domains[..num_user]);
    dec.schedule = generate_schedule(&dec);
    dec
}

/// Extends the user-variable domains with the domain of every auxiliary,
/// evaluated bottom-up from its definition.
pub fn compute_aux_domains(dec: &DecomposedCsp, user: &[IntegerInterval]) -> DomainStore {
    let mut store: DomainStore = user.to_vec();
    let mut ops = OpCounters::new();
    for d in &dec.aux_defs {
        let v = match &d.def {
            AuxDefinition::PowerProduct(p) => eval_power_product(p, &store, &mut ops),
            &AuxDefinition::Product(x, y) => store[x].mul(&store[y]),
            &AuxDefinition::Power(x, n) => store[x].pow(n),
        };
        store.push(v);
    }
    store
}

/// The visiting order of the rules.
///
/// Every rule of a rewritten constraint is preceded by the rules that
/// compute the auxiliaries it reads, innermost first, and followed by the
/// rules that push a change of the auxiliary it writes back down to the
/// variables defining it, outermost first. Without auxiliaries this is the
/// rule order.
pub fn generate_schedule(dec: &DecomposedCsp) -> Vec<usize> {
    let n = dec.rules.len();
    if dec.aux_defs.is_empty() {
        return (0..n).collect();
    }
    let mut by_atom: Vec<Vec<usize>> = vec![Vec::new(); dec.atoms.len()];
    for (i, r) in dec.rules.iter().enumerate() {
        by_atom[r.atom].push(i);
    }
    let forward = |v: VarId, out: &mut Vec<usize>| {
        fn go(dec: &DecomposedCsp, by_atom: &[Vec<usize>], v: VarId, out: &mut Vec<usize>) {
            let d = dec.aux_def(v).expect("auxiliary");
            for c in d.def.vars() {
                if dec.is_aux(c) {
                    go(dec, by_atom, c, out);
                }
            }
            out.extend(by_atom[dec.def_atom(v)].iter().copied().filter(|&r| dec.rules[r].target == v));
        }
        go(dec, &by_atom, v, out)
    };
    let backward = |v: VarId, out: &mut Vec<usize>| {
        fn go(dec: &DecomposedCsp, by_atom: &[Vec<usize>], v: VarId, out: &mut Vec<usize>) {
            out.extend(by_atom[dec.def_atom(v)].iter().copied().filter(|&r| dec.rules[r].target != v));
            for c in dec.aux_def(v).expect("auxiliary").def.vars() {
                if dec.is_aux(c) {
                    go(dec, by_atom, c, out);
                }
            }
        }
        go(dec, &by_atom, v, out)
    };
    let mut schedule = Vec::new();
    let mut seen = vec![false; n];
    let first_user = dec.aux_defs.len();
    for (f, rule) in dec.rules.iter().enumerate() {
        if rule.atom < first_user {
            continue;
        }
        let mut frag = Vec::new();
        for &v in &rule.reads {
            if dec.is_aux(v) {
                forward(v, &mut frag);
            }
        }
        frag.push(f);
        if dec.is_aux(rule.target) {
            backward(rule.target, &mut frag);
        }
        let mut in_frag = vec![false; n];
        for r in frag {
            if !in_frag[r] {
                in_frag[r] = true;
                seen[r] = true;
                schedule.push(r);
            }
        }
    }
    schedule.extend((0..n).filter(|&r| !seen[r]));
    schedule
}
