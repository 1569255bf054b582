use super::expr::{Expr, VarId};
use super::poly::{normalize, Cmp, Normalized, PolynomialConstraint};
use crate::int::Int;
use crate::interval::IntegerInterval;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub domain: IntegerInterval,
}

/// A constraint as written by the user, kept for verifying solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceConstraint {
    pub lhs: Expr,
    pub cmp: Cmp,
    pub rhs: Expr,
}

impl SourceConstraint {
    pub fn holds(&self, point: &[Int]) -> bool {
        match (self.lhs.eval(point), self.rhs.eval(point)) {
            (Some(a), Some(b)) => self.cmp.holds(&a, &b),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Goal {
    #[default]
    All,
    Maximize(Expr),
}

/// Variables with domains and polynomial constraints over them.
///
/// Variable ids are dense and follow declaration order, which is also the
/// variable ordering used for normal forms and for branching.
#[derive(Clone, Debug, Default)]
pub struct Csp {
    pub variables: Vec<Variable>,
    pub sources: Vec<SourceConstraint>,
    pub constraints: Vec<PolynomialConstraint>,
    /// Set when some constraint normalized to a contradiction such as `0 = 1`.
    pub infeasible: bool,
    pub goal: Goal,
}

impl Csp {
    pub fn new() -> Csp {
        Csp::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, domain: IntegerInterval) -> VarId {
        self.variables.push(Variable { name: name.into(), domain });
        self.variables.len() - 1
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.variables[v].name
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn domains(&self) -> Vec<IntegerInterval> {
        self.variables.iter().map(|v| v.domain.clone()).collect()
    }

    /// Records `lhs cmp rhs` and its normal form.
    pub fn add_constraint(&mut self, lhs: Expr, cmp: Cmp, rhs: Expr) {
        match normalize(&lhs, cmp, &rhs) {
            Normalized::Constraint(c) => self.constraints.push(c),
            Normalized::Trivial => {}
            Normalized::Infeasible => self.infeasible = true,
        }
        self.sources.push(SourceConstraint { lhs, cmp, rhs });
    }

    /// Checks a full assignment against the domains and every source
    /// constraint with exact arithmetic.
    pub fn verify(&self, point: &[Int]) -> bool {
        point.len() == self.variables.len()
            && self.variables.iter().zip(point).all(|(v, x)| v.domain.contains(x))
            && self.sources.iter().all(|c| c.holds(point))
    }

    /// Value of the objective at a point, if there is one.
    pub fn objective_value(&self, point: &[Int]) -> Option<Int> {
        match &self.goal {
            Goal::All => None,
            Goal::Maximize(e) => e.eval(point),
        }
    }
}
