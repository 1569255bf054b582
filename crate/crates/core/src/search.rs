//! Depth-first branch and propagate search.
//!
//! Branching picks the first user variable, in declaration order, whose
//! domain is not a singleton and splits it at the floor of its midpoint,
//! lower half first. Auxiliary variables are never branched on. Every node,
//! the root included, runs propagation to a fixpoint before branching.

use serde::Serialize;
use thiserror::Error;

use crate::counters::OpCounters;
use crate::decompose::{decompose, Variant};
use crate::engine::{Mode, Propagation, Solver, DEFAULT_STEP_LIMIT};
use crate::int::Int;
use crate::interval::IntegerInterval;
use crate::model::{Cmp, Csp, Expr, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub variant: Variant,
    /// Weak interval division in the multiplication and polynomial rules.
    pub weak: bool,
    pub mode: Mode,
    /// Stop after this many search nodes.
    pub max_nodes: Option<u64>,
    /// Application budget of one propagation call.
    pub step_limit: u64,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            variant: Variant::DirectUnoptimized,
            weak: false,
            mode: Mode::Scheduled,
            max_nodes: None,
            step_limit: DEFAULT_STEP_LIMIT,
        }
    }
}

impl SearchConfig {
    pub fn with_variant(variant: Variant) -> SearchConfig {
        SearchConfig { variant, ..SearchConfig::default() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Variables after decomposition.
    pub nvar: usize,
    /// Rules after decomposition.
    pub ndrf: usize,
    /// Search tree nodes, failures and solutions included.
    pub nodes: u64,
    pub solutions: u64,
    pub drf_applications: u64,
    pub drf_effective: u64,
    pub counters: OpCounters,
    /// False when the node limit cut the search short.
    pub complete: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("domain of `{0}` is unbounded after propagation")]
    Unbounded(String),
    #[error("propagation exceeded its step limit")]
    StepLimit,
    #[error("no solution exists")]
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct Solutions {
    pub solutions: Vec<Vec<Int>>,
    pub stats: SearchStats,
}

#[derive(Clone, Debug)]
pub struct Optimum {
    /// The best assignment found, if any.
    pub best: Option<Vec<Int>>,
    /// Objective values of the successive improving solutions.
    pub incumbents: Vec<Int>,
    pub stats: SearchStats,
}

impl Optimum {
    pub fn value(&self) -> Option<&Int> {
        self.incumbents.last()
    }
}

struct Search<'a> {
    solver: Solver<'a>,
    csp: &'a Csp,
    /// Variables `0..branch` are branched on.
    branch: usize,
    objective: Option<(VarId, &'a Expr)>,
    bound: Option<Int>,
    nodes: u64,
    max_nodes: Option<u64>,
    truncated: bool,
    solutions: Vec<Vec<Int>>,
    incumbents: Vec<Int>,
}

impl Search<'_> {
    fn node(&mut self) -> Result<(), SearchError> {
        self.nodes += 1;
        if let (Some((o, _)), Some(b)) = (self.objective, &self.bound) {
            if !self.solver.restrict(o, &IntegerInterval::at_least(b.clone())) {
                self.solver.clear_pending();
                return Ok(());
            }
        }
        match self.solver.propagate() {
            Propagation::Fixpoint => {}
            Propagation::EmptyDomain(_) => {
                self.solver.clear_pending();
                return Ok(());
            }
            Propagation::StepLimit => return Err(SearchError::StepLimit),
        }
        let Some(v) = (0..self.branch).find(|&v| !self.solver.store[v].is_singleton()) else {
            self.leaf();
            return Ok(());
        };
        let d = &self.solver.store[v];
        let (Some(l), Some(h)) = (d.lo_int().cloned(), d.hi_int().cloned()) else {
            return Err(SearchError::Unbounded(self.solver.dec.names[v].clone()));
        };
        let mid = (&l + &h).div_floor(&Int::from(2));
        let halves = [IntegerInterval::new(l, mid.clone()), IntegerInterval::new(&mid + &Int::ONE, h)];
        let saved = self.solver.store.clone();
        for half in halves {
            if self.max_nodes.is_some_and(|m| self.nodes >= m) {
                self.truncated = true;
                return Ok(());
            }
            self.solver.store.clone_from(&saved);
            self.solver.store[v] = half;
            self.solver.note_change(v);
            self.node()?;
        }
        Ok(())
    }

    fn leaf(&mut self) {
        let n = self.csp.num_vars();
        let point: Vec<Int> = self.solver.store[..n].iter().map(|d| d.as_singleton().expect("fixed").clone()).collect();
        if !self.csp.verify(&point) {
            return;
        }
        if let Some((_, e)) = self.objective {
            let Some(value) = e.eval(&point) else { return };
            self.bound = Some(&value + &Int::ONE);
            self.incumbents.push(value);
        }
        self.solutions.push(point);
    }

    fn stats(&self) -> SearchStats {
        let dec = self.solver.dec;
        SearchStats {
            nvar: dec.num_vars(),
            ndrf: dec.rules.len(),
            nodes: self.nodes,
            solutions: self.solutions.len() as u64,
            drf_applications: self.solver.applications,
            drf_effective: self.solver.effective,
            counters: self.solver.counters,
            complete: !self.truncated,
        }
    }
}

struct Found {
    solutions: Vec<Vec<Int>>,
    incumbents: Vec<Int>,
    stats: SearchStats,
}

fn run(csp: &Csp, ext: &Csp, objective: Option<(VarId, &Expr)>, config: &SearchConfig) -> Result<Found, SearchError> {
    let dec = decompose(ext, config.variant, config.weak);
    let mut solver = Solver::new(&dec, config.mode);
    solver.step_limit = config.step_limit;
    let mut s = Search {
        solver,
        csp,
        branch: csp.num_vars(),
        objective,
        bound: None,
        nodes: 0,
        max_nodes: config.max_nodes,
        truncated: false,
        solutions: Vec::new(),
        incumbents: Vec::new(),
    };
    if dec.infeasible {
        s.nodes = 1;
    } else {
        s.node()?;
    }
    let stats = s.stats();
    Ok(Found { solutions: s.solutions, incumbents: s.incumbents, stats })
}

/// Finds every solution of `csp`.
pub fn solve_all(csp: &Csp, config: &SearchConfig) -> Result<Solutions, SearchError> {
    let f = run(csp, csp, None, config)?;
    Ok(Solutions { solutions: f.solutions, stats: f.stats })
}

/// Maximizes `objective` over the solutions of `csp` by branch and bound.
///
/// An extra variable `o` is tied to the objective by `o = objective`. Each
/// solution found with value `v` adds `o ≥ v + 1` for the rest of the
/// search, so the last solution found is optimal.
pub fn maximize(csp: &Csp, objective: &Expr, config: &SearchConfig) -> Result<Optimum, SearchError> {
    let mut ext = csp.clone();
    let o = ext.add_var("_obj", IntegerInterval::UNBOUNDED);
    ext.add_constraint(Expr::var(o), Cmp::Eq, objective.clone());
    let f = run(csp, &ext, Some((o, objective)), config)?;
    if f.stats.complete && f.solutions.is_empty() {
        return Err(SearchError::Infeasible);
    }
    Ok(Optimum { best: f.solutions.last().cloned(), incumbents: f.incumbents, stats: f.stats })
}

/// Checks an assignment of the user variables against the domains and the
/// constraints as written, with exact arithmetic.
pub fn verify_solution(csp: &Csp, point: &[Int]) -> bool {
    csp.verify(point)
}
