//! Constraint propagation with a pending flag per rule.

use serde::Serialize;

use crate::counters::OpCounters;
use crate::decompose::DecomposedCsp;
use crate::interval::IntegerInterval;
use crate::model::VarId;
use crate::rules::{DomainStore, RuleOutcome};

/// Order in which pending rules are visited.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum Mode {
    /// Cycle through the rules in their natural order.
    Cycle,
    /// Follow the generated schedule.
    #[default]
    Scheduled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Propagation {
    /// No rule is pending.
    Fixpoint,
    /// The domain of this variable became empty.
    EmptyDomain(VarId),
    /// The application budget ran out.
    StepLimit,
}

pub const DEFAULT_STEP_LIMIT: u64 = 100_000_000;

/// Applies the rules of a decomposed CSP to a domain store.
///
/// Initially every rule is pending. Applying a rule clears its flag; when
/// it changes a domain, every rule reading that variable becomes pending,
/// possibly the rule itself.
#[derive(Clone, Debug)]
pub struct Solver<'a> {
    pub dec: &'a DecomposedCsp,
    pub store: DomainStore,
    pending: Vec<bool>,
    num_pending: usize,
    pub mode: Mode,
    pub counters: OpCounters,
    /// Number of rule applications.
    pub applications: u64,
    /// Number of applications that changed a domain.
    pub effective: u64,
    /// Budget of applications for one call of [`Solver::propagate`].
    pub step_limit: u64,
}

impl<'a> Solver<'a> {
    pub fn new(dec: &'a DecomposedCsp, mode: Mode) -> Solver<'a> {
        let n = dec.rules.len();
        Solver {
            dec,
            store: dec.domains.clone(),
            pending: vec![true; n],
            num_pending: n,
            mode,
            counters: OpCounters::new(),
            applications: 0,
            effective: 0,
            step_limit: DEFAULT_STEP_LIMIT,
        }
    }

    pub fn is_pending(&self, rule: usize) -> bool {
        self.pending[rule]
    }

    pub fn pending_rules(&self) -> Vec<usize> {
        (0..self.pending.len()).filter(|&r| self.pending[r]).collect()
    }

    fn flag(&mut self, rule: usize) {
        if !self.pending[rule] {
            self.pending[rule] = true;
            self.num_pending += 1;
        }
    }

    fn unflag(&mut self, rule: usize) {
        if self.pending[rule] {
            self.pending[rule] = false;
            self.num_pending -= 1;
        }
    }

    /// Marks every rule reading `v` as pending.
    pub fn note_change(&mut self, v: VarId) {
        for i in 0..self.dec.watchers[v].len() {
            self.flag(self.dec.watchers[v][i]);
        }
    }

    pub fn clear_pending(&mut self) {
        self.pending.iter_mut().for_each(|p| *p = false);
        self.num_pending = 0;
    }

    /// Narrows `v` to `d ∩ store[v]` and flags the rules reading it.
    /// Returns false when the domain becomes empty.
    pub fn restrict(&mut self, v: VarId, d: &IntegerInterval) -> bool {
        let new = self.store[v].intersect(d);
        if new != self.store[v] {
            self.store[v] = new;
            self.note_change(v);
        }
        !self.store[v].is_empty()
    }

    fn apply(&mut self, rule: usize) -> Option<Propagation> {
        self.unflag(rule);
        self.applications += 1;
        match self.dec.rules[rule].apply(&mut self.store, &mut self.counters) {
            RuleOutcome::Unchanged => None,
            RuleOutcome::Reduced(v) => {
                self.effective += 1;
                self.note_change(v);
                None
            }
            RuleOutcome::Failed(v) => {
                self.effective += 1;
                Some(Propagation::EmptyDomain(v))
            }
        }
    }

    /// Applies pending rules until none is pending or a domain empties.
    pub fn propagate(&mut self) -> Propagation {
        if let Some(v) = self.store.iter().position(IntegerInterval::is_empty) {
            return Propagation::EmptyDomain(v);
        }
        let limit = self.applications.saturating_add(self.step_limit);
        let dec = self.dec;
        let order: Vec<usize>;
        let visit: &[usize] = match self.mode {
            Mode::Scheduled => &dec.schedule,
            Mode::Cycle => {
                order = (0..dec.rules.len()).collect();
                &order
            }
        };
        while self.num_pending > 0 {
            for &r in visit {
                if !self.pending[r] {
                    continue;
                }
                if self.applications >= limit {
                    return Propagation::StepLimit;
                }
                if let Some(p) = self.apply(r) {
                    return p;
                }
            }
        }
        Propagation::Fixpoint
    }
}
