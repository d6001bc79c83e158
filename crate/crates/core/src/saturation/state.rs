use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::time::Instant;

use num_rational::Rational64;

use super::strategy::{Limits, Strategy};
use crate::calculus::{generate, is_tautology, subsumes};
use crate::logic::{Clause, ClauseId, Literal, Problem, Provenance, Role, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiscardReason {
    Tautology,
    Subsumed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClauseStatus {
    Unprocessed,
    Processed,
    Discarded(DiscardReason),
}

/// Verdict of [`forward_simplify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Simplification {
    Keep,
    Discard(DiscardReason),
}

type QueueKey = Reverse<(u8, Rational64, u64, ClauseId)>;

/// Bit signature of (polarity, head) pairs; a subsumer's bits must be a
/// subset of the subsumed clause's bits.
fn head_mask(lits: &[Literal]) -> u64 {
    lits.iter().fold(0u64, |m, l| {
        let h = match l.head() {
            Some(s) => (s.0 as u64 % 31) * 2,
            None => 62,
        };
        m | 1 << (h + l.positive as u64)
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Statistics {
    pub selections: usize,
    pub generated: usize,
    pub discarded_tautology: usize,
    pub discarded_subsumed: usize,
    pub discarded_duplicate: usize,
    /// Selections credited to each queue of the strategy.
    pub queue_picks: Vec<usize>,
}

/// The proof state: processed clauses P, the evaluation queues over the
/// unprocessed pool U, and the selection trace.
pub struct ProofState<'s> {
    signature: &'s Signature,
    clauses: Vec<Clause>,
    status: Vec<ClauseStatus>,
    processed: Vec<ClauseId>,
    processed_index: Vec<(u64, usize, ClauseId)>,
    heaps: Vec<BinaryHeap<QueueKey>>,
    cursor: usize,
    picks_in_slot: u32,
    age_counter: u64,
    unprocessed: usize,
    seen: HashSet<Vec<Literal>>,
    trace: Vec<ClauseId>,
    stats: Statistics,
}

impl<'s> ProofState<'s> {
    pub fn new(signature: &'s Signature, strategy: &Strategy) -> Self {
        let n = strategy.queues().len();
        ProofState {
            signature,
            clauses: Vec::new(),
            status: Vec::new(),
            processed: Vec::new(),
            processed_index: Vec::new(),
            heaps: vec![BinaryHeap::new(); n],
            cursor: 0,
            picks_in_slot: 0,
            age_counter: 0,
            unprocessed: 0,
            seen: HashSet::new(),
            trace: Vec::new(),
            stats: Statistics {
                queue_picks: vec![0; n],
                ..Statistics::default()
            },
        }
    }

    pub fn clause(&self, id: ClauseId) -> &Clause {
        &self.clauses[id.0 as usize]
    }

    pub fn status(&self, id: ClauseId) -> ClauseStatus {
        self.status[id.0 as usize]
    }

    pub fn processed(&self) -> impl Iterator<Item = &Clause> {
        self.processed.iter().map(|id| self.clause(*id))
    }

    pub fn unprocessed_len(&self) -> usize {
        self.unprocessed
    }

    pub fn trace(&self) -> &[ClauseId] {
        &self.trace
    }

    pub fn stats(&self) -> &Statistics {
        &self.stats
    }

    /// Registers a new clause, assigns id and age, and enqueues it in every
    /// queue. Returns `None` if an identical clause was added before.
    pub fn insert(&mut self, strategy: &Strategy, literals: Vec<Literal>, role: Role, provenance: Provenance) -> Option<ClauseId> {
        if !self.seen.insert(literals.clone()) {
            self.stats.discarded_duplicate += 1;
            return None;
        }
        let id = ClauseId(self.clauses.len() as u32);
        let clause = Clause {
            id,
            literals,
            role,
            age: self.age_counter,
            provenance,
        };
        self.age_counter += 1;
        let prio = u8::from(strategy.prefer_initial && !role.is_initial());
        for (heap, queue) in self.heaps.iter_mut().zip(strategy.queues()) {
            let w = queue.cef.evaluate(&clause, self.signature);
            heap.push(Reverse((prio, w, clause.age, id)));
        }
        self.clauses.push(clause);
        self.status.push(ClauseStatus::Unprocessed);
        self.unprocessed += 1;
        Some(id)
    }

    fn discard(&mut self, id: ClauseId, reason: DiscardReason) {
        self.status[id.0 as usize] = ClauseStatus::Discarded(reason);
        self.unprocessed -= 1;
        match reason {
            DiscardReason::Tautology => self.stats.discarded_tautology += 1,
            DiscardReason::Subsumed => self.stats.discarded_subsumed += 1,
        }
    }

    fn move_to_processed(&mut self, id: ClauseId) {
        self.status[id.0 as usize] = ClauseStatus::Processed;
        self.unprocessed -= 1;
        self.processed.push(id);
        let lits = &self.clauses[id.0 as usize].literals;
        self.processed_index.push((head_mask(lits), lits.len(), id));
        self.trace.push(id);
        self.stats.selections += 1;
    }

    /// Tautology deletion and forward subsumption by P.
    pub fn forward_simplify(&self, literals: &[Literal]) -> Simplification {
        if is_tautology(literals) {
            return Simplification::Discard(DiscardReason::Tautology);
        }
        let mask = head_mask(literals);
        let len = literals.len();
        let subsumed = self.processed_index.iter().any(|&(m, l, id)| {
            l <= len && m & !mask == 0 && subsumes(&self.clauses[id.0 as usize].literals, literals)
        });
        if subsumed {
            Simplification::Discard(DiscardReason::Subsumed)
        } else {
            Simplification::Keep
        }
    }

    /// Picks the next given clause by weighted round robin over the queues.
    /// Stale entries (already selected or discarded) and clauses removed by
    /// forward simplification do not consume the current queue's slot.
    /// Returns `None` once U is empty.
    pub fn select_next(&mut self, strategy: &Strategy) -> Option<ClauseId> {
        let queues = strategy.queues();
        let mut empty_in_a_row = 0;
        while self.unprocessed > 0 && empty_in_a_row < queues.len() {
            let q = self.cursor;
            let Some(Reverse((_, _, _, id))) = self.heaps[q].pop() else {
                empty_in_a_row += 1;
                self.advance(queues.len());
                continue;
            };
            empty_in_a_row = 0;
            if self.status(id) != ClauseStatus::Unprocessed {
                continue;
            }
            if let Simplification::Discard(reason) = self.forward_simplify(&self.clause(id).literals) {
                self.discard(id, reason);
                continue;
            }
            self.stats.queue_picks[q] += 1;
            self.picks_in_slot += 1;
            if self.picks_in_slot >= queues[q].frequency {
                self.advance(queues.len());
            }
            return Some(id);
        }
        None
    }

    fn advance(&mut self, n: usize) {
        self.cursor = (self.cursor + 1) % n;
        self.picks_in_slot = 0;
    }

    /// Moves a selected clause to P without generating inferences. Used by
    /// scheduler tests that need U to stay populated.
    pub fn mark_processed(&mut self, id: ClauseId) {
        self.move_to_processed(id);
    }

    pub(crate) fn into_parts(self) -> (Vec<Clause>, Vec<ClauseId>, Statistics) {
        (self.clauses, self.trace, self.stats)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaturationStatus {
    Unsatisfiable { empty_clause: ClauseId },
    Satisfiable,
    ResourceOut,
}

impl SaturationStatus {
    pub fn szs(&self) -> &'static str {
        match self {
            SaturationStatus::Unsatisfiable { .. } => "Unsatisfiable",
            SaturationStatus::Satisfiable => "Satisfiable",
            SaturationStatus::ResourceOut => "ResourceOut",
        }
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SaturationStatus::Unsatisfiable { .. })
    }
}

/// Outcome of a run. `clauses` holds every clause that entered the state,
/// indexed by id.
#[derive(Clone, Debug)]
pub struct SaturationResult {
    pub status: SaturationStatus,
    pub stats: Statistics,
    pub trace: Vec<ClauseId>,
    pub clauses: Vec<Clause>,
}

impl SaturationResult {
    pub fn proof(&self) -> Option<super::proof::ProofDag> {
        match self.status {
            SaturationStatus::Unsatisfiable { empty_clause } => super::proof::extract_proof(&self.clauses, empty_clause).ok(),
            _ => None,
        }
    }
}

/// The given-clause loop.
pub fn saturate(problem: &Problem, strategy: &Strategy, limits: &Limits) -> SaturationResult {
    let start = Instant::now();
    let budget = limits.effective_selections();
    let mut state = ProofState::new(&problem.signature, strategy);

    for c in &problem.clauses {
        let lits = c.literals.clone();
        let empty = lits.is_empty();
        let Some(id) = state.insert(strategy, lits, c.role, c.provenance.clone()) else { continue };
        if empty {
            return finish(state, SaturationStatus::Unsatisfiable { empty_clause: id });
        }
    }

    loop {
        if budget.is_some_and(|b| state.stats.selections >= b)
            || limits.wall_seconds.is_some_and(|w| start.elapsed().as_secs_f64() >= w)
        {
            return finish(state, SaturationStatus::ResourceOut);
        }
        let Some(given_id) = state.select_next(strategy) else {
            return finish(state, SaturationStatus::Satisfiable);
        };
        let outcomes = {
            let given = state.clause(given_id);
            generate(given, state.processed())
        };
        state.move_to_processed(given_id);
        state.stats.generated += outcomes.len();
        for o in outcomes {
            if o.conclusion.is_empty() {
                let id = state
                    .insert(strategy, o.conclusion, Role::Derived, Provenance::Inferred(o.step))
                    .expect("first empty clause is never a duplicate");
                return finish(state, SaturationStatus::Unsatisfiable { empty_clause: id });
            }
            match state.forward_simplify(&o.conclusion) {
                Simplification::Keep => {
                    state.insert(strategy, o.conclusion, Role::Derived, Provenance::Inferred(o.step));
                }
                Simplification::Discard(DiscardReason::Tautology) => state.stats.discarded_tautology += 1,
                Simplification::Discard(DiscardReason::Subsumed) => state.stats.discarded_subsumed += 1,
            }
        }
    }
}

fn finish(state: ProofState<'_>, status: SaturationStatus) -> SaturationResult {
    let (clauses, trace, stats) = state.into_parts();
    SaturationResult {
        status,
        stats,
        trace,
        clauses,
    }
}
