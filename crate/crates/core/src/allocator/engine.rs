//! The joint allocation engine.
//!
//! A run is a first merit-order pass over one list followed by an improvement
//! pass per remaining list. Candidates only ever move to strictly better
//! entries of their joint preference list; seats that become free are
//! offered down FIFO waiting lists, which are consumed from the head and
//! never rewound.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    AllocationState, CandidateId, CategoryId, Instance, ListId, PoolId, PrefRank, QueueEntry,
};
use crate::reservation::{supernumerary_on_fill, supernumerary_on_vacate};

use super::audit::{AuditEvent, AuditSink, EventKind, NullSink, Phase};

/// Multiplier on `m + Σp + Σq` bounding the elementary steps of a run.
pub const DEFAULT_BUDGET_C: u64 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("work budget exceeded: {ops} elementary steps > bound {bound}")]
    CascadeBudgetExceeded { ops: u64, bound: u64 },
    #[error("candidate {0} has already withdrawn")]
    AlreadyWithdrawn(CandidateId),
    #[error("unknown candidate {0}")]
    UnknownCandidate(CandidateId),
    #[error("list order must be a permutation of all {expected} lists")]
    InvalidListOrder { expected: usize },
    #[error("the first pass needs a fresh state")]
    StateNotFresh,
}

/// Counters for one run. `sum_p` counts view entries examined in the first
/// pass and `sum_q` those examined in later passes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub op_counter: u64,
    pub pools: u64,
    pub sum_p: u64,
    pub sum_q: u64,
    pub withdrawals: u64,
    /// Total waiting-list length (all enqueues ever made).
    pub enqueues: u64,
    pub step1_enqueues: u64,
    /// Waiting-list entries consumed by offers.
    pub consumed: u64,
    pub moves: u64,
    pub supernumerary_created: u64,
    pub budget_c: u64,
}

impl RunMetrics {
    /// `m + Σp + Σq` plus one unit per withdrawal.
    pub fn work_base(&self) -> u64 {
        self.pools + self.sum_p + self.sum_q + self.withdrawals
    }

    pub fn work_bound(&self) -> u64 {
        self.budget_c.saturating_mul(self.work_base())
    }

    pub fn ratio(&self) -> f64 {
        self.op_counter as f64 / self.work_base().max(1) as f64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointConfig {
    /// Processing order of the merit lists; `None` means declaration order.
    pub list_order: Option<Vec<ListId>>,
    pub budget_c: u64,
}

impl Default for JointConfig {
    fn default() -> Self {
        JointConfig {
            list_order: None,
            budget_c: DEFAULT_BUDGET_C,
        }
    }
}

impl JointConfig {
    pub fn resolved_order(&self, inst: &Instance) -> Result<Vec<ListId>, EngineError> {
        let k = inst.num_lists();
        match &self.list_order {
            None => Ok((0..k).map(ListId::from).collect()),
            Some(order) => {
                let mut seen = vec![false; k];
                let ok = order.len() == k
                    && order
                        .iter()
                        .all(|l| l.index() < k && !std::mem::replace(&mut seen[l.index()], true));
                if ok {
                    Ok(order.clone())
                } else {
                    Err(EngineError::InvalidListOrder { expected: k })
                }
            }
        }
    }
}

pub struct Engine<'a, S: AuditSink> {
    inst: &'a Instance,
    state: AllocationState,
    metrics: RunMetrics,
    sink: S,
    phase: Phase,
    vacancies: VecDeque<PoolId>,
    pending: Vec<bool>,
    first_pass_done: bool,
}

impl<'a, S: AuditSink> Engine<'a, S> {
    pub fn new(inst: &'a Instance, budget_c: u64, sink: S) -> Self {
        let mut state = AllocationState::new(inst);
        // Initialising one record per pool.
        state.op_counter = inst.num_pools() as u64;
        let metrics = RunMetrics {
            pools: inst.num_pools() as u64,
            budget_c,
            ..RunMetrics::default()
        };
        Self::resume(inst, state, metrics, sink)
    }

    /// Continues from a state produced by an earlier run (e.g. rebuilt by
    /// replay), together with that run's metrics.
    pub fn resume(
        inst: &'a Instance,
        mut state: AllocationState,
        metrics: RunMetrics,
        sink: S,
    ) -> Self {
        // A replayed state does not carry the step count.
        state.op_counter = state.op_counter.max(metrics.op_counter);
        let first_pass_done = state.last_seq > 0 || metrics.sum_p > 0;
        Engine {
            inst,
            state,
            metrics,
            sink,
            phase: Phase::Step1,
            vacancies: VecDeque::new(),
            pending: vec![false; inst.num_pools()],
            first_pass_done,
        }
    }

    pub fn state(&self) -> &AllocationState {
        &self.state
    }

    pub fn metrics(&self) -> RunMetrics {
        RunMetrics {
            op_counter: self.state.op_counter,
            ..self.metrics.clone()
        }
    }

    pub fn finish(self) -> (AllocationState, RunMetrics, S) {
        let metrics = self.metrics();
        (self.state, metrics, self.sink)
    }

    /// First pass: merit-order scan of `list`, enqueueing on every full
    /// pool passed and allotting the first pool with a free seat.
    pub fn step1(&mut self, list: ListId) -> Result<(), EngineError> {
        if self.first_pass_done {
            return Err(EngineError::StateNotFresh);
        }
        self.first_pass_done = true;
        self.pass(list, Phase::Step1)
    }

    /// Improvement pass over list `t`: each candidate, in `t`'s merit order,
    /// scans their `t`-entries that beat the current allotment, waits on the
    /// full ones and moves to the first one with a free seat. Vacated seats
    /// are cascaded before the next candidate.
    pub fn improve_with_list(&mut self, list: ListId) -> Result<(), EngineError> {
        self.first_pass_done = true;
        self.pass(list, Phase::Improve(list))
    }

    fn pass(&mut self, list: ListId, phase: Phase) -> Result<(), EngineError> {
        let inst = self.inst;
        let first = phase == Phase::Step1;
        for &c in inst.pass_order(list) {
            if self.state.withdrawn[c.index()] {
                continue;
            }
            self.phase = phase;
            self.state.op_counter += 1;
            let mut examined = 0u64;
            for e in inst.view(c, list) {
                examined += 1;
                self.state.op_counter += 1;
                let current = self.state.current[c.index()];
                if e.overall_rank >= current {
                    break;
                }
                if self.state.is_full(e.pool) {
                    self.enqueue(c, e.pool, e.overall_rank, first);
                } else {
                    self.move_to(c, e.overall_rank, EventKind::Allot);
                    break;
                }
            }
            if first {
                self.metrics.sum_p += examined;
            } else {
                self.metrics.sum_q += examined;
            }
            self.cascade_vacancies()?;
        }
        self.audit();
        self.check_budget()
    }

    /// Drains the pending vacancies: each vacant seat is offered down its
    /// pool's waiting list. Entries that already hold something better, or
    /// have withdrawn, are consumed and skipped; an acceptor's old seat
    /// joins the vacancy queue in turn.
    pub fn cascade_vacancies(&mut self) -> Result<(), EngineError> {
        let outer = self.phase;
        self.phase = Phase::Cascade;
        while let Some(p) = self.vacancies.pop_front() {
            self.pending[p.index()] = false;
            self.state.op_counter += 1;
            let pi = p.index();
            while !self.state.is_full(p) && self.state.heads[pi] < self.state.queues[pi].len() {
                let QueueEntry { candidate: c, rank } = self.state.queues[pi][self.state.heads[pi]];
                self.state.heads[pi] += 1;
                self.metrics.consumed += 1;
                self.state.op_counter += 2;
                let current = self.state.current[c.index()];
                self.emit(EventKind::Offer, Some(c), Some(p), current, current);
                if self.state.withdrawn[c.index()] || rank >= current {
                    self.emit(EventKind::Skip, Some(c), Some(p), current, current);
                } else {
                    self.move_to(c, rank, EventKind::Accept);
                }
                self.check_budget()?;
            }
        }
        self.phase = outer;
        Ok(())
    }

    /// Removes `c` from the run. Their seat, if any, is cascaded; their
    /// remaining waiting-list entries are skipped when reached.
    pub fn withdraw(&mut self, c: CandidateId) -> Result<(), EngineError> {
        if c.index() >= self.inst.num_candidates() {
            return Err(EngineError::UnknownCandidate(c));
        }
        if self.state.withdrawn[c.index()] {
            return Err(EngineError::AlreadyWithdrawn(c));
        }
        self.phase = Phase::Withdraw;
        self.state.withdrawn[c.index()] = true;
        self.metrics.withdrawals += 1;
        self.state.op_counter += 1;
        let old = self.state.current[c.index()];
        let old_pool = (!old.is_none()).then(|| self.inst.pool_at(c, old));
        self.emit(EventKind::Withdraw, Some(c), old_pool, old, PrefRank::NONE);
        if let Some(p) = old_pool {
            self.state.current[c.index()] = PrefRank::NONE;
            self.release(c, p, old, PrefRank::NONE, true);
        }
        self.cascade_vacancies()?;
        self.audit();
        self.check_budget()
    }

    fn enqueue(&mut self, c: CandidateId, p: PoolId, rank: PrefRank, first: bool) {
        self.state.queues[p.index()].push(QueueEntry { candidate: c, rank });
        self.state.op_counter += 1;
        self.metrics.enqueues += 1;
        if first {
            self.metrics.step1_enqueues += 1;
        }
        let cur = self.state.current[c.index()];
        self.emit(EventKind::Enqueue, Some(c), Some(p), cur, cur);
    }

    fn move_to(&mut self, c: CandidateId, rank: PrefRank, kind: EventKind) {
        let inst = self.inst;
        let old = self.state.current[c.index()];
        debug_assert!(rank < old, "moves must strictly improve");
        let p = inst.pool_at(c, rank);
        let course = inst.pool(p).course;
        let female = inst.candidate(c).is_female;
        self.state.current[c.index()] = rank;
        self.state.occupancy[p.index()] += 1;
        if female {
            self.state.female_in_course[course.index()] += 1;
        }
        self.state.op_counter += 1;
        self.metrics.moves += 1;
        self.emit(kind, Some(c), Some(p), old, rank);

        let pool = inst.pool(p);
        if pool.category == CategoryId::UNRESERVED
            && !self.state.course_filled[course.index()]
            && self.state.is_full(p)
        {
            self.state.course_filled[course.index()] = true;
            let added = supernumerary_on_fill(&mut self.state, course, inst.supernumerary());
            self.created(course, added);
        }

        if !old.is_none() {
            let old_pool = inst.pool_at(c, old);
            let left_course = inst.pool(old_pool).course != course;
            self.release(c, old_pool, old, rank, left_course);
        }
    }

    /// Frees `c`'s seat in `p` and queues the vacancy.
    fn release(
        &mut self,
        c: CandidateId,
        p: PoolId,
        before: PrefRank,
        after: PrefRank,
        left_course: bool,
    ) {
        let inst = self.inst;
        let pool = inst.pool(p);
        let female = inst.candidate(c).is_female;
        self.state.occupancy[p.index()] -= 1;
        if female {
            self.state.female_in_course[pool.course.index()] -= 1;
        }
        self.emit(EventKind::Vacate, Some(c), Some(p), before, after);
        let added = if left_course && !pool.category.is_supernumerary() {
            supernumerary_on_vacate(&mut self.state, pool.course, female, inst.supernumerary())
        } else {
            0
        };
        self.push_vacancy(p);
        self.created(pool.course, added);
    }

    fn created(&mut self, course: crate::model::CourseId, added: u32) {
        if added == 0 {
            return;
        }
        let sup = self
            .inst
            .supernumerary()
            .pool(course)
            .expect("seats are only created for courses with a supernumerary pool");
        self.metrics.supernumerary_created += added as u64;
        for _ in 0..added {
            self.state.op_counter += 1;
            self.emit(
                EventKind::SupCreate,
                None,
                Some(sup),
                PrefRank::NONE,
                PrefRank::NONE,
            );
        }
        self.push_vacancy(sup);
    }

    fn push_vacancy(&mut self, p: PoolId) {
        if !std::mem::replace(&mut self.pending[p.index()], true) {
            self.state.op_counter += 1;
            self.vacancies.push_back(p);
        }
    }

    #[inline]
    fn emit(
        &mut self,
        kind: EventKind,
        candidate: Option<CandidateId>,
        pool: Option<PoolId>,
        pref_before: PrefRank,
        pref_after: PrefRank,
    ) {
        self.state.last_seq += 1;
        self.sink.record(&AuditEvent {
            seq: self.state.last_seq,
            phase: self.phase,
            kind,
            candidate,
            pool,
            pref_before,
            pref_after,
        });
    }

    fn check_budget(&self) -> Result<(), EngineError> {
        let bound = self.metrics.work_bound();
        if self.state.op_counter > bound {
            return Err(EngineError::CascadeBudgetExceeded {
                ops: self.state.op_counter,
                bound,
            });
        }
        Ok(())
    }

    fn audit(&self) {
        if cfg!(debug_assertions) {
            if let Err(e) = self.state.check_consistency(self.inst) {
                panic!("allocation state inconsistent: {e}");
            }
        }
    }
}

/// Runs the first pass and one improvement pass per remaining list.
pub fn allocate_joint(inst: &Instance) -> Result<(AllocationState, RunMetrics), EngineError> {
    allocate_joint_with(inst, &JointConfig::default(), NullSink)
}

pub fn allocate_joint_with<S: AuditSink>(
    inst: &Instance,
    config: &JointConfig,
    sink: S,
) -> Result<(AllocationState, RunMetrics), EngineError> {
    let order = config.resolved_order(inst)?;
    let mut engine = Engine::new(inst, config.budget_c, sink);
    if let Some((&first, rest)) = order.split_first() {
        engine.step1(first)?;
        for &t in rest {
            engine.improve_with_list(t)?;
        }
    }
    let (state, metrics, _) = engine.finish();
    Ok((state, metrics))
}
