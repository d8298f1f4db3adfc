use serde::{Deserialize, Serialize};

use super::ids::{CandidateId, CategoryId, CourseId, PoolId, PrefRank};
use super::instance::Instance;

/// A waiting-list entry: the candidate and the joint-preference position at
/// which they listed the pool, so an offer is decided in O(1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueueEntry {
    pub candidate: CandidateId,
    pub rank: PrefRank,
}

/// Mutable engine state for one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllocationState {
    pub(crate) current: Vec<PrefRank>,
    pub(crate) withdrawn: Vec<bool>,
    pub(crate) occupancy: Vec<u32>,
    pub(crate) capacity: Vec<u32>,
    pub(crate) queues: Vec<Vec<QueueEntry>>,
    /// Consumed prefix length of each queue.
    pub(crate) heads: Vec<usize>,
    pub(crate) female_in_course: Vec<u32>,
    pub(crate) sup_created: Vec<u32>,
    pub(crate) course_filled: Vec<bool>,
    pub(crate) op_counter: u64,
    /// Sequence number of the last emitted audit event.
    pub(crate) last_seq: u64,
}

impl AllocationState {
    pub fn new(inst: &Instance) -> Self {
        let pools = inst.num_pools();
        let courses = inst.num_courses();
        AllocationState {
            current: vec![PrefRank::NONE; inst.num_candidates()],
            withdrawn: vec![false; inst.num_candidates()],
            occupancy: vec![0; pools],
            capacity: inst.pools().iter().map(|p| p.capacity).collect(),
            queues: vec![Vec::new(); pools],
            heads: vec![0; pools],
            female_in_course: vec![0; courses],
            sup_created: vec![0; courses],
            course_filled: vec![false; courses],
            op_counter: 0,
            last_seq: 0,
        }
    }

    #[inline]
    pub fn current(&self, c: CandidateId) -> PrefRank {
        self.current[c.index()]
    }

    pub fn current_ranks(&self) -> &[PrefRank] {
        &self.current
    }

    pub fn is_withdrawn(&self, c: CandidateId) -> bool {
        self.withdrawn[c.index()]
    }

    pub fn assigned_pool(&self, inst: &Instance, c: CandidateId) -> Option<PoolId> {
        let r = self.current(c);
        (!r.is_none()).then(|| inst.pool_at(c, r))
    }

    /// Final assignment per candidate.
    pub fn assignment(&self, inst: &Instance) -> Vec<Option<PoolId>> {
        (0..inst.num_candidates())
            .map(|i| self.assigned_pool(inst, CandidateId::from(i)))
            .collect()
    }

    pub fn occupancy(&self, p: PoolId) -> u32 {
        self.occupancy[p.index()]
    }

    pub fn capacity(&self, p: PoolId) -> u32 {
        self.capacity[p.index()]
    }

    pub fn capacities(&self) -> &[u32] {
        &self.capacity
    }

    #[inline]
    pub fn is_full(&self, p: PoolId) -> bool {
        self.occupancy[p.index()] >= self.capacity[p.index()]
    }

    /// Occupants of a pool, derived from the per-candidate allotments.
    pub fn occupants(&self, inst: &Instance, p: PoolId) -> Vec<CandidateId> {
        (0..inst.num_candidates())
            .map(CandidateId::from)
            .filter(|&c| self.assigned_pool(inst, c) == Some(p))
            .collect()
    }

    /// Full waiting list of a pool, consumed entries included.
    pub fn queue(&self, p: PoolId) -> &[QueueEntry] {
        &self.queues[p.index()]
    }

    /// Entries not yet consumed by an offer.
    pub fn pending_queue(&self, p: PoolId) -> &[QueueEntry] {
        &self.queues[p.index()][self.heads[p.index()]..]
    }

    pub fn consumed(&self, p: PoolId) -> usize {
        self.heads[p.index()]
    }

    pub fn total_waitlist(&self) -> usize {
        self.queues.iter().map(Vec::len).sum()
    }

    pub fn supernumerary_created(&self, course: CourseId) -> u32 {
        self.sup_created[course.index()]
    }

    pub fn female_in_course(&self, course: CourseId) -> u32 {
        self.female_in_course[course.index()]
    }

    pub fn course_filled(&self, course: CourseId) -> bool {
        self.course_filled[course.index()]
    }

    pub fn op_counter(&self) -> u64 {
        self.op_counter
    }

    pub fn last_seq(&self) -> u64 {
        self.last_seq
    }

    /// Full consistency audit; returns the first problem found.
    pub fn check_consistency(&self, inst: &Instance) -> Result<(), String> {
        let mut occ = vec![0u32; inst.num_pools()];
        let mut fem = vec![0u32; inst.num_courses()];
        for (i, &r) in self.current.iter().enumerate() {
            let c = CandidateId::from(i);
            if r.is_none() {
                continue;
            }
            if self.withdrawn[i] {
                return Err(format!("withdrawn candidate {c} still holds rank {r}"));
            }
            let Some(&p) = inst.prefs(c).get(r.slot()) else {
                return Err(format!("candidate {c} holds out-of-range rank {r}"));
            };
            occ[p.index()] += 1;
            let pool = inst.pool(p);
            if pool.category == CategoryId::FEMALE_SUPERNUMERARY && !inst.candidate(c).is_female {
                return Err(format!(
                    "non-female candidate {c} in supernumerary pool {p}"
                ));
            }
            if inst.candidate(c).is_female {
                fem[pool.course.index()] += 1;
            }
        }
        for (i, (&o, &cap)) in self.occupancy.iter().zip(&self.capacity).enumerate() {
            if o != occ[i] {
                return Err(format!("pool {i}: occupancy {o} but {} occupants", occ[i]));
            }
            if o > cap {
                return Err(format!("pool {i}: occupancy {o} exceeds capacity {cap}"));
            }
            if self.heads[i] > self.queues[i].len() {
                return Err(format!("pool {i}: head past end of queue"));
            }
            let pool = inst.pool(PoolId::from(i));
            if pool.category != CategoryId::FEMALE_SUPERNUMERARY && cap != pool.capacity {
                return Err(format!("pool {i}: regular capacity changed"));
            }
        }
        if fem != self.female_in_course {
            return Err("female-per-course counters out of sync".into());
        }
        for (ci, &created) in self.sup_created.iter().enumerate() {
            let course = CourseId::from(ci);
            let desired = inst.supernumerary().desired[ci];
            if created > 0 && created > desired {
                return Err(format!(
                    "course {course}: {created} supernumerary seats exceed quota {desired}"
                ));
            }
            let cap = inst
                .supernumerary()
                .pool(course)
                .map_or(0, |p| self.capacity[p.index()]);
            if cap != created {
                return Err(format!(
                    "course {course}: supernumerary capacity {cap} != created {created}"
                ));
            }
        }
        Ok(())
    }
}
