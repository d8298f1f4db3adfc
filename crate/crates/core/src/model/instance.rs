use crate::reservation::{CategoryPolicy, SupernumeraryConfig};

use super::ids::{CandidateId, CategoryId, CourseId, ListId, PoolId, PrefRank};
use super::view::{Csr, ViewEntry};

/// A strict ranking of candidates from one examination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeritList {
    pub raw_id: u64,
    /// Best first.
    pub ranking: Vec<CandidateId>,
    /// 1-based rank per candidate, 0 when absent from this list.
    pub rank_of: Vec<u32>,
}

impl MeritList {
    pub fn rank(&self, c: CandidateId) -> Option<u32> {
        match self.rank_of[c.index()] {
            0 => None,
            r => Some(r),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Course {
    pub raw_id: u64,
    pub list: ListId,
}

/// The unit of capacity: one (course, category) pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeatPool {
    pub course: CourseId,
    pub category: CategoryId,
    /// Initial capacity; only supernumerary pools grow during a run.
    pub capacity: u32,
    pub governing_list: ListId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub raw_id: u64,
    pub is_female: bool,
    /// Categories held beyond unreserved, enclosing categories first.
    pub categories: Vec<CategoryId>,
    /// Course preferences as submitted.
    pub raw_prefs: Vec<CourseId>,
}

/// A validated, densely indexed problem instance. Immutable once built.
#[derive(Clone, Debug)]
pub struct Instance {
    pub(crate) lists: Vec<MeritList>,
    pub(crate) courses: Vec<Course>,
    pub(crate) pools: Vec<SeatPool>,
    pub(crate) candidates: Vec<Candidate>,
    pub(crate) policy: CategoryPolicy,
    pub(crate) supernumerary: SupernumeraryConfig,
    /// Expanded joint preferences.
    pub(crate) prefs: Csr<PoolId>,
    /// Per list, per candidate view.
    pub(crate) views: Vec<Csr<ViewEntry>>,
    /// Per list: the ranking restricted to candidates with a non-empty view.
    pub(crate) pass_order: Vec<Vec<CandidateId>>,
}

impl Instance {
    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn num_courses(&self) -> usize {
        self.courses.len()
    }

    pub fn num_lists(&self) -> usize {
        self.lists.len()
    }

    pub fn num_pools(&self) -> usize {
        self.pools.len()
    }

    pub fn lists(&self) -> &[MeritList] {
        &self.lists
    }

    pub fn list(&self, id: ListId) -> &MeritList {
        &self.lists[id.index()]
    }

    pub fn courses(&self) -> &[Course] {
        &self.courses
    }

    pub fn course(&self, id: CourseId) -> &Course {
        &self.courses[id.index()]
    }

    pub fn pools(&self) -> &[SeatPool] {
        &self.pools
    }

    pub fn pool(&self, id: PoolId) -> &SeatPool {
        &self.pools[id.index()]
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn candidate(&self, id: CandidateId) -> &Candidate {
        &self.candidates[id.index()]
    }

    pub fn policy(&self) -> &CategoryPolicy {
        &self.policy
    }

    pub fn supernumerary(&self) -> &SupernumeraryConfig {
        &self.supernumerary
    }

    pub fn quotas_enabled(&self) -> bool {
        self.supernumerary.enabled
    }

    /// Expanded joint preference list of a candidate.
    #[inline]
    pub fn prefs(&self, c: CandidateId) -> &[PoolId] {
        self.prefs.row(c.index())
    }

    /// Pool at a 1-based joint preference position.
    #[inline]
    pub fn pool_at(&self, c: CandidateId, rank: PrefRank) -> PoolId {
        self.prefs(c)[rank.slot()]
    }

    /// Joint preference position of `pool` for `c`, by linear search.
    pub fn rank_of_pool(&self, c: CandidateId, pool: PoolId) -> Option<PrefRank> {
        self.prefs(c)
            .iter()
            .position(|&p| p == pool)
            .map(|i| PrefRank(i as u32 + 1))
    }

    #[inline]
    pub fn view(&self, c: CandidateId, list: ListId) -> &[ViewEntry] {
        self.views[list.index()].row(c.index())
    }

    /// Candidates visited by a pass over `list`, in merit order.
    pub fn pass_order(&self, list: ListId) -> &[CandidateId] {
        &self.pass_order[list.index()]
    }

    pub fn total_pref_entries(&self) -> usize {
        self.prefs.total()
    }

    pub fn category_name(&self, id: CategoryId) -> &str {
        self.policy
            .category(id)
            .map(|c| c.name.as_str())
            .unwrap_or("?")
    }

    /// Priority of `c` at `pool`: rank on the pool's governing list.
    pub fn priority(&self, pool: PoolId, c: CandidateId) -> Option<u32> {
        self.list(self.pool(pool).governing_list).rank(c)
    }

    pub fn candidate_by_raw(&self, raw: u64) -> Option<CandidateId> {
        self.candidates
            .binary_search_by_key(&raw, |c| c.raw_id)
            .ok()
            .map(CandidateId::from)
    }

    pub fn course_by_raw(&self, raw: u64) -> Option<CourseId> {
        self.courses
            .binary_search_by_key(&raw, |c| c.raw_id)
            .ok()
            .map(CourseId::from)
    }

    pub fn list_by_raw(&self, raw: u64) -> Option<ListId> {
        self.lists
            .iter()
            .position(|l| l.raw_id == raw)
            .map(ListId::from)
    }

    /// Looks up a pool by course and category name.
    pub fn pool_by_name(&self, course: CourseId, category: &str) -> Option<PoolId> {
        let cat = self.policy.category_by_name(category)?;
        if cat == CategoryId::FEMALE_SUPERNUMERARY {
            return self.supernumerary.pool(course);
        }
        self.policy.pool(course, cat)
    }
}
