//! Reference allocations without waiting lists: greedy allocation on one
//! list, and the delinked baseline that runs it once per list.

use crate::model::{AllocationState, CandidateId, Instance, ListId, PrefRank};

/// Serial dictatorship on `list`: candidates in merit order take the first
/// pool on their `list`-view with a free seat.
pub fn allocate_single_list(inst: &Instance, list: ListId) -> AllocationState {
    let mut st = AllocationState::new(inst);
    st.op_counter = inst
        .pools()
        .iter()
        .filter(|p| p.governing_list == list)
        .count() as u64;
    for &c in inst.pass_order(list) {
        st.op_counter += 1;
        for e in inst.view(c, list) {
            st.op_counter += 1;
            if !st.is_full(e.pool) {
                st.op_counter += 1;
                st.current[c.index()] = e.overall_rank;
                st.occupancy[e.pool.index()] += 1;
                if inst.candidate(c).is_female {
                    st.female_in_course[inst.pool(e.pool).course.index()] += 1;
                }
                break;
            }
        }
    }
    st
}

/// Independent per-list allocations; a candidate may end up holding one
/// seat on every list.
#[derive(Clone, Debug)]
pub struct DelinkedAllocation {
    pub per_list: Vec<AllocationState>,
    /// Candidates holding seats on more than one list.
    pub multi_hold: Vec<bool>,
    pub op_counter: u64,
}

impl DelinkedAllocation {
    pub fn holdings(&self, c: CandidateId) -> Vec<PrefRank> {
        self.per_list
            .iter()
            .map(|s| s.current(c))
            .filter(|r| !r.is_none())
            .collect()
    }
}

pub fn allocate_delinked(inst: &Instance) -> DelinkedAllocation {
    let per_list: Vec<AllocationState> = (0..inst.num_lists())
        .map(|l| allocate_single_list(inst, ListId::from(l)))
        .collect();
    let multi_hold = (0..inst.num_candidates())
        .map(|i| per_list.iter().filter(|s| !s.current[i].is_none()).count() > 1)
        .collect();
    let op_counter = per_list.iter().map(|s| s.op_counter).sum();
    DelinkedAllocation {
        per_list,
        multi_hold,
        op_counter,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::gen::{generate_instance, GenParams};
    use crate::model::{validate_instance, InstanceOptions};
    use crate::testutil::tiny;

    #[test]
    fn merit_order_decides_contested_seat() {
        let inst = tiny(&[&[0, 1]], &[(1, 1), (1, 1)], &[&[0, 1], &[0, 1]]);
        let s = allocate_single_list(&inst, ListId::from(0));
        assert_eq!(s.current(CandidateId::from(0)), PrefRank(1));
        assert_eq!(s.current(CandidateId::from(1)), PrefRank(2));
    }

    #[test]
    fn no_seats_means_unassigned() {
        let inst = tiny(&[&[0]], &[(1, 0), (1, 0)], &[&[0, 1]]);
        assert!(allocate_single_list(&inst, ListId::from(0))
            .current(CandidateId::from(0))
            .is_none());
    }

    #[test]
    fn delinked_candidates_can_hold_two_seats() {
        let inst = tiny(&[&[0], &[0]], &[(1, 1), (2, 1)], &[&[0, 1]]);
        let d = allocate_delinked(&inst);
        assert_eq!(d.multi_hold, vec![true]);
        assert_eq!(
            d.holdings(CandidateId::from(0)),
            vec![PrefRank(1), PrefRank(2)]
        );
    }

    #[test]
    fn delinked_cost_is_the_sum_of_single_list_costs() {
        for seed in 0..100 {
            let raw = generate_instance(&GenParams {
                seed,
                lists: 1 + seed as usize % 3,
                ..GenParams::default()
            })
            .unwrap();
            let inst = validate_instance(&raw, &InstanceOptions::default()).unwrap();
            let d = allocate_delinked(&inst);
            let sum: u64 = (0..inst.num_lists())
                .map(|l| allocate_single_list(&inst, ListId::from(l)).op_counter())
                .sum();
            assert_eq!(d.op_counter, sum);
            if inst.num_lists() == 1 {
                assert_eq!(
                    d.per_list[0].current_ranks(),
                    allocate_single_list(&inst, ListId::from(0)).current_ranks()
                );
                assert!(d.multi_hold.iter().all(|&m| !m));
            }
        }
    }
}
