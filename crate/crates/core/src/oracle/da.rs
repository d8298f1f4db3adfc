use std::collections::BinaryHeap;

use crate::model::{CandidateId, PoolId};

use super::market::VirtualMarket;

/// One pool (or none) per candidate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    pub assignment: Vec<Option<PoolId>>,
}

impl Matching {
    pub fn unmatched(n: usize) -> Self {
        Matching {
            assignment: vec![None; n],
        }
    }

    pub fn get(&self, c: CandidateId) -> Option<PoolId> {
        self.assignment[c.index()]
    }
}

/// Candidate-proposing deferred acceptance. Each candidate proposes down
/// their list; a pool tentatively holds its best proposers up to capacity.
/// Produces the candidate-optimal stable matching.
pub fn deferred_acceptance(market: &VirtualMarket) -> Matching {
    let n = market.num_candidates();
    let mut next = vec![0usize; n];
    // Max-heap on priority rank: the worst held candidate sits on top.
    let mut held: Vec<BinaryHeap<(u32, u32)>> = vec![BinaryHeap::new(); market.num_pools()];
    let mut free: Vec<u32> = (0..n as u32).rev().collect();

    while let Some(c) = free.pop() {
        let ci = c as usize;
        let Some(&p) = market.prefs[ci].get(next[ci]) else {
            continue;
        };
        next[ci] += 1;
        let pi = p.index();
        let rank = market.priority[pi][ci];
        let cap = market.capacities[pi] as usize;
        if held[pi].len() < cap {
            held[pi].push((rank, c));
        } else if held[pi].peek().is_some_and(|&(worst, _)| worst > rank) {
            let (_, evicted) = held[pi].pop().expect("peeked");
            held[pi].push((rank, c));
            free.push(evicted);
        } else {
            free.push(c);
        }
    }

    let mut m = Matching::unmatched(n);
    for (pi, h) in held.into_iter().enumerate() {
        for (_, c) in h {
            m.assignment[c as usize] = Some(PoolId::from(pi));
        }
    }
    m
}

/// Pool-proposing deferred acceptance: pools offer seats down their
/// priority order and candidates hold their best offer. Produces the
/// pool-optimal stable matching.
pub fn deferred_acceptance_pool_proposing(market: &VirtualMarket) -> Matching {
    let n = market.num_candidates();
    let pools = market.num_pools();
    // Rank of each pool in each candidate's list.
    let mut pref_pos: Vec<Vec<u32>> = vec![vec![u32::MAX; pools]; n];
    // Candidates who listed each pool, in priority order.
    let mut applicants: Vec<Vec<u32>> = vec![Vec::new(); pools];
    for (c, prefs) in market.prefs.iter().enumerate() {
        for (pos, p) in prefs.iter().enumerate() {
            pref_pos[c][p.index()] = pos as u32;
            applicants[p.index()].push(c as u32);
        }
    }
    for (p, a) in applicants.iter_mut().enumerate() {
        a.sort_unstable_by_key(|&c| market.priority[p][c as usize]);
    }

    let mut assignment: Vec<Option<PoolId>> = vec![None; n];
    let mut holding = vec![0u32; pools];
    let mut next = vec![0usize; pools];
    let mut active: Vec<usize> = (0..pools).rev().collect();
    while let Some(p) = active.pop() {
        while holding[p] < market.capacities[p] && next[p] < applicants[p].len() {
            let c = applicants[p][next[p]] as usize;
            next[p] += 1;
            let better = match assignment[c] {
                None => true,
                Some(q) => pref_pos[c][p] < pref_pos[c][q.index()],
            };
            if better {
                if let Some(q) = assignment[c] {
                    holding[q.index()] -= 1;
                    active.push(q.index());
                }
                assignment[c] = Some(PoolId::from(p));
                holding[p] += 1;
            }
        }
    }
    Matching { assignment }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn market(caps: &[u32], prefs: &[&[u32]], priority: &[&[u32]]) -> VirtualMarket {
        VirtualMarket {
            capacities: caps.to_vec(),
            prefs: prefs
                .iter()
                .map(|p| p.iter().map(|&x| PoolId(x)).collect())
                .collect(),
            priority: priority.iter().map(|r| r.to_vec()).collect(),
        }
    }

    #[test]
    fn one_candidate_one_seat() {
        let m = market(&[1], &[&[0]], &[&[1]]);
        assert_eq!(deferred_acceptance(&m).assignment, vec![Some(PoolId(0))]);
    }

    #[test]
    fn textbook_two_by_two() {
        // Both prefer X then Y; priority c0 over c1 at both.
        let m = market(&[1, 1], &[&[0, 1], &[0, 1]], &[&[1, 2], &[1, 2]]);
        assert_eq!(
            deferred_acceptance(&m).assignment,
            vec![Some(PoolId(0)), Some(PoolId(1))]
        );
    }

    #[test]
    fn eviction_cascades() {
        // c1 proposes first (free stack order pops c0 first, so order both ways).
        // X prefers c1, Y prefers c0; c0: X,Y; c1: X,Y.
        let m = market(&[1, 1], &[&[0, 1], &[0, 1]], &[&[2, 1], &[1, 2]]);
        assert_eq!(
            deferred_acceptance(&m).assignment,
            vec![Some(PoolId(1)), Some(PoolId(0))]
        );
    }

    #[test]
    fn proposing_sides_can_disagree() {
        // c0: X,Y; c1: Y,X. X ranks c1 first, Y ranks c0 first.
        let m = market(&[1, 1], &[&[0, 1], &[1, 0]], &[&[2, 1], &[1, 2]]);
        assert_eq!(
            deferred_acceptance(&m).assignment,
            vec![Some(PoolId(0)), Some(PoolId(1))]
        );
        assert_eq!(
            deferred_acceptance_pool_proposing(&m).assignment,
            vec![Some(PoolId(1)), Some(PoolId(0))]
        );
    }

    #[test]
    fn zero_capacity_rejects_everyone() {
        let m = market(&[0, 1], &[&[0, 1]], &[&[1], &[1]]);
        assert_eq!(deferred_acceptance(&m).assignment, vec![Some(PoolId(1))]);
        assert_eq!(
            deferred_acceptance_pool_proposing(&m).assignment,
            vec![Some(PoolId(1))]
        );
    }
}
