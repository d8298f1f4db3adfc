use thiserror::Error;

use crate::model::{CandidateId, PoolId};

use super::da::Matching;
use super::market::VirtualMarket;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StabilityError {
    #[error("malformed matching: {0}")]
    MalformedMatching(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Envy {
    pub candidate: CandidateId,
    pub pool: PoolId,
    /// Lower-priority occupant of `pool`.
    pub incumbent: CandidateId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StabilityReport {
    pub justified_envy: Vec<Envy>,
    /// `(candidate, pool)`: the pool has a free seat the candidate prefers.
    pub waste: Vec<(CandidateId, PoolId)>,
}

impl StabilityReport {
    pub fn clean(&self) -> bool {
        self.justified_envy.is_empty() && self.waste.is_empty()
    }
}

/// Exhaustive scan of every (candidate, pool) pair where the pool is
/// strictly preferred to the candidate's assignment.
pub fn check_stability(
    market: &VirtualMarket,
    matching: &Matching,
) -> Result<StabilityReport, StabilityError> {
    let n = market.num_candidates();
    if matching.assignment.len() != n {
        return Err(StabilityError::MalformedMatching(format!(
            "{} assignments for {n} candidates",
            matching.assignment.len()
        )));
    }
    let mut occupants: Vec<Vec<CandidateId>> = vec![Vec::new(); market.num_pools()];
    let mut position = vec![usize::MAX; n];
    for (c, a) in matching.assignment.iter().enumerate() {
        let Some(p) = *a else { continue };
        if p.index() >= market.num_pools() {
            return Err(StabilityError::MalformedMatching(format!(
                "candidate {c} assigned to unknown pool {p}"
            )));
        }
        let Some(pos) = market.prefs[c].iter().position(|&q| q == p) else {
            return Err(StabilityError::MalformedMatching(format!(
                "candidate {c} assigned to pool {p} they did not list"
            )));
        };
        position[c] = pos;
        occupants[p.index()].push(CandidateId::from(c));
    }
    for (p, occ) in occupants.iter().enumerate() {
        if occ.len() > market.capacities[p] as usize {
            return Err(StabilityError::MalformedMatching(format!(
                "pool {p} holds {} over capacity {}",
                occ.len(),
                market.capacities[p]
            )));
        }
    }

    let mut report = StabilityReport::default();
    for (c, (prefs, &pos)) in market.prefs.iter().zip(&position).enumerate() {
        for &p in &prefs[..pos.min(prefs.len())] {
            let pi = p.index();
            if occupants[pi].len() < market.capacities[pi] as usize {
                report.waste.push((CandidateId::from(c), p));
            }
            let mine = market.priority[pi][c];
            for &o in &occupants[pi] {
                if market.priority[pi][o.index()] > mine {
                    report.justified_envy.push(Envy {
                        candidate: CandidateId::from(c),
                        pool: p,
                        incumbent: o,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn market() -> VirtualMarket {
        // Pools X=0, Y=1 (cap 1); both candidates prefer X then Y; c0 has priority.
        VirtualMarket {
            capacities: vec![1, 1],
            prefs: vec![vec![PoolId(0), PoolId(1)], vec![PoolId(0), PoolId(1)]],
            priority: vec![vec![1, 2], vec![1, 2]],
        }
    }

    #[test]
    fn empty_market_is_clean() {
        let m = VirtualMarket {
            capacities: vec![],
            prefs: vec![],
            priority: vec![],
        };
        assert!(check_stability(&m, &Matching::unmatched(0))
            .unwrap()
            .clean());
    }

    #[test]
    fn lower_ranked_holder_is_justified_envy() {
        let m = market();
        let bad = Matching {
            assignment: vec![Some(PoolId(1)), Some(PoolId(0))],
        };
        let r = check_stability(&m, &bad).unwrap();
        assert_eq!(
            r.justified_envy,
            vec![Envy {
                candidate: CandidateId(0),
                pool: PoolId(0),
                incumbent: CandidateId(1)
            }]
        );
        assert!(r.waste.is_empty());
        assert!(!r.clean());
    }

    #[test]
    fn free_preferred_seat_is_waste() {
        let m = market();
        let r = check_stability(
            &m,
            &Matching {
                assignment: vec![Some(PoolId(0)), None],
            },
        )
        .unwrap();
        assert_eq!(r.waste, vec![(CandidateId(1), PoolId(1))]);
    }

    #[test]
    fn malformed_matchings_are_rejected() {
        let m = market();
        for a in [
            vec![Some(PoolId(0))],
            vec![Some(PoolId(0)), Some(PoolId(0))],
            vec![Some(PoolId(7)), None],
        ] {
            assert!(check_stability(&m, &Matching { assignment: a }).is_err());
        }
    }
}
