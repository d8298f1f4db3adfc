use thiserror::Error;

use crate::model::{CandidateId, CategoryId, Instance, PoolId};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MarketError {
    #[error(
        "supernumerary capacities change during a run; pass the final capacities of a finished run"
    )]
    UnfrozenCapacities,
    #[error("expected {expected} pool capacities, got {got}")]
    CapacityCount { expected: usize, got: usize },
}

/// Many-to-one market with one virtual college per seat pool.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualMarket {
    pub capacities: Vec<u32>,
    /// Candidate preference lists over pools, best first.
    pub prefs: Vec<Vec<PoolId>>,
    /// `priority[p][c]`: rank of candidate `c` at pool `p` (lower is better),
    /// `u32::MAX` when `c` is not eligible.
    pub priority: Vec<Vec<u32>>,
}

impl VirtualMarket {
    pub fn num_candidates(&self) -> usize {
        self.prefs.len()
    }

    pub fn num_pools(&self) -> usize {
        self.capacities.len()
    }

    /// Drops the given candidates from the market (their preference lists are emptied).
    pub fn without(mut self, gone: &[bool]) -> Self {
        for (c, prefs) in self.prefs.iter_mut().enumerate() {
            if gone.get(c).copied().unwrap_or(false) {
                prefs.clear();
            }
        }
        self
    }
}

fn eligible(inst: &Instance, c: CandidateId, p: PoolId) -> bool {
    let cand = inst.candidate(c);
    match inst.pool(p).category {
        CategoryId::UNRESERVED => true,
        CategoryId::FEMALE_SUPERNUMERARY => cand.is_female,
        cat => cand.categories.contains(&cat),
    }
}

/// Builds the market from the instance's own capacities. Fails when the
/// instance has supernumerary pools, whose capacity is only known after a run.
pub fn to_virtual_market(inst: &Instance) -> Result<VirtualMarket, MarketError> {
    if inst
        .pools()
        .iter()
        .any(|p| p.category == CategoryId::FEMALE_SUPERNUMERARY)
    {
        return Err(MarketError::UnfrozenCapacities);
    }
    let caps: Vec<u32> = inst.pools().iter().map(|p| p.capacity).collect();
    to_virtual_market_frozen(inst, &caps)
}

/// Builds the market with explicit (final) pool capacities.
pub fn to_virtual_market_frozen(
    inst: &Instance,
    capacities: &[u32],
) -> Result<VirtualMarket, MarketError> {
    if capacities.len() != inst.num_pools() {
        return Err(MarketError::CapacityCount {
            expected: inst.num_pools(),
            got: capacities.len(),
        });
    }
    let n = inst.num_candidates();
    let mut priority = vec![vec![u32::MAX; n]; inst.num_pools()];
    for (pi, pool) in inst.pools().iter().enumerate() {
        let list = inst.list(pool.governing_list);
        for (pos, &c) in list.ranking.iter().enumerate() {
            if eligible(inst, c, PoolId::from(pi)) {
                priority[pi][c.index()] = pos as u32 + 1;
            }
        }
    }
    let prefs = (0..n)
        .map(|i| {
            let c = CandidateId::from(i);
            inst.prefs(c)
                .iter()
                .copied()
                .filter(|&p| eligible(inst, c, p) && priority[p.index()][i] != u32::MAX)
                .collect()
        })
        .collect();
    Ok(VirtualMarket {
        capacities: capacities.to_vec(),
        prefs,
        priority,
    })
}
