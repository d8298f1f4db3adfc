//! Exhaustive enumeration of stable matchings for small markets.

use crate::model::PoolId;

use super::da::Matching;
use super::market::VirtualMarket;
use super::stability::check_stability;

/// Every stable matching of `market`, by trying every assignment of each
/// candidate to one of their listed pools or to nothing.
pub fn all_stable_matchings(market: &VirtualMarket) -> Vec<Matching> {
    let n = market.num_candidates();
    let mut out = Vec::new();
    let mut current = Matching::unmatched(n);
    let mut load = vec![0u32; market.num_pools()];
    enumerate(market, 0, &mut current, &mut load, &mut out);
    out
}

fn enumerate(
    market: &VirtualMarket,
    c: usize,
    current: &mut Matching,
    load: &mut [u32],
    out: &mut Vec<Matching>,
) {
    if c == market.num_candidates() {
        if check_stability(market, current).is_ok_and(|r| r.clean()) {
            out.push(current.clone());
        }
        return;
    }
    current.assignment[c] = None;
    enumerate(market, c + 1, current, load, out);
    for &p in &market.prefs[c] {
        if load[p.index()] < market.capacities[p.index()] {
            load[p.index()] += 1;
            current.assignment[c] = Some(p);
            enumerate(market, c + 1, current, load, out);
            load[p.index()] -= 1;
        }
    }
    current.assignment[c] = None;
}

fn position(market: &VirtualMarket, c: usize, a: Option<PoolId>) -> usize {
    a.and_then(|p| market.prefs[c].iter().position(|&q| q == p))
        .unwrap_or(usize::MAX)
}

/// The stable matching every candidate weakly prefers to all others, if any.
pub fn candidate_optimal(market: &VirtualMarket, stable: &[Matching]) -> Option<Matching> {
    stable
        .iter()
        .find(|m| {
            stable.iter().all(|other| {
                (0..market.num_candidates()).all(|c| {
                    position(market, c, m.assignment[c]) <= position(market, c, other.assignment[c])
                })
            })
        })
        .cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{deferred_acceptance, deferred_acceptance_pool_proposing};

    // Two candidates, two unit pools; each side's favourite disagrees.
    fn crossed() -> VirtualMarket {
        VirtualMarket {
            capacities: vec![1, 1],
            prefs: vec![vec![PoolId(0), PoolId(1)], vec![PoolId(1), PoolId(0)]],
            priority: vec![vec![2, 1], vec![1, 2]],
        }
    }

    #[test]
    fn finds_both_stable_matchings() {
        let stable = all_stable_matchings(&crossed());
        assert_eq!(stable.len(), 2);
        let best = candidate_optimal(&crossed(), &stable).unwrap();
        assert_eq!(best, deferred_acceptance(&crossed()));
        assert_ne!(best, deferred_acceptance_pool_proposing(&crossed()));
    }

    #[test]
    fn empty_market_has_one_stable_matching() {
        let m = VirtualMarket {
            capacities: vec![],
            prefs: vec![vec![], vec![]],
            priority: vec![],
        };
        assert_eq!(all_stable_matchings(&m), vec![Matching::unmatched(2)]);
    }
}
