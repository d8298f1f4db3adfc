//! One-call verification of an engine run: replay of its audit log,
//! stability on the market with the run's final capacities, and agreement
//! with both proposing sides of deferred acceptance.

use crate::allocator::{
    replay, same_replayable_state, Engine, JointConfig, ReplayError, RunMetrics,
};
use crate::model::{AllocationState, CandidateId, Instance};

use super::compare::{Diff, OracleError};
use super::da::{deferred_acceptance, deferred_acceptance_pool_proposing, Matching};
use super::market::to_virtual_market_frozen;
use super::stability::{check_stability, StabilityReport};

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub state: AllocationState,
    pub metrics: RunMetrics,
    /// Restricted to candidates who did not withdraw.
    pub stability: StabilityReport,
    pub replay: Result<(), ReplayError>,
    pub vs_candidate_da: Diff,
    pub vs_pool_da: Diff,
}

impl VerifyReport {
    /// Stability and replay hold. Oracle disagreements are reported separately.
    pub fn sound(&self) -> bool {
        self.stability.clean() && self.replay.is_ok()
    }
}

/// Runs the engine under `config`, then withdraws `withdrawals` in order,
/// and checks the result.
pub fn verify_run(
    inst: &Instance,
    config: &JointConfig,
    withdrawals: &[CandidateId],
) -> Result<VerifyReport, OracleError> {
    let order = config.resolved_order(inst)?;
    let mut events = Vec::new();
    let mut engine = Engine::new(inst, config.budget_c, &mut events);
    if let Some((&first, rest)) = order.split_first() {
        engine.step1(first)?;
        for &t in rest {
            engine.improve_with_list(t)?;
        }
    }
    for &c in withdrawals {
        engine.withdraw(c)?;
    }
    let (state, metrics, _) = engine.finish();

    let replay = replay(inst, &events).and_then(|r| {
        if same_replayable_state(&r, &state) {
            Ok(())
        } else {
            Err(ReplayError::Inconsistent(
                "replayed state differs from the run".into(),
            ))
        }
    });

    let gone: Vec<bool> = (0..inst.num_candidates())
        .map(|i| state.is_withdrawn(CandidateId::from(i)))
        .collect();
    let market = to_virtual_market_frozen(inst, state.capacities())?.without(&gone);
    let engine_matching = Matching {
        assignment: state.assignment(inst),
    };
    let stability = check_stability(&market, &engine_matching)?;
    let vs_candidate_da = Diff::between(&engine_matching, &deferred_acceptance(&market));
    let vs_pool_da = Diff::between(
        &engine_matching,
        &deferred_acceptance_pool_proposing(&market),
    );
    Ok(VerifyReport {
        state,
        metrics,
        stability,
        replay,
        vs_candidate_da,
        vs_pool_da,
    })
}
