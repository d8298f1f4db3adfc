use thiserror::Error;

use crate::allocator::{allocate_joint_with, EngineError, JointConfig, NullSink};
use crate::model::{CandidateId, Instance, PoolId};

use super::da::{deferred_acceptance, Matching};
use super::market::{to_virtual_market, MarketError};
use super::stability::StabilityError;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Market(#[from] MarketError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
}

/// First candidate whose engine and oracle assignments differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divergence {
    pub candidate: CandidateId,
    pub engine: Option<PoolId>,
    pub oracle: Option<PoolId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diff {
    /// Generator seed of the instance, when known.
    pub seed: Option<u64>,
    pub first: Option<Divergence>,
    /// Number of candidates whose assignments differ.
    pub differing: usize,
}

impl Diff {
    pub fn is_empty(&self) -> bool {
        self.first.is_none()
    }

    pub fn between(engine: &Matching, oracle: &Matching) -> Diff {
        let mut diff = Diff::default();
        for (i, (e, o)) in engine.assignment.iter().zip(&oracle.assignment).enumerate() {
            if e != o {
                diff.differing += 1;
                diff.first.get_or_insert(Divergence {
                    candidate: CandidateId::from(i),
                    engine: *e,
                    oracle: *o,
                });
            }
        }
        diff
    }
}

/// Runs the engine and candidate-proposing deferred acceptance on the same
/// instance and reports where they disagree. Unassigned in both counts as
/// agreement; a different pool of the same course is a disagreement.
pub fn compare_with_oracle(inst: &Instance, config: &JointConfig) -> Result<Diff, OracleError> {
    let market = to_virtual_market(inst)?;
    let (state, _) = allocate_joint_with(inst, config, NullSink)?;
    let engine = Matching {
        assignment: state.assignment(inst),
    };
    Ok(Diff::between(&engine, &deferred_acceptance(&market)))
}
