//! Seat allocation: greedy baselines, the joint waiting-list engine,
//! withdrawal, and audit-log replay.

mod audit;
mod baseline;
mod engine;
mod replay;

pub use audit::{AuditEvent, AuditSink, EventKind, NullSink, Phase};
pub use baseline::{allocate_delinked, allocate_single_list, DelinkedAllocation};
pub use engine::{
    allocate_joint, allocate_joint_with, Engine, EngineError, JointConfig, RunMetrics,
    DEFAULT_BUDGET_C,
};
pub use replay::{replay, same_replayable_state, ReplayError};
