//! Scaling ladder: generated instances of growing size, timed end to end
//! through the joint engine, with the delinked baseline alongside.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::allocator::{allocate_delinked, allocate_joint_with, JointConfig, NullSink};
use crate::model::{validate_instance, InstanceOptions};

use super::gen::{generate_instance, GenParams};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub pools: u64,
    pub pref_entries: u64,
    pub op_counter: u64,
    pub work_base: u64,
    pub ratio: f64,
    /// Engine wall time only; generation and validation are excluded.
    pub wall_ms: f64,
    pub delinked_ops: u64,
    /// `op_counter / delinked_ops`.
    pub delinked_ratio: f64,
    pub within_budget: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    /// Template for every rung; `candidates`, `courses` and `seed` are overridden.
    pub params: GenParams,
    /// Courses scale as `n / candidates_per_course` (at least 1).
    pub candidates_per_course: usize,
    pub budget_c: u64,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            params: GenParams {
                pref_len_mean: 20,
                pref_len_spread: 10,
                ..GenParams::default()
            },
            candidates_per_course: 20,
            budget_c: crate::allocator::DEFAULT_BUDGET_C,
            seed: 0,
        }
    }
}

pub fn bench_one(n: usize, config: &BenchConfig) -> Result<BenchRow, String> {
    let m = (n / config.candidates_per_course.max(1)).max(1);
    let params = GenParams {
        candidates: n,
        courses: m,
        seed: config.seed ^ n as u64,
        ..config.params.clone()
    };
    let raw = generate_instance(&params).map_err(|e| e.to_string())?;
    let inst = validate_instance(
        &raw,
        &InstanceOptions {
            enable_quotas: params.quotas,
        },
    )
    .map_err(|e| e.to_string())?;
    drop(raw);

    let cfg = JointConfig {
        list_order: None,
        budget_c: config.budget_c,
    };
    let start = Instant::now();
    let result = allocate_joint_with(&inst, &cfg, NullSink);
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let (within_budget, metrics) = match result {
        Ok((_, metrics)) => (true, metrics),
        Err(e) => return Err(e.to_string()),
    };
    let delinked_ops = allocate_delinked(&inst).op_counter;
    Ok(BenchRow {
        n,
        m,
        pools: inst.num_pools() as u64,
        pref_entries: inst.total_pref_entries() as u64,
        op_counter: metrics.op_counter,
        work_base: metrics.work_base(),
        ratio: metrics.ratio(),
        wall_ms,
        delinked_ops,
        delinked_ratio: metrics.op_counter as f64 / delinked_ops.max(1) as f64,
        within_budget,
    })
}

pub fn run_bench(ladder: &[usize], config: &BenchConfig) -> Result<Vec<BenchRow>, String> {
    ladder.iter().map(|&n| bench_one(n, config)).collect()
}
