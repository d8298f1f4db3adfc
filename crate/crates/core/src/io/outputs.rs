//! Result files of a run.
//!
//! - `allocation.csv`: `candidate_id,course_id,category,pref_rank`
//! - `unassigned.csv`: `candidate_id,status` (`UNASSIGNED` or `WITHDRAWN`)
//! - `audit.jsonl`: see [`super::audit_log`]
//! - `metrics.json`: [`RunSummary`]

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::allocator::{AuditEvent, RunMetrics};
use crate::model::{AllocationState, CandidateId, Instance, ListId};

use super::audit_log::write_audit_log;

pub const ALLOCATION_FILE: &str = "allocation.csv";
pub const UNASSIGNED_FILE: &str = "unassigned.csv";
pub const AUDIT_FILE: &str = "audit.jsonl";
pub const METRICS_FILE: &str = "metrics.json";
pub const OUTPUT_FILES: [&str; 4] = [ALLOCATION_FILE, UNASSIGNED_FILE, AUDIT_FILE, METRICS_FILE];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    #[serde(flatten)]
    pub metrics: RunMetrics,
    /// `op_counter / work_base`.
    pub ratio: f64,
    /// Raw list ids in processing order.
    pub list_order: Vec<u64>,
    pub quotas_enabled: bool,
    pub seed: Option<u64>,
    pub candidates: usize,
    pub assigned: usize,
    pub unassigned: usize,
    pub withdrawn: usize,
}

impl RunSummary {
    pub fn new(
        inst: &Instance,
        state: &AllocationState,
        metrics: &RunMetrics,
        order: &[ListId],
        seed: Option<u64>,
    ) -> Self {
        let n = inst.num_candidates();
        let withdrawn = (0..n)
            .filter(|&i| state.is_withdrawn(CandidateId::from(i)))
            .count();
        let assigned = state
            .current_ranks()
            .iter()
            .filter(|r| !r.is_none())
            .count();
        RunSummary {
            metrics: metrics.clone(),
            ratio: metrics.ratio(),
            list_order: order.iter().map(|&l| inst.list(l).raw_id).collect(),
            quotas_enabled: inst.quotas_enabled(),
            seed,
            candidates: n,
            assigned,
            unassigned: n - assigned - withdrawn,
            withdrawn,
        }
    }
}

fn csv_writer(path: &Path) -> io::Result<csv::Writer<BufWriter<File>>> {
    Ok(csv::Writer::from_writer(BufWriter::new(File::create(
        path,
    )?)))
}

fn close<W: Write>(w: csv::Writer<W>) -> io::Result<()> {
    w.into_inner()
        .map_err(|e| io::Error::other(e.to_string()))?
        .flush()
}

/// One row per assigned candidate, in ascending candidate id order.
pub fn write_allocation(inst: &Instance, state: &AllocationState, path: &Path) -> io::Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["candidate_id", "course_id", "category", "pref_rank"])?;
    for (i, cand) in inst.candidates().iter().enumerate() {
        let c = CandidateId::from(i);
        if let Some(p) = state.assigned_pool(inst, c) {
            let pool = inst.pool(p);
            w.write_record([
                cand.raw_id.to_string(),
                inst.course(pool.course).raw_id.to_string(),
                inst.category_name(pool.category).to_string(),
                state.current(c).to_string(),
            ])?;
        }
    }
    close(w)
}

pub fn write_unassigned(inst: &Instance, state: &AllocationState, path: &Path) -> io::Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["candidate_id", "status"])?;
    for (i, cand) in inst.candidates().iter().enumerate() {
        let c = CandidateId::from(i);
        let status = if state.is_withdrawn(c) {
            "WITHDRAWN"
        } else if state.current(c).is_none() {
            "UNASSIGNED"
        } else {
            continue;
        };
        w.write_record([cand.raw_id.to_string().as_str(), status])?;
    }
    close(w)
}

pub fn write_metrics(summary: &RunSummary, path: &Path) -> io::Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, summary)?;
    f.write_all(b"\n")?;
    f.flush()
}

pub fn read_metrics(path: &Path) -> io::Result<RunSummary> {
    Ok(serde_json::from_slice(&fs::read(path)?)?)
}

/// Writes all four result files into `dir`, creating it if needed.
pub fn write_outputs(
    inst: &Instance,
    state: &AllocationState,
    summary: &RunSummary,
    events: &[AuditEvent],
    dir: &Path,
) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    write_allocation(inst, state, &dir.join(ALLOCATION_FILE))?;
    write_unassigned(inst, state, &dir.join(UNASSIGNED_FILE))?;
    write_audit_log(inst, events, &dir.join(AUDIT_FILE))?;
    write_metrics(summary, &dir.join(METRICS_FILE))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// SHA-256 of each result file present in `dir`.
pub fn output_digests(dir: &Path) -> io::Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for name in OUTPUT_FILES {
        let path = dir.join(name);
        if path.exists() {
            out.insert(name.to_string(), sha256_hex(&fs::read(path)?));
        }
    }
    Ok(out)
}
