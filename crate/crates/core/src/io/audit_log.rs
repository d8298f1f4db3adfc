//! JSON-lines audit log: one object per event, ids in their raw form.
//!
//! ```text
//! {"seq":1,"step":"STEP1","kind":"ALLOT","candidate":17,"course":3,"category":"UR","pref_before":null,"pref_after":2}
//! ```

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::allocator::{AuditEvent, AuditSink, EventKind, Phase};
use crate::model::{Instance, PrefRank};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub seq: u64,
    pub step: String,
    pub kind: String,
    pub candidate: Option<u64>,
    pub course: Option<u64>,
    pub category: Option<String>,
    pub pref_before: Option<u32>,
    pub pref_after: Option<u32>,
}

#[derive(Debug, Error)]
pub enum LogError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("audit log line {line}: {reason}")]
    Bad { line: usize, reason: String },
}

const KINDS: [(EventKind, &str); 8] = [
    (EventKind::Allot, "ALLOT"),
    (EventKind::Enqueue, "ENQUEUE"),
    (EventKind::Offer, "OFFER"),
    (EventKind::Skip, "SKIP"),
    (EventKind::Accept, "ACCEPT"),
    (EventKind::Vacate, "VACATE"),
    (EventKind::SupCreate, "SUPCREATE"),
    (EventKind::Withdraw, "WITHDRAW"),
];

pub fn kind_name(kind: EventKind) -> &'static str {
    KINDS
        .iter()
        .find(|(k, _)| *k == kind)
        .map(|(_, s)| *s)
        .unwrap()
}

pub fn step_name(inst: &Instance, phase: Phase) -> String {
    match phase {
        Phase::Step1 => "STEP1".into(),
        Phase::Improve(l) => format!("IMPROVE-{}", inst.list(l).raw_id),
        Phase::Cascade => "CASCADE".into(),
        Phase::Withdraw => "WITHDRAW".into(),
    }
}

pub fn to_record(inst: &Instance, ev: &AuditEvent) -> AuditRecord {
    let pool = ev.pool.map(|p| inst.pool(p));
    AuditRecord {
        seq: ev.seq,
        step: step_name(inst, ev.phase),
        kind: kind_name(ev.kind).into(),
        candidate: ev.candidate.map(|c| inst.candidate(c).raw_id),
        course: pool.map(|p| inst.course(p.course).raw_id),
        category: pool.map(|p| inst.category_name(p.category).to_string()),
        pref_before: ev.pref_before.get(),
        pref_after: ev.pref_after.get(),
    }
}

pub fn from_record(inst: &Instance, rec: &AuditRecord) -> Result<AuditEvent, String> {
    let kind = KINDS
        .iter()
        .find(|(_, s)| *s == rec.kind)
        .map(|(k, _)| *k)
        .ok_or_else(|| format!("unknown kind {:?}", rec.kind))?;
    let phase = match rec.step.as_str() {
        "STEP1" => Phase::Step1,
        "CASCADE" => Phase::Cascade,
        "WITHDRAW" => Phase::Withdraw,
        s => {
            let raw = s
                .strip_prefix("IMPROVE-")
                .and_then(|r| r.parse::<u64>().ok())
                .ok_or_else(|| format!("unknown step {s:?}"))?;
            Phase::Improve(
                inst.list_by_raw(raw)
                    .ok_or_else(|| format!("unknown list {raw}"))?,
            )
        }
    };
    let candidate = rec
        .candidate
        .map(|raw| {
            inst.candidate_by_raw(raw)
                .ok_or_else(|| format!("unknown candidate {raw}"))
        })
        .transpose()?;
    let pool = match (rec.course, &rec.category) {
        (None, None) => None,
        (Some(course), Some(cat)) => {
            let c = inst
                .course_by_raw(course)
                .ok_or_else(|| format!("unknown course {course}"))?;
            Some(
                inst.pool_by_name(c, cat)
                    .ok_or_else(|| format!("course {course} has no {cat} pool"))?,
            )
        }
        _ => return Err("course and category must both be present or both absent".into()),
    };
    Ok(AuditEvent {
        seq: rec.seq,
        phase,
        kind,
        candidate,
        pool,
        pref_before: PrefRank::from_option(rec.pref_before),
        pref_after: PrefRank::from_option(rec.pref_after),
    })
}

/// Streams events to a writer as they happen. The first I/O error is kept
/// and reported by [`JsonlSink::finish`].
pub struct JsonlSink<'a, W: Write> {
    inst: &'a Instance,
    out: W,
    error: Option<io::Error>,
}

impl<'a, W: Write> JsonlSink<'a, W> {
    pub fn new(inst: &'a Instance, out: W) -> Self {
        JsonlSink {
            inst,
            out,
            error: None,
        }
    }

    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> AuditSink for JsonlSink<'_, W> {
    fn record(&mut self, event: &AuditEvent) {
        if self.error.is_some() {
            return;
        }
        let rec = to_record(self.inst, event);
        let res = serde_json::to_writer(&mut self.out, &rec)
            .map_err(io::Error::from)
            .and_then(|_| self.out.write_all(b"\n"));
        if let Err(e) = res {
            self.error = Some(e);
        }
    }
}

pub fn write_audit_log(inst: &Instance, events: &[AuditEvent], path: &Path) -> io::Result<()> {
    let mut sink = JsonlSink::new(inst, BufWriter::new(File::create(path)?));
    for ev in events {
        sink.record(ev);
    }
    sink.finish().map(drop)
}

pub fn read_audit_log(inst: &Instance, path: &Path) -> Result<Vec<AuditEvent>, LogError> {
    parse_audit_log(inst, BufReader::new(File::open(path)?))
}

pub fn parse_audit_log(inst: &Instance, input: impl BufRead) -> Result<Vec<AuditEvent>, LogError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: String| LogError::Bad {
            line: i + 1,
            reason,
        };
        let rec: AuditRecord = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
        out.push(from_record(inst, &rec).map_err(bad)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocator::{allocate_joint_with, replay, same_replayable_state, JointConfig};
    use crate::io::gen::{generate_instance, GenParams};
    use crate::model::{validate_instance, InstanceOptions};

    #[test]
    fn round_trip_through_jsonl() {
        let p = GenParams {
            reservations: true,
            quotas: true,
            lists: 3,
            seed: 5,
            ..Default::default()
        };
        let raw = generate_instance(&p).unwrap();
        let inst = validate_instance(
            &raw,
            &InstanceOptions {
                enable_quotas: true,
            },
        )
        .unwrap();
        let mut events = Vec::new();
        let (state, _) = allocate_joint_with(&inst, &JointConfig::default(), &mut events).unwrap();

        let mut buf = Vec::new();
        let mut sink = JsonlSink::new(&inst, &mut buf);
        for e in &events {
            sink.record(e);
        }
        sink.finish().unwrap();
        let back = parse_audit_log(&inst, &buf[..]).unwrap();
        assert_eq!(back, events);
        let rebuilt = replay(&inst, &back).unwrap();
        assert!(same_replayable_state(&rebuilt, &state));
    }

    #[test]
    fn record_shape() {
        let raw = generate_instance(&GenParams {
            candidates: 1,
            courses: 1,
            lists: 1,
            pref_len_mean: 1,
            pref_len_spread: 0,
            ..Default::default()
        })
        .unwrap();
        let inst = validate_instance(&raw, &InstanceOptions::default()).unwrap();
        let mut events = Vec::new();
        allocate_joint_with(&inst, &JointConfig::default(), &mut events).unwrap();
        let json = serde_json::to_string(&to_record(&inst, &events[0])).unwrap();
        assert_eq!(
            json,
            r#"{"seq":1,"step":"STEP1","kind":"ALLOT","candidate":0,"course":0,"category":"UR","pref_before":null,"pref_after":1}"#
        );
    }

    #[test]
    fn bad_lines_are_located() {
        let raw = generate_instance(&GenParams::default()).unwrap();
        let inst = validate_instance(&raw, &InstanceOptions::default()).unwrap();
        let input = "\n{\"seq\":1,\"step\":\"NOPE\",\"kind\":\"ALLOT\",\"candidate\":null,\"course\":null,\"category\":null,\"pref_before\":null,\"pref_after\":null}\n";
        match parse_audit_log(&inst, input.as_bytes()) {
            Err(LogError::Bad { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
