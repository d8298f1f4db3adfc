//! Rebuilds an [`AllocationState`] from its audit log, checking along the
//! way that every change of allotment is a strict improvement and that every
//! released seat has a cause (a strictly improving move or a withdrawal).

use thiserror::Error;

use crate::model::{
    AllocationState, CandidateId, CategoryId, Instance, PoolId, PrefRank, QueueEntry,
};

use super::audit::{AuditEvent, EventKind};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("event {seq}: sequence number not increasing")]
    NonIncreasingSeq { seq: u64 },
    #[error("event {seq}: {reason}")]
    Malformed { seq: u64, reason: String },
    #[error(
        "event {seq}: candidate {candidate} moved from {before} to {after}, not an improvement"
    )]
    NotMonotone {
        seq: u64,
        candidate: CandidateId,
        before: PrefRank,
        after: PrefRank,
    },
    #[error(
        "event {seq}: candidate {candidate} vacated a seat without an improving move or withdrawal"
    )]
    UncausedVacate { seq: u64, candidate: CandidateId },
    #[error("replayed state inconsistent: {0}")]
    Inconsistent(String),
}

/// What the next VACATE must match.
#[derive(Clone, Copy)]
struct Cause {
    candidate: CandidateId,
    pool: PoolId,
    before: PrefRank,
    after: PrefRank,
}

pub fn replay(inst: &Instance, events: &[AuditEvent]) -> Result<AllocationState, ReplayError> {
    let mut st = AllocationState::new(inst);
    let mut last_seq = 0u64;
    let mut cause: Option<Cause> = None;
    let mut last_offer: Option<(CandidateId, PoolId)> = None;

    for ev in events {
        let seq = ev.seq;
        if seq <= last_seq {
            return Err(ReplayError::NonIncreasingSeq { seq });
        }
        last_seq = seq;
        let bad = |reason: &str| ReplayError::Malformed {
            seq,
            reason: reason.to_string(),
        };
        let need_candidate = || {
            ev.candidate
                .filter(|c| c.index() < inst.num_candidates())
                .ok_or_else(|| bad("missing or unknown candidate"))
        };
        let need_pool = || {
            ev.pool
                .filter(|p| p.index() < inst.num_pools())
                .ok_or_else(|| bad("missing or unknown pool"))
        };

        if ev.kind != EventKind::Vacate && ev.kind != EventKind::SupCreate {
            if let Some(c) = cause.take() {
                return Err(ReplayError::Malformed {
                    seq,
                    reason: format!(
                        "candidate {} left seat {} without a VACATE",
                        c.candidate, c.pool
                    ),
                });
            }
        }
        let offer = last_offer.take();

        match ev.kind {
            EventKind::Enqueue => {
                let c = need_candidate()?;
                let p = need_pool()?;
                let rank = inst
                    .rank_of_pool(c, p)
                    .ok_or_else(|| bad("enqueued on an unlisted pool"))?;
                if rank >= st.current[c.index()] {
                    return Err(bad(
                        "enqueued on a pool not better than the current allotment",
                    ));
                }
                st.queues[p.index()].push(QueueEntry { candidate: c, rank });
            }
            EventKind::Offer => {
                let c = need_candidate()?;
                let p = need_pool()?;
                let pi = p.index();
                match st.queues[pi].get(st.heads[pi]) {
                    Some(e) if e.candidate == c => st.heads[pi] += 1,
                    _ => return Err(bad("offer not made to the head of the waiting list")),
                }
                if st.occupancy[pi] >= st.capacity[pi] {
                    return Err(bad("offer of a seat in a full pool"));
                }
                last_offer = Some((c, p));
            }
            EventKind::Skip => {
                let c = need_candidate()?;
                let p = need_pool()?;
                if offer != Some((c, p)) {
                    return Err(bad("skip without a matching offer"));
                }
            }
            EventKind::Allot | EventKind::Accept => {
                let c = need_candidate()?;
                let p = need_pool()?;
                if ev.kind == EventKind::Accept && offer != Some((c, p)) {
                    return Err(bad("accept without a matching offer"));
                }
                if st.withdrawn[c.index()] {
                    return Err(bad("withdrawn candidate allotted"));
                }
                let before = st.current[c.index()];
                if ev.pref_before != before {
                    return Err(bad("pref_before disagrees with replayed allotment"));
                }
                if ev.pref_after >= before || ev.pref_after.is_none() {
                    return Err(ReplayError::NotMonotone {
                        seq,
                        candidate: c,
                        before,
                        after: ev.pref_after,
                    });
                }
                if inst.prefs(c).get(ev.pref_after.slot()) != Some(&p) {
                    return Err(bad("pool does not match pref_after"));
                }
                if st.occupancy[p.index()] >= st.capacity[p.index()] {
                    return Err(bad("allotment into a full pool"));
                }
                st.current[c.index()] = ev.pref_after;
                st.occupancy[p.index()] += 1;
                let course = inst.pool(p).course;
                if inst.candidate(c).is_female {
                    st.female_in_course[course.index()] += 1;
                }
                if inst.pool(p).category == CategoryId::UNRESERVED
                    && st.occupancy[p.index()] >= st.capacity[p.index()]
                {
                    st.course_filled[course.index()] = true;
                }
                if !before.is_none() {
                    cause = Some(Cause {
                        candidate: c,
                        pool: inst.pool_at(c, before),
                        before,
                        after: ev.pref_after,
                    });
                }
            }
            EventKind::Vacate => {
                let c = need_candidate()?;
                let p = need_pool()?;
                match cause.take() {
                    Some(k)
                        if k.candidate == c
                            && k.pool == p
                            && k.before == ev.pref_before
                            && k.after == ev.pref_after => {}
                    _ => return Err(ReplayError::UncausedVacate { seq, candidate: c }),
                }
                st.occupancy[p.index()] -= 1;
                if inst.candidate(c).is_female {
                    st.female_in_course[inst.pool(p).course.index()] -= 1;
                }
            }
            EventKind::SupCreate => {
                let p = need_pool()?;
                let pool = inst.pool(p);
                if pool.category != CategoryId::FEMALE_SUPERNUMERARY {
                    return Err(bad("supernumerary seat created in a regular pool"));
                }
                st.capacity[p.index()] += 1;
                st.sup_created[pool.course.index()] += 1;
            }
            EventKind::Withdraw => {
                let c = need_candidate()?;
                if st.withdrawn[c.index()] {
                    return Err(bad("candidate withdrew twice"));
                }
                let before = st.current[c.index()];
                if ev.pref_before != before {
                    return Err(bad("pref_before disagrees with replayed allotment"));
                }
                st.withdrawn[c.index()] = true;
                if !before.is_none() {
                    let p = inst.pool_at(c, before);
                    if ev.pool != Some(p) {
                        return Err(bad("withdrawal names the wrong pool"));
                    }
                    st.current[c.index()] = PrefRank::NONE;
                    cause = Some(Cause {
                        candidate: c,
                        pool: p,
                        before,
                        after: PrefRank::NONE,
                    });
                }
            }
        }
    }
    if let Some(c) = cause {
        return Err(ReplayError::Malformed {
            seq: last_seq,
            reason: format!("log ends before candidate {} vacates", c.candidate),
        });
    }
    st.last_seq = last_seq;
    st.check_consistency(inst)
        .map_err(ReplayError::Inconsistent)?;
    Ok(st)
}

/// States agree on everything a replay can reconstruct.
pub fn same_replayable_state(a: &AllocationState, b: &AllocationState) -> bool {
    a.current == b.current
        && a.withdrawn == b.withdrawn
        && a.occupancy == b.occupancy
        && a.capacity == b.capacity
        && a.queues == b.queues
        && a.heads == b.heads
        && a.female_in_course == b.female_in_course
        && a.sup_created == b.sup_created
        && a.course_filled == b.course_filled
        && a.last_seq == b.last_seq
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocator::{allocate_joint_with, Engine, JointConfig, DEFAULT_BUDGET_C};
    use crate::io::gen::{generate_instance, GenParams};
    use crate::model::{validate_instance, InstanceOptions, ListId};
    use crate::testutil::tiny;

    fn logged(inst: &Instance) -> (AllocationState, Vec<AuditEvent>) {
        let mut ev = Vec::new();
        let (s, _) = allocate_joint_with(inst, &JointConfig::default(), &mut ev).unwrap();
        (s, ev)
    }

    #[test]
    fn replay_rebuilds_generated_runs() {
        for seed in 0..200 {
            let p = GenParams {
                seed,
                lists: 1 + seed as usize % 3,
                reservations: seed % 2 == 0,
                quotas: seed % 3 == 0,
                ..GenParams::default()
            };
            let raw = generate_instance(&p).unwrap();
            let inst = validate_instance(
                &raw,
                &InstanceOptions {
                    enable_quotas: p.quotas,
                },
            )
            .unwrap();
            let (s, ev) = logged(&inst);
            let r = replay(&inst, &ev).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
            assert!(same_replayable_state(&r, &s), "seed {seed}");
        }
    }

    #[test]
    fn replay_covers_withdrawals() {
        let inst = tiny(&[&[0, 1, 2]], &[(1, 1), (1, 1)], &[&[0], &[0, 1], &[1]]);
        let mut ev = Vec::new();
        let mut e = Engine::new(&inst, DEFAULT_BUDGET_C, &mut ev);
        e.step1(ListId::from(0)).unwrap();
        e.withdraw(CandidateId::from(0)).unwrap();
        let (s, ..) = e.finish();
        assert!(same_replayable_state(&replay(&inst, &ev).unwrap(), &s));
    }

    #[test]
    fn resumed_run_matches_an_uninterrupted_one() {
        let raw = generate_instance(&GenParams {
            seed: 11,
            lists: 3,
            ..GenParams::default()
        })
        .unwrap();
        let inst = validate_instance(&raw, &InstanceOptions::default()).unwrap();
        let gone: Vec<CandidateId> = (0..10).map(|i| CandidateId::from(i * 7)).collect();

        let mut direct_ev = Vec::new();
        let mut e = Engine::new(&inst, DEFAULT_BUDGET_C, &mut direct_ev);
        for l in 0..3 {
            let l = ListId::from(l);
            if l.index() == 0 {
                e.step1(l).unwrap()
            } else {
                e.improve_with_list(l).unwrap()
            }
        }
        let mid = e.metrics();
        for &c in &gone {
            e.withdraw(c).unwrap();
        }
        let (direct, direct_m, _) = e.finish();

        let head = &direct_ev[..mid_len(&direct_ev)];
        let rebuilt = replay(&inst, head).unwrap();
        let mut tail = Vec::new();
        let mut e = Engine::resume(&inst, rebuilt, mid, &mut tail);
        for &c in &gone {
            e.withdraw(c).unwrap();
        }
        let (resumed, resumed_m, _) = e.finish();
        assert!(same_replayable_state(&resumed, &direct));
        assert_eq!(resumed_m, direct_m);
        assert_eq!(tail, direct_ev[head.len()..]);
    }

    fn mid_len(ev: &[AuditEvent]) -> usize {
        ev.iter()
            .position(|e| e.kind == EventKind::Withdraw)
            .unwrap()
    }

    // Chain instance: ALLOT, ENQUEUE, ALLOT (improve), VACATE, OFFER, ACCEPT.
    fn chain() -> (Instance, Vec<AuditEvent>) {
        let inst = tiny(&[&[0, 1], &[0]], &[(1, 1), (2, 1)], &[&[1, 0], &[0]]);
        let (_, ev) = logged(&inst);
        assert_eq!(ev.len(), 6);
        (inst, ev)
    }

    #[test]
    fn vacate_without_cause_is_rejected() {
        let (inst, mut ev) = chain();
        ev.remove(2);
        assert!(matches!(
            replay(&inst, &ev),
            Err(ReplayError::UncausedVacate { .. })
        ));
    }

    #[test]
    fn downgrade_is_rejected() {
        let (inst, mut ev) = chain();
        ev[2].pref_after = PrefRank(3);
        assert!(matches!(
            replay(&inst, &ev),
            Err(ReplayError::NotMonotone { .. })
        ));
    }

    #[test]
    fn missing_vacate_is_rejected() {
        let (inst, mut ev) = chain();
        ev.remove(3);
        assert!(matches!(
            replay(&inst, &ev),
            Err(ReplayError::Malformed { .. })
        ));
    }

    #[test]
    fn offer_must_reach_the_queue_head() {
        let (inst, mut ev) = chain();
        ev.remove(1);
        assert!(matches!(
            replay(&inst, &ev),
            Err(ReplayError::Malformed { .. })
        ));
    }

    #[test]
    fn sequence_numbers_must_increase() {
        let (inst, mut ev) = chain();
        ev[3].seq = ev[2].seq;
        assert_eq!(
            replay(&inst, &ev),
            Err(ReplayError::NonIncreasingSeq { seq: 3 })
        );
    }
}
