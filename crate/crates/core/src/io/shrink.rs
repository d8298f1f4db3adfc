//! Greedy test-case minimisation for raw instances.
//!
//! Repeatedly tries to drop a candidate, a course, a preference or a seat,
//! keeping each change only if `still_fails` holds for the smaller instance.
//! The predicate sees instances that may not validate and should return
//! `false` for those.

use std::collections::{BTreeSet, HashMap};

use crate::model::RawInstance;

pub fn shrink(
    mut raw: RawInstance,
    mut still_fails: impl FnMut(&RawInstance) -> bool,
) -> RawInstance {
    loop {
        let mut progress = false;

        let candidates: Vec<u64> = raw.candidates.iter().map(|c| c.candidate_id).collect();
        for c in candidates {
            let next = without_candidate(&raw, c);
            if still_fails(&next) {
                raw = next;
                progress = true;
            }
        }

        let courses: BTreeSet<u64> = raw.courses.iter().map(|c| c.course_id).collect();
        for j in courses {
            let next = without_course(&raw, j);
            if still_fails(&next) {
                raw = next;
                progress = true;
            }
        }

        let mut i = 0;
        while i < raw.prefs.len() {
            let mut next = raw.clone();
            next.prefs.remove(i);
            renumber_prefs(&mut next);
            if still_fails(&next) {
                raw = next;
                progress = true;
            } else {
                i += 1;
            }
        }

        for i in 0..raw.courses.len() {
            while raw.courses[i].capacity > 0 {
                let mut next = raw.clone();
                next.courses[i].capacity -= 1;
                if !still_fails(&next) {
                    break;
                }
                raw = next;
                progress = true;
            }
        }
        for i in 0..raw.quotas.len() {
            while raw.quotas[i].female_quota > 0 {
                let mut next = raw.clone();
                next.quotas[i].female_quota -= 1;
                if !still_fails(&next) {
                    break;
                }
                raw = next;
                progress = true;
            }
        }

        if !progress {
            return raw;
        }
    }
}

fn without_candidate(raw: &RawInstance, c: u64) -> RawInstance {
    let mut next = raw.clone();
    next.candidates.retain(|r| r.candidate_id != c);
    next.prefs.retain(|r| r.candidate_id != c);
    next.merit.retain(|r| r.candidate_id != c);
    // Close the gap in every list's ranks.
    next.merit.sort_by_key(|r| (r.list_id, r.rank));
    let mut counter: HashMap<u64, u64> = HashMap::new();
    for r in &mut next.merit {
        let k = counter.entry(r.list_id).or_insert(0);
        *k += 1;
        r.rank = *k;
    }
    next
}

fn without_course(raw: &RawInstance, j: u64) -> RawInstance {
    let mut next = raw.clone();
    next.courses.retain(|r| r.course_id != j);
    next.quotas.retain(|r| r.course_id != j);
    next.prefs.retain(|r| r.course_id != j);
    renumber_prefs(&mut next);
    next
}

fn renumber_prefs(raw: &mut RawInstance) {
    raw.prefs.sort_by_key(|r| (r.candidate_id, r.pref_rank));
    let mut last = None;
    let mut k = 0;
    for r in &mut raw.prefs {
        if last != Some(r.candidate_id) {
            last = Some(r.candidate_id);
            k = 0;
        }
        k += 1;
        r.pref_rank = k;
    }
}
