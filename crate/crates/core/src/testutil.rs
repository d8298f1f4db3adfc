//! Compact instance builders for unit tests.

use crate::model::{
    validate_instance, CandidateRow, CourseRow, Instance, InstanceOptions, MeritRow, Origin,
    PrefRow, QuotaRow, RawInstance,
};

/// `lists[l]` is list `l + 1`'s ranking (best first); course `j` is
/// `courses[j] = (list id, UR capacity)`; candidate `i` submits `prefs[i]`.
pub(crate) fn tiny_raw(lists: &[&[u64]], courses: &[(u64, i64)], prefs: &[&[u64]]) -> RawInstance {
    let mut raw = RawInstance::default();
    for (l, ranking) in lists.iter().enumerate() {
        for (r, &c) in ranking.iter().enumerate() {
            raw.merit.push(MeritRow {
                list_id: l as u64 + 1,
                rank: r as u64 + 1,
                candidate_id: c,
                origin: Origin::default(),
            });
        }
    }
    for (j, &(list_id, capacity)) in courses.iter().enumerate() {
        raw.courses.push(CourseRow {
            course_id: j as u64,
            list_id,
            category: "UR".into(),
            capacity,
            origin: Origin::default(),
        });
    }
    for (i, p) in prefs.iter().enumerate() {
        raw.candidates.push(CandidateRow {
            candidate_id: i as u64,
            is_female: false,
            categories: Vec::new(),
            origin: Origin::default(),
        });
        for (r, &course_id) in p.iter().enumerate() {
            raw.prefs.push(PrefRow {
                candidate_id: i as u64,
                pref_rank: r as u64 + 1,
                course_id,
                origin: Origin::default(),
            });
        }
    }
    raw
}

pub(crate) fn tiny(lists: &[&[u64]], courses: &[(u64, i64)], prefs: &[&[u64]]) -> Instance {
    validate_instance(
        &tiny_raw(lists, courses, prefs),
        &InstanceOptions::default(),
    )
    .unwrap_or_else(|e| panic!("{e}"))
}

/// Marks `female` candidates and sets per-course quotas, with quotas enabled.
pub(crate) fn with_quotas(mut raw: RawInstance, female: &[u64], quotas: &[(u64, i64)]) -> Instance {
    for c in &mut raw.candidates {
        c.is_female = female.contains(&c.candidate_id);
    }
    for &(course_id, female_quota) in quotas {
        raw.quotas.push(QuotaRow {
            course_id,
            female_quota,
            origin: Origin::default(),
        });
    }
    validate_instance(
        &raw,
        &InstanceOptions {
            enable_quotas: true,
        },
    )
    .unwrap_or_else(|e| panic!("{e}"))
}
