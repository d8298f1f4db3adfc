//! Cross-referencing and densification of raw input tables.
//!
//! Validation never repairs input: every problem found is reported, and an
//! [`Instance`] is only produced when there are none.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::reservation::{
    expand_female_pools, expand_preferences, Category, CategoryPolicy, SupernumeraryConfig,
};

use super::ids::{
    CandidateId, CategoryId, CourseId, ListId, PoolId, FEMALE_SUPERNUMERARY_NAME, UNRESERVED_NAME,
};
use super::instance::{Candidate, Course, Instance, MeritList, SeatPool};
use super::raw::{Origin, RawInstance};
use super::view::{build_per_list_views, Csr, ViewEntry};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("{origin}: duplicate rank in list {list}: {detail}")]
    DuplicateRank {
        origin: Origin,
        list: u64,
        detail: String,
    },
    #[error("{origin}: unknown {kind} id {id}")]
    UnknownId {
        origin: Origin,
        kind: &'static str,
        id: u64,
    },
    #[error("{origin}: candidate {candidate} lists course {course} but is not ranked on its list {list}")]
    CandidateNotInGoverningList {
        origin: Origin,
        candidate: u64,
        course: u64,
        list: u64,
    },
    #[error("{origin}: candidate {candidate} has a duplicate preference ({detail})")]
    DuplicatePreference {
        origin: Origin,
        candidate: u64,
        detail: String,
    },
    #[error("{origin}: negative capacity {value} for course {course} category {category}")]
    NegativeCapacity {
        origin: Origin,
        course: u64,
        category: String,
        value: i64,
    },
    #[error("{origin}: unknown category {name:?}")]
    UnknownCategory { origin: Origin, name: String },
    #[error("{origin}: category name {name:?} is reserved")]
    ReservedCategory { origin: Origin, name: String },
    #[error("{origin}: candidate {candidate} declared twice")]
    DuplicateCandidate { origin: Origin, candidate: u64 },
    #[error("{origin}: course {course} category {category} declared twice")]
    DuplicatePool {
        origin: Origin,
        course: u64,
        category: String,
    },
    #[error("{origin}: course {course} governed by list {list} but earlier by list {earlier}")]
    ConflictingGoverningList {
        origin: Origin,
        course: u64,
        list: u64,
        earlier: u64,
    },
    #[error("{origin}: female quota for course {course} declared twice")]
    DuplicateQuota { origin: Origin, course: u64 },
    #[error("{origin}: negative female quota {value} for course {course}")]
    NegativeQuota {
        origin: Origin,
        course: u64,
        value: i64,
    },
    #[error("{origin}: category {category:?} given two parents")]
    DuplicateCategoryParent { origin: Origin, category: String },
    #[error("{origin}: category nesting cycle through {category:?}")]
    CategoryCycle { origin: Origin, category: String },
    #[error("{origin}: candidate {candidate} holds {category:?} but not its enclosing category {parent:?}")]
    CategoryParentNotHeld {
        origin: Origin,
        candidate: u64,
        category: String,
        parent: String,
    },
}

/// Every failure found in one validation run, in input order per table.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ValidationErrors(pub Vec<ValidationError>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InstanceOptions {
    /// Adds female supernumerary pools for courses with a positive quota.
    pub enable_quotas: bool,
}

pub fn validate_instance(
    raw: &RawInstance,
    options: &InstanceOptions,
) -> Result<Instance, ValidationErrors> {
    let mut errs = Vec::new();

    // Categories: UR and FEM-SUP first, then user names in sorted order.
    let mut names: BTreeSet<&str> = BTreeSet::new();
    for row in &raw.courses {
        if row.category == FEMALE_SUPERNUMERARY_NAME {
            errs.push(ValidationError::ReservedCategory {
                origin: row.origin,
                name: row.category.clone(),
            });
        } else if row.category != UNRESERVED_NAME {
            names.insert(&row.category);
        }
    }
    for row in &raw.category_parents {
        for name in [&row.category, &row.parent] {
            if name == UNRESERVED_NAME || name == FEMALE_SUPERNUMERARY_NAME {
                errs.push(ValidationError::ReservedCategory {
                    origin: row.origin,
                    name: name.clone(),
                });
            } else {
                names.insert(name);
            }
        }
    }
    let mut categories = vec![
        Category {
            name: UNRESERVED_NAME.into(),
            parent: None,
            depth: 0,
        },
        Category {
            name: FEMALE_SUPERNUMERARY_NAME.into(),
            parent: None,
            depth: 0,
        },
    ];
    categories.extend(names.iter().map(|n| Category {
        name: (*n).to_string(),
        parent: None,
        depth: 0,
    }));
    let cat_ids: HashMap<String, CategoryId> = categories
        .iter()
        .enumerate()
        .map(|(i, c)| (c.name.clone(), CategoryId::from(i)))
        .collect();

    let mut parent_origin: HashMap<CategoryId, Origin> = HashMap::new();
    for row in &raw.category_parents {
        let (Some(&child), Some(&parent)) = (cat_ids.get(&row.category), cat_ids.get(&row.parent))
        else {
            continue;
        };
        if child.index() < 2 || parent.index() < 2 {
            continue;
        }
        if categories[child.index()].parent.is_some() {
            errs.push(ValidationError::DuplicateCategoryParent {
                origin: row.origin,
                category: row.category.clone(),
            });
            continue;
        }
        categories[child.index()].parent = Some(parent);
        parent_origin.insert(child, row.origin);
    }
    let mut cyclic = vec![false; categories.len()];
    for start in 0..categories.len() {
        let mut depth = 0u32;
        let mut cur = categories[start].parent;
        while let Some(p) = cur {
            depth += 1;
            if p.index() == start || depth as usize > categories.len() {
                cyclic[start] = true;
                break;
            }
            cur = categories[p.index()].parent;
        }
        if cyclic[start] {
            errs.push(ValidationError::CategoryCycle {
                origin: parent_origin
                    .get(&CategoryId::from(start))
                    .cloned()
                    .unwrap_or_default(),
                category: categories[start].name.clone(),
            });
        } else {
            categories[start].depth = depth;
        }
    }

    // Candidates, densified by ascending raw id.
    let mut seen_candidates: BTreeMap<u64, usize> = BTreeMap::new();
    for (row_idx, row) in raw.candidates.iter().enumerate() {
        if seen_candidates.insert(row.candidate_id, row_idx).is_some() {
            errs.push(ValidationError::DuplicateCandidate {
                origin: row.origin,
                candidate: row.candidate_id,
            });
            seen_candidates.insert(row.candidate_id, row_idx);
        }
    }
    let cand_ids: HashMap<u64, CandidateId> = seen_candidates
        .keys()
        .enumerate()
        .map(|(i, &raw_id)| (raw_id, CandidateId::from(i)))
        .collect();
    let n = cand_ids.len();

    let mut candidates: Vec<Candidate> = Vec::with_capacity(n);
    for (&raw_id, &row_idx) in &seen_candidates {
        let row = &raw.candidates[row_idx];
        let mut held = Vec::new();
        for name in &row.categories {
            match cat_ids.get(name) {
                Some(&id) if id.index() >= 2 => {
                    if !held.contains(&id) {
                        held.push(id);
                    }
                }
                Some(_) if name == UNRESERVED_NAME => {}
                _ => errs.push(ValidationError::UnknownCategory {
                    origin: row.origin,
                    name: name.clone(),
                }),
            }
        }
        for &c in &held {
            if let Some(parent) = categories[c.index()].parent {
                if !held.contains(&parent) {
                    errs.push(ValidationError::CategoryParentNotHeld {
                        origin: row.origin,
                        candidate: raw_id,
                        category: categories[c.index()].name.clone(),
                        parent: categories[parent.index()].name.clone(),
                    });
                }
            }
        }
        held.sort_unstable_by_key(|&c| (categories[c.index()].depth, c));
        candidates.push(Candidate {
            raw_id,
            is_female: row.is_female,
            categories: held,
            raw_prefs: Vec::new(),
        });
    }

    // Merit lists, in order of first appearance.
    let mut list_order: Vec<u64> = Vec::new();
    let mut list_rows: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, row) in raw.merit.iter().enumerate() {
        list_rows
            .entry(row.list_id)
            .or_insert_with(|| {
                list_order.push(row.list_id);
                Vec::new()
            })
            .push(i);
    }
    let list_ids: HashMap<u64, ListId> = list_order
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, ListId::from(i)))
        .collect();
    let mut lists = Vec::with_capacity(list_order.len());
    for &list_raw in &list_order {
        let mut entries: Vec<(u64, CandidateId, &Origin)> = Vec::new();
        let mut seen_cand: HashSet<CandidateId> = HashSet::new();
        let mut seen_rank: HashSet<u64> = HashSet::new();
        for &i in &list_rows[&list_raw] {
            let row = &raw.merit[i];
            let Some(&c) = cand_ids.get(&row.candidate_id) else {
                errs.push(ValidationError::UnknownId {
                    origin: row.origin,
                    kind: "candidate",
                    id: row.candidate_id,
                });
                continue;
            };
            if !seen_cand.insert(c) {
                errs.push(ValidationError::DuplicateRank {
                    origin: row.origin,
                    list: list_raw,
                    detail: format!("candidate {} ranked twice", row.candidate_id),
                });
                continue;
            }
            if !seen_rank.insert(row.rank) {
                errs.push(ValidationError::DuplicateRank {
                    origin: row.origin,
                    list: list_raw,
                    detail: format!("rank {} shared (ties are not allowed)", row.rank),
                });
                continue;
            }
            entries.push((row.rank, c, &row.origin));
        }
        entries.sort_unstable_by_key(|e| e.0);
        let ranking: Vec<CandidateId> = entries.iter().map(|e| e.1).collect();
        let mut rank_of = vec![0u32; n];
        for (pos, c) in ranking.iter().enumerate() {
            rank_of[c.index()] = pos as u32 + 1;
        }
        lists.push(MeritList {
            raw_id: list_raw,
            ranking,
            rank_of,
        });
    }

    // Courses and their pools.
    let mut course_list: BTreeMap<u64, (u64, &Origin)> = BTreeMap::new();
    for row in &raw.courses {
        match course_list.get(&row.course_id) {
            Some(&(earlier, _)) if earlier != row.list_id => {
                errs.push(ValidationError::ConflictingGoverningList {
                    origin: row.origin,
                    course: row.course_id,
                    list: row.list_id,
                    earlier,
                })
            }
            Some(_) => {}
            None => {
                course_list.insert(row.course_id, (row.list_id, &row.origin));
            }
        }
    }
    let course_ids: HashMap<u64, CourseId> = course_list
        .keys()
        .enumerate()
        .map(|(i, &c)| (c, CourseId::from(i)))
        .collect();
    let mut courses = Vec::with_capacity(course_list.len());
    for (&raw_id, &(list_raw, origin)) in &course_list {
        let list = match list_ids.get(&list_raw) {
            Some(&l) => l,
            None => {
                errs.push(ValidationError::UnknownId {
                    origin: *origin,
                    kind: "list",
                    id: list_raw,
                });
                ListId(0)
            }
        };
        courses.push(Course { raw_id, list });
    }
    let mut caps: Vec<BTreeMap<CategoryId, u32>> = vec![BTreeMap::new(); courses.len()];
    for row in &raw.courses {
        let course = course_ids[&row.course_id];
        let Some(&cat) = cat_ids.get(&row.category) else {
            continue;
        };
        if cat == CategoryId::FEMALE_SUPERNUMERARY {
            continue;
        }
        if row.capacity < 0 {
            errs.push(ValidationError::NegativeCapacity {
                origin: row.origin,
                course: row.course_id,
                category: row.category.clone(),
                value: row.capacity,
            });
            continue;
        }
        if caps[course.index()]
            .insert(cat, row.capacity.min(u32::MAX as i64) as u32)
            .is_some()
        {
            errs.push(ValidationError::DuplicatePool {
                origin: row.origin,
                course: row.course_id,
                category: row.category.clone(),
            });
        }
    }

    let mut desired = vec![0u32; courses.len()];
    let mut seen_quota = vec![false; courses.len()];
    for row in &raw.quotas {
        let Some(&course) = course_ids.get(&row.course_id) else {
            errs.push(ValidationError::UnknownId {
                origin: row.origin,
                kind: "course",
                id: row.course_id,
            });
            continue;
        };
        if std::mem::replace(&mut seen_quota[course.index()], true) {
            errs.push(ValidationError::DuplicateQuota {
                origin: row.origin,
                course: row.course_id,
            });
            continue;
        }
        if row.female_quota < 0 {
            errs.push(ValidationError::NegativeQuota {
                origin: row.origin,
                course: row.course_id,
                value: row.female_quota,
            });
            continue;
        }
        desired[course.index()] = row.female_quota.min(u32::MAX as i64) as u32;
    }

    // Preferences.
    let mut pref_rows: Vec<Vec<(u64, CourseId, &Origin)>> = vec![Vec::new(); n];
    for row in &raw.prefs {
        let Some(&c) = cand_ids.get(&row.candidate_id) else {
            errs.push(ValidationError::UnknownId {
                origin: row.origin,
                kind: "candidate",
                id: row.candidate_id,
            });
            continue;
        };
        let Some(&course) = course_ids.get(&row.course_id) else {
            errs.push(ValidationError::UnknownId {
                origin: row.origin,
                kind: "course",
                id: row.course_id,
            });
            continue;
        };
        pref_rows[c.index()].push((row.pref_rank, course, &row.origin));
    }
    for (ci, rows) in pref_rows.iter_mut().enumerate() {
        let raw_id = candidates[ci].raw_id;
        let mut seen_course = HashSet::new();
        let mut seen_rank = HashSet::new();
        rows.retain(|&(rank, course, origin)| {
            if !seen_course.insert(course) {
                errs.push(ValidationError::DuplicatePreference {
                    origin: *origin,
                    candidate: raw_id,
                    detail: format!("course {} listed twice", courses[course.index()].raw_id),
                });
                return false;
            }
            if !seen_rank.insert(rank) {
                errs.push(ValidationError::DuplicatePreference {
                    origin: *origin,
                    candidate: raw_id,
                    detail: format!("preference rank {rank} used twice"),
                });
                return false;
            }
            true
        });
        rows.sort_unstable_by_key(|r| r.0);
        for &(_, course, origin) in rows.iter() {
            let list = courses[course.index()].list;
            if let Some(l) = lists.get(list.index()) {
                if l.rank_of[ci] == 0 {
                    errs.push(ValidationError::CandidateNotInGoverningList {
                        origin: *origin,
                        candidate: raw_id,
                        course: courses[course.index()].raw_id,
                        list: l.raw_id,
                    });
                }
            }
        }
        candidates[ci].raw_prefs = rows.iter().map(|r| r.1).collect();
    }

    if !errs.is_empty() {
        return Err(ValidationErrors(errs));
    }

    // Pools, course-major: neutral pools by category id, then the supernumerary pool.
    let mut pools = Vec::new();
    let mut course_pools = Vec::with_capacity(courses.len());
    let mut sup_pools = vec![None; courses.len()];
    for (ci, course) in courses.iter().enumerate() {
        let mut cp = Vec::new();
        for (&cat, &capacity) in &caps[ci] {
            cp.push((cat, PoolId::from(pools.len())));
            pools.push(SeatPool {
                course: CourseId::from(ci),
                category: cat,
                capacity,
                governing_list: course.list,
            });
        }
        if options.enable_quotas && desired[ci] > 0 {
            sup_pools[ci] = Some(PoolId::from(pools.len()));
            pools.push(SeatPool {
                course: CourseId::from(ci),
                category: CategoryId::FEMALE_SUPERNUMERARY,
                capacity: 0,
                governing_list: course.list,
            });
        }
        course_pools.push(cp);
    }
    let policy = CategoryPolicy::new(categories, course_pools);
    let supernumerary = SupernumeraryConfig {
        enabled: options.enable_quotas,
        desired,
        pools: sup_pools,
    };

    let num_lists = lists.len();
    let total_raw: usize = candidates.iter().map(|c| c.raw_prefs.len()).sum();
    let mut prefs = Csr::with_capacity(n, total_raw);
    let mut views: Vec<Csr<ViewEntry>> = (0..num_lists)
        .map(|_| Csr::with_capacity(n, total_raw / num_lists.max(1)))
        .collect();
    for cand in &candidates {
        let expanded = expand_preferences(&cand.raw_prefs, &cand.categories, &policy)
            .expect("categories checked above");
        let expanded = expand_female_pools(&expanded, cand.is_female, &supernumerary, |p| {
            pools[p.index()].course
        });
        let view = build_per_list_views(&expanded, num_lists, |p| pools[p.index()].governing_list);
        for (l, entries) in view.lists.into_iter().enumerate() {
            views[l].push_row(entries);
        }
        prefs.push_row(expanded);
    }
    let pass_order = (0..num_lists)
        .map(|l| {
            lists[l]
                .ranking
                .iter()
                .copied()
                .filter(|c| !views[l].row(c.index()).is_empty())
                .collect()
        })
        .collect();

    Ok(Instance {
        lists,
        courses,
        pools,
        candidates,
        policy,
        supernumerary,
        prefs,
        views,
        pass_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::raw::*;

    fn o(line: usize) -> Origin {
        Origin::new(SourceFile::Prefs, line as u32)
    }

    fn merit(list: u64, rank: u64, c: u64) -> MeritRow {
        MeritRow {
            list_id: list,
            rank,
            candidate_id: c,
            origin: o(rank as usize),
        }
    }

    fn course(id: u64, list: u64, cat: &str, cap: i64) -> CourseRow {
        CourseRow {
            course_id: id,
            list_id: list,
            category: cat.into(),
            capacity: cap,
            origin: o(1),
        }
    }

    fn cand(id: u64) -> CandidateRow {
        CandidateRow {
            candidate_id: id,
            is_female: false,
            categories: vec![],
            origin: o(1),
        }
    }

    fn pref(c: u64, rank: u64, course: u64) -> PrefRow {
        PrefRow {
            candidate_id: c,
            pref_rank: rank,
            course_id: course,
            origin: o(rank as usize),
        }
    }

    fn minimal() -> RawInstance {
        RawInstance {
            merit: vec![merit(1, 1, 0)],
            courses: vec![course(10, 1, "UR", 1)],
            candidates: vec![cand(0)],
            prefs: vec![pref(0, 1, 10)],
            ..Default::default()
        }
    }

    fn errors(raw: &RawInstance) -> Vec<ValidationError> {
        validate_instance(raw, &InstanceOptions::default())
            .expect_err("expected validation failure")
            .0
    }

    #[test]
    fn minimal_instance_is_valid() {
        let inst = validate_instance(&minimal(), &InstanceOptions::default()).unwrap();
        assert_eq!(inst.num_candidates(), 1);
        assert_eq!(inst.num_courses(), 1);
        assert_eq!(inst.num_pools(), 1);
        assert_eq!(inst.prefs(CandidateId(0)), &[PoolId(0)]);
        assert_eq!(inst.pass_order(ListId(0)), &[CandidateId(0)]);
    }

    #[test]
    fn candidate_ranked_twice_is_a_duplicate_rank() {
        let mut raw = minimal();
        raw.merit.push(merit(1, 2, 0));
        assert!(matches!(
            errors(&raw).as_slice(),
            [ValidationError::DuplicateRank { .. }]
        ));
    }

    #[test]
    fn tied_rank_is_a_duplicate_rank() {
        let mut raw = minimal();
        raw.candidates.push(cand(1));
        raw.merit.push(merit(1, 1, 1));
        assert!(matches!(
            errors(&raw).as_slice(),
            [ValidationError::DuplicateRank { .. }]
        ));
    }

    #[test]
    fn missing_from_governing_list() {
        let mut raw = minimal();
        raw.merit.push(merit(2, 1, 5));
        raw.candidates.push(cand(5));
        raw.courses.push(course(20, 2, "UR", 1));
        raw.prefs.push(pref(0, 2, 20));
        let errs = errors(&raw);
        assert_eq!(errs.len(), 1);
        assert!(matches!(
            &errs[0],
            ValidationError::CandidateNotInGoverningList {
                candidate: 0,
                course: 20,
                list: 2,
                ..
            }
        ));
    }

    #[test]
    fn all_problems_are_reported_together() {
        let mut raw = minimal();
        raw.courses.push(course(11, 1, "UR", -1));
        raw.prefs.push(pref(0, 2, 10));
        raw.prefs.push(pref(0, 3, 99));
        raw.prefs.push(pref(7, 1, 10));
        let errs = errors(&raw);
        assert!(errs
            .iter()
            .any(|e| matches!(e, ValidationError::NegativeCapacity { value: -1, .. })));
        assert!(errs
            .iter()
            .any(|e| matches!(e, ValidationError::DuplicatePreference { .. })));
        assert!(errs.iter().any(|e| matches!(
            e,
            ValidationError::UnknownId {
                kind: "course",
                id: 99,
                ..
            }
        )));
        assert!(errs.iter().any(|e| matches!(
            e,
            ValidationError::UnknownId {
                kind: "candidate",
                id: 7,
                ..
            }
        )));
    }

    #[test]
    fn category_errors() {
        let mut raw = minimal();
        raw.candidates[0].categories = vec!["NOPE".into()];
        assert!(matches!(
            errors(&raw).as_slice(),
            [ValidationError::UnknownCategory { .. }]
        ));

        let mut raw = minimal();
        raw.courses.push(course(10, 1, "RES", 1));
        raw.courses.push(course(10, 1, "PWD", 1));
        raw.category_parents.push(CategoryParentRow {
            category: "PWD".into(),
            parent: "RES".into(),
            origin: o(1),
        });
        raw.candidates[0].categories = vec!["PWD".into()];
        assert!(matches!(
            errors(&raw).as_slice(),
            [ValidationError::CategoryParentNotHeld { .. }]
        ));

        raw.category_parents.push(CategoryParentRow {
            category: "RES".into(),
            parent: "PWD".into(),
            origin: o(2),
        });
        raw.candidates[0].categories = vec!["PWD".into(), "RES".into()];
        let errs = errors(&raw);
        assert!(errs
            .iter()
            .all(|e| matches!(e, ValidationError::CategoryCycle { .. })));
        assert_eq!(errs.len(), 2);
    }

    #[test]
    fn conflicting_list_and_duplicate_pool() {
        let mut raw = minimal();
        raw.merit.push(merit(2, 1, 0));
        raw.courses.push(course(10, 2, "RES", 1));
        raw.courses.push(course(10, 1, "UR", 3));
        let errs = errors(&raw);
        assert!(errs
            .iter()
            .any(|e| matches!(e, ValidationError::ConflictingGoverningList { .. })));
        assert!(errs
            .iter()
            .any(|e| matches!(e, ValidationError::DuplicatePool { .. })));
    }

    #[test]
    fn header_only_preferences_are_legal() {
        let mut raw = minimal();
        raw.prefs.clear();
        let inst = validate_instance(&raw, &InstanceOptions::default()).unwrap();
        assert!(inst.prefs(CandidateId(0)).is_empty());
        assert!(inst.pass_order(ListId(0)).is_empty());
    }

    #[test]
    fn quotas_add_supernumerary_pools_only_when_enabled() {
        let mut raw = minimal();
        raw.candidates[0].is_female = true;
        raw.quotas.push(QuotaRow {
            course_id: 10,
            female_quota: 2,
            origin: o(1),
        });
        let plain = validate_instance(&raw, &InstanceOptions::default()).unwrap();
        assert_eq!(plain.num_pools(), 1);
        let opts = InstanceOptions {
            enable_quotas: true,
        };
        let inst = validate_instance(&raw, &opts).unwrap();
        assert_eq!(inst.num_pools(), 2);
        assert_eq!(inst.prefs(CandidateId(0)), &[PoolId(0), PoolId(1)]);
        assert_eq!(
            inst.pool(PoolId(1)).category,
            CategoryId::FEMALE_SUPERNUMERARY
        );

        raw.quotas[0].female_quota = -3;
        assert!(matches!(
            errors(&raw).as_slice(),
            [ValidationError::NegativeQuota { .. }]
        ));
    }

    /// Brute-force membership scan, independent of the validator's lookup tables.
    fn brute_not_in_governing_list(raw: &RawInstance) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for p in &raw.prefs {
            let list = raw
                .courses
                .iter()
                .find(|c| c.course_id == p.course_id)
                .unwrap()
                .list_id;
            let ranked = raw
                .merit
                .iter()
                .any(|m| m.list_id == list && m.candidate_id == p.candidate_id);
            if !ranked {
                out.push((p.candidate_id, p.course_id));
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn governing_list_membership_matches_brute_force_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let n = rng.gen_range(1..6u64);
            let mut raw = RawInstance::default();
            for c in 0..n {
                raw.candidates.push(cand(c));
            }
            for list in 1..=2u64 {
                let mut rank = 1;
                for c in 0..n {
                    if rng.gen_bool(0.6) {
                        raw.merit.push(merit(list, rank, c));
                        rank += 1;
                    }
                }
            }
            let lists: BTreeSet<u64> = raw.merit.iter().map(|m| m.list_id).collect();
            if lists.is_empty() {
                continue;
            }
            let lists: Vec<u64> = lists.into_iter().collect();
            for course_id in 0..4u64 {
                raw.courses.push(course(
                    course_id,
                    lists[course_id as usize % lists.len()],
                    "UR",
                    1,
                ));
            }
            for c in 0..n {
                let mut rank = 1;
                for course_id in 0..4u64 {
                    if rng.gen_bool(0.5) {
                        raw.prefs.push(pref(c, rank, course_id));
                        rank += 1;
                    }
                }
            }
            let expected = brute_not_in_governing_list(&raw);
            match validate_instance(&raw, &InstanceOptions::default()) {
                Ok(_) => assert!(expected.is_empty()),
                Err(errs) => {
                    let mut got: Vec<(u64, u64)> = errs
                        .0
                        .iter()
                        .map(|e| match e {
                            ValidationError::CandidateNotInGoverningList {
                                candidate,
                                course,
                                ..
                            } => (*candidate, *course),
                            other => panic!("unexpected {other}"),
                        })
                        .collect();
                    got.sort_unstable();
                    assert_eq!(got, expected);
                }
            }
        }
    }
}
