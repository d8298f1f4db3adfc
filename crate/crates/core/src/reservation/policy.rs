use thiserror::Error;

use crate::model::{CategoryId, CourseId, PoolId};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReservationError {
    #[error("unknown category id {0}")]
    UnknownCategory(CategoryId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Category {
    pub name: String,
    /// Enclosing category for nested reservations.
    pub parent: Option<CategoryId>,
    /// 0 for top-level categories.
    pub depth: u32,
}

/// Category forest plus the per-course table of gender-neutral pools.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CategoryPolicy {
    categories: Vec<Category>,
    /// Per course: `(category, pool)` for every gender-neutral pool, sorted by category.
    course_pools: Vec<Vec<(CategoryId, PoolId)>>,
}

impl CategoryPolicy {
    pub fn new(
        categories: Vec<Category>,
        mut course_pools: Vec<Vec<(CategoryId, PoolId)>>,
    ) -> Self {
        for pools in &mut course_pools {
            pools.sort_unstable();
        }
        CategoryPolicy {
            categories,
            course_pools,
        }
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn category(&self, id: CategoryId) -> Option<&Category> {
        self.categories.get(id.index())
    }

    pub fn category_by_name(&self, name: &str) -> Option<CategoryId> {
        self.categories
            .iter()
            .position(|c| c.name == name)
            .map(CategoryId::from)
    }

    pub fn pool(&self, course: CourseId, category: CategoryId) -> Option<PoolId> {
        let pools = self.course_pools.get(course.index())?;
        pools
            .binary_search_by_key(&category, |&(c, _)| c)
            .ok()
            .map(|i| pools[i].1)
    }

    pub fn course_pools(&self, course: CourseId) -> &[(CategoryId, PoolId)] {
        &self.course_pools[course.index()]
    }

    /// Sorts categories so enclosing categories come before nested ones.
    pub fn outermost_first(&self, held: &mut [CategoryId]) -> Result<(), ReservationError> {
        for &c in held.iter() {
            if self.category(c).is_none() {
                return Err(ReservationError::UnknownCategory(c));
            }
        }
        held.sort_unstable_by_key(|&c| (self.categories[c.index()].depth, c));
        Ok(())
    }
}

/// Desired female count per course and the pool holding its supernumerary seats.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SupernumeraryConfig {
    pub enabled: bool,
    pub desired: Vec<u32>,
    pub pools: Vec<Option<PoolId>>,
}

impl SupernumeraryConfig {
    pub fn disabled(courses: usize) -> Self {
        SupernumeraryConfig {
            enabled: false,
            desired: vec![0; courses],
            pools: vec![None; courses],
        }
    }

    pub fn pool(&self, course: CourseId) -> Option<PoolId> {
        if self.enabled {
            self.pools[course.index()]
        } else {
            None
        }
    }
}

/// Replaces each course preference by the unreserved pool followed by the
/// pools of every category the candidate holds on that course, enclosing
/// categories first. Pools a course does not offer are left out.
pub fn expand_preferences(
    raw_prefs: &[CourseId],
    held: &[CategoryId],
    policy: &CategoryPolicy,
) -> Result<Vec<PoolId>, ReservationError> {
    let mut held = held.to_vec();
    held.retain(|&c| c != CategoryId::UNRESERVED);
    policy.outermost_first(&mut held)?;

    let mut out = Vec::with_capacity(raw_prefs.len() * (1 + held.len()));
    for &course in raw_prefs {
        if let Some(p) = policy.pool(course, CategoryId::UNRESERVED) {
            out.push(p);
        }
        for &cat in &held {
            if let Some(p) = policy.pool(course, cat) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Appends the course's supernumerary pool after the gender-neutral entries
/// of each course in a female candidate's expanded list.
pub fn expand_female_pools(
    prefs: &[PoolId],
    is_female: bool,
    config: &SupernumeraryConfig,
    course_of: impl Fn(PoolId) -> CourseId,
) -> Vec<PoolId> {
    if !config.enabled || !is_female {
        return prefs.to_vec();
    }
    let mut out = Vec::with_capacity(prefs.len() * 2);
    for (i, &p) in prefs.iter().enumerate() {
        out.push(p);
        let course = course_of(p);
        let last_of_course = prefs.get(i + 1).is_none_or(|&q| course_of(q) != course);
        if last_of_course {
            if let Some(sup) = config.pool(course) {
                out.push(sup);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const RES: CategoryId = CategoryId(2);
    const PWD: CategoryId = CategoryId(3);

    fn cat(name: &str, parent: Option<CategoryId>, depth: u32) -> Category {
        Category {
            name: name.into(),
            parent,
            depth,
        }
    }

    /// Courses A=0, B=1. Pools: A/UR=0, A/RES=1, A/PWD=2, B/UR=3, B/RES=4.
    fn policy() -> CategoryPolicy {
        CategoryPolicy::new(
            vec![
                cat("UR", None, 0),
                cat("FEM-SUP", None, 0),
                cat("RES", None, 0),
                cat("RES-PwD", Some(RES), 1),
            ],
            vec![
                vec![
                    (PWD, PoolId(2)),
                    (CategoryId::UNRESERVED, PoolId(0)),
                    (RES, PoolId(1)),
                ],
                vec![(CategoryId::UNRESERVED, PoolId(3)), (RES, PoolId(4))],
            ],
        )
    }

    /// Independent enumerator: for each raw preference, walk every
    /// category in depth order and keep those the candidate holds.
    fn brute_expand(raw: &[CourseId], held: &[CategoryId], policy: &CategoryPolicy) -> Vec<PoolId> {
        let max_depth = policy
            .categories()
            .iter()
            .map(|c| c.depth)
            .max()
            .unwrap_or(0);
        let mut out = Vec::new();
        for &course in raw {
            out.extend(policy.pool(course, CategoryId::UNRESERVED));
            for depth in 0..=max_depth {
                for (id, c) in policy.categories().iter().enumerate() {
                    let id = CategoryId::from(id);
                    if id == CategoryId::UNRESERVED || c.depth != depth || !held.contains(&id) {
                        continue;
                    }
                    out.extend(policy.pool(course, id));
                }
            }
        }
        out
    }

    #[test]
    fn reserved_candidate_doubles_each_preference() {
        let p = policy();
        let got = expand_preferences(&[CourseId(0), CourseId(1)], &[RES], &p).unwrap();
        // Raw preference 2 (course B) lands at expanded positions 3 and 4.
        assert_eq!(got, vec![PoolId(0), PoolId(1), PoolId(3), PoolId(4)]);
    }

    #[test]
    fn general_candidate_is_identity_on_courses() {
        let p = policy();
        let got = expand_preferences(&[CourseId(1), CourseId(0)], &[], &p).unwrap();
        assert_eq!(got, vec![PoolId(3), PoolId(0)]);
    }

    #[test]
    fn nested_category_expands_outermost_first() {
        let p = policy();
        // Held order given innermost-first on purpose.
        let got = expand_preferences(&[CourseId(0)], &[PWD, RES], &p).unwrap();
        assert_eq!(got, vec![PoolId(0), PoolId(1), PoolId(2)]);
        assert_eq!(got, brute_expand(&[CourseId(0)], &[PWD, RES], &p));
        // Course B has no PwD pool.
        let got = expand_preferences(&[CourseId(1), CourseId(0)], &[RES, PWD], &p).unwrap();
        assert_eq!(
            got,
            brute_expand(&[CourseId(1), CourseId(0)], &[RES, PWD], &p)
        );
    }

    #[test]
    fn unknown_category_is_rejected() {
        let p = policy();
        assert_eq!(
            expand_preferences(&[CourseId(0)], &[CategoryId(9)], &p),
            Err(ReservationError::UnknownCategory(CategoryId(9)))
        );
    }

    #[test]
    fn female_pools_follow_neutral_entries() {
        let config = SupernumeraryConfig {
            enabled: true,
            desired: vec![2, 0],
            pools: vec![Some(PoolId(9)), None],
        };
        let course_of = |p: PoolId| {
            if p.0 <= 2 || p.0 == 9 {
                CourseId(0)
            } else {
                CourseId(1)
            }
        };
        let prefs = [PoolId(0), PoolId(1), PoolId(3)];
        assert_eq!(
            expand_female_pools(&prefs, true, &config, course_of),
            vec![PoolId(0), PoolId(1), PoolId(9), PoolId(3)]
        );
        assert_eq!(
            expand_female_pools(&prefs, false, &config, course_of),
            prefs
        );
        let off = SupernumeraryConfig {
            enabled: false,
            ..config
        };
        assert_eq!(expand_female_pools(&prefs, true, &off, course_of), prefs);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn expansion_preserves_raw_order(
                raw in proptest::sample::subsequence(vec![0u32, 1], 0..=2).prop_shuffle(),
                res in any::<bool>(),
                pwd in any::<bool>(),
            ) {
                let p = policy();
                let raw: Vec<CourseId> = raw.into_iter().map(CourseId).collect();
                let mut held = Vec::new();
                if res { held.push(RES); }
                if res && pwd { held.push(PWD); }
                let got = expand_preferences(&raw, &held, &p).unwrap();
                prop_assert_eq!(&got, &brute_expand(&raw, &held, &p));
                // Entries of raw rank i precede those of raw rank i+1.
                let course_of = |pool: PoolId| if pool.0 <= 2 { CourseId(0) } else { CourseId(1) };
                let mut courses: Vec<CourseId> = got.iter().map(|&q| course_of(q)).collect();
                courses.dedup();
                prop_assert_eq!(courses, raw);
            }
        }
    }
}
