use crate::model::{AllocationState, CourseId};

use super::SupernumeraryConfig;

/// Called when the unreserved pool of `course` fills for the first time.
/// Grows the supernumerary pool so that the seats created so far equal
/// `max(0, y - x)`, `x` being the course's current female occupants.
/// Returns how many seats were added. Created seats are never retracted.
pub fn supernumerary_on_fill(
    state: &mut AllocationState,
    course: CourseId,
    config: &SupernumeraryConfig,
) -> u32 {
    let Some(pool) = config.pool(course) else {
        return 0;
    };
    let desired = config.desired[course.index()];
    let admitted = state.female_in_course[course.index()];
    let target = desired.saturating_sub(admitted);
    let created = &mut state.sup_created[course.index()];
    let add = target.saturating_sub(*created);
    *created += add;
    state.capacity[pool.index()] += add;
    add
}

/// Called when a candidate leaves a gender-neutral pool of `course` for a
/// different course (or withdraws). A female leaver of a filled course adds
/// one supernumerary seat while the quota allows. Returns seats added (0 or 1).
pub fn supernumerary_on_vacate(
    state: &mut AllocationState,
    course: CourseId,
    leaver_is_female: bool,
    config: &SupernumeraryConfig,
) -> u32 {
    let Some(pool) = config.pool(course) else {
        return 0;
    };
    let ci = course.index();
    if !leaver_is_female || !state.course_filled[ci] || state.sup_created[ci] >= config.desired[ci]
    {
        return 0;
    }
    state.sup_created[ci] += 1;
    state.capacity[pool.index()] += 1;
    1
}
