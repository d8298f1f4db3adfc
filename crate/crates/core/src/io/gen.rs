//! Seeded random instance generator.
//!
//! Course popularity follows a power law so that a few courses are the
//! first choice of most candidates. Merit lists share a common ability term
//! plus per-exam noise, so they are correlated but not identical.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    CandidateRow, CategoryParentRow, CourseRow, MeritRow, Origin, PrefRow, QuotaRow, RawInstance,
};

pub const RESERVED: &str = "RES";
pub const RESERVED_PWD: &str = "RES-PwD";

#[derive(Clone, Debug, PartialEq, Error)]
#[error("infeasible generator parameters: {0}")]
pub struct InfeasibleParams(pub String);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub candidates: usize,
    pub courses: usize,
    pub lists: usize,
    pub capacity_min: u32,
    pub capacity_max: u32,
    /// Preference lengths are uniform on `mean ± spread`, capped at the course count.
    pub pref_len_mean: u32,
    pub pref_len_spread: u32,
    /// Exponent of the course popularity power law (0 = uniform).
    pub popularity_skew: f64,
    /// Adds reserved and nested reserved pools to every course.
    pub reservations: bool,
    pub reserved_prob: f64,
    pub nested_prob: f64,
    pub female_prob: f64,
    /// Emits a female quota per course.
    pub quotas: bool,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            candidates: 100,
            courses: 10,
            lists: 2,
            capacity_min: 1,
            capacity_max: 5,
            pref_len_mean: 5,
            pref_len_spread: 3,
            popularity_skew: 0.8,
            reservations: false,
            reserved_prob: 0.3,
            nested_prob: 0.3,
            female_prob: 0.4,
            quotas: false,
            seed: 0,
        }
    }
}

impl GenParams {
    fn check(&self) -> Result<(), InfeasibleParams> {
        let fail = |m: &str| Err(InfeasibleParams(m.into()));
        if self.lists == 0 {
            return fail("at least one merit list is needed");
        }
        if self.courses == 0 && self.candidates > 0 && self.pref_len_mean > 0 {
            return fail("preferences requested but there are no courses");
        }
        if self.capacity_min > self.capacity_max {
            return fail("capacity_min exceeds capacity_max");
        }
        if self.pref_len_spread > self.pref_len_mean {
            return fail("pref_len_spread exceeds pref_len_mean");
        }
        for (name, p) in [
            ("reserved_prob", self.reserved_prob),
            ("nested_prob", self.nested_prob),
            ("female_prob", self.female_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return fail(&format!("{name} must lie in [0, 1]"));
            }
        }
        if !self.popularity_skew.is_finite() || self.popularity_skew < 0.0 {
            return fail("popularity_skew must be finite and non-negative");
        }
        if self.candidates as u64 > u32::MAX as u64 || self.courses as u64 > u32::MAX as u64 {
            return fail("too many candidates or courses");
        }
        Ok(())
    }
}

/// List ids are `1..=lists`; course `j` is governed by list `j % lists + 1`.
pub fn generate_instance(params: &GenParams) -> Result<RawInstance, InfeasibleParams> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.candidates;
    let m = params.courses;
    let k = params.lists;
    let mut raw = RawInstance::default();

    // Candidates.
    raw.candidates.reserve(n);
    for c in 0..n {
        let is_female = rng.gen_bool(params.female_prob);
        let mut categories = Vec::new();
        if params.reservations && rng.gen_bool(params.reserved_prob) {
            categories.push(RESERVED.to_string());
            if rng.gen_bool(params.nested_prob) {
                categories.push(RESERVED_PWD.to_string());
            }
        }
        raw.candidates.push(CandidateRow {
            candidate_id: c as u64,
            is_female,
            categories,
            origin: Origin::default(),
        });
    }

    // Merit lists: everyone sits every exam.
    let ability: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    raw.merit.reserve(n * k);
    for list in 1..=k as u64 {
        let mut scored: Vec<(f64, u32)> = ability
            .iter()
            .enumerate()
            .map(|(c, &a)| (a + 0.5 * rng.gen::<f64>(), c as u32))
            .collect();
        scored.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        for (pos, &(_, c)) in scored.iter().enumerate() {
            raw.merit.push(MeritRow {
                list_id: list,
                rank: pos as u64 + 1,
                candidate_id: c as u64,
                origin: Origin::default(),
            });
        }
    }

    // Courses and pools.
    for j in 0..m {
        let list_id = (j % k) as u64 + 1;
        let course_id = j as u64;
        let pool = |category: &str, capacity: u32| CourseRow {
            course_id,
            list_id,
            category: category.into(),
            capacity: capacity as i64,
            origin: Origin::default(),
        };
        let ur = rng.gen_range(params.capacity_min..=params.capacity_max);
        raw.courses.push(pool("UR", ur));
        if params.reservations {
            let res = rng.gen_range(0..=(params.capacity_max / 2).max(1));
            let pwd = rng.gen_range(0..=1);
            raw.courses.push(pool(RESERVED, res));
            raw.courses.push(pool(RESERVED_PWD, pwd));
        }
        if params.quotas {
            raw.quotas.push(QuotaRow {
                course_id,
                female_quota: rng.gen_range(0..=params.capacity_max) as i64,
                origin: Origin::default(),
            });
        }
    }
    if params.reservations {
        raw.category_parents.push(CategoryParentRow {
            category: RESERVED_PWD.into(),
            parent: RESERVED.into(),
            origin: Origin::default(),
        });
    }

    // Preferences.
    if m > 0 {
        let sampler = Popularity::new(m, params.popularity_skew);
        let mut picked: Vec<u32> = Vec::new();
        let lo = params.pref_len_mean - params.pref_len_spread;
        let hi = params.pref_len_mean + params.pref_len_spread;
        for c in 0..n {
            let len = (rng.gen_range(lo..=hi) as usize).min(m);
            sampler.sample_distinct(&mut rng, len, &mut picked);
            for (i, &course) in picked.iter().enumerate() {
                raw.prefs.push(PrefRow {
                    candidate_id: c as u64,
                    pref_rank: i as u64 + 1,
                    course_id: course as u64,
                    origin: Origin::default(),
                });
            }
        }
    }
    Ok(raw)
}

/// Power-law weights over courses with distinct weighted sampling.
struct Popularity {
    weights: Vec<f64>,
    cumulative: Vec<f64>,
}

impl Popularity {
    fn new(m: usize, skew: f64) -> Self {
        let weights: Vec<f64> = (0..m).map(|j| 1.0 / ((j + 1) as f64).powf(skew)).collect();
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Popularity {
            weights,
            cumulative,
        }
    }

    fn sample_distinct(&self, rng: &mut ChaCha8Rng, len: usize, out: &mut Vec<u32>) {
        out.clear();
        let m = self.weights.len();
        if len * 2 > m {
            // Weighted shuffle via exponential keys, then take a prefix.
            let mut keyed: Vec<(f64, u32)> = self
                .weights
                .iter()
                .enumerate()
                .map(|(j, &w)| (-rng.gen::<f64>().max(f64::MIN_POSITIVE).ln() / w, j as u32))
                .collect();
            keyed.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            out.extend(keyed.into_iter().take(len).map(|(_, j)| j));
            return;
        }
        let total = *self.cumulative.last().expect("m > 0");
        while out.len() < len {
            let x = rng.gen::<f64>() * total;
            let j = self.cumulative.partition_point(|&c| c <= x).min(m - 1) as u32;
            if !out.contains(&j) {
                out.push(j);
            }
        }
    }
}
