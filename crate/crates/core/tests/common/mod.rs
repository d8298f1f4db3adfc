#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seatalloc_core::io::gen::{generate_instance, GenParams};
use seatalloc_core::model::{
    validate_instance, CandidateId, Instance, InstanceOptions, RawInstance,
};

/// Small-instance corpus: up to 8 candidates, 6 courses, 3 lists, seat
/// capacities 1-3, reservations on for half the seeds.
pub fn small_params(seed: u64) -> GenParams {
    GenParams {
        candidates: 1 + (seed % 8) as usize,
        courses: 1 + (seed / 8 % 6) as usize,
        lists: 1 + (seed / 48 % 3) as usize,
        capacity_min: 1,
        capacity_max: 3,
        pref_len_mean: 3,
        pref_len_spread: 3,
        reservations: seed / 144 % 2 == 1,
        seed,
        ..GenParams::default()
    }
}

pub fn small_raw(seed: u64) -> RawInstance {
    generate_instance(&small_params(seed)).unwrap()
}

pub fn small(seed: u64) -> Instance {
    validate_instance(&small_raw(seed), &InstanceOptions::default()).unwrap()
}

/// Same corpus with female quotas emitted and enabled.
pub fn small_with_quotas(seed: u64) -> (RawInstance, Instance) {
    let raw = generate_instance(&GenParams {
        quotas: true,
        ..small_params(seed)
    })
    .unwrap();
    let inst = validate_instance(
        &raw,
        &InstanceOptions {
            enable_quotas: true,
        },
    )
    .unwrap();
    (raw, inst)
}

/// A random non-empty withdrawal sequence, drawn from `seed`.
pub fn withdrawals(inst: &Instance, seed: u64) -> Vec<CandidateId> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut all: Vec<CandidateId> = (0..inst.num_candidates()).map(CandidateId::from).collect();
    all.shuffle(&mut rng);
    let k = rng.gen_range(1..=all.len().max(1));
    all.truncate(k);
    all
}
