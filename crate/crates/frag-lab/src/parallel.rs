//! Deterministic parallel replica execution.
//!
//! Each replica owns the ChaCha8 substream keyed by (seed, test tag, replica
//! index); rayon only schedules the work, the values never depend on the
//! split. Results come back in replica order and all reductions downstream
//! are sequential, so a fixed `RunConfig` produces bit-identical numbers at
//! any thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Stable stream tags, one per statistical experiment. The tag sits in the
/// high bits of the ChaCha stream id, the replica index in the low 44.
pub mod tag {
    pub const ML_MOMENTS: u16 = 1;
    pub const ML_LAW: u16 = 2;
    pub const MEAN_INTENSITY: u16 = 3;
    pub const OU_TREE: u16 = 4;
    pub const OU_PATHS: u16 = 5;
    pub const OU_MGF: u16 = 6;
    pub const JUMP_STATS: u16 = 7;
    pub const FIRST_JUMP: u16 = 8; // +n for each restriction level
    pub const SEMIGROUP_DIRECT: u16 = 16;
    pub const SEMIGROUP_PRODUCT: u16 = 17;
    pub const COMPOSE_DIRECT: u16 = 18;
    pub const COMPOSE_TWO_STAGE: u16 = 19;
    pub const JOINT_MC: u16 = 20;
    pub const LARGEST_BLOCK: u16 = 24; // +i per grid point
    pub const URN_BETA: u16 = 30;
    pub const CLI_SIMULATE: u16 = 40;
    pub const CLI_MOMENTS: u16 = 41;
    pub const CLI_OU: u16 = 42;
}

const REPLICA_BITS: u32 = 44;

/// The substream for one replica of one experiment.
pub fn substream(seed: u64, test: u16, replica: u64) -> ChaCha8Rng {
    debug_assert!(replica < 1u64 << REPLICA_BITS);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((test as u64) << REPLICA_BITS) | replica);
    rng
}

/// Maps `f` over replica indices on a private pool, collecting results in
/// replica order. `B` is per-worker scratch space reused across replicas;
/// `f` must not read anything it has not written in the same call.
pub fn replica_map<B, T, FB, F>(threads: usize, replicas: u64, make_buf: FB, f: F) -> Vec<T>
where
    B: Send,
    T: Send,
    FB: Fn() -> B + Sync + Send,
    F: Fn(&mut B, u64) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| {
        (0..replicas)
            .into_par_iter()
            .map_init(&make_buf, |buf, r| f(buf, r))
            .collect()
    })
}
