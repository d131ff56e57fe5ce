//! Deterministic per-task random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator behind every seeded stream.
pub type TaskRng = ChaCha8Rng;

/// Stream `task` of the generator seeded by `master`. Streams never overlap,
/// so shards can run in any order and still reproduce.
pub fn task_rng(master: u64, task: u64) -> TaskRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(task);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = task_rng(5, 0).gen();
        let b: u64 = task_rng(5, 0).gen();
        let c: u64 = task_rng(5, 1).gen();
        let d: u64 = task_rng(6, 0).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }
}
