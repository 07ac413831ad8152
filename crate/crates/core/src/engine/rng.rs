//! Seeded, labelled random streams.
//!
//! Every consumer asks for a stream by label. The stream is a ChaCha8
//! generator seeded with the run seed, with its stream number derived from
//! the label. Independent parts of a run therefore never share draws, and
//! results do not depend on evaluation order or thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{rat, Rational};

/// 64-bit FNV-1a.
pub fn fnv1a(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub fn stream(seed: u64, label: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(label));
    rng
}

/// The default coefficient pool: `±a/b` for `a ∈ 1..=5`, `b ∈ {1,2,3}`,
/// deduplicated and sorted.
pub fn default_pool() -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    for a in 1..=5i64 {
        for b in 1..=3i64 {
            for s in [1, -1] {
                let v = rat(s * a, b);
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out.sort();
    out
}

pub fn draw(rng: &mut ChaCha8Rng, pool: &[Rational]) -> Rational {
    pool[rng.gen_range(0..pool.len())].clone()
}

pub fn draw_matrix(rng: &mut ChaCha8Rng, pool: &[Rational], rows: usize, cols: usize) -> Vec<Vec<Rational>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| draw(rng, pool)).collect())
        .collect()
}
