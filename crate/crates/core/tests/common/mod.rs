//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use codesparse::code::GeneratorMatrix;
use codesparse::field::PrimeField;
use codesparse::rng::rng_from_seed;
use rand::Rng;

/// Matrix over F_q whose entries are nonzero with probability `num/den`.
pub fn sparse_code(q: u64, k: usize, n: usize, num: u64, den: u64, seed: u64) -> GeneratorMatrix {
    let mut rng = rng_from_seed(seed);
    let entries = (0..n * k)
        .map(|_| if rng.random_range(0..den) < num { rng.random_range(1..q) as u32 } else { 0 })
        .collect();
    GeneratorMatrix::new(PrimeField::new(q).unwrap(), n, k, entries).unwrap()
}

/// The small-code corpus: `q` in {2,3,5}, `k` in 2..=5, `n` in k..=18,
/// alternating dense uniform rows and sparse rows.
pub fn small_code_corpus(count: usize) -> Vec<GeneratorMatrix> {
    (0..count)
        .map(|i| {
            let q = [2u64, 3, 5][i % 3];
            let k = 2 + (i / 3) % 4;
            let n = k + (i * 7 + i / 5) % (19 - k);
            let seed = 1000 + i as u64;
            if i % 2 == 0 {
                codesparse::corpus::random_code(q, k, n, seed).unwrap()
            } else {
                sparse_code(q, k, n, 1, 3, seed)
            }
        })
        .collect()
}
