#![allow(dead_code)]

use ausgen_core::rep::{projective_sum_map, Rep};
use ausgen_core::Algebra;
use rand::{Rng, SeedableRng};

/// A random finitely presented module: the cokernel of a random map between
/// sums of at most two indecomposable projectives.
pub fn random_module(alg: &Algebra, seed: u64) -> Rep {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = alg.vertex_count();
    let p = alg.field().p();
    let tgt: Vec<usize> = (0..rng.random_range(1..=2))
        .map(|_| rng.random_range(0..n))
        .collect();
    let src: Vec<usize> = (0..rng.random_range(0..=2))
        .map(|_| rng.random_range(0..n))
        .collect();
    let entries: Vec<Vec<Vec<u32>>> = src
        .iter()
        .map(|&j| {
            tgt.iter()
                .map(|&i| {
                    (0..alg.block_dim(i, j))
                        .map(|_| rng.random_range(0..p))
                        .collect()
                })
                .collect()
        })
        .collect();
    projective_sum_map(alg, &src, &tgt, &|t, s| entries[t][s].clone())
        .cokernel()
        .0
}
