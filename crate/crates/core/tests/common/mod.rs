#![allow(dead_code)]

use ausgen_core::{Algebra, PrimeField, Quiver, Relation};

/// The radical-cube-zero algebra on a line of `n` vertices with a loop at
/// each end. For `n = 2` the arrows are named `c, a, b, d`.
pub fn chain(n: usize, p: u32) -> Algebra {
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut q = Quiver::new(labels.iter().map(String::as_str)).unwrap();
    let c = q.add_arrow("c", 0, 0).unwrap();
    let a_name = |i: usize| {
        if n == 2 {
            "a".to_string()
        } else {
            format!("a{i}")
        }
    };
    let b_name = |i: usize| {
        if n == 2 {
            "b".to_string()
        } else {
            format!("b{i}")
        }
    };
    let a: Vec<usize> = (1..n)
        .map(|i| q.add_arrow(a_name(i), i - 1, i).unwrap())
        .collect();
    let b: Vec<usize> = (2..=n)
        .map(|i| q.add_arrow(b_name(i), i - 1, i - 2).unwrap())
        .collect();
    let d = q.add_arrow("d", n - 1, n - 1).unwrap();
    // a[i] is a_{i+1}: i+1 -> i+2 ; b[i] is b_{i+2}: i+2 -> i+1
    let mut rels = vec![
        Relation::new(vec![(1, vec![c, c]), (-1, vec![a[0], b[0]])]),
        Relation::new(vec![(1, vec![c, a[0]])]),
        Relation::new(vec![(1, vec![b[0], c])]),
    ];
    for i in 0..n.saturating_sub(2) {
        rels.push(Relation::new(vec![(1, vec![a[i], a[i + 1]])]));
        rels.push(Relation::new(vec![(1, vec![b[i + 1], b[i]])]));
        rels.push(Relation::new(vec![
            (1, vec![a[i + 1], b[i + 1]]),
            (-1, vec![b[i], a[i]]),
        ]));
    }
    rels.push(Relation::new(vec![(1, vec![a[n - 2], d])]));
    rels.push(Relation::new(vec![(1, vec![d, b[n - 2]])]));
    rels.push(Relation::new(vec![
        (1, vec![d, d]),
        (-1, vec![b[n - 2], a[n - 2]]),
    ]));
    Algebra::new(PrimeField::new(p).unwrap(), q, rels, 3).unwrap()
}

/// A random finitely presented module: the cokernel of a random map between
/// sums of at most two indecomposable projectives.
pub fn random_module(alg: &Algebra, seed: u64) -> ausgen_core::rep::Rep {
    use rand::{Rng, SeedableRng};
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
    let f = ausgen_core::rep::projective_sum_map(alg, &src, &tgt, &|t, s| entries[t][s].clone());
    f.cokernel().0
}
