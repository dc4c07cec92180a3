//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. All arithmetic is exact over F_p, so no
//! numeric tolerances apply: every comparison is equality.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use ausgen::flows::{self, FlowRun};
use ausgen_core::ar::{almost_split_starting_at, splits};
use ausgen_core::decompose::{decompose, is_isomorphic, iso_indecomposable, Settings};
use ausgen_core::mutation::{Catalog, GeneratorSet, ModId, Verdict};
use ausgen_core::relative::{minimal_right_approximation, window, window_verify};
use ausgen_core::rep::{
    hom, is_projective, nakayama, projective, syzygy_power, tau, tau_inverse, Rep,
};

const PRIMES: [u32; 3] = [2, 3, 5];
const RANDOM_MODULES: u64 = 200;
const WINDOW_RADIUS: usize = 3;

struct Gate {
    failed: Vec<usize>,
}

impl Gate {
    fn line(&mut self, n: usize, name: &str, pass: bool, detail: &str) {
        let status = if pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {n}: {name} [{detail}]");
        if !pass {
            self.failed.push(n);
        }
    }
}

fn sub(name: &str, pass: bool, detail: String) -> bool {
    println!(
        "    {} {name}: {detail}",
        if pass { "ok  " } else { "FAIL" }
    );
    pass
}

fn failing_checks(run: &FlowRun) -> Vec<String> {
    run.checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.clone())
        .collect()
}

fn flow_criterion(
    gate: &mut Gate,
    n: usize,
    name: &str,
    runs: &BTreeMap<(u8, u32), FlowRun>,
    expect_reject: bool,
) {
    let mut pass = true;
    let mut checks = 0;
    for p in PRIMES {
        let run = &runs[&(n as u8, p)];
        let bad = failing_checks(run);
        checks += run.checks.len();
        if !bad.is_empty() || run.rejected != expect_reject {
            println!("    p = {p}: failing {bad:?}, rejected {}", run.rejected);
            pass = false;
        }
    }
    gate.line(
        n,
        name,
        pass,
        &format!("{checks} exact checks over p = 2, 3, 5"),
    );
}

fn window_criterion(gate: &mut Gate, runs: &BTreeMap<(u8, u32), FlowRun>) {
    let mut pass = true;
    let mut modules = 0;
    for p in PRIMES {
        let run = &runs[&(1, p)];
        for name in ["M0", "M0*", "M_1", "M_1*"] {
            let set = run.set(name).expect("flow records the set");
            let cat = &run.catalog;
            let report = window_verify(
                &set.modules(cat),
                &set.labels(cat),
                WINDOW_RADIUS,
                cat.homs(),
                cat.settings(),
            )
            .unwrap();
            modules += report.entries.len();
            let bad: Vec<&str> = report.failures().map(|e| e.label.as_str()).collect();
            pass &= sub(
                &format!("p = {p}, {name}, radius {WINDOW_RADIUS}"),
                bad.is_empty(),
                format!("{} modules, failures {bad:?}", report.entries.len()),
            );
        }
        let run = &runs[&(3, p)];
        let w = run.window.as_ref().expect("rejected candidate window");
        let bad: Vec<String> = w
            .failures()
            .map(|e| format!("{} {:?} -> {:?}", e.label, e.dims, e.syzygy))
            .collect();
        pass &= sub(
            &format!("p = {p}, rejected candidate, radius 1"),
            !bad.is_empty(),
            format!("failure witnesses {bad:?}"),
        );
    }
    gate.line(
        4,
        "window verification",
        pass,
        &format!("{modules} window modules, evidence on the window only"),
    );
}

fn random_sample(k: u64) -> Rep {
    let p = PRIMES[(k % 3) as usize];
    let alg = flows::algebra(1, p).unwrap();
    common::random_module(&alg, k)
}

fn non_projective_classes(x: &Rep, s: &Settings) -> Vec<Rep> {
    decompose(x, s)
        .classes
        .into_iter()
        .filter(|c| !is_projective(c))
        .collect()
}

fn krull_schmidt(samples: &[Rep]) -> bool {
    let a = Settings::with_seed(7);
    let b = Settings::with_seed(0x5151_5151);
    let mut ok = 0;
    for x in samples {
        let da = decompose(x, &a);
        let db = decompose(x, &b);
        let same = da.reassembles(x)
            && db.reassembles(x)
            && da.dimension_vectors() == db.dimension_vectors()
            && da.classes.len() == db.classes.len()
            && da.classes.iter().zip(&da.multiplicities).all(|(c, m)| {
                db.classes
                    .iter()
                    .zip(&db.multiplicities)
                    .any(|(d, n)| n == m && iso_indecomposable(c, d).is_some())
            });
        ok += usize::from(same);
    }
    sub(
        "Krull-Schmidt multisets agree across two seeds",
        ok == samples.len(),
        format!("{ok}/{}", samples.len()),
    )
}

fn translate_round_trip(samples: &[Rep]) -> bool {
    let s = Settings::default();
    let (mut ok, mut total) = (0, 0);
    for x in samples {
        for c in non_projective_classes(x, &s) {
            total += 1;
            let a = tau_inverse(&tau(&c).unwrap()).unwrap();
            let b = tau(&tau_inverse(&c).unwrap()).unwrap();
            ok += usize::from(
                is_isomorphic(&a, &c, &s).is_some() && is_isomorphic(&b, &c, &s).is_some(),
            );
        }
    }
    sub(
        "tau^-1 tau and tau tau^-1 are the identity off projectives",
        ok == total && total > 0,
        format!("{ok}/{total} indecomposables"),
    )
}

fn duality(samples: &[Rep]) -> bool {
    let ok = samples.iter().filter(|x| x.dual().dual() == **x).count();
    sub(
        "duality is an involution",
        ok == samples.len(),
        format!("{ok}/{}", samples.len()),
    )
}

fn hom_from_projectives(samples: &[Rep]) -> bool {
    let ok = samples
        .iter()
        .filter(|x| {
            (0..x.algebra().vertex_count())
                .all(|i| hom(&projective(x.algebra(), i), x).unwrap().len() == x.dims()[i])
        })
        .count();
    sub(
        "dim Hom(P_i, X) equals the dimension of X at i",
        ok == samples.len(),
        format!("{ok}/{}", samples.len()),
    )
}

fn almost_split(samples: &[Rep]) -> bool {
    let s = Settings::default();
    let (mut ok, mut total) = (0, 0);
    for x in samples {
        for c in non_projective_classes(x, &s) {
            total += 1;
            let ar = almost_split_starting_at(&c, &s).unwrap();
            let additive = ar
                .middle()
                .dims()
                .iter()
                .zip(ar.left().dims().iter().zip(ar.right().dims()))
                .all(|(m, (l, r))| *m == l + r);
            ok += usize::from(
                ar.sequence.is_exact()
                    && !splits(&ar.sequence)
                    && additive
                    && ar.rad_annihilation(),
            );
        }
    }
    sub(
        "almost split sequences: exact, non-split, additive, annihilated by the radical",
        ok == total && total > 0,
        format!("{ok}/{total}"),
    )
}

fn ids(cat: &mut Catalog, x: &Rep) -> Vec<ModId> {
    if x.is_zero() {
        Vec::new()
    } else {
        cat.intern_all(x, "summand")
    }
}

fn approximation(cat: &mut Catalog, c: &Rep, gens: &[ModId]) -> (Vec<ModId>, Vec<ModId>) {
    let reps = cat.modules(gens);
    let a = minimal_right_approximation(c, &reps, cat.homs()).unwrap();
    (ids(cat, &a.module), ids(cat, &a.kernel))
}

fn remove(from: &[ModId], sub: &[ModId]) -> Option<Vec<ModId>> {
    let mut rest = from.to_vec();
    for x in sub {
        let k = rest.iter().position(|y| y == x)?;
        rest.remove(k);
    }
    rest.sort_unstable();
    Some(rest)
}

/// Relative syzygies before and after trading `N` for `τ^-1 N`: the copies of
/// `N` become copies of the middle term, up to a summand shared with the
/// approximating module.
fn exchange_identity(
    cat: &mut Catalog,
    m0: &GeneratorSet,
    n: ModId,
    radius: usize,
) -> (usize, usize) {
    let e = cat.ar_middle(n).unwrap();
    let t = cat.tau_inverse(n).unwrap();
    let without: Vec<ModId> = m0.ids().into_iter().filter(|&g| g != n).collect();
    let mut star = without.clone();
    star.push(t);
    let (mut ok, mut total) = (0, 0);
    let reps = m0.modules(cat);
    for w in window(&reps, &m0.labels(cat), radius, cat.settings()) {
        total += 1;
        let (cover, before) = approximation(cat, &w.module, &without);
        let (cover_star, after) = approximation(cat, &w.module, &star);
        let l = before.iter().filter(|&&x| x == n).count();
        let mut expected: Vec<ModId> = before.into_iter().filter(|&x| x != n).collect();
        let n_free = !expected.contains(&n) && !after.contains(&n);
        for _ in 0..l {
            expected.extend(e.iter().copied());
        }
        let mut unminimized = cover;
        unminimized.extend(std::iter::repeat_n(t, l));
        let z = remove(&expected, &after);
        let z_cover = remove(&unminimized, &cover_star);
        let good =
            n_free && z.is_some() && z == z_cover && z.unwrap().iter().all(|x| star.contains(x));
        ok += usize::from(good);
    }
    (ok, total)
}

fn exchange_identities() -> bool {
    let (mut ok, mut total) = (0, 0);
    for p in PRIMES {
        let alg = flows::algebra(1, p).unwrap();
        let mut cat = Catalog::new(&alg, Settings::default());
        let m0 = ausgen_core::mutation::canonical_m0(&mut cat).unwrap();
        for label in ["S1", "S2", "P1/soc", "P2/soc"] {
            let n = m0
                .ids()
                .into_iter()
                .find(|&i| cat.label(i) == label)
                .unwrap();
            let middle = cat.ar_middle(n).unwrap();
            if !middle.iter().all(|x| m0.contains(*x) && *x != n) {
                continue;
            }
            let (a, b) = exchange_identity(&mut cat, &m0, n, 2);
            ok += a;
            total += b;
        }
    }
    sub(
        "exchange identity for relative syzygies on the radius 2 window",
        ok == total && total > 0,
        format!("{ok}/{total} window modules"),
    )
}

fn top_coverage(runs: &BTreeMap<(u8, u32), FlowRun>) -> bool {
    let (mut ok, mut total) = (0, 0);
    for run in runs.values() {
        for s in &run.steps {
            let c = &s.certificate;
            if c.verdict == Verdict::Accept && c.fast_applicable {
                total += 1;
                ok += usize::from(c.top_coverage == Some(true));
            }
        }
    }
    sub(
        "tops of the other summands contain every simple before each accepted exchange",
        ok == total && total > 0,
        format!("{ok}/{total} exchanges"),
    )
}

fn translate_is_second_syzygy(runs: &BTreeMap<(u8, u32), FlowRun>) -> bool {
    let s = Settings::default();
    let (mut ok, mut total) = (0, 0);
    for run in runs.values() {
        let cat = &run.catalog;
        for i in 0..cat.len() {
            let x = cat.module(i);
            if cat.is_projective(i) {
                continue;
            }
            total += 1;
            let t = tau(x).unwrap();
            let o = syzygy_power(&nakayama(x), 2);
            ok += usize::from(is_isomorphic(&t, &o, &s).is_some());
        }
    }
    sub(
        "tau agrees with omega^2 nu on every non-projective catalogued indecomposable",
        ok == total && total > 0,
        format!("{ok}/{total}"),
    )
}

fn branch_agreement(runs: &BTreeMap<(u8, u32), FlowRun>) -> bool {
    let (mut ok, mut total) = (0, 0);
    for run in runs.values() {
        for s in &run.steps {
            let c = &s.certificate;
            if let (Some(f), Some(g)) = (c.fast_verdict, c.general_verdict) {
                total += 1;
                ok += usize::from(f == g);
            }
        }
    }
    sub(
        "fast and general criteria agree on every exchange of criteria 1-3",
        ok == total && total > 0,
        format!("{ok}/{total} exchanges"),
    )
}

fn property_criterion(gate: &mut Gate, runs: &BTreeMap<(u8, u32), FlowRun>) {
    let samples: Vec<Rep> = (0..RANDOM_MODULES).map(random_sample).collect();
    let mut pass = true;
    pass &= krull_schmidt(&samples);
    pass &= translate_round_trip(&samples);
    pass &= duality(&samples);
    pass &= hom_from_projectives(&samples);
    pass &= almost_split(&samples);
    pass &= exchange_identities();
    pass &= top_coverage(runs);
    pass &= translate_is_second_syzygy(runs);
    pass &= branch_agreement(runs);
    gate.line(
        5,
        "property suites",
        pass,
        &format!("{RANDOM_MODULES} random modules plus the example catalogs"),
    );
}

fn cross_characteristic(gate: &mut Gate, runs: &BTreeMap<(u8, u32), FlowRun>) {
    let mut pass = true;
    for ex in 1..=3u8 {
        let reference = runs[&(ex, 2)].golden();
        let golden = match ex {
            1 => include_str!("golden/example1.txt"),
            2 => include_str!("golden/example2.txt"),
            _ => include_str!("golden/example3.txt"),
        };
        pass &= sub(
            &format!("example {ex} matches its golden file"),
            reference == golden,
            "labels, sorted dimension vectors, verdicts".into(),
        );
        for p in [3, 5] {
            let same = runs[&(ex, p)].golden() == reference;
            pass &= sub(
                &format!("example {ex} at p = {p} agrees with p = 2"),
                same,
                "identical summary".into(),
            );
        }
    }
    gate.line(6, "cross-characteristic stability", pass, "p = 2, 3, 5");
}

fn main() {
    let start = Instant::now();
    let mut gate = Gate { failed: Vec::new() };
    let mut runs = BTreeMap::new();
    for ex in 1..=3u8 {
        for p in PRIMES {
            runs.insert((ex, p), flows::run(ex, p, Settings::default()).unwrap());
        }
    }
    flow_criterion(
        &mut gate,
        1,
        "two-vertex exchange flow returns to the translate",
        &runs,
        false,
    );
    flow_criterion(
        &mut gate,
        2,
        "four-vertex exchange outside the simples-first chain",
        &runs,
        false,
    );
    flow_criterion(
        &mut gate,
        3,
        "five-vertex construction and rejected exchange",
        &runs,
        true,
    );
    window_criterion(&mut gate, &runs);
    property_criterion(&mut gate, &runs);
    cross_characteristic(&mut gate, &runs);
    println!(
        "acceptance: {} of 6 criteria passed in {:.1}s",
        6 - gate.failed.len(),
        start.elapsed().as_secs_f64()
    );
    if !gate.failed.is_empty() {
        std::process::exit(1);
    }
}
