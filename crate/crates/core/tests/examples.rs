mod common;

use std::collections::BTreeSet;

use ausgen_core::ar::is_mutable_position;
use ausgen_core::decompose::Settings;
use ausgen_core::mutation::*;
use ausgen_core::relative::window_verify;

fn id(cat: &Catalog, set: &GeneratorSet, label: &str) -> ModId {
    set.ids()
        .into_iter()
        .find(|&i| cat.label(i) == label)
        .unwrap_or_else(|| panic!("{label} not in {:?}", set.labels(cat)))
}

fn exchange(cat: &mut Catalog, set: &GeneratorSet, label: &str) -> Mutation {
    let n = id(cat, set, label);
    let m = mutate_via_shift(cat, set, n, 1, MutateOptions::default()).unwrap();
    assert!(m.certificate.recheck(cat), "certificate at {label}");
    m
}

fn accept(cat: &mut Catalog, set: &GeneratorSet, label: &str) -> GeneratorSet {
    let m = exchange(cat, set, label);
    assert_eq!(m.certificate.verdict, Verdict::Accept, "at {label}");
    assert_eq!(m.certificate.top_coverage, Some(true), "at {label}");
    m.result
}

fn labels(cat: &Catalog, set: &GeneratorSet) -> BTreeSet<String> {
    set.labels(cat).into_iter().collect()
}

fn set_of(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn example1(p: u32) -> (Catalog, GeneratorSet) {
    let mut cat = Catalog::new(&common::chain(2, p), Settings::default());
    let m0 = canonical_m0(&mut cat).unwrap();
    (cat, m0)
}

#[test]
fn example1_flow_returns_to_the_translate() {
    for p in [2, 3, 5] {
        let (mut cat, m0) = example1(p);
        assert_eq!(
            labels(&cat, &m0),
            set_of(&["P1", "P2", "P1/soc", "P2/soc", "S1", "S2"])
        );
        let m1 = shift(&mut cat, &m0, 1).unwrap();
        let mut m = m0.clone();
        for label in ["S1", "S2"] {
            m = accept(&mut cat, &m, label);
        }
        assert_eq!(
            labels(&cat, &m),
            set_of(&["P1", "P2", "P1/soc", "P2/soc", "tau^-1 S1", "tau^-1 S2"])
        );
        for label in ["P1/soc", "P2/soc"] {
            m = accept(&mut cat, &m, label);
        }
        assert_eq!(m.key(), m1.key(), "p = {p}");
    }
}

#[test]
fn example1_translation_is_invertible() {
    let (mut cat, m0) = example1(3);
    assert_eq!(shift(&mut cat, &m0, 0).unwrap().key(), m0.key());
    let there = shift(&mut cat, &m0, 2).unwrap();
    let back = shift(&mut cat, &there, -2).unwrap();
    assert_eq!(back.key(), m0.key());
}

#[test]
fn example1_exchange_is_translation_equivariant() {
    let (mut cat, m0) = example1(2);
    for label in ["S1", "S2"] {
        let n = id(&cat, &m0, label);
        let a = mutate_via_shift(&mut cat, &m0, n, 1, MutateOptions::default()).unwrap();
        let b = mutate_via_shift(&mut cat, &m0, n, 2, MutateOptions::default()).unwrap();
        assert_eq!(a.certificate.verdict, b.certificate.verdict);
        assert_eq!(a.result.key(), b.result.key());
    }
}

#[test]
fn example1_accepted_exchange_passes_the_small_window() {
    let (mut cat, m0) = example1(2);
    let m = accept(&mut cat, &m0, "S1");
    let report = window_verify(
        &m.modules(&cat),
        &m.labels(&cat),
        1,
        cat.homs(),
        cat.settings(),
    )
    .unwrap();
    assert!(report.all_pass());
}

#[test]
fn projective_positions_are_not_applicable() {
    let (mut cat, m0) = example1(2);
    let n = id(&cat, &m0, "P1");
    let m = mutate(&mut cat, &m0, n, MutateOptions::default()).unwrap();
    assert_eq!(m.certificate.verdict, Verdict::NotApplicable);
    assert_eq!(m.result.key(), m0.key());
}

#[test]
fn example1_family() {
    let (mut cat, m0) = example1(2);
    let one = enumerate_family(&mut cat, &m0, 1, Strategy::All, MutateOptions::default()).unwrap();
    assert_eq!(one.sets.len(), 1);
    assert_eq!(one.sets[0].key(), m0.key());

    let s1 = accept(&mut cat, &m0, "S1");
    let s2 = accept(&mut cat, &m0, "S2");
    let m_1 = accept(&mut cat, &s1, "S2");
    let p1 = accept(&mut cat, &m_1, "P1/soc");
    let p2 = accept(&mut cat, &m_1, "P2/soc");
    let base = [&m0, &s1, &s2, &m_1, &p1, &p2];

    let fam = enumerate_family(&mut cat, &m0, 12, Strategy::All, MutateOptions::default()).unwrap();
    for b in base {
        assert!(fam.find(b).is_some(), "{:?}", b.labels(&cat));
    }
    let mut shifts = Vec::new();
    for b in base {
        for i in -3..=3 {
            shifts.push(shift(&mut cat, b, i).unwrap().key());
        }
    }
    for s in &fam.sets {
        assert!(shifts.contains(&s.key()), "{:?}", s.labels(&cat));
    }
    assert!(fam.edges.iter().all(|e| e.certificate.recheck(&cat)));
    assert!(fam.to_dot(&cat).starts_with("digraph"));
}

#[test]
fn enumeration_is_deterministic() {
    let run = || {
        let (mut cat, m0) = example1(2);
        let fam =
            enumerate_family(&mut cat, &m0, 8, Strategy::All, MutateOptions::default()).unwrap();
        fam.to_dot(&cat)
    };
    assert_eq!(run(), run());
}

#[test]
fn dual_of_the_opposite_canonical_generator_is_l0() {
    for p in [2, 3] {
        let alg = common::chain(2, p);
        let mut cat = Catalog::new(&alg, Settings::default());
        let l0 = canonical_l0(&mut cat).unwrap();
        assert_eq!(
            labels(&cat, &l0),
            set_of(&["P1", "P2", "rad P1", "rad P2", "S1", "S2"])
        );
        let mut op = Catalog::new(&alg.opposite(), Settings::default());
        let m0op = canonical_m0(&mut op).unwrap();
        assert_eq!(dual_set(&op, &m0op, &mut cat).key(), l0.key());
    }
}

#[test]
fn truncated_polynomial_ring_has_three_generators() {
    let mut q = ausgen_core::Quiver::new(["1"]).unwrap();
    q.add_arrow("x", 0, 0).unwrap();
    let f = ausgen_core::PrimeField::new(2).unwrap();
    let alg = ausgen_core::Algebra::new(f, q, vec![], 3).unwrap();
    let mut cat = Catalog::new(&alg, Settings::default());
    let h = cat.hypotheses().clone();
    assert!(h.selfinjective && h.radical_cube_zero);
    let m0 = canonical_m0(&mut cat).unwrap();
    assert_eq!(m0.ids().len(), 3);
}

#[test]
fn example2_paths() {
    for p in [2, 3, 5] {
        let mut cat = Catalog::new(&common::chain(4, p), Settings::default());
        let m0 = canonical_m0(&mut cat).unwrap();
        let mut m = m0.clone();
        for label in ["S1", "S2"] {
            m = accept(&mut cat, &m, label);
        }
        let shifted = shift(&mut cat, &m, 1).unwrap();
        let target = cat.tau_power(id(&cat, &m, "P1/soc"), -1).unwrap();
        let others: Vec<_> = shifted
            .ids()
            .into_iter()
            .filter(|&g| g != target)
            .map(|g| cat.module(g).clone())
            .collect();
        assert!(is_mutable_position(cat.module(target), &others, cat.settings()).unwrap());

        let star = exchange(&mut cat, &m, "P1/soc");
        assert_eq!(star.certificate.verdict, Verdict::Accept);
        assert_eq!(star.certificate.branch, Some(Branch::StableHom));

        // the simple at the middle vertex is a source as well
        let s3 = exchange(&mut cat, &m, "S3");
        assert_eq!(s3.certificate.verdict, Verdict::Accept, "p = {p}");

        let chain = enumerate_family(
            &mut cat,
            &m0,
            12,
            Strategy::SimplesFirst,
            MutateOptions::default(),
        )
        .unwrap();
        assert!(chain.find(&star.result).is_none());
        let all =
            enumerate_family(&mut cat, &m0, 12, Strategy::All, MutateOptions::default()).unwrap();
        assert!(all.find(&star.result).is_some());
    }
}

#[test]
fn example3_rejection() {
    for p in [2, 3, 5] {
        let mut cat = Catalog::new(&common::chain(5, p), Settings::default());
        let mut m = canonical_m0(&mut cat).unwrap();
        for label in [
            "S1",
            "S2",
            "S4",
            "S5",
            "P1/soc",
            "P3/soc",
            "P5/soc",
            "tau^-1 S2",
            "tau^-1 S4",
        ] {
            m = accept(&mut cat, &m, label);
        }
        let r = exchange(&mut cat, &m, "tau^-1 P3/soc");
        let c = &r.certificate;
        assert_eq!(c.verdict, Verdict::Reject, "p = {p}");
        assert_eq!(c.stable_hom_dim, Some(0));
        assert_eq!(c.fast_verdict, Some(false));
        assert_eq!(c.general_verdict, Some(false));
        assert_eq!(r.result.key(), m.key());
    }
}
