//! The three worked examples run end to end: each builds its algebra,
//! performs the listed exchanges and records checks against the expected
//! generator lists.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use ausgen_core::decompose::Settings;
use ausgen_core::mutation::{
    canonical_m0, enumerate_family, mutate_via_shift, shift, Branch, Catalog, GeneratorSet, ModId,
    MutateOptions, MutationCertificate, Strategy, Verdict,
};
use ausgen_core::relative::{window_verify, WindowReport};
use ausgen_core::Algebra;
use serde::Serialize;

use crate::fixtures::fixture;
use crate::format::{load, ParseError};
use crate::report::{CertificateJson, SetJson, WindowJson};

/// Breadth-first budget at which the exchange of Example 2 first shows up.
pub const EXAMPLE2_BUDGET: usize = 12;

#[derive(Debug, thiserror::Error)]
pub enum FlowError {
    #[error("no example {0}; choose 1, 2 or 3")]
    UnknownExample(u8),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] ausgen_core::Error),
    #[error("`{label}` is not in the current generators {current:?}")]
    Missing { label: String, current: Vec<String> },
}

#[derive(Debug, Clone)]
pub struct Step {
    pub at: String,
    pub certificate: MutationCertificate,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

pub struct FlowRun {
    pub example: u8,
    pub catalog: Catalog,
    /// Named milestones in order of appearance.
    pub sets: Vec<(String, GeneratorSet)>,
    pub steps: Vec<Step>,
    pub checks: Vec<Check>,
    pub window: Option<WindowReport>,
    /// The last exchange of the flow was rejected.
    pub rejected: bool,
}

impl FlowRun {
    fn new(example: u8, alg: &Algebra, settings: Settings) -> FlowRun {
        FlowRun {
            example,
            catalog: Catalog::new(alg, settings),
            sets: Vec::new(),
            steps: Vec::new(),
            checks: Vec::new(),
            window: None,
            rejected: false,
        }
    }

    fn check(&mut self, name: impl Into<String>, pass: bool) {
        self.checks.push(Check {
            name: name.into(),
            pass,
        });
    }

    fn record(&mut self, name: &str, set: &GeneratorSet) {
        self.sets.push((name.to_string(), set.clone()));
    }

    pub fn set(&self, name: &str) -> Option<&GeneratorSet> {
        self.sets.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn id(&self, set: &GeneratorSet, label: &str) -> Result<ModId, FlowError> {
        set.ids()
            .into_iter()
            .find(|&i| self.catalog.label(i) == label)
            .ok_or_else(|| FlowError::Missing {
                label: label.to_string(),
                current: set.labels(&self.catalog),
            })
    }

    fn labels_are(&mut self, name: &str, set: &GeneratorSet, expected: &[&str]) {
        let got: BTreeSet<String> = set.labels(&self.catalog).into_iter().collect();
        let want: BTreeSet<String> = expected.iter().map(|s| s.to_string()).collect();
        self.check(format!("{name} is {}", expected.join(" + ")), got == want);
    }

    /// Exchanges the summand labelled `label` through a translation by one.
    fn exchange(&mut self, set: &GeneratorSet, label: &str) -> Result<GeneratorSet, FlowError> {
        let n = self.id(set, label)?;
        let m = mutate_via_shift(&mut self.catalog, set, n, 1, MutateOptions::default())?;
        let c = &m.certificate;
        let accepted = c.verdict == Verdict::Accept;
        if accepted {
            if let Some(top) = c.top_coverage {
                self.check(
                    format!("tops of the other summands cover the simples at {label}"),
                    top,
                );
            }
        }
        if let (Some(f), Some(g)) = (c.fast_verdict, c.general_verdict) {
            self.check(format!("both criteria agree at {label}"), f == g);
        }
        let recheck = c.recheck(&self.catalog);
        self.check(format!("certificate at {label} rechecks"), recheck);
        self.rejected = !accepted;
        self.steps.push(Step {
            at: label.to_string(),
            certificate: m.certificate,
        });
        Ok(m.result)
    }

    fn last(&self) -> &MutationCertificate {
        &self.steps.last().expect("flow has a step").certificate
    }

    fn accepted_via(&mut self, label: &str, branch: Branch) {
        let c = self.last();
        let pass = c.verdict == Verdict::Accept && c.branch == Some(branch);
        self.check(
            format!("exchange at {label} accepted via {}", branch.name()),
            pass,
        );
    }

    fn hypotheses(&mut self) {
        let h = self.catalog.hypotheses().clone();
        self.check("algebra is selfinjective", h.selfinjective);
        self.check("radical cube is zero", h.radical_cube_zero);
    }
}

pub fn algebra(example: u8, prime: u32) -> Result<Algebra, FlowError> {
    let name = match example {
        1 => "example1",
        2 => "example2",
        3 => "example3",
        n => return Err(FlowError::UnknownExample(n)),
    };
    Ok(load(fixture(name).expect("shipped fixture"), Some(prime))?)
}

pub fn run(example: u8, prime: u32, settings: Settings) -> Result<FlowRun, FlowError> {
    let alg = algebra(example, prime)?;
    let mut run = FlowRun::new(example, &alg, settings);
    run.hypotheses();
    match example {
        1 => example1(&mut run)?,
        2 => example2(&mut run)?,
        _ => example3(&mut run)?,
    }
    Ok(run)
}

fn example1(run: &mut FlowRun) -> Result<(), FlowError> {
    let m0 = canonical_m0(&mut run.catalog)?;
    run.labels_are("M0", &m0, &["P1", "P2", "P1/soc", "P2/soc", "S1", "S2"]);
    run.record("M0", &m0);
    let m1 = shift(&mut run.catalog, &m0, 1)?;
    run.labels_are(
        "M1",
        &m1,
        &[
            "P1",
            "P2",
            "tau^-1 P1/soc",
            "tau^-1 P2/soc",
            "tau^-1 S1",
            "tau^-1 S2",
        ],
    );
    run.record("M1", &m1);

    let m = run.exchange(&m0, "S1")?;
    run.accepted_via("S1", Branch::StableHom);
    run.record("M0*", &m);
    let m = run.exchange(&m, "S2")?;
    run.accepted_via("S2", Branch::StableHom);
    run.labels_are(
        "M_1",
        &m,
        &["P1", "P2", "P1/soc", "P2/soc", "tau^-1 S1", "tau^-1 S2"],
    );
    run.record("M_1", &m);
    let m = run.exchange(&m, "P1/soc")?;
    run.accepted_via("P1/soc", Branch::StableHom);
    run.record("M_1*", &m);
    let m = run.exchange(&m, "P2/soc")?;
    run.accepted_via("P2/soc", Branch::StableHom);
    run.record("M_2", &m);
    run.check("M_2 equals M1 summand by summand", m.key() == m1.key());
    Ok(())
}

fn example2(run: &mut FlowRun) -> Result<(), FlowError> {
    let m0 = canonical_m0(&mut run.catalog)?;
    run.record("M0", &m0);
    let m = run.exchange(&m0, "S1")?;
    let m = run.exchange(&m, "S2")?;
    run.record("M", &m);

    let p = run.id(&m, "P1/soc")?;
    let shifted = shift(&mut run.catalog, &m, 1)?;
    let n = run.catalog.tau_inverse(p)?;
    let middle = run.catalog.ar_middle(n)?;
    let source = middle.iter().all(|&x| x != n && shifted.contains(x));
    run.check(
        "tau^-1 P1/soc is a source of the translated generators",
        source,
    );

    let star = run.exchange(&m, "P1/soc")?;
    run.accepted_via("P1/soc", Branch::StableHom);
    run.labels_are(
        "M*",
        &star,
        &[
            "P1",
            "P2",
            "P3",
            "P4",
            "tau^-1 P1/soc",
            "P2/soc",
            "P3/soc",
            "P4/soc",
            "tau^-1 S1",
            "tau^-1 S2",
            "S3",
            "S4",
        ],
    );
    run.record("M*", &star);

    let opts = MutateOptions::default();
    let all = enumerate_family(&mut run.catalog, &m0, EXAMPLE2_BUDGET, Strategy::All, opts)?;
    run.check(
        format!("M* is reached breadth first within {EXAMPLE2_BUDGET} sets"),
        all.find(&star).is_some(),
    );
    let chain = enumerate_family(
        &mut run.catalog,
        &m0,
        EXAMPLE2_BUDGET,
        Strategy::SimplesFirst,
        opts,
    )?;
    run.check(
        format!("M* is not reached by exchanging simples first within {EXAMPLE2_BUDGET} sets"),
        chain.find(&star).is_none(),
    );
    Ok(())
}

const EXAMPLE3_CONSTRUCTION: &[&str] = &[
    "S1",
    "S2",
    "S4",
    "S5",
    "P1/soc",
    "P3/soc",
    "P5/soc",
    "tau^-1 S2",
    "tau^-1 S4",
];

fn example3(run: &mut FlowRun) -> Result<(), FlowError> {
    let m0 = canonical_m0(&mut run.catalog)?;
    run.record("M0", &m0);
    let mut m = m0;
    for label in EXAMPLE3_CONSTRUCTION {
        m = run.exchange(&m, label)?;
        run.check(
            format!("exchange at {label} accepted"),
            run.last().verdict == Verdict::Accept,
        );
    }
    run.labels_are(
        "M",
        &m,
        &[
            "P1",
            "P2",
            "P3",
            "P4",
            "P5",
            "tau^-1 P1/soc",
            "P2/soc",
            "tau^-1 P3/soc",
            "P4/soc",
            "tau^-1 P5/soc",
            "tau^-1 S1",
            "tau^-2 S2",
            "S3",
            "tau^-2 S4",
            "tau^-1 S5",
        ],
    );
    run.record("M", &m);

    let label = "tau^-1 P3/soc";
    let n = run.id(&m, label)?;
    m = run.exchange(&m, label)?;
    let c = run.last().clone();
    run.check(
        format!("exchange at {label} rejected"),
        c.verdict == Verdict::Reject,
    );
    run.check(
        "stable Hom into the exchanged summand is zero",
        c.stable_hom_dim == Some(0),
    );
    run.check(
        "syzygy of the exchanged summand is not in add",
        c.fast_verdict == Some(false),
    );
    run.check(
        "relative syzygy criterion also fails",
        c.general_verdict == Some(false),
    );

    let mut candidate = m.clone();
    let slot = candidate.position(n).expect("summand present");
    candidate.slots[slot].id = run.catalog.tau_inverse(n)?;
    run.record("M* (rejected)", &candidate);
    let report = window_verify(
        &candidate.modules(&run.catalog),
        &candidate.labels(&run.catalog),
        1,
        run.catalog.homs(),
        run.catalog.settings(),
    )?;
    run.check(
        "rejected candidate fails on the radius 1 window",
        !report.all_pass(),
    );
    run.window = Some(report);
    Ok(())
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct NamedSet {
    pub name: String,
    #[serde(flatten)]
    pub set: SetJson,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct StepJson {
    pub at: String,
    pub certificate: CertificateJson,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct FlowJson {
    pub example: u8,
    pub prime: u32,
    pub seed: u64,
    pub sets: Vec<NamedSet>,
    pub steps: Vec<StepJson>,
    pub checks: Vec<Check>,
    pub window: Option<WindowJson>,
    pub rejected: bool,
}

impl FlowRun {
    pub fn json(&self) -> FlowJson {
        let cat = &self.catalog;
        FlowJson {
            example: self.example,
            prime: cat.algebra().field().p(),
            seed: cat.settings().seed,
            sets: self
                .sets
                .iter()
                .map(|(name, s)| NamedSet {
                    name: name.clone(),
                    set: SetJson::new(cat, s),
                })
                .collect(),
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    at: s.at.clone(),
                    certificate: CertificateJson::new(cat, &s.certificate),
                })
                .collect(),
            checks: self.checks.clone(),
            window: self.window.as_ref().map(WindowJson::from),
            rejected: self.rejected,
        }
    }

    /// Basis independent summary: labels, sorted dimension vectors and
    /// verdicts. Identical for every prime.
    pub fn golden(&self) -> String {
        let cat = &self.catalog;
        let mut out = String::new();
        let _ = writeln!(out, "example {}", self.example);
        for (name, set) in &self.sets {
            let mut dims: Vec<Vec<usize>> = set
                .ids()
                .iter()
                .map(|&i| cat.module(i).dims().to_vec())
                .collect();
            dims.sort();
            let _ = writeln!(out, "set {name}");
            let _ = writeln!(out, "  labels {}", set.labels(cat).join(", "));
            let _ = writeln!(out, "  dims {dims:?}");
        }
        for s in &self.steps {
            let c = &s.certificate;
            let _ = writeln!(
                out,
                "exchange {}: {} via {} (stable hom {:?}, middle {})",
                s.at,
                c.verdict.name(),
                c.branch.map_or("none", Branch::name),
                c.stable_hom_dim,
                c.middle
                    .iter()
                    .map(|&i| cat.label(i))
                    .collect::<Vec<_>>()
                    .join(" + "),
            );
        }
        if let Some(w) = &self.window {
            for e in w.failures() {
                let _ = writeln!(out, "window failure {} {:?}", e.label, e.dims);
            }
        }
        for c in &self.checks {
            let _ = writeln!(out, "{} {}", if c.pass { "ok  " } else { "FAIL" }, c.name);
        }
        out
    }
}
