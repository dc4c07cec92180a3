//! JSON reports. Every number in a report is copied from a stored witness.

use std::collections::BTreeMap;

use ausgen_core::ar::AlmostSplit;
use ausgen_core::decompose::Decomposition;
use ausgen_core::hypotheses::HypothesesReport;
use ausgen_core::mutation::{Catalog, Family, GeneratorSet, ModId, MutationCertificate};
use ausgen_core::relative::WindowReport;
use ausgen_core::rep::Rep;
use serde::Serialize;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ModuleJson {
    pub label: String,
    pub dims: Vec<usize>,
    /// Arrow label to matrix, rows indexed by the target basis.
    pub maps: BTreeMap<String, Vec<Vec<u32>>>,
}

impl ModuleJson {
    pub fn new(label: &str, x: &Rep) -> ModuleJson {
        let maps = x
            .algebra()
            .quiver()
            .arrows()
            .iter()
            .zip(x.maps())
            .map(|(a, m)| {
                let rows = (0..m.rows())
                    .map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect())
                    .collect();
                (a.label.clone(), rows)
            })
            .collect();
        ModuleJson {
            label: label.to_string(),
            dims: x.dims().to_vec(),
            maps,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SetJson {
    pub labels: Vec<String>,
    pub modules: Vec<ModuleJson>,
    pub provenance: Vec<String>,
}

impl SetJson {
    pub fn new(cat: &Catalog, set: &GeneratorSet) -> SetJson {
        SetJson {
            labels: set.labels(cat),
            modules: set
                .ids()
                .iter()
                .map(|&i| ModuleJson::new(&cat.label(i), cat.module(i)))
                .collect(),
            provenance: set.provenance.clone(),
        }
    }
}

fn labels(cat: &Catalog, ids: &[ModId]) -> Vec<String> {
    ids.iter().map(|&i| cat.label(i)).collect()
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CertificateJson {
    pub generators: Vec<String>,
    pub position: String,
    pub replacement: Option<String>,
    pub shift: i32,
    pub verdict: String,
    pub branch: Option<String>,
    pub reason: Option<String>,
    pub middle: Vec<String>,
    pub fast_applicable: bool,
    pub top_coverage: Option<bool>,
    pub stable_hom_dim: Option<usize>,
    pub syzygy: Option<Vec<String>>,
    pub relative_syzygy: Option<Vec<String>>,
    pub fast_verdict: Option<bool>,
    pub general_verdict: Option<bool>,
    pub recheck: bool,
}

impl CertificateJson {
    pub fn new(cat: &Catalog, c: &MutationCertificate) -> CertificateJson {
        CertificateJson {
            generators: labels(cat, &c.generators),
            position: cat.label(c.position),
            replacement: c.replacement.map(|r| cat.label(r)),
            shift: c.shift,
            verdict: c.verdict.name().to_string(),
            branch: c.branch.map(|b| b.name().to_string()),
            reason: c.reason.clone(),
            middle: labels(cat, &c.middle),
            fast_applicable: c.fast_applicable,
            top_coverage: c.top_coverage,
            stable_hom_dim: c.stable_hom_dim,
            syzygy: c.syzygy.as_ref().map(|s| labels(cat, s)),
            relative_syzygy: c.relative_syzygy.as_ref().map(|s| labels(cat, s)),
            fast_verdict: c.fast_verdict,
            general_verdict: c.general_verdict,
            recheck: c.recheck(cat),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct HypothesesJson {
    pub loewy_length: usize,
    pub radical_cube_zero: bool,
    pub selfinjective: bool,
    pub nakayama_permutation: Option<Vec<usize>>,
    pub weakly_symmetric: bool,
    pub infinite_type: &'static str,
}

impl From<&HypothesesReport> for HypothesesJson {
    fn from(h: &HypothesesReport) -> Self {
        HypothesesJson {
            loewy_length: h.loewy_length,
            radical_cube_zero: h.radical_cube_zero,
            selfinjective: h.selfinjective,
            nakayama_permutation: h.nakayama_permutation.clone(),
            weakly_symmetric: h.weakly_symmetric,
            infinite_type: "assumed",
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct DecompositionJson {
    pub dims: Vec<usize>,
    /// One entry per isomorphism class: dimension vector and multiplicity.
    pub summands: Vec<(Vec<usize>, usize)>,
    pub unconfirmed: bool,
}

impl DecompositionJson {
    pub fn new(x: &Rep, d: &Decomposition) -> DecompositionJson {
        DecompositionJson {
            dims: x.dims().to_vec(),
            summands: d
                .classes
                .iter()
                .zip(&d.multiplicities)
                .map(|(c, &m)| (c.dims().to_vec(), m))
                .collect(),
            unconfirmed: d.unconfirmed,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AlmostSplitJson {
    pub left: Vec<usize>,
    pub middle: Vec<usize>,
    pub right: Vec<usize>,
    pub middle_summands: Vec<Vec<usize>>,
    pub ext_dim: usize,
    pub socle_dim: usize,
    pub non_split: bool,
    pub rad_annihilation: bool,
}

impl AlmostSplitJson {
    pub fn new(ar: &AlmostSplit, middle_summands: Vec<Vec<usize>>) -> AlmostSplitJson {
        AlmostSplitJson {
            left: ar.left().dims().to_vec(),
            middle: ar.middle().dims().to_vec(),
            right: ar.right().dims().to_vec(),
            middle_summands,
            ext_dim: ar.ext_dim,
            socle_dim: ar.socle_dim,
            non_split: !ausgen_core::ar::splits(&ar.sequence),
            rad_annihilation: ar.rad_annihilation(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct WindowEntryJson {
    pub label: String,
    pub dims: Vec<usize>,
    pub relative_syzygy: Vec<Vec<usize>>,
    pub pd_at_most_one: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct WindowJson {
    pub radius: usize,
    /// Evidence on the listed window only.
    pub verified_on_window: bool,
    pub entries: Vec<WindowEntryJson>,
}

impl From<&WindowReport> for WindowJson {
    fn from(w: &WindowReport) -> Self {
        WindowJson {
            radius: w.radius,
            verified_on_window: w.all_pass(),
            entries: w
                .entries
                .iter()
                .map(|e| WindowEntryJson {
                    label: e.label.clone(),
                    dims: e.dims.clone(),
                    relative_syzygy: e.syzygy.clone(),
                    pd_at_most_one: e.pd_at_most_one,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct EdgeJson {
    pub from: usize,
    pub to: Option<usize>,
    pub position: String,
    pub certificate: CertificateJson,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct FamilyJson {
    pub sets: Vec<SetJson>,
    pub edges: Vec<EdgeJson>,
    pub budget_exhausted: bool,
    pub graph_dot: String,
}

impl FamilyJson {
    /// `certs` is the catalog the edge certificates refer to; it differs from
    /// `cat` when the family was computed over the opposite algebra.
    pub fn new(cat: &Catalog, fam: &Family, certs: &Catalog) -> FamilyJson {
        FamilyJson {
            sets: fam.sets.iter().map(|s| SetJson::new(cat, s)).collect(),
            edges: fam
                .edges
                .iter()
                .map(|e| EdgeJson {
                    from: e.from,
                    to: e.to,
                    position: cat.label(e.position),
                    certificate: CertificateJson::new(certs, &e.certificate),
                })
                .collect(),
            budget_exhausted: fam.budget_exhausted,
            graph_dot: fam.to_dot(cat),
        }
    }
}
