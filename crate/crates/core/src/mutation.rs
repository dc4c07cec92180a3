//! Mutation of generators: exchange an indecomposable summand `N` for
//! `τ^-1 N`, decide whether the result keeps relative global dimension one,
//! and enumerate the families reachable from the canonical generators.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::decompose::{decompose, iso_indecomposable, Settings};
use crate::error::Error;
use crate::hypotheses::{validate_hypotheses, HypothesesReport};
use crate::relative::{minimal_right_approximation, shifted_label, stable_hom};
use crate::rep::{
    is_injective, is_projective, projective, syzygy, tau, tau_inverse, HomCache, Rep,
};

pub type ModId = usize;

#[derive(Clone, Debug)]
struct Entry {
    module: Rep,
    base: String,
    shift: i32,
    root: ModId,
    projective: bool,
    injective: bool,
    /// Named after the computation that produced it rather than a
    /// translate of a canonical summand; replaced by a better name when one
    /// turns up.
    derived: bool,
}

/// Interns indecomposable modules up to isomorphism and caches the
/// operations the mutation procedure needs on them.
pub struct Catalog {
    alg: Algebra,
    settings: Settings,
    hypotheses: HypothesesReport,
    entries: Vec<Entry>,
    tau_inv: BTreeMap<ModId, ModId>,
    tau: BTreeMap<ModId, ModId>,
    syzygies: BTreeMap<ModId, Vec<ModId>>,
    middles: BTreeMap<ModId, Vec<ModId>>,
    homs: HomCache,
}

impl Catalog {
    pub fn new(alg: &Algebra, settings: Settings) -> Catalog {
        let hypotheses = validate_hypotheses(alg);
        Catalog {
            alg: alg.clone(),
            settings,
            hypotheses,
            entries: Vec::new(),
            tau_inv: BTreeMap::new(),
            tau: BTreeMap::new(),
            syzygies: BTreeMap::new(),
            middles: BTreeMap::new(),
            homs: HomCache::new(),
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }
    pub fn settings(&self) -> &Settings {
        &self.settings
    }
    pub fn hypotheses(&self) -> &HypothesesReport {
        &self.hypotheses
    }
    pub fn homs(&self) -> &HomCache {
        &self.homs
    }
    pub fn len(&self) -> usize {
        self.entries.len()
    }
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
    pub fn module(&self, id: ModId) -> &Rep {
        &self.entries[id].module
    }
    pub fn modules(&self, ids: &[ModId]) -> Vec<Rep> {
        ids.iter().map(|&i| self.module(i).clone()).collect()
    }
    pub fn label(&self, id: ModId) -> String {
        let e = &self.entries[id];
        shifted_label(&e.base, e.shift)
    }
    pub fn is_projective(&self, id: ModId) -> bool {
        self.entries[id].projective
    }
    pub fn is_injective(&self, id: ModId) -> bool {
        self.entries[id].injective
    }
    pub fn is_simple(&self, id: ModId) -> bool {
        self.entries[id].module.dim() == 1
    }

    /// Finds an interned module isomorphic to the indecomposable `x`.
    pub fn find(&self, x: &Rep) -> Option<ModId> {
        self.entries
            .iter()
            .position(|e| e.module.dims() == x.dims() && iso_indecomposable(&e.module, x).is_some())
    }

    fn intern_with(
        &mut self,
        x: &Rep,
        base: String,
        shift: i32,
        root: Option<ModId>,
        derived: bool,
    ) -> ModId {
        if let Some(id) = self.find(x) {
            let e = &mut self.entries[id];
            if e.derived && !derived {
                e.base = base;
                e.shift = shift;
                e.root = root.unwrap_or(id);
                e.derived = false;
            }
            return id;
        }
        let id = self.entries.len();
        self.entries.push(Entry {
            module: x.clone(),
            base,
            shift,
            root: root.unwrap_or(id),
            projective: is_projective(x),
            injective: is_injective(x),
            derived,
        });
        id
    }

    /// Interns an indecomposable module; an existing isomorphic entry keeps
    /// its label.
    pub fn intern(&mut self, x: &Rep, label: &str) -> ModId {
        self.intern_named(x, label, false)
    }

    fn intern_named(&mut self, x: &Rep, label: &str, derived: bool) -> ModId {
        if x.dim() == 1 {
            let label = self.simple_label(x);
            return self.intern_with(x, label, 0, None, false);
        }
        self.intern_with(x, label.to_string(), 0, None, derived)
    }

    fn simple_label(&self, x: &Rep) -> String {
        let v = x.dims().iter().position(|&d| d == 1).unwrap_or(0);
        format!("S{}", self.alg.quiver().vertex_labels()[v])
    }

    /// Decomposes `x` and interns every summand; the result lists ids with
    /// multiplicity, sorted.
    pub fn intern_all(&mut self, x: &Rep, label: &str) -> Vec<ModId> {
        self.intern_all_named(x, label, false)
    }

    fn intern_all_named(&mut self, x: &Rep, label: &str, derived: bool) -> Vec<ModId> {
        let d = decompose(x, &self.settings);
        let single = d.classes.len() == 1;
        let mut ids = Vec::new();
        for (k, (class, &m)) in d.classes.iter().zip(&d.multiplicities).enumerate() {
            let l = if single {
                label.to_string()
            } else {
                format!("{label}#{k}")
            };
            let id = self.intern_named(class, &l, derived);
            ids.extend(core::iter::repeat_n(id, m));
        }
        ids.sort_unstable();
        ids
    }

    pub fn tau_inverse(&mut self, id: ModId) -> Result<ModId, Error> {
        if let Some(&t) = self.tau_inv.get(&id) {
            return Ok(t);
        }
        let e = self.entries[id].clone();
        let y = tau_inverse(&e.module)?;
        let t = self.intern_with(&y, e.base, e.shift - 1, Some(e.root), e.derived);
        self.tau_inv.insert(id, t);
        self.tau.insert(t, id);
        Ok(t)
    }

    pub fn tau(&mut self, id: ModId) -> Result<ModId, Error> {
        if let Some(&t) = self.tau.get(&id) {
            return Ok(t);
        }
        let e = self.entries[id].clone();
        let y = tau(&e.module)?;
        let t = self.intern_with(&y, e.base, e.shift + 1, Some(e.root), e.derived);
        self.tau.insert(id, t);
        self.tau_inv.insert(t, id);
        Ok(t)
    }

    /// `τ^k`, with negative `k` meaning powers of `τ^-1`.
    pub fn tau_power(&mut self, mut id: ModId, k: i32) -> Result<ModId, Error> {
        for _ in 0..k.unsigned_abs() {
            id = if k > 0 {
                self.tau(id)?
            } else {
                self.tau_inverse(id)?
            };
        }
        Ok(id)
    }

    /// Summands of `Ω(X)`, with multiplicity.
    pub fn syzygy(&mut self, id: ModId) -> Vec<ModId> {
        if let Some(s) = self.syzygies.get(&id) {
            return s.clone();
        }
        let label = format!("omega {}", self.label(id));
        let s = self.intern_all_named(&syzygy(self.module(id)), &label, true);
        self.syzygies.insert(id, s.clone());
        s
    }

    /// Summands of the middle term of the almost split sequence starting
    /// at `X`, with multiplicity.
    pub fn ar_middle(&mut self, id: ModId) -> Result<Vec<ModId>, Error> {
        if let Some(m) = self.middles.get(&id) {
            return Ok(m.clone());
        }
        let ar = crate::ar::almost_split_starting_at(self.module(id), &self.settings)?;
        let label = format!("E({})", self.label(id));
        let m = self.intern_all_named(ar.middle(), &label, true);
        let right = ar.right().clone();
        let e = self.entries[id].clone();
        let t = self.intern_with(&right, e.base, e.shift - 1, Some(e.root), e.derived);
        self.tau_inv.insert(id, t);
        self.tau.insert(t, id);
        self.middles.insert(id, m.clone());
        Ok(m)
    }

    /// Interns the dual of an entry of `other`, a catalog over the opposite
    /// algebra. `τ`-shifts of the same root become shifts in the other
    /// direction.
    pub fn intern_dual(&mut self, other: &Catalog, id: ModId) -> ModId {
        let e = &other.entries[id];
        if let Some(found) = self.find(&e.module.dual()) {
            return found;
        }
        let root = &other.entries[e.root];
        let root_id = self.intern_named(
            &root.module.dual(),
            &format!("D({})", root.base),
            root.derived,
        );
        let r = self.entries[root_id].clone();
        let shift = r.shift - (e.shift - root.shift);
        self.intern_with(
            &e.module.dual(),
            r.base,
            shift,
            Some(r.root),
            r.derived || e.derived,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub id: ModId,
    /// Number of `τ^-1` steps applied to this slot since the start.
    pub level: i32,
    /// The slot started out as a simple module.
    pub simple_origin: bool,
}

/// A generator-cogenerator as an ordered list of pairwise non-isomorphic
/// indecomposables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub slots: Vec<Slot>,
    pub provenance: Vec<String>,
}

impl GeneratorSet {
    pub fn ids(&self) -> Vec<ModId> {
        self.slots.iter().map(|s| s.id).collect()
    }

    /// Sorted ids: two sets with the same key are isomorphic entrywise.
    pub fn key(&self) -> Vec<ModId> {
        let mut k = self.ids();
        k.sort_unstable();
        k
    }

    pub fn contains(&self, id: ModId) -> bool {
        self.slots.iter().any(|s| s.id == id)
    }

    pub fn position(&self, id: ModId) -> Option<usize> {
        self.slots.iter().position(|s| s.id == id)
    }

    pub fn modules(&self, cat: &Catalog) -> Vec<Rep> {
        cat.modules(&self.ids())
    }

    pub fn non_projective(&self, cat: &Catalog) -> Vec<ModId> {
        self.ids()
            .into_iter()
            .filter(|&i| !cat.is_projective(i))
            .collect()
    }

    pub fn labels(&self, cat: &Catalog) -> Vec<String> {
        self.slots.iter().map(|s| cat.label(s.id)).collect()
    }
}

fn build_set(
    cat: &mut Catalog,
    parts: &[(Rep, String)],
    name: &str,
) -> Result<GeneratorSet, Error> {
    if !cat.hypotheses().holds() {
        return Err(Error::HypothesesNotValidated);
    }
    let mut slots: Vec<Slot> = Vec::new();
    for (x, label) in parts {
        if x.is_zero() {
            continue;
        }
        for id in cat.intern_all(x, label) {
            if slots.iter().all(|s| s.id != id) {
                slots.push(Slot {
                    id,
                    level: 0,
                    simple_origin: cat.is_simple(id),
                });
            }
        }
    }
    for (i, s) in slots.iter().enumerate() {
        if cat.is_projective(s.id) != cat.is_injective(s.id) {
            return Err(Error::NotSelfinjective);
        }
        debug_assert!(slots[..i].iter().all(|t| t.id != s.id));
    }
    Ok(GeneratorSet {
        slots,
        provenance: alloc::vec![name.to_string()],
    })
}

fn vertex_label(alg: &Algebra, i: usize) -> &str {
    &alg.quiver().vertex_labels()[i]
}

/// `Λ ⊕ Λ/Soc Λ ⊕ Λ/Soc² Λ`.
pub fn canonical_m0(cat: &mut Catalog) -> Result<GeneratorSet, Error> {
    let alg = cat.algebra().clone();
    let mut parts = Vec::new();
    for k in [0, 1, 2] {
        for i in 0..alg.vertex_count() {
            let p = projective(&alg, i);
            let v = vertex_label(&alg, i);
            let (x, label) = match k {
                0 => (p, format!("P{v}")),
                1 => (
                    p.quotient(&p.socle_power_subspace(1)).0,
                    format!("P{v}/soc"),
                ),
                _ => (
                    p.quotient(&p.socle_power_subspace(2)).0,
                    format!("P{v}/soc2"),
                ),
            };
            parts.push((x, label));
        }
    }
    build_set(cat, &parts, "M0")
}

/// `Λ ⊕ rad Λ ⊕ rad² Λ`.
pub fn canonical_l0(cat: &mut Catalog) -> Result<GeneratorSet, Error> {
    let alg = cat.algebra().clone();
    let mut parts = Vec::new();
    for k in [0, 1, 2] {
        for i in 0..alg.vertex_count() {
            let p = projective(&alg, i);
            let v = vertex_label(&alg, i);
            let (x, label) = match k {
                0 => (p, format!("P{v}")),
                1 => (p.radical().0, format!("rad P{v}")),
                _ => (p.radical_power(2).0, format!("rad2 P{v}")),
            };
            parts.push((x, label));
        }
    }
    build_set(cat, &parts, "L0")
}

/// Applies `τ^-i` to every non-projective entry.
pub fn shift(cat: &mut Catalog, gens: &GeneratorSet, i: i32) -> Result<GeneratorSet, Error> {
    let mut out = gens.clone();
    if i == 0 {
        return Ok(out);
    }
    for s in &mut out.slots {
        if !cat.is_projective(s.id) {
            s.id = cat.tau_power(s.id, -i)?;
            s.level += i;
        }
    }
    out.provenance.push(format!("shift {i}"));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Accept,
    Reject,
    NotApplicable,
}

/// Which criterion decided the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Branch {
    /// The relative syzygy `Ω_{F_{M/N}}(N)` lies in `add(M ⊕ M*)`.
    General,
    /// The stable Hom space from `M_P/N` to `N` is nonzero.
    StableHom,
    /// The stable Hom space vanishes and `Ω(N)` lies in `add M_P`.
    Syzygy,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
            Verdict::NotApplicable => "not-applicable",
        }
    }
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::General => "relative-syzygy",
            Branch::StableHom => "stable-hom",
            Branch::Syzygy => "syzygy",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MutateOptions {
    /// Evaluate the relative syzygy criterion even when the fast criteria
    /// apply, and fail on disagreement.
    pub cross_check: bool,
}

impl Default for MutateOptions {
    fn default() -> Self {
        MutateOptions { cross_check: true }
    }
}

/// Everything needed to re-derive a mutation verdict without recomputing
/// any module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationCertificate {
    /// The generator list the exchange was evaluated on (after shifting).
    pub generators: Vec<ModId>,
    pub position: ModId,
    pub replacement: Option<ModId>,
    /// The exchange was evaluated on the `τ^-shift` translate.
    pub shift: i32,
    pub verdict: Verdict,
    pub branch: Option<Branch>,
    pub reason: Option<String>,
    /// Summands of the middle term of the almost split sequence at `N`.
    pub middle: Vec<ModId>,
    /// The fast criteria were applicable: selfinjective with radical cube
    /// zero and no simple non-projective generator.
    pub fast_applicable: bool,
    /// The tops of the non-projective generators other than `N` contain
    /// every simple module.
    pub top_coverage: Option<bool>,
    pub stable_hom_dim: Option<usize>,
    /// Summands of `Ω(N)`.
    pub syzygy: Option<Vec<ModId>>,
    /// Summands of the relative syzygy of `N` over the other generators.
    pub relative_syzygy: Option<Vec<ModId>>,
    pub fast_verdict: Option<bool>,
    pub general_verdict: Option<bool>,
}

impl MutationCertificate {
    fn not_applicable(gens: &GeneratorSet, n: ModId, reason: String) -> MutationCertificate {
        MutationCertificate {
            generators: gens.ids(),
            position: n,
            replacement: None,
            shift: 0,
            verdict: Verdict::NotApplicable,
            branch: None,
            reason: Some(reason),
            middle: Vec::new(),
            fast_applicable: false,
            top_coverage: None,
            stable_hom_dim: None,
            syzygy: None,
            relative_syzygy: None,
            fast_verdict: None,
            general_verdict: None,
        }
    }

    /// Re-derives the verdict from the stored witnesses and the catalog's
    /// projectivity flags.
    pub fn recheck(&self, cat: &Catalog) -> bool {
        if self.verdict == Verdict::NotApplicable {
            return self.reason.is_some();
        }
        let Some(replacement) = self.replacement else {
            return false;
        };
        let others: BTreeSet<ModId> = self
            .generators
            .iter()
            .copied()
            .filter(|&g| g != self.position)
            .collect();
        if !self.middle.iter().all(|m| others.contains(m)) {
            return false;
        }
        let non_projective: BTreeSet<ModId> = self
            .generators
            .iter()
            .copied()
            .filter(|&g| !cat.is_projective(g))
            .collect();
        let a = self.stable_hom_dim.map(|d| d > 0);
        let b = self
            .syzygy
            .as_ref()
            .map(|s| s.iter().all(|x| non_projective.contains(x)));
        let fast = match (a, b) {
            (Some(a), Some(b)) => Some(a || b),
            _ => None,
        };
        if fast != self.fast_verdict || fast.is_some() != self.fast_applicable {
            return false;
        }
        let general = self.relative_syzygy.as_ref().map(|r| {
            r.iter()
                .all(|x| *x == replacement || self.generators.contains(x))
        });
        if general != self.general_verdict {
            return false;
        }
        let decided = match (fast, general) {
            (Some(f), Some(g)) if f != g => return false,
            (Some(f), _) => f,
            (None, Some(g)) => g,
            (None, None) => return false,
        };
        let expected = if decided {
            Verdict::Accept
        } else {
            Verdict::Reject
        };
        let branch_ok = match self.branch {
            Some(Branch::StableHom) => a == Some(decided),
            Some(Branch::Syzygy) => a == Some(false) && b == Some(decided),
            Some(Branch::General) => general == Some(decided),
            None => false,
        };
        self.verdict == expected && branch_ok
    }
}

#[derive(Clone, Debug)]
pub struct Mutation {
    pub result: GeneratorSet,
    pub certificate: MutationCertificate,
}

/// Tops of the given modules together cover every simple.
pub fn tops_cover_simples(cat: &Catalog, ids: &[ModId]) -> bool {
    let n = cat.algebra().vertex_count();
    let mut seen = alloc::vec![false; n];
    for &i in ids {
        for (v, d) in cat.module(i).top_dims().into_iter().enumerate() {
            if d > 0 {
                seen[v] = true;
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Exchanges `N` for `τ^-1 N` and decides whether the result still has
/// relative global dimension one.
pub fn mutate(
    cat: &mut Catalog,
    gens: &GeneratorSet,
    n: ModId,
    opts: MutateOptions,
) -> Result<Mutation, Error> {
    let Some(slot) = gens.position(n) else {
        return Err(Error::NotInGenerators);
    };
    let unchanged = |cert| Mutation {
        result: gens.clone(),
        certificate: cert,
    };
    if cat.is_projective(n) || cat.is_injective(n) {
        let reason = format!("{} is projective or injective", cat.label(n));
        return Ok(unchanged(MutationCertificate::not_applicable(
            gens, n, reason,
        )));
    }
    let middle = cat.ar_middle(n)?;
    let others: Vec<ModId> = gens.ids().into_iter().filter(|&g| g != n).collect();
    if !middle.iter().all(|m| others.contains(m)) {
        let reason = format!(
            "middle term of the almost split sequence at {} is not in the other generators",
            cat.label(n)
        );
        let mut cert = MutationCertificate::not_applicable(gens, n, reason);
        cert.middle = middle;
        return Ok(unchanged(cert));
    }
    let replacement = cat.tau_inverse(n)?;
    let non_projective = gens.non_projective(cat);
    let fast_applicable =
        cat.hypotheses().holds() && non_projective.iter().all(|&g| !cat.is_simple(g));

    let mut cert = MutationCertificate {
        generators: gens.ids(),
        position: n,
        replacement: Some(replacement),
        shift: 0,
        verdict: Verdict::Reject,
        branch: None,
        reason: None,
        middle,
        fast_applicable,
        top_coverage: None,
        stable_hom_dim: None,
        syzygy: None,
        relative_syzygy: None,
        fast_verdict: None,
        general_verdict: None,
    };

    if fast_applicable {
        let rest: Vec<ModId> = non_projective.iter().copied().filter(|&g| g != n).collect();
        cert.top_coverage = Some(tops_cover_simples(cat, &rest));
        let target = cat.module(n).clone();
        let dim = rest
            .iter()
            .map(|&g| stable_hom(cat.module(g), &target).dim)
            .sum::<usize>();
        let omega = cat.syzygy(n);
        let b = omega.iter().all(|x| non_projective.contains(x));
        cert.stable_hom_dim = Some(dim);
        cert.syzygy = Some(omega);
        cert.fast_verdict = Some(dim > 0 || b);
        cert.branch = Some(if dim > 0 {
            Branch::StableHom
        } else {
            Branch::Syzygy
        });
    }
    if opts.cross_check || !fast_applicable {
        let reps = cat.modules(&others);
        let approx = minimal_right_approximation(&cat.module(n).clone(), &reps, cat.homs())?;
        let label = format!("relsyz {}", cat.label(n));
        let kernel = if approx.kernel.is_zero() {
            Vec::new()
        } else {
            cat.intern_all_named(&approx.kernel, &label, true)
        };
        let general = kernel
            .iter()
            .all(|x| *x == replacement || gens.contains(*x));
        cert.relative_syzygy = Some(kernel);
        cert.general_verdict = Some(general);
        if !fast_applicable {
            cert.branch = Some(Branch::General);
        }
    }
    let accepted = match (cert.fast_verdict, cert.general_verdict) {
        (Some(f), Some(g)) if f != g => return Err(Error::BranchDisagreement),
        (Some(f), _) => f,
        (None, Some(g)) => g,
        (None, None) => return Err(Error::Internal("no criterion evaluated")),
    };
    if !accepted {
        return Ok(unchanged(cert));
    }
    cert.verdict = Verdict::Accept;
    let mut result = gens.clone();
    result.slots[slot].id = replacement;
    result.slots[slot].level += 1;
    result
        .provenance
        .push(format!("mutate at {}", cat.label(n)));
    Ok(Mutation {
        result,
        certificate: cert,
    })
}

/// Translates by `τ^-i`, exchanges `τ^-i N`, and translates back.
pub fn mutate_via_shift(
    cat: &mut Catalog,
    gens: &GeneratorSet,
    n: ModId,
    i: i32,
    opts: MutateOptions,
) -> Result<Mutation, Error> {
    if i == 0 {
        return mutate(cat, gens, n, opts);
    }
    if !gens.contains(n) {
        return Err(Error::NotInGenerators);
    }
    if cat.is_projective(n) || cat.is_injective(n) {
        let reason = format!("{} is projective or injective", cat.label(n));
        let mut cert = MutationCertificate::not_applicable(gens, n, reason);
        cert.shift = i;
        return Ok(Mutation {
            result: gens.clone(),
            certificate: cert,
        });
    }
    let shifted = shift(cat, gens, i)?;
    let target = cat.tau_power(n, -i)?;
    let m = mutate(cat, &shifted, target, opts)?;
    let mut cert = m.certificate;
    cert.shift = i;
    let result = if cert.verdict == Verdict::Accept {
        let mut back = shift(cat, &m.result, -i)?;
        back.provenance = gens.provenance.clone();
        back.provenance
            .push(format!("mutate at {} via shift {i}", cat.label(n)));
        back
    } else {
        gens.clone()
    };
    Ok(Mutation {
        result,
        certificate: cert,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Breadth first over every exchangeable position.
    All,
    /// A single chain that always exchanges the least translated summand,
    /// simples before the others.
    SimplesFirst,
}

#[derive(Clone, Debug)]
pub struct FamilyEdge {
    pub from: usize,
    /// Index of the resulting set; `None` for rejected exchanges.
    pub to: Option<usize>,
    pub position: ModId,
    pub certificate: MutationCertificate,
}

#[derive(Clone, Debug)]
pub struct Family {
    pub sets: Vec<GeneratorSet>,
    pub edges: Vec<FamilyEdge>,
    /// Exploration stopped because the budget was reached.
    pub budget_exhausted: bool,
}

impl Family {
    pub fn find(&self, set: &GeneratorSet) -> Option<usize> {
        let k = set.key();
        self.sets.iter().position(|s| s.key() == k)
    }

    /// The mutation graph in Graphviz DOT format.
    pub fn to_dot(&self, cat: &Catalog) -> String {
        let mut out = String::from("digraph family {\n");
        for (i, s) in self.sets.iter().enumerate() {
            let labels = s.labels(cat).join("\\n");
            out.push_str(&format!("  g{i} [shape=box, label=\"G{i}\\n{labels}\"];\n"));
        }
        for (k, e) in self.edges.iter().enumerate() {
            let branch = e.certificate.branch.map_or("none", Branch::name);
            let label = format!("{} ({branch})", cat.label(e.position));
            match e.to {
                Some(t) => out.push_str(&format!("  g{} -> g{t} [label=\"{label}\"];\n", e.from)),
                None => {
                    out.push_str(&format!("  r{k} [shape=point];\n"));
                    out.push_str(&format!(
                        "  g{} -> r{k} [style=dashed, label=\"reject {label}\"];\n",
                        e.from
                    ));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Explores generators reachable from `start` by exchanges evaluated one
/// `τ^-1` step away, up to `budget` distinct sets.
pub fn enumerate_family(
    cat: &mut Catalog,
    start: &GeneratorSet,
    budget: usize,
    strategy: Strategy,
    opts: MutateOptions,
) -> Result<Family, Error> {
    let mut fam = Family {
        sets: Vec::new(),
        edges: Vec::new(),
        budget_exhausted: false,
    };
    if budget == 0 {
        fam.budget_exhausted = true;
        return Ok(fam);
    }
    fam.sets.push(start.clone());
    match strategy {
        Strategy::All => {
            let mut queue = VecDeque::from([0usize]);
            'outer: while let Some(k) = queue.pop_front() {
                let set = fam.sets[k].clone();
                for n in set.non_projective(cat) {
                    let m = mutate_via_shift(cat, &set, n, 1, opts)?;
                    let to = match m.certificate.verdict {
                        Verdict::NotApplicable => continue,
                        Verdict::Reject => None,
                        Verdict::Accept => match fam.find(&m.result) {
                            Some(t) => Some(t),
                            None if fam.sets.len() < budget => {
                                fam.sets.push(m.result);
                                queue.push_back(fam.sets.len() - 1);
                                Some(fam.sets.len() - 1)
                            }
                            None => {
                                fam.budget_exhausted = true;
                                break 'outer;
                            }
                        },
                    };
                    fam.edges.push(FamilyEdge {
                        from: k,
                        to,
                        position: n,
                        certificate: m.certificate,
                    });
                }
            }
        }
        Strategy::SimplesFirst => {
            let mut current = 0;
            loop {
                let set = fam.sets[current].clone();
                let mut order: Vec<usize> = (0..set.slots.len())
                    .filter(|&i| !cat.is_projective(set.slots[i].id))
                    .collect();
                order.sort_by_key(|&i| (set.slots[i].level, !set.slots[i].simple_origin, i));
                let mut next = None;
                for i in order {
                    let n = set.slots[i].id;
                    let m = mutate_via_shift(cat, &set, n, 1, opts)?;
                    match m.certificate.verdict {
                        Verdict::NotApplicable => continue,
                        Verdict::Reject => fam.edges.push(FamilyEdge {
                            from: current,
                            to: None,
                            position: n,
                            certificate: m.certificate,
                        }),
                        Verdict::Accept => {
                            next = Some((n, m));
                            break;
                        }
                    }
                }
                let Some((n, m)) = next else { break };
                let to = match fam.find(&m.result) {
                    Some(t) => t,
                    None if fam.sets.len() < budget => {
                        fam.sets.push(m.result);
                        fam.sets.len() - 1
                    }
                    None => {
                        fam.budget_exhausted = true;
                        break;
                    }
                };
                fam.edges.push(FamilyEdge {
                    from: current,
                    to: Some(to),
                    position: n,
                    certificate: m.certificate,
                });
                if to != fam.sets.len() - 1 || to == current {
                    break;
                }
                current = to;
            }
        }
    }
    Ok(fam)
}

/// Transports a generator set over the opposite algebra to its dual.
pub fn dual_set(from: &Catalog, set: &GeneratorSet, to: &mut Catalog) -> GeneratorSet {
    GeneratorSet {
        slots: set
            .slots
            .iter()
            .map(|s| Slot {
                id: to.intern_dual(from, s.id),
                level: -s.level,
                simple_origin: s.simple_origin,
            })
            .collect(),
        provenance: set
            .provenance
            .iter()
            .map(|p| format!("dual of {p}"))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Quiver, Relation};
    use crate::field::PrimeField;
    use alloc::vec;

    fn example1(p: u32) -> Algebra {
        let mut q = Quiver::new(["1", "2"]).unwrap();
        let c = q.add_arrow("c", 0, 0).unwrap();
        let a = q.add_arrow("a", 0, 1).unwrap();
        let b = q.add_arrow("b", 1, 0).unwrap();
        let d = q.add_arrow("d", 1, 1).unwrap();
        let rels = vec![
            Relation::new(vec![(1, vec![c, c]), (-1, vec![a, b])]),
            Relation::new(vec![(1, vec![c, a])]),
            Relation::new(vec![(1, vec![a, d])]),
            Relation::new(vec![(1, vec![b, c])]),
            Relation::new(vec![(1, vec![d, b])]),
            Relation::new(vec![(1, vec![d, d]), (-1, vec![b, a])]),
        ];
        Algebra::new(PrimeField::new(p).unwrap(), q, rels, 3).unwrap()
    }

    #[test]
    fn canonical_generators_of_example1() {
        let mut cat = Catalog::new(&example1(2), Settings::default());
        let m0 = canonical_m0(&mut cat).unwrap();
        assert_eq!(
            m0.labels(&cat),
            vec!["P1", "P2", "P1/soc", "P2/soc", "S1", "S2"]
        );
        let l0 = canonical_l0(&mut cat).unwrap();
        assert_eq!(
            l0.labels(&cat),
            vec!["P1", "P2", "rad P1", "rad P2", "S1", "S2"]
        );
    }

    #[test]
    fn shifting_back_and_forth_is_the_identity() {
        let mut cat = Catalog::new(&example1(3), Settings::default());
        let m0 = canonical_m0(&mut cat).unwrap();
        let m1 = shift(&mut cat, &m0, 1).unwrap();
        assert_ne!(m1.key(), m0.key());
        let back = shift(&mut cat, &m1, -1).unwrap();
        assert_eq!(back.ids(), m0.ids());
        assert_eq!(shift(&mut cat, &m0, 0).unwrap(), m0);
    }

    #[test]
    fn example1_first_exchange() {
        let mut cat = Catalog::new(&example1(2), Settings::default());
        let m0 = canonical_m0(&mut cat).unwrap();
        let s1 = m0.slots[4].id;
        let m = mutate_via_shift(&mut cat, &m0, s1, 1, MutateOptions::default()).unwrap();
        let c = &m.certificate;
        assert_eq!(c.verdict, Verdict::Accept);
        assert_eq!(c.branch, Some(Branch::StableHom));
        assert_eq!(c.general_verdict, Some(true));
        assert_eq!(c.top_coverage, Some(true));
        assert!(c.recheck(&cat));
        assert_eq!(cat.label(m.result.slots[4].id), "tau^-1 S1");

        let direct = mutate(&mut cat, &m0, m0.slots[0].id, MutateOptions::default()).unwrap();
        assert_eq!(direct.certificate.verdict, Verdict::NotApplicable);
        let p1soc = m0.slots[2].id;
        let blocked = mutate(&mut cat, &m0, p1soc, MutateOptions::default()).unwrap();
        assert_eq!(blocked.certificate.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn tampered_certificate_fails_recheck() {
        let mut cat = Catalog::new(&example1(2), Settings::default());
        let m0 = canonical_m0(&mut cat).unwrap();
        let m =
            mutate_via_shift(&mut cat, &m0, m0.slots[5].id, 1, MutateOptions::default()).unwrap();
        let mut c = m.certificate.clone();
        assert!(c.recheck(&cat));
        c.stable_hom_dim = Some(0);
        assert!(!c.recheck(&cat));
        let mut c = m.certificate;
        c.verdict = Verdict::Reject;
        assert!(!c.recheck(&cat));
    }
}
