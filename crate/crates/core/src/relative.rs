//! Relative homological algebra for the subfunctor of `Ext^1` given by a
//! generator `M`: right `add M`-approximations, relative syzygies, relative
//! projective dimension at most one, and stable Hom modulo projectives.
//!
//! Throughout, the generator is a list of pairwise non-isomorphic
//! indecomposables containing every indecomposable projective.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::decompose::{decompose, in_add, iso_indecomposable, Settings};
use crate::error::Error;
use crate::linalg::Mat;
use crate::rep::{
    cosyzygy, hom_basis, is_injective, is_projective, projective_cover, syzygy, tau, tau_inverse,
    HomCache, Rep, RepMorphism,
};

/// A right `add M`-approximation `⊕ G_k -> C` given by its components.
#[derive(Clone, Debug)]
pub struct Approximation {
    pub target: Rep,
    /// `(generator index, component map G_k -> C)`, one entry per summand
    /// of the cover.
    pub components: Vec<(usize, RepMorphism)>,
    pub module: Rep,
    pub map: RepMorphism,
    pub kernel: Rep,
    pub kernel_inclusion: RepMorphism,
    /// Components of the original approximation whose single removal broke
    /// the approximation property; recorded by [`minimize`].
    pub failed_drops: usize,
}

impl Approximation {
    /// Multiplicity of each generator in the cover.
    pub fn cover_multiplicities(&self, gens: usize) -> Vec<usize> {
        let mut m = vec![0; gens];
        for (k, _) in &self.components {
            m[*k] += 1;
        }
        m
    }
}

fn check_projectives(gens: &[Rep]) -> Result<(), Error> {
    let Some(first) = gens.first() else {
        return Err(Error::MissingProjective(0));
    };
    let n = first.algebra().vertex_count();
    for i in 0..n {
        let found = gens.iter().any(|g| {
            is_projective(g) && {
                let t = g.top_dims();
                t[i] == 1 && t.iter().sum::<usize>() == 1
            }
        });
        if !found {
            return Err(Error::MissingProjective(i));
        }
    }
    Ok(())
}

fn assemble(c: &Rep, components: Vec<(usize, RepMorphism)>, failed_drops: usize) -> Approximation {
    let sources: Vec<Rep> = components.iter().map(|(_, h)| h.source().clone()).collect();
    let module = if sources.is_empty() {
        Rep::zero(c.algebra())
    } else {
        Rep::direct_sum(&sources)
    };
    let parts: Vec<RepMorphism> = components.iter().map(|(_, h)| h.clone()).collect();
    let map = if parts.is_empty() {
        RepMorphism::zero(&module, c)
    } else {
        RepMorphism::from_sum(&module, c, &parts)
    };
    let (kernel, kernel_inclusion) = map.kernel();
    Approximation {
        target: c.clone(),
        components,
        module,
        map,
        kernel,
        kernel_inclusion,
        failed_drops,
    }
}

/// The canonical approximation `⊕_k G_k^{dim Hom(G_k, C)} -> C`.
pub fn right_approximation(c: &Rep, gens: &[Rep]) -> Result<Approximation, Error> {
    check_projectives(gens)?;
    let mut components = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        for h in hom_basis(g, c) {
            components.push((k, h));
        }
    }
    let approx = assemble(c, components, 0);
    if !approx.map.is_surjective() {
        return Err(Error::Internal(
            "approximation with all projectives is not onto",
        ));
    }
    Ok(approx)
}

/// Whether the selected components still satisfy the approximation
/// property: every map `G -> C` from a generator factors through them.
fn approximates(
    c: &Rep,
    gens: &[Rep],
    cache: &HomCache,
    components: &[(usize, RepMorphism)],
    active: &[bool],
    need: &[usize],
) -> bool {
    for (g, gen) in gens.iter().enumerate() {
        if need[g] == 0 {
            continue;
        }
        let len: usize = (0..c.dims().len())
            .map(|v| gen.dim_at(v) * c.dim_at(v))
            .sum();
        let mut cols = Vec::new();
        for ((k, h), &on) in components.iter().zip(active) {
            if !on {
                continue;
            }
            for psi in cache.hom(gen, &gens[*k]).iter() {
                cols.push(psi.then(h).vectorize());
            }
        }
        if cols.len() < need[g] || Mat::from_columns(c.field(), len, &cols).rank() < need[g] {
            return false;
        }
    }
    true
}

/// Removes components one at a time, in the given order, as long as the
/// approximation property survives.
pub fn minimize_in_order(
    approx: &Approximation,
    gens: &[Rep],
    cache: &HomCache,
    order: &[usize],
) -> Approximation {
    let c = &approx.target;
    let need: Vec<usize> = gens.iter().map(|g| hom_basis(g, c).len()).collect();
    let mut active = vec![true; approx.components.len()];
    let mut failed = 0;
    for &i in order {
        active[i] = false;
        if !approximates(c, gens, cache, &approx.components, &active, &need) {
            active[i] = true;
            failed += 1;
        }
    }
    let kept = approx
        .components
        .iter()
        .zip(&active)
        .filter(|(_, &on)| on)
        .map(|(comp, _)| comp.clone())
        .collect();
    assemble(c, kept, failed)
}

/// Greedy minimization; the result is a minimal right approximation.
pub fn minimize(approx: &Approximation, gens: &[Rep], cache: &HomCache) -> Approximation {
    let order: Vec<usize> = (0..approx.components.len()).rev().collect();
    minimize_in_order(approx, gens, cache, &order)
}

pub fn minimal_right_approximation(
    c: &Rep,
    gens: &[Rep],
    cache: &HomCache,
) -> Result<Approximation, Error> {
    Ok(minimize(&right_approximation(c, gens)?, gens, cache))
}

/// Right minimality certificate: no indecomposable summand of the kernel is
/// split off by the inclusion into the cover.
pub fn is_right_minimal(
    approx: &Approximation,
    gens: &[Rep],
    cache: &HomCache,
    settings: &Settings,
) -> bool {
    if approx.kernel.is_zero() {
        return true;
    }
    let sources: Vec<Rep> = approx
        .components
        .iter()
        .map(|(_, h)| h.source().clone())
        .collect();
    let (_, _, projections) = Rep::direct_sum_with_maps(&sources);
    let d = decompose(&approx.kernel, settings);
    for s in &d.summands {
        let into_cover = s.inclusion.then(&approx.kernel_inclusion);
        for ((k, _), proj) in approx.components.iter().zip(&projections) {
            let to_gen = into_cover.then(proj);
            for r in cache.hom(&gens[*k], &s.module).iter() {
                if !to_gen.then(r).is_nilpotent() {
                    return false;
                }
            }
        }
    }
    true
}

/// `Ω_{F_M}(C)`: the kernel of a minimal right `add M`-approximation.
pub fn rel_syzygy(c: &Rep, gens: &[Rep], cache: &HomCache) -> Result<Rep, Error> {
    Ok(minimal_right_approximation(c, gens, cache)?.kernel)
}

/// Relative projective dimension of `C` at most one.
pub fn rel_pd_at_most_one(
    c: &Rep,
    gens: &[Rep],
    cache: &HomCache,
    settings: &Settings,
) -> Result<bool, Error> {
    let k = rel_syzygy(c, gens, cache)?;
    Ok(in_add(&k, gens, settings).is_some())
}

/// The dual construction: `Ω^{F^M}(C) = D Ω_{F_{DM}}(D C)`, the cokernel of
/// a minimal left `add M`-approximation.
pub fn rel_cosyzygy(c: &Rep, gens: &[Rep], cache: &HomCache) -> Result<Rep, Error> {
    let dual: Vec<Rep> = gens.iter().map(Rep::dual).collect();
    Ok(rel_syzygy(&c.dual(), &dual, cache)?.dual())
}

/// `Hom(X, N)` modulo maps factoring through a projective.
#[derive(Clone, Debug)]
pub struct StableHom {
    pub hom_dim: usize,
    pub dim: usize,
    /// Morphisms whose classes form a basis of the stable Hom space.
    pub representatives: Vec<RepMorphism>,
}

/// Every map factoring through a projective factors through the projective
/// cover `P(N) -> N`, so the stable Hom space is `Hom(X, N)` modulo the
/// image of `Hom(X, P(N))`.
pub fn stable_hom(x: &Rep, n: &Rep) -> StableHom {
    let cover = projective_cover(n);
    let homs = hom_basis(x, n);
    let len: usize = (0..x.dims().len()).map(|v| x.dim_at(v) * n.dim_at(v)).sum();
    let through: Vec<Vec<u32>> = hom_basis(x, cover.cover())
        .iter()
        .map(|g| g.then(cover.map()).vectorize())
        .collect();
    let boundary = Mat::from_columns(x.field(), len, &through);
    let b_rank = boundary.rank();
    let all = boundary.hstack(&Mat::from_columns(
        x.field(),
        len,
        &homs.iter().map(RepMorphism::vectorize).collect::<Vec<_>>(),
    ));
    let piv = all.rref().pivots;
    let representatives: Vec<RepMorphism> = piv
        .iter()
        .filter(|&&c| c >= through.len())
        .map(|&c| homs[c - through.len()].clone())
        .collect();
    let dim = all.rank() - b_rank;
    debug_assert_eq!(dim, representatives.len());
    StableHom {
        hom_dim: homs.len(),
        dim,
        representatives,
    }
}

/// `τ^shift` applied to a named module, e.g. `tau^-2 S1`.
pub fn shifted_label(base: &str, shift: i32) -> String {
    match shift {
        0 => base.to_string(),
        1 => format!("tau {base}"),
        s => format!("tau^{s} {base}"),
    }
}

/// Applies `τ^k` to a label produced by [`shifted_label`].
pub fn tau_label(label: &str, k: i32) -> String {
    let (shift, base) = if let Some(rest) = label.strip_prefix("tau^") {
        match rest.split_once(' ') {
            Some((n, base)) => match n.parse::<i32>() {
                Ok(n) => (n, base),
                Err(_) => (0, label),
            },
            None => (0, label),
        }
    } else if let Some(base) = label.strip_prefix("tau ") {
        (1, base)
    } else {
        (0, label)
    };
    shifted_label(base, shift + k)
}

/// A module in a verification window, with how it was reached.
#[derive(Clone, Debug)]
pub struct WindowModule {
    pub label: String,
    pub module: Rep,
}

fn add_to_window(window: &mut Vec<WindowModule>, label: String, x: &Rep, settings: &Settings) {
    if x.is_zero() {
        return;
    }
    let d = decompose(x, settings);
    let single = d.classes.len() == 1 && d.multiplicities[0] == 1;
    for (i, class) in d.classes.iter().enumerate() {
        if window
            .iter()
            .any(|w| iso_indecomposable(&w.module, class).is_some())
        {
            continue;
        }
        let label = if single {
            label.clone()
        } else {
            format!("{label}#{i}")
        };
        window.push(WindowModule {
            label,
            module: class.clone(),
        });
    }
}

/// The test window: summands of the generators, closed under `τ^{±1}` up to
/// `radius` steps and then under `Ω^{±1}` once, up to isomorphism.
pub fn window(
    gens: &[Rep],
    labels: &[String],
    radius: usize,
    settings: &Settings,
) -> Vec<WindowModule> {
    let mut w: Vec<WindowModule> = Vec::new();
    for (g, l) in gens.iter().zip(labels) {
        add_to_window(&mut w, l.clone(), g, settings);
    }
    let mut layer: Vec<WindowModule> = w.clone();
    for _ in 0..radius {
        let mut next = Vec::new();
        for m in &layer {
            if !is_projective(&m.module) {
                if let Ok(t) = tau(&m.module) {
                    next.push(WindowModule {
                        label: tau_label(&m.label, 1),
                        module: t,
                    });
                }
            }
            if !is_injective(&m.module) {
                if let Ok(t) = tau_inverse(&m.module) {
                    next.push(WindowModule {
                        label: tau_label(&m.label, -1),
                        module: t,
                    });
                }
            }
        }
        let before = w.len();
        for m in next {
            add_to_window(&mut w, m.label, &m.module, settings);
        }
        layer = w[before..].to_vec();
    }
    let base = w.clone();
    for m in &base {
        if !is_projective(&m.module) {
            add_to_window(
                &mut w,
                format!("omega {}", m.label),
                &syzygy(&m.module),
                settings,
            );
            add_to_window(
                &mut w,
                format!("omega^-1 {}", m.label),
                &cosyzygy(&m.module),
                settings,
            );
        }
    }
    w
}

#[derive(Clone, Debug)]
pub struct WindowEntry {
    pub label: String,
    pub dims: Vec<usize>,
    /// Sorted dimension vectors of the summands of the relative syzygy.
    pub syzygy: Vec<Vec<usize>>,
    pub pd_at_most_one: bool,
}

#[derive(Clone, Debug)]
pub struct WindowReport {
    pub radius: usize,
    pub entries: Vec<WindowEntry>,
}

impl WindowReport {
    /// True when every module of the window has relative projective
    /// dimension at most one. This is evidence on the window only.
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pd_at_most_one)
    }

    pub fn failures(&self) -> impl Iterator<Item = &WindowEntry> {
        self.entries.iter().filter(|e| !e.pd_at_most_one)
    }
}

pub fn window_verify(
    gens: &[Rep],
    labels: &[String],
    radius: usize,
    cache: &HomCache,
    settings: &Settings,
) -> Result<WindowReport, Error> {
    let mut entries = Vec::new();
    for m in window(gens, labels, radius, settings) {
        let k = rel_syzygy(&m.module, gens, cache)?;
        let d = decompose(&k, settings);
        let pd = crate::decompose::multiplicities_in(&d, gens).is_some();
        entries.push(WindowEntry {
            label: m.label,
            dims: m.module.dims().to_vec(),
            syzygy: d.dimension_vectors(),
            pd_at_most_one: pd,
        });
    }
    Ok(WindowReport { radius, entries })
}
