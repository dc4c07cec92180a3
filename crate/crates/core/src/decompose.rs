//! Krull-Schmidt decompositions, isomorphism tests and `add` membership.
//!
//! Splitting uses Fitting's lemma: for an endomorphism `φ` of `X`,
//! `X = ker φ^m ⊕ im φ^m` for large `m`, a proper splitting unless `φ` is
//! nilpotent or invertible. Indecomposability is certified by exhibiting a
//! nilpotent ideal `N` of `End(X)` with `End(X)/N` a field, which forces the
//! endomorphism ring to be local.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::field::PrimeField;
use crate::linalg::Mat;
use crate::rep::{hom_basis, Rep, RepMorphism};

/// Knobs for the randomized parts of the decomposition search. Every call
/// reseeds from `seed`, so results depend only on the inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    pub seed: u64,
    /// Pseudo-random endomorphisms tried after basis elements and pair sums.
    pub random_candidates: usize,
    /// Largest `p^dim End(X)` that may be enumerated exhaustively.
    pub exhaustive_budget: u64,
}

pub const DEFAULT_SEED: u64 = 0x5eed_a11e;

impl Default for Settings {
    fn default() -> Settings {
        Settings {
            seed: DEFAULT_SEED,
            random_candidates: 24,
            exhaustive_budget: 1 << 16,
        }
    }
}

impl Settings {
    pub fn with_seed(seed: u64) -> Settings {
        Settings {
            seed,
            ..Settings::default()
        }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

/// One indecomposable piece of a decomposition with its split embedding.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Rep,
    pub inclusion: RepMorphism,
    pub projection: RepMorphism,
    /// Index into [`Decomposition::classes`].
    pub class: usize,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Pairwise non-isomorphic indecomposables, one per class.
    pub classes: Vec<Rep>,
    pub multiplicities: Vec<usize>,
    pub summands: Vec<Summand>,
    /// Set when some summand could only be declared indecomposable from
    /// the randomized search.
    pub unconfirmed: bool,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn is_indecomposable(&self) -> bool {
        self.summands.len() == 1
    }

    /// Checks `Σ inclusion ∘ projection = id` and `projection ∘ inclusion = id`
    /// on every summand.
    pub fn reassembles(&self, x: &Rep) -> bool {
        let mut total = RepMorphism::zero(x, x);
        for s in &self.summands {
            if !s
                .inclusion
                .then(&s.projection)
                .eq(&RepMorphism::identity(&s.module))
            {
                return false;
            }
            total = total.add(&s.projection.then(&s.inclusion));
        }
        total == RepMorphism::identity(x)
    }

    /// Sorted dimension vectors of the summands, with repetition.
    pub fn dimension_vectors(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = self
            .summands
            .iter()
            .map(|s| s.module.dims().to_vec())
            .collect();
        v.sort();
        v
    }
}

enum Split {
    Parts(Subspaces),
    Indecomposable { confirmed: bool },
}

type Subspaces = (Vec<Mat>, Vec<Mat>);

fn fitting(phi: &RepMorphism) -> Option<Subspaces> {
    let n = phi.source().dim();
    let mut psi = phi.clone();
    let mut k = 1;
    while k < n {
        psi = psi.then(&psi);
        k *= 2;
    }
    let ker = psi.kernel_subspace();
    let im = psi.image_subspace();
    let kd: usize = ker.iter().map(Mat::cols).sum();
    if kd == 0 || kd == n {
        None
    } else {
        Some((ker, im))
    }
}

fn combination(basis: &[RepMorphism], coeffs: &[u32]) -> RepMorphism {
    let mut acc = RepMorphism::zero(basis[0].source(), basis[0].target());
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            acc = acc.add_scaled(b, c);
        }
    }
    acc
}

/// Linear span of endomorphisms, kept in reduced form.
struct Span {
    len: usize,
    field: PrimeField,
    vectors: Vec<Vec<u32>>,
    elems: Vec<RepMorphism>,
}

impl Span {
    fn new(field: PrimeField, len: usize) -> Span {
        Span {
            len,
            field,
            vectors: Vec::new(),
            elems: Vec::new(),
        }
    }

    fn matrix(&self) -> Mat {
        Mat::from_columns(self.field, self.len, &self.vectors)
    }

    fn contains(&self, v: &[u32]) -> bool {
        if v.iter().all(|&c| c == 0) {
            return true;
        }
        if self.vectors.is_empty() {
            return false;
        }
        let b = Mat::from_columns(self.field, self.len, &[v.to_vec()]);
        self.matrix().solve(&b).unwrap().is_some()
    }

    fn push(&mut self, m: RepMorphism) -> bool {
        let v = m.vectorize();
        if self.contains(&v) {
            return false;
        }
        self.vectors.push(v);
        self.elems.push(m);
        true
    }

    fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Polynomials over F_p, coefficient of `x^i` at index `i`, no trailing zeros.
mod poly {
    use alloc::vec;
    use alloc::vec::Vec;

    use crate::field::PrimeField;

    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let lead = f.inv(*b.last().unwrap());
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = f.mul(*r.last().unwrap(), lead);
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, bc));
            }
            r = trim(r);
        }
        r
    }

    pub fn div(f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let lead = f.inv(*b.last().unwrap());
        if r.len() < b.len() {
            return Vec::new();
        }
        let mut q = vec![0; r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = f.mul(*r.last().unwrap(), lead);
            q[shift] = c;
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(c, bc));
            }
            r = trim(r);
        }
        trim(q)
    }

    pub fn gcd(f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(f, &a, &b);
            a = b;
            b = r;
        }
        monic(f, a)
    }

    pub fn monic(f: PrimeField, a: Vec<u32>) -> Vec<u32> {
        match a.last() {
            None => a,
            Some(&l) => {
                let inv = f.inv(l);
                a.into_iter().map(|c| f.mul(c, inv)).collect()
            }
        }
    }

    pub fn derivative(f: PrimeField, a: &[u32]) -> Vec<u32> {
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, (i as u64 % f.p() as u64) as u32))
                .collect(),
        )
    }

    pub fn mul_mod(f: PrimeField, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        rem(f, &out, m)
    }

    pub fn pow_mod(f: PrimeField, a: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
        let mut acc = rem(f, &[1], m);
        let mut base = rem(f, a, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(f, &acc, &base, m);
            }
            base = mul_mod(f, &base, &base, m);
            e >>= 1;
        }
        acc
    }

    /// Product of the distinct irreducible factors of `a`.
    pub fn radical(f: PrimeField, a: &[u32]) -> Vec<u32> {
        let a = monic(f, trim(a.to_vec()));
        if a.len() <= 2 {
            return a;
        }
        let d = derivative(f, &a);
        if d.is_empty() {
            // a(x) = g(x^p) = g(x)^p over F_p
            let g: Vec<u32> = a.iter().step_by(f.p() as usize).copied().collect();
            return radical(f, &g);
        }
        let mut c = gcd(f, &a, &d);
        // w collects the factors whose multiplicity is prime to p
        let w = div(f, &a, &c);
        loop {
            let g = gcd(f, &c, &w);
            if g.len() <= 1 {
                break;
            }
            c = div(f, &c, &g);
        }
        monic(f, mul(f, &w, &radical(f, &c)))
    }

    pub fn mul(f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        trim(out)
    }

    /// Irreducibility over F_p: no common factor with `x^{p^i} - x` for
    /// `i <= deg/2`.
    pub fn is_irreducible(f: PrimeField, a: &[u32]) -> bool {
        let d = a.len().saturating_sub(1);
        if d == 0 {
            return false;
        }
        let x = vec![0, 1];
        let mut xp = rem(f, &x, a);
        for _ in 0..d / 2 {
            xp = pow_mod(f, &xp, f.p() as u64, a);
            let mut diff = xp.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = f.sub(diff[1], 1);
            let g = gcd(f, a, &trim(diff));
            if g.len() > 1 {
                return false;
            }
        }
        true
    }

}

/// Minimal polynomial of an endomorphism, from the Krylov sequence of its
/// powers.
fn minimal_polynomial(phi: &RepMorphism) -> Vec<u32> {
    let f = phi.source().field();
    let id = RepMorphism::identity(phi.source());
    let len = id.vectorize().len();
    let mut powers = vec![id.vectorize()];
    let mut cur = id;
    loop {
        cur = cur.then(phi);
        let v = cur.vectorize();
        let a = Mat::from_columns(f, len, &powers);
        let b = Mat::from_columns(f, len, core::slice::from_ref(&v));
        if let Some(sol) = a.solve(&b).unwrap() {
            let mut m: Vec<u32> = (0..powers.len()).map(|i| f.neg(sol.get(i, 0))).collect();
            m.push(1);
            return m;
        }
        powers.push(v);
    }
}

fn evaluate(poly: &[u32], phi: &RepMorphism) -> RepMorphism {
    let x = phi.source();
    let mut acc = RepMorphism::zero(x, x);
    for &c in poly.iter().rev() {
        acc = acc.then(phi).add_scaled(&RepMorphism::identity(x), c);
    }
    acc
}

/// Result of trying to certify that `End(X)` is local.
struct Certificate {
    /// Basis of the nilpotent ideal found; equals `rad End(X)` when
    /// `local` is true.
    radical: Vec<RepMorphism>,
    local: bool,
    splitter: Option<RepMorphism>,
}

fn certify_local(x: &Rep, basis: &[RepMorphism], extra: &[RepMorphism]) -> Certificate {
    let f = x.field();
    let len = RepMorphism::identity(x).vectorize().len();
    let mut span = Span::new(f, len);
    let mut degree = 1;
    let mut witness_irreducible = true;
    for phi in basis.iter().chain(extra) {
        let m = minimal_polynomial(phi);
        let q = poly::radical(f, &m);
        if q.len() - 1 > degree {
            degree = q.len() - 1;
            witness_irreducible = poly::is_irreducible(f, &q);
        }
        let n = evaluate(&q, phi);
        if !n.is_nilpotent() {
            return Certificate {
                radical: Vec::new(),
                local: false,
                splitter: None,
            };
        }
        span.push(n);
    }
    // close under multiplication by End(X) on both sides
    let mut i = 0;
    while i < span.elems.len() {
        let n = span.elems[i].clone();
        for b in basis {
            for prod in [n.then(b), b.then(&n)] {
                if !prod.is_nilpotent() {
                    let split = !prod.is_isomorphism();
                    return Certificate {
                        radical: Vec::new(),
                        local: false,
                        splitter: split.then_some(prod),
                    };
                }
                span.push(prod);
            }
        }
        i += 1;
    }
    // the ideal must itself be nilpotent
    let mut power: Vec<RepMorphism> = span.elems.clone();
    for _ in 0..=x.dim() {
        if power.is_empty() {
            break;
        }
        let mut next = Span::new(f, len);
        for a in &power {
            for b in &span.elems {
                next.push(a.then(b));
            }
        }
        power = next.elems;
    }
    let nilpotent_ideal = power.is_empty();
    let local = nilpotent_ideal && witness_irreducible && basis.len() - span.dim() == degree;
    Certificate {
        radical: span.elems,
        local,
        splitter: None,
    }
}

fn exhaustive_split(
    x: &Rep,
    basis: &[RepMorphism],
    settings: &Settings,
) -> Option<Option<RepMorphism>> {
    let p = x.field().p() as u64;
    let total = p.checked_pow(basis.len() as u32)?;
    if total > settings.exhaustive_budget {
        return None;
    }
    let mut coeffs = vec![0u32; basis.len()];
    for _ in 0..total {
        let phi = combination(basis, &coeffs);
        if fitting(&phi).is_some() {
            return Some(Some(phi));
        }
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < p as u32 {
                break;
            }
            *c = 0;
        }
    }
    Some(None)
}

fn split_once(x: &Rep, settings: &Settings, salt: u64) -> Split {
    let basis = hom_basis(x, x);
    if basis.len() <= 1 {
        return Split::Indecomposable { confirmed: true };
    }
    for phi in &basis {
        if let Some(parts) = fitting(phi) {
            return Split::Parts(parts);
        }
    }
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if let Some(parts) = fitting(&basis[i].add(&basis[j])) {
                return Split::Parts(parts);
            }
        }
    }
    let p = x.field().p();
    let mut rng = settings.rng(salt);
    let mut randoms = Vec::new();
    for _ in 0..settings.random_candidates {
        let coeffs: Vec<u32> = (0..basis.len()).map(|_| rng.random_range(0..p)).collect();
        let phi = combination(&basis, &coeffs);
        if let Some(parts) = fitting(&phi) {
            return Split::Parts(parts);
        }
        randoms.push(phi);
    }
    let cert = certify_local(x, &basis, &randoms[..randoms.len().min(4)]);
    if let Some(phi) = cert.splitter {
        if let Some(parts) = fitting(&phi) {
            return Split::Parts(parts);
        }
    }
    if cert.local {
        return Split::Indecomposable { confirmed: true };
    }
    match exhaustive_split(x, &basis, settings) {
        Some(Some(phi)) => Split::Parts(fitting(&phi).expect("exhaustive witness splits")),
        Some(None) => Split::Indecomposable { confirmed: true },
        None => Split::Indecomposable { confirmed: false },
    }
}

/// Isomorphism test for two indecomposables: `X ≅ Y` iff some composite
/// `g ∘ f` of basis morphisms `f: X -> Y`, `g: Y -> X` is not nilpotent.
/// Returns an isomorphism `X -> Y` when one exists.
pub fn iso_indecomposable(x: &Rep, y: &Rep) -> Option<RepMorphism> {
    if x.dims() != y.dims() {
        return None;
    }
    if x.is_zero() {
        return Some(RepMorphism::zero(x, y));
    }
    let fs = hom_basis(x, y);
    if fs.is_empty() {
        return None;
    }
    if let Some(f) = fs.iter().find(|f| f.is_isomorphism()) {
        return Some(f.clone());
    }
    let gs = hom_basis(y, x);
    for f in &fs {
        for g in &gs {
            if !f.then(g).is_nilpotent() {
                return Some(f.clone());
            }
        }
    }
    None
}

/// Splits `X` into indecomposables and groups them into isomorphism
/// classes.
pub fn decompose(x: &Rep, settings: &Settings) -> Decomposition {
    let mut pieces: Vec<(Rep, RepMorphism, RepMorphism)> = Vec::new();
    let mut unconfirmed = false;
    let mut stack = vec![(
        x.clone(),
        RepMorphism::identity(x),
        RepMorphism::identity(x),
    )];
    let mut salt = 0u64;
    while let Some((y, inc, proj)) = stack.pop() {
        if y.is_zero() {
            continue;
        }
        salt += 1;
        match split_once(&y, settings, salt) {
            Split::Indecomposable { confirmed } => {
                unconfirmed |= !confirmed;
                pieces.push((y, inc, proj));
            }
            Split::Parts((ker, im)) => {
                let (k_mod, k_inc) = y.submodule(&ker);
                let (i_mod, i_inc) = y.submodule(&im);
                // projections along the complementary summand
                let mut kp = Vec::new();
                let mut ip = Vec::new();
                for v in 0..y.dims().len() {
                    let both = ker[v].hstack(&im[v]);
                    let inv = both.inverse().expect("Fitting summands are complementary");
                    let kc = ker[v].cols();
                    kp.push(inv.block(0, 0, kc, y.dim_at(v)));
                    ip.push(inv.block(kc, 0, im[v].cols(), y.dim_at(v)));
                }
                let k_proj = RepMorphism::new(&y, &k_mod, kp).expect("projection is a morphism");
                let i_proj = RepMorphism::new(&y, &i_mod, ip).expect("projection is a morphism");
                stack.push((i_mod, i_inc.then(&inc), proj.then(&i_proj)));
                stack.push((k_mod, k_inc.then(&inc), proj.then(&k_proj)));
            }
        }
    }
    // largest first, then by dimension vector, so the order is canonical
    pieces.sort_by(|a, b| {
        b.0.dim()
            .cmp(&a.0.dim())
            .then_with(|| a.0.dims().cmp(b.0.dims()))
    });
    let mut classes: Vec<Rep> = Vec::new();
    let mut multiplicities = Vec::new();
    let mut summands = Vec::new();
    for (module, inclusion, projection) in pieces {
        let class = match classes
            .iter()
            .position(|c| iso_indecomposable(c, &module).is_some())
        {
            Some(c) => c,
            None => {
                classes.push(module.clone());
                multiplicities.push(0);
                classes.len() - 1
            }
        };
        multiplicities[class] += 1;
        summands.push(Summand {
            module,
            inclusion,
            projection,
            class,
        });
    }
    Decomposition {
        classes,
        multiplicities,
        summands,
        unconfirmed,
    }
}

/// Whether `X` is indecomposable (a nonzero module with local
/// endomorphism ring).
pub fn is_indecomposable(x: &Rep, settings: &Settings) -> bool {
    !x.is_zero() && matches!(split_once(x, settings, 1), Split::Indecomposable { .. })
}

/// Isomorphism test with a witness isomorphism `X -> Y`.
pub fn is_isomorphic(x: &Rep, y: &Rep, settings: &Settings) -> Option<RepMorphism> {
    if x.dims() != y.dims() || !x.algebra().same(y.algebra()) {
        return None;
    }
    if x.is_zero() {
        return Some(RepMorphism::zero(x, y));
    }
    let fs = hom_basis(x, y);
    if let Some(f) = fs.iter().find(|f| f.is_isomorphism()) {
        return Some(f.clone());
    }
    let dx = decompose(x, settings);
    let dy = decompose(y, settings);
    if dx.len() != dy.len() {
        return None;
    }
    let mut used = vec![false; dy.summands.len()];
    let mut total = RepMorphism::zero(x, y);
    for sx in &dx.summands {
        let mut found = false;
        for (k, sy) in dy.summands.iter().enumerate() {
            if used[k] {
                continue;
            }
            if let Some(iso) = iso_indecomposable(&sx.module, &sy.module) {
                used[k] = true;
                total = total.add(&sx.projection.then(&iso).then(&sy.inclusion));
                found = true;
                break;
            }
        }
        if !found {
            return None;
        }
    }
    debug_assert!(total.is_isomorphism());
    Some(total)
}

/// Multiplicities of `X` in terms of a list of pairwise non-isomorphic
/// indecomposables, or `None` if some summand of `X` is not on the list.
pub fn in_add(x: &Rep, gens: &[Rep], settings: &Settings) -> Option<Vec<usize>> {
    let d = decompose(x, settings);
    multiplicities_in(&d, gens)
}

/// Matches the classes of a decomposition against a list of
/// indecomposables.
pub fn multiplicities_in(d: &Decomposition, gens: &[Rep]) -> Option<Vec<usize>> {
    let mut mult = vec![0; gens.len()];
    for (class, &m) in d.classes.iter().zip(&d.multiplicities) {
        let k = gens
            .iter()
            .position(|g| iso_indecomposable(g, class).is_some())?;
        mult[k] += m;
    }
    Some(mult)
}

/// Basis of `rad End(X)` for an indecomposable `X`.
pub fn radical_of_local_endo(x: &Rep, settings: &Settings) -> Result<Vec<RepMorphism>, Error> {
    if x.is_zero() {
        return Err(Error::NotIndecomposable);
    }
    let basis = hom_basis(x, x);
    let mut rng = settings.rng(u64::MAX);
    let p = x.field().p();
    let randoms: Vec<RepMorphism> = (0..4)
        .map(|_| {
            let c: Vec<u32> = (0..basis.len()).map(|_| rng.random_range(0..p)).collect();
            combination(&basis, &c)
        })
        .collect();
    let cert = certify_local(x, &basis, &randoms);
    if cert.local {
        return Ok(cert.radical);
    }
    if cert.splitter.is_some() {
        return Err(Error::NotIndecomposable);
    }
    // Exhaustive scan: in a local ring the nilpotent elements are the
    // radical.
    let total = (p as u64)
        .checked_pow(basis.len() as u32)
        .filter(|&t| t <= settings.exhaustive_budget)
        .ok_or(Error::Internal("endomorphism ring too large to scan"))?;
    let len = RepMorphism::identity(x).vectorize().len();
    let mut span = Span::new(x.field(), len);
    let mut coeffs = vec![0u32; basis.len()];
    for _ in 0..total {
        let phi = combination(&basis, &coeffs);
        if phi.is_nilpotent() {
            span.push(phi);
        } else if !phi.is_isomorphism() {
            return Err(Error::NotIndecomposable);
        }
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
    Ok(span.elems)
}
