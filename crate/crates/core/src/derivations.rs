//! Logarithmic derivations of the arrangement `fi = 0` in `R = k[x1..xr]`.
//!
//! A derivation `θ` with `θ(fj) = cj fj` is recorded both as its syzygy
//! `c ∈ K = {c ∈ R^n : ∑ cj fj gj = 0}` and as its coefficient vector
//! `(θ(x1), ..., θ(xr))`. Degrees follow the convention in which the Euler
//! derivation has degree 0, so a derivation of degree `e` has coefficients
//! of polynomial degree `e + 1`; the classical exponent is `e + 1`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::field::Field;
use crate::graded::{apply_derivation, GradedEngine, GradedError, MonomialIndex};
use crate::groebner::resolution::{syzygies, SchreyerResolution};
use crate::linalg::{rank_of, ExactMatrix, SparseVec};
use crate::matroid::{card, format_set, labels_of, Realization, Set};
use crate::pairs::{PairsError, PairsIdeal};
use crate::poly::{binomial, monomials_of_degree, Monomial, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivationError {
    #[error(transparent)]
    Pairs(#[from] PairsError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("derivation of degree {degree} does not preserve the ideal of hyperplane {hyperplane}")]
    NotLogarithmic { degree: usize, hyperplane: usize },
    #[error("the realizations do not have the same matroid")]
    MatroidMismatch,
    #[error("the realizations must have the same number of rows to compare column spans")]
    ShapeMismatch,
}

/// One minimal generator of `der(𝒜)`.
#[derive(Clone, Debug)]
pub struct Derivation<K: Field> {
    pub degree: usize,
    /// `θ(x1), ..., θ(xr)`.
    pub theta: Vec<Poly<K>>,
    /// `θ(fj) / fj` for every `j`.
    pub c: Vec<Poly<K>>,
}

/// `der(𝒜)` with certified homological data.
#[derive(Clone, Debug)]
pub struct DerivationModule<K: Field> {
    pub generators: Vec<Derivation<K>>,
    /// Minimal generator degrees, ascending.
    pub exponents: Vec<usize>,
    /// `dim Tor_p^R(der(𝒜), k)_e`, keyed by `(p, e)`.
    pub betti: BTreeMap<(usize, usize), usize>,
    pub pdim: usize,
    pub free: bool,
    /// Saito's criterion when free: `det[θ_j(x_i)]` is a nonzero scalar times
    /// the product of the distinct hyperplane forms.
    pub saito: Option<bool>,
}

impl<K: Field> DerivationModule<K> {
    pub fn coexponents(&self) -> Vec<usize> {
        self.exponents.iter().map(|e| e + 1).collect()
    }

    /// `dim (der(𝒜) ⊗ k)_e`.
    pub fn minimal_generators_in_degree(&self, e: usize) -> usize {
        self.betti.get(&(0, e)).copied().unwrap_or(0)
    }

    pub fn tor_dim(&self, p: usize, e: usize) -> usize {
        self.betti.get(&(p, e)).copied().unwrap_or(0)
    }
}

/// The vectors `u_i = fi · D[:, i]` whose syzygies over `R` form `K`.
fn syzygy_inputs<K: Field>(pi: &PairsIdeal<K>) -> Vec<Vec<Poly<K>>> {
    let k = pi.field();
    (0..pi.n())
        .map(|i| pi.g_coeffs(i).iter().map(|c| pi.f(i).scale(k, c)).collect())
        .collect()
}

/// Minimal generators of `der(𝒜)` and a certified projective dimension.
///
/// The module `K` is computed as a syzygy module over `R`, resolved with
/// Schreyer's algorithm, and its minimal generators are then extracted
/// degreewise and converted to derivations.
pub fn der_module<K: Field>(pi: &PairsIdeal<K>) -> Result<DerivationModule<K>, DerivationError> {
    pi.require_no_loops()?;
    let k = pi.field();
    let nv = pi.nvars();
    let r = pi.r();
    let n = pi.n();
    let kgens = syzygies(k, nv, &syzygy_inputs(pi));
    // Components of K have degree d - 1 for an element of K_(d,1).
    let res = SchreyerResolution::of_module(k, nv, r, vec![(1, 0); n], &kgens);
    let betti: BTreeMap<(usize, usize), usize> =
        res.betti_module().into_iter().map(|((p, d, j), v)| {
            debug_assert_eq!(j, 0);
            ((p, d - 1), v)
        }).collect();
    let pdim = betti.keys().map(|k| k.0).max().unwrap_or(0);
    let max_deg = betti.iter().filter(|(k, _)| k.0 == 0).map(|(k, _)| k.1).max().unwrap_or(0);
    let engine = GradedEngine::new(pi);
    let mut generators = Vec::new();
    for (d, c) in engine.derivation_generators(max_deg + 1) {
        let theta = engine.theta_from_syzygy(&c)?;
        generators.push(Derivation { degree: d - 1, theta, c });
    }
    for g in &generators {
        check_logarithmic(pi, g)?;
    }
    let mut exponents: Vec<usize> = generators.iter().map(|g| g.degree).collect();
    exponents.sort_unstable();
    let free = pdim == 0;
    let saito = if free { Some(saito_check(pi, &generators)) } else { None };
    Ok(DerivationModule { generators, exponents, betti, pdim, free, saito })
}

/// `θ(fj)` is divisible by `fj` with quotient `cj`, checked by expansion.
fn check_logarithmic<K: Field>(pi: &PairsIdeal<K>, g: &Derivation<K>) -> Result<(), DerivationError> {
    let k = pi.field();
    for j in 0..pi.n() {
        let image = apply_derivation(k, &g.theta, pi.f(j));
        match image.div_exact(k, pi.f(j)) {
            Some(q) if q == g.c[j] => {}
            _ => return Err(DerivationError::NotLogarithmic { degree: g.degree, hyperplane: j + 1 }),
        }
    }
    Ok(())
}

fn determinant<K: Field>(k: &K, m: &[Vec<Poly<K>>], nvars: usize) -> Poly<K> {
    let size = m.len();
    if size == 0 {
        return Poly::one(k, nvars);
    }
    if size == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero(nvars);
    for col in 0..size {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly<K>>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, p)| p.clone()).collect()).collect();
        let term = m[0][col].mul(k, &determinant(k, &minor, nvars)).expect("same ring");
        acc = if col % 2 == 0 { acc.add(k, &term) } else { acc.sub(k, &term) }.expect("same ring");
    }
    acc
}

/// The distinct hyperplanes: one representative index per parallel class.
fn distinct_hyperplanes<K: Field>(pi: &PairsIdeal<K>) -> Vec<usize> {
    let m = pi.matroid();
    let mut seen: Vec<Set> = Vec::new();
    let mut reps = Vec::new();
    for i in 0..pi.n() {
        let cl = m.closure(1 << i);
        if !seen.contains(&cl) {
            seen.push(cl);
            reps.push(i);
        }
    }
    reps
}

fn saito_check<K: Field>(pi: &PairsIdeal<K>, gens: &[Derivation<K>]) -> bool {
    let k = pi.field();
    let nv = pi.nvars();
    if gens.len() != pi.r() {
        return false;
    }
    let rows: Vec<Vec<Poly<K>>> = gens.iter().map(|g| g.theta.clone()).collect();
    let det = determinant(k, &rows, nv);
    let mut q = Poly::one(k, nv);
    for i in distinct_hyperplanes(pi) {
        q = q.mul(k, pi.f(i)).expect("same ring");
    }
    match (det.leading(), q.leading()) {
        (Some((_, a)), Some((_, b))) => det.scale(k, b) == q.scale(k, a),
        _ => false,
    }
}

/// Substitutes the hyperplane `f = 0` into `p` by eliminating the first
/// variable with a nonzero coefficient in `f`.
fn restrict_to_hyperplane<K: Field>(k: &K, p: &Poly<K>, f: &Poly<K>, r: usize, nvars: usize) -> Poly<K> {
    let coeffs: Vec<K::Elem> =
        (0..r).map(|v| f.coefficient(&Monomial::var(v)).cloned().unwrap_or_else(|| k.zero())).collect();
    let v = coeffs.iter().position(|c| !k.is_zero(c)).expect("nonzero form");
    let inv = k.inv(&coeffs[v]).expect("nonzero");
    // x_v = −∑_{u ≠ v} (b_u / b_v) x_u
    let mut sub = Poly::zero(nvars);
    for (u, c) in coeffs.iter().enumerate() {
        if u != v && !k.is_zero(c) {
            let t = Poly::var(k, u, nvars).scale(k, &k.neg(&k.mul(c, &inv)));
            sub = sub.add(k, &t).expect("same ring");
        }
    }
    let mut acc = Poly::zero(nvars);
    for (m, c) in p.terms() {
        let e = m.exp(v);
        let rest = Monomial::from_exponents(&(0..nvars).map(|u| if u == v { 0 } else { m.exp(u) }).collect::<Vec<_>>())
            .expect("small");
        let t = sub.pow(k, e).mul_monomial(&rest).scale(k, c);
        acc = acc.add(k, &t).expect("same ring");
    }
    acc
}

/// `dim der(𝒜)_e` computed directly from the definition, as the space of
/// `θ = ∑ θ_k ∂/∂x_k` with `θ_k ∈ R_(e+1)` such that every `θ(fj)` vanishes
/// on its hyperplane. Independent of the pairs ideal.
pub fn der_dim_direct<K: Field>(pi: &PairsIdeal<K>, e: usize) -> usize {
    let k = pi.field();
    let r = pi.r();
    let nv = pi.nvars();
    let mons = monomials_of_degree(0, r, e + 1);
    let target = MonomialIndex::new(monomials_of_degree(0, r, e + 1));
    let hyper = distinct_hyperplanes(pi);
    let tdim = target.len();
    // Restrictions of each monomial, per hyperplane.
    let restricted: Vec<Vec<SparseVec<K::Elem>>> = hyper
        .iter()
        .map(|&j| mons.iter().map(|m| target.vector(&restrict_to_hyperplane(k, &Poly::monomial(k, k.one(), *m, nv), pi.f(j), r, nv))).collect())
        .collect();
    let mut images: Vec<SparseVec<K::Elem>> = Vec::new();
    for var in 0..r {
        for mi in 0..mons.len() {
            let mut row: SparseVec<K::Elem> = Vec::new();
            for (h, &j) in hyper.iter().enumerate() {
                let b = pi.f(j).coefficient(&Monomial::var(var)).cloned().unwrap_or_else(|| k.zero());
                if k.is_zero(&b) {
                    continue;
                }
                for (pos, c) in &restricted[h][mi] {
                    row.push((h * tdim + pos, k.mul(&b, c)));
                }
            }
            images.push(row);
        }
    }
    images.len() - rank_of(k, images)
}

/// Combinatorial lower bounds and obstructions for projective dimensions.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PdimBounds {
    /// `max_{F cyclic} 2 rank(F) − |F| + n − r`, a lower bound for `pdim_S(S/𝔞)`.
    pub cyclic_flat_bound: usize,
    pub cyclic_flat_terms: Vec<(String, usize)>,
    /// `max rank(F) − 2` over minimal nonempty cyclic flats; a lower bound for
    /// `pdim_R der(𝒜)`. `None` when there is no nonempty cyclic flat.
    pub kung_schenck_bound: Option<i64>,
    /// Simple and every rank-2 flat has exactly two elements.
    pub ziegler_flag: bool,
    /// Some minimal nonempty cyclic flat has rank at least 3.
    pub free_obstruction: bool,
}

pub fn pdim_bounds<K: Field>(pi: &PairsIdeal<K>) -> PdimBounds {
    let m = pi.matroid();
    let n = pi.n();
    let r = pi.r();
    let cyclic_flat_terms: Vec<(String, usize)> =
        m.cyclic_flats().iter().map(|&f| (format_set(f), 2 * m.rank(f) + n - card(f) - r)).collect();
    let cyclic_flat_bound = cyclic_flat_terms.iter().map(|t| t.1).max().unwrap_or(0);
    let mins = m.minimal_nonempty_cyclic_flats();
    let kung_schenck_bound = mins.iter().map(|&f| m.rank(f) as i64 - 2).max();
    let ziegler_flag = m.is_simple() && m.flats().iter().filter(|&&f| m.rank(f) == 2).all(|&f| card(f) == 2);
    let free_obstruction = mins.iter().any(|&f| m.rank(f) >= 3);
    PdimBounds { cyclic_flat_bound, cyclic_flat_terms, kung_schenck_bound, ziegler_flag, free_obstruction }
}

/// A witness that two realizations of one matroid have non-isomorphic
/// modules of derivations.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RecipeCertificate {
    pub flat: Vec<usize>,
    pub rank: usize,
    /// Row-reduced bases of the spans of the columns in the flat; the
    /// subspaces `{w : fi(w) = 0, i ∈ F}` are their annihilators.
    pub span_a: Vec<Vec<String>>,
    pub span_b: Vec<Vec<String>>,
    pub verdict: &'static str,
}

fn column_span<K: Field>(re: &Realization<K>, f: Set) -> ExactMatrix<K> {
    let cols: Vec<usize> = labels_of(f).iter().map(|l| l - 1).collect();
    let sel = re.matrix().select_columns(&cols).transpose();
    let rref = sel.rref();
    sel_rows(&rref.matrix, rref.rank)
}

fn sel_rows<K: Field>(m: &ExactMatrix<K>, rank: usize) -> ExactMatrix<K> {
    m.select_rows(&(0..rank).collect::<Vec<_>>())
}

/// Searches minimal nonempty cyclic flats of rank at least 3 on which the
/// two arrangements cut out different subspaces (compared through the
/// column spans of the given matrices, label by label).
pub fn recipe_check<K: Field>(a: &Realization<K>, b: &Realization<K>) -> Result<Option<RecipeCertificate>, DerivationError> {
    let ma = a.matroid();
    if ma.n() != b.n() || ma.rank_table() != b.matroid().rank_table() {
        return Err(DerivationError::MatroidMismatch);
    }
    if a.matrix().nrows() != b.matrix().nrows() {
        return Err(DerivationError::ShapeMismatch);
    }
    if !a.loops().is_empty() || !b.loops().is_empty() {
        return Err(PairsError::Loops(a.loops().iter().chain(b.loops().iter()).map(|i| i + 1).collect()).into());
    }
    let k = a.field();
    let mut mins = ma.minimal_nonempty_cyclic_flats();
    mins.sort_by_key(|x| (ma.rank(*x), labels_of(*x)));
    for f in mins {
        if ma.rank(f) < 3 {
            continue;
        }
        let sa = column_span(a, f);
        let sb = column_span(b, f);
        if sa != sb {
            let show = |m: &ExactMatrix<K>| -> Vec<Vec<String>> { m.rows_vec().iter().map(|r| r.iter().map(|x| k.format(x)).collect()).collect() };
            return Ok(Some(RecipeCertificate {
                flat: labels_of(f),
                rank: ma.rank(f),
                span_a: show(&sa),
                span_b: show(&sb),
                verdict: "der(A) and der(A') are not isomorphic",
            }));
        }
    }
    Ok(None)
}

/// `⟨θ, ω_a⟩ = ∑_i a_i θ(fi)/fi` in `R[a] = k[x1..xr, a1..an]`, with
/// `a_i` the variable of index `r + i - 1`.
pub fn ilog_generators<K: Field>(pi: &PairsIdeal<K>, der: &DerivationModule<K>) -> Result<Vec<(usize, Poly<K>)>, DerivationError> {
    let k = pi.field();
    let r = pi.r();
    let nv = r + pi.n();
    let mut out = Vec::new();
    for g in &der.generators {
        let mut terms = Vec::new();
        for j in 0..pi.n() {
            let image = apply_derivation(k, &g.theta, pi.f(j));
            let q = image.div_exact(k, pi.f(j)).ok_or(DerivationError::NotLogarithmic { degree: g.degree, hyperplane: j + 1 })?;
            for (m, c) in q.terms() {
                terms.push((m.mul(&Monomial::var(r + j)), c.clone()));
            }
        }
        out.push((g.degree, Poly::from_terms(k, nv, terms)));
    }
    Ok(out)
}

/// `dim K_(d,1) = ∑_e dim R_(d−1−e)` over the exponents, for a free module.
pub fn free_hilbert_prediction(r: usize, exponents: &[usize], d: usize) -> usize {
    exponents
        .iter()
        .filter(|&&e| e < d)
        .map(|&e| if r == 0 { usize::from(d - 1 == e) } else { binomial(d - 1 - e + r - 1, r - 1) })
        .sum()
}
