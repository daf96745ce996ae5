//! Minimal and associated primes of `S/𝔞` and of its two slices.
//!
//! Every associated prime of `S/𝔞` is a linear prime `p_{F,G}` attached to a
//! biflat, so associatedness only has to be decided for finitely many
//! candidates. Each decision is an exact Gröbner computation.

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::Field;
use crate::graded::GradedEngine;
use crate::groebner::ideal::{Ideal, IdealError};
use crate::linalg::rank_of;
use crate::matroid::{card, format_set, full_set, labels_of, Set};
use crate::pairs::{PairsError, PairsIdeal};
use crate::poly::{Monomial, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrimesError {
    #[error("candidate prime does not contain the ideal")]
    NotContained,
    #[error(transparent)]
    Pairs(#[from] PairsError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error("minimal-prime verification failed: {0}")]
    Verification(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrimeTag {
    Minimal,
    Embedded,
    RejectedCandidate,
}

fn ser_labels<S: Serializer>(s: &Set, ser: S) -> Result<S::Ok, S::Error> {
    labels_of(*s).serialize(ser)
}

/// `p_{I,J} = (fi : i ∈ I) + (gj : j ∈ J)`; the slice primes `P_F` use
/// `J = ∅` (or `I = ∅` on the other side).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearPrime {
    #[serde(rename = "I", serialize_with = "ser_labels")]
    pub i: Set,
    #[serde(rename = "J", serialize_with = "ser_labels")]
    pub j: Set,
    pub codim: usize,
    pub tag: PrimeTag,
    /// Whether this is the homogeneous maximal ideal of the ambient ring.
    pub maximal_ideal: bool,
    /// An element `h` with `ann(h) = p`, printed, when the prime was
    /// certified associated.
    pub certificate: Option<String>,
}

impl LinearPrime {
    pub fn label(&self) -> String {
        format!("({}, {})", format_set(self.i), format_set(self.j))
    }
}

/// Which slice of `S/𝔞` to look at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// `(S/𝔞)_(·,1)` as an `R`-module.
    #[serde(rename = "(.,1)")]
    XSlice,
    /// `(S/𝔞)_(1,·)` as an `R⊥`-module.
    #[serde(rename = "(1,.)")]
    YSlice,
}

/// Rank of a family of linear forms.
pub fn linear_rank<K: Field>(k: &K, forms: &[Poly<K>], nvars: usize) -> usize {
    let rows = forms.iter().map(|p| {
        let mut v: Vec<(usize, K::Elem)> = p
            .terms()
            .iter()
            .map(|(m, c)| ((0..nvars).find(|&i| m.exp(i) == 1).expect("linear form"), c.clone()))
            .collect();
        v.sort_by_key(|e| e.0);
        v
    });
    rank_of(k, rows)
}

/// `{p_{F,F∁} : F cyclic}`, read off the lattice of cyclic flats.
pub fn minimal_primes<K: Field>(pi: &PairsIdeal<K>) -> Vec<LinearPrime> {
    let m = pi.matroid();
    let d = m.dual();
    let g = m.ground();
    let mut out: Vec<LinearPrime> = m
        .cyclic_flats()
        .iter()
        .map(|&f| LinearPrime {
            i: f,
            j: g & !f,
            codim: m.rank(f) + d.rank(g & !f),
            tag: PrimeTag::Minimal,
            maximal_ideal: false,
            certificate: None,
        })
        .collect();
    sort_primes(&mut out);
    out
}

fn sort_primes(v: &mut [LinearPrime]) {
    v.sort_by(|a, b| a.codim.cmp(&b.codim).then_with(|| labels_of(a.i).cmp(&labels_of(b.i))).then_with(|| labels_of(a.j).cmp(&labels_of(b.j))));
}

/// Decides `p ∈ Ass(S/I)` for a prime `p` given by generators.
///
/// `p` is associated iff `p ⊇ ann((I:p)/I) = ⋂_h (I:h)` over generators `h`
/// of `(I:p)`; by prime avoidance this holds iff some single `(I:h)` lies in
/// `p`. Returns such an `h` as the witness.
pub fn is_associated<K: Field>(ideal: &Ideal<K>, p: &[Poly<K>]) -> Result<Option<Poly<K>>, PrimesError> {
    let k = ideal.field();
    let pid = Ideal::new(k, ideal.nvars(), p.to_vec());
    if !pid.contains_ideal(ideal) {
        return Err(PrimesError::NotContained);
    }
    let quotient = ideal.colon(p);
    let mut hs: Vec<Poly<K>> = quotient.basis().into_iter().filter(|h| !ideal.contains(h)).collect();
    hs.sort_by_key(|h| h.degree().unwrap_or(0));
    for h in hs {
        let ann = ideal.colon_poly(&h);
        if pid.contains_ideal(&ann) {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// Every associated prime of `S/𝔞`, each biflat candidate decided exactly.
/// Rejected candidates are returned too when `keep_rejected` is set.
pub fn associated_primes<K: Field>(pi: &PairsIdeal<K>, keep_rejected: bool) -> Result<Vec<LinearPrime>, PrimesError> {
    pi.require_no_loops()?;
    let m = pi.matroid();
    let d = m.dual();
    let g = m.ground();
    let k = pi.field();
    let nv = pi.nvars();
    let ideal = Ideal::new(k, nv, pi.generator_polys());
    let minimal: Vec<Set> = m.cyclic_flats().to_vec();
    let names = pi.spec().names().to_vec();
    let mut cands: Vec<(Set, Set)> = m.biflats();
    cands.sort_by(|a, b| {
        (m.rank(a.0) + d.rank(a.1), labels_of(a.0), labels_of(a.1)).cmp(&(m.rank(b.0) + d.rank(b.1), labels_of(b.0), labels_of(b.1)))
    });
    let decided: Vec<Result<Option<LinearPrime>, PrimesError>> = cands
        .par_iter()
        .map(|&(f, h)| {
            let codim = m.rank(f) + d.rank(h);
            let is_min = h == g & !f && minimal.contains(&f);
            let mut lp =
                LinearPrime { i: f, j: h, codim, tag: PrimeTag::Minimal, maximal_ideal: codim == nv, certificate: None };
            if is_min {
                return Ok(Some(lp));
            }
            match is_associated(&ideal, &pi.prime_generators(f, h))? {
                Some(w) => {
                    lp.tag = PrimeTag::Embedded;
                    lp.certificate = Some(w.format(k, &names));
                    Ok(Some(lp))
                }
                None if keep_rejected => {
                    lp.tag = PrimeTag::RejectedCandidate;
                    Ok(Some(lp))
                }
                None => Ok(None),
            }
        })
        .collect();
    let mut out = Vec::new();
    for r in decided {
        if let Some(p) = r? {
            out.push(p);
        }
    }
    Ok(out)
}

/// Associated primes of a slice.
///
/// For the `(·,1)` side, `S/(𝔞 + (y)²)` is `R ⊕ (S/𝔞)_(·,1)` as an
/// `R`-module, with the `y`'s mapping the first summand into the second.
/// A nonzero prime `P ⊆ R` is associated to the slice iff `P + (y)` is
/// associated to `S/(𝔞 + (y)²)` over `S`. The `(1,·)` side swaps roles.
/// Candidates are `P_F` for nonempty flats `F`.
pub fn slice_associated_primes<K: Field>(pi: &PairsIdeal<K>, side: Side) -> Result<Vec<LinearPrime>, PrimesError> {
    pi.require_no_loops()?;
    pi.require_no_coloops()?;
    let k = pi.field();
    let nv = pi.nvars();
    let r = pi.r();
    let names = pi.spec().names().to_vec();
    let (other_vars, m) = match side {
        Side::XSlice => ((r..nv).collect::<Vec<_>>(), pi.matroid().clone()),
        Side::YSlice => ((0..r).collect::<Vec<_>>(), pi.matroid().dual()),
    };
    let mut gens = pi.generator_polys();
    for (a, &u) in other_vars.iter().enumerate() {
        for &v in &other_vars[a..] {
            gens.push(Poly::monomial(k, k.one(), Monomial::var(u).mul(&Monomial::var(v)), nv));
        }
    }
    let ideal = Ideal::new(k, nv, gens);
    let var_polys: Vec<Poly<K>> = other_vars.iter().map(|&u| Poly::var(k, u, nv)).collect();
    let minimal: Vec<Set> = m.minimal_nonempty_cyclic_flats();
    let full = full_set(pi.n());
    let mut cands: Vec<Set> = m.flats().iter().copied().filter(|&f| f != 0).collect();
    cands.sort_by_key(|a| (m.rank(*a), labels_of(*a)));
    let decided: Vec<Result<Option<LinearPrime>, PrimesError>> = cands
        .par_iter()
        .map(|&f| {
            let (i, j) = match side {
                Side::XSlice => (f, 0),
                Side::YSlice => (0, f),
            };
            let codim = m.rank(f);
            let mut lp = LinearPrime {
                i,
                j,
                codim,
                tag: PrimeTag::Minimal,
                maximal_ideal: m.closure(f) == full && codim == m.rank_total(),
                certificate: None,
            };
            let mut p = pi.prime_generators(i, j);
            p.extend(var_polys.iter().cloned());
            match is_associated(&ideal, &p)? {
                Some(w) => {
                    if !minimal.contains(&f) {
                        lp.tag = PrimeTag::Embedded;
                    }
                    lp.certificate = Some(w.format(k, &names));
                    Ok(Some(lp))
                }
                None => Ok(None),
            }
        })
        .collect();
    let mut out = Vec::new();
    for r in decided {
        if let Some(p) = r? {
            out.push(p);
        }
    }
    Ok(out)
}

/// One radical-membership witness of the minimal-prime certificate.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RadicalWitness {
    pub element: String,
    pub in_radical: bool,
    /// Smallest `e` with `h^e ∈ 𝔞`, when found by direct search.
    pub power: Option<u32>,
}

/// Certificate for `V(𝔞) = ⋃_{F cyclic} L_{F,F∁}`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MinPrimesCertificate {
    pub primes: Vec<LinearPrime>,
    /// `(generator label, F)`: the generator `fi gi` lies in `p_{F,F∁}`
    /// because `i ∈ F` (first factor) or `i ∉ F` (second factor).
    pub containments: Vec<(usize, String, &'static str)>,
    pub intersection: Vec<RadicalWitness>,
}

/// Certifies both inclusions of the minimal-prime theorem.
pub fn verify_min_primes<K: Field>(pi: &PairsIdeal<K>) -> Result<MinPrimesCertificate, PrimesError> {
    pi.require_no_loops()?;
    let k = pi.field();
    let nv = pi.nvars();
    let names = pi.spec().names().to_vec();
    let primes = minimal_primes(pi);
    let mut containments = Vec::new();
    for p in &primes {
        for i in 0..pi.n() {
            let side = if p.i & (1 << i) != 0 { "f" } else { "g" };
            containments.push((i + 1, format_set(p.i), side));
        }
    }
    let ideal = Ideal::new(k, nv, pi.generator_polys());
    let mut inter: Option<Ideal<K>> = None;
    for p in &primes {
        let q = Ideal::new(k, nv, pi.prime_generators(p.i, p.j));
        inter = Some(match inter {
            None => q,
            Some(acc) => acc.intersect(&q),
        });
    }
    let inter = inter.expect("at least one cyclic flat");
    let mut witnesses = Vec::new();
    for h in inter.basis() {
        let in_radical = ideal.radical_contains(&h)?;
        let mut power = None;
        let mut acc = h.clone();
        for e in 1..=(nv as u32 + 1) {
            if ideal.contains(&acc) {
                power = Some(e);
                break;
            }
            acc = acc.mul(k, &h).expect("same ring");
        }
        let w = RadicalWitness { element: h.format(k, &names), in_radical, power };
        if !in_radical {
            return Err(PrimesError::Verification(format!("{} is not in the radical of the ideal", w.element)));
        }
        witnesses.push(w);
    }
    Ok(MinPrimesCertificate { primes, containments, intersection: witnesses })
}

/// Checks `(𝔞 : J^∞) = p_{F,F∁}` for a cyclic flat `F`, where `J` is the
/// intersection of the other minimal primes; i.e. the `p_{F,F∁}`-primary
/// component of `𝔞` is the prime itself.
pub fn primary_component_is_prime<K: Field>(pi: &PairsIdeal<K>, f: Set) -> Result<bool, PrimesError> {
    let k = pi.field();
    let nv = pi.nvars();
    let g = pi.matroid().ground();
    let ideal = Ideal::new(k, nv, pi.generator_polys());
    let mut j: Option<Ideal<K>> = None;
    for &h in pi.matroid().cyclic_flats() {
        if h == f {
            continue;
        }
        let q = Ideal::new(k, nv, pi.prime_generators(h, g & !h));
        j = Some(match j {
            None => q,
            Some(acc) => acc.intersect(&q),
        });
    }
    let target = Ideal::new(k, nv, pi.prime_generators(f, g & !f));
    let sat = match j {
        None => ideal,
        Some(j) => ideal.saturate(&j.basis()),
    };
    Ok(sat.same_as(&target))
}

/// Result of the product-membership checks around uniform matroids.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct UniformReport {
    pub uniform: bool,
    /// Tuples `(i_1..i_r; a)` with `g_{i_1}⋯g_{i_r} f_a` tested.
    pub tuples_checked: usize,
    /// Failing tuples; an error for uniform matroids, informative otherwise.
    pub tuple_failures: Vec<(Vec<usize>, usize)>,
    pub basis_products_checked: usize,
    pub basis_failures: Vec<(Vec<usize>, usize)>,
}

impl UniformReport {
    pub fn lemma_holds(&self) -> bool {
        self.tuple_failures.is_empty()
    }
}

fn multisets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// Tests `g_{i_1}⋯g_{i_r} f_a ∈ 𝔞` for every multiset of size `r` and every
/// `a`, and `(∏_{i∈B} gi) f_a ∈ 𝔞` for every basis `B`, degreewise in
/// bidegree `(1, r)`.
pub fn uniform_checks<K: Field>(pi: &PairsIdeal<K>) -> UniformReport {
    let k = pi.field();
    let n = pi.n();
    let r = pi.r();
    let engine = GradedEngine::new(pi);
    let product = |idx: &[usize], a: usize| -> Poly<K> {
        let mut acc = pi.f(a).clone();
        for &i in idx {
            acc = acc.mul(k, pi.g(i)).expect("same ring");
        }
        acc
    };
    let tuples = multisets(n, r);
    let mut tuple_failures = Vec::new();
    let mut checked = 0;
    for t in &tuples {
        for a in 0..n {
            checked += 1;
            if !engine.contains(&product(t, a)) {
                tuple_failures.push((t.iter().map(|i| i + 1).collect(), a + 1));
            }
        }
    }
    let m = pi.matroid();
    let mut basis_failures = Vec::new();
    let mut basis_checked = 0;
    for b in 0..(1u32 << n) {
        if card(b) != r || !m.is_basis(b) {
            continue;
        }
        let idx: Vec<usize> = labels_of(b).iter().map(|l| l - 1).collect();
        for a in 0..n {
            basis_checked += 1;
            if !engine.contains(&product(&idx, a)) {
                basis_failures.push((labels_of(b), a + 1));
            }
        }
    }
    UniformReport {
        uniform: m.is_uniform(),
        tuples_checked: checked,
        tuple_failures,
        basis_products_checked: basis_checked,
        basis_failures,
    }
}

/// `codim p_{F,F∁} = 2 rank(F) − |F| + n − r`, checked against the rank of
/// the generating linear forms, for every cyclic flat.
pub fn codim_check<K: Field>(pi: &PairsIdeal<K>) -> Vec<(Set, usize, usize)> {
    let m = pi.matroid();
    let n = pi.n();
    let r = pi.r();
    let g = m.ground();
    m.cyclic_flats()
        .iter()
        .map(|&f| {
            let formula = 2 * m.rank(f) + n - card(f) - r;
            let actual = linear_rank(pi.field(), &pi.prime_generators(f, g & !f), pi.nvars());
            (f, formula, actual)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::fixtures;
    use crate::matroid::set_of;
    use crate::pairs::LoopPolicy;

    fn pairs(f: fixtures::Fixture) -> PairsIdeal<Rationals> {
        PairsIdeal::build(&f.realization(&Rationals).unwrap(), LoopPolicy::Reject).unwrap()
    }

    #[test]
    fn principal_ideal_associatedness() {
        let k = Rationals;
        let x = Poly::var(&k, 0, 2);
        let y = Poly::var(&k, 1, 2);
        let i = Ideal::new(&k, 2, vec![x.mul(&k, &y).unwrap()]);
        assert!(is_associated(&i, std::slice::from_ref(&x)).unwrap().is_some());
        assert!(is_associated(&i, &[x.clone(), y.clone()]).unwrap().is_none());
        assert_eq!(is_associated(&i, &[x.add(&k, &y).unwrap()]), Err(PrimesError::NotContained));
    }

    #[test]
    fn u12_minimal_primes_certified() {
        let p = pairs(fixtures::uniform(1, 2));
        let cert = verify_min_primes(&p).unwrap();
        assert_eq!(cert.primes.len(), 2);
        assert!(cert.intersection.iter().all(|w| w.in_radical));
    }

    #[test]
    fn a3_codims_and_components() {
        let p = pairs(fixtures::a3());
        for (_, formula, actual) in codim_check(&p) {
            assert_eq!(formula, actual);
        }
        let tri = p.matroid().minimal_nonempty_cyclic_flats()[0];
        assert!(primary_component_is_prime(&p, tri).unwrap());
    }

    #[test]
    fn u24_products() {
        let p = pairs(fixtures::uniform(2, 4));
        let rep = uniform_checks(&p);
        assert!(rep.uniform);
        assert!(rep.lemma_holds());
        assert_eq!(rep.tuples_checked, 10 * 4);
        let ass = associated_primes(&p, false).unwrap();
        let got: Vec<(Set, Set)> = ass.iter().map(|q| (q.i, q.j)).collect();
        let all = set_of(&[1, 2, 3, 4]);
        assert_eq!(got.len(), 3);
        for want in [(all, 0), (0, all), (all, all)] {
            assert!(got.contains(&want));
        }
    }
}
