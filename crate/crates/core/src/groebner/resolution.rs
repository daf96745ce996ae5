//! Schreyer resolutions and minimal graded Betti numbers.
//!
//! Level `p` of the frame is a Gröbner basis of the `p`-th syzygy module for
//! the order induced from level `p - 1`. Each level keeps, for every basis
//! element `a`, only the S-pair syzygies `σ_ab` whose lead multiplier
//! `lcm/lm_a` is divisibility-minimal; by Schreyer's theorem these still form
//! a Gröbner basis. The resulting free resolution is usually not minimal, so
//! Betti numbers are read off as the homology of `F ⊗ k`, which only sees the
//! scalar entries between basis elements of equal bidegree.

use std::collections::{BTreeMap, BTreeSet};

use super::{GroebnerBasis, ModVec, ModuleRing, Reducer, TermOrder};
use crate::betti::{BettiTable, Method, Target};
use crate::field::Field;
use crate::linalg::{rank_of, SparseVec};
use crate::pairs::PairsIdeal;
use crate::poly::{Monomial, Poly};

/// Bidegree of a monomial: degree in the first `r` variables, then the rest.
fn bideg(m: &Monomial, r: usize, nvars: usize) -> (usize, usize) {
    (m.partial_degree(0, r), m.partial_degree(r, nvars))
}

#[derive(Clone, Debug)]
pub struct Level<K: Field> {
    /// Images of the basis elements of this level in the previous one.
    pub elems: Vec<ModVec<K>>,
    pub degrees: Vec<(usize, usize)>,
    tlm: Vec<Monomial>,
}

impl<K: Field> Level<K> {
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    fn order(&self) -> TermOrder {
        TermOrder::Schreyer {
            shifts: self.degrees.iter().map(|&(i, j)| (i + j) as i64).collect(),
            tlm: self.tlm.clone(),
        }
    }
}

/// A (generally non-minimal) free resolution `… → F_1 → F_0` of `F_0 / M`.
#[derive(Clone, Debug)]
pub struct SchreyerResolution<K: Field> {
    k: K,
    nvars: usize,
    levels: Vec<Level<K>>,
}

impl<K: Field> SchreyerResolution<K> {
    /// Resolution of `S/I` for a bihomogeneous ideal; the first `r`
    /// variables carry bidegree `(1,0)` and the others `(0,1)`.
    pub fn of_ideal(k: &K, nvars: usize, r: usize, gens: &[Poly<K>]) -> Self {
        let rows: Vec<Vec<Poly<K>>> = gens.iter().map(|g| vec![g.clone()]).collect();
        Self::of_module(k, nvars, r, vec![(0, 0)], &rows)
    }

    /// Resolution of `F_0 / M` where `F_0` has basis elements of the given
    /// bidegrees and `M` is generated by bihomogeneous vectors.
    pub fn of_module(k: &K, nvars: usize, r: usize, shifts: Vec<(usize, usize)>, gens: &[Vec<Poly<K>>]) -> Self {
        let f0 = Level { elems: Vec::new(), tlm: vec![Monomial::one(); shifts.len()], degrees: shifts };
        let ring0 = ModuleRing::new(k, nvars, f0.len(), f0.order());
        let vecs: Vec<ModVec<K>> = gens.iter().map(|g| ring0.from_polys(g)).collect();
        let gb = GroebnerBasis::compute(&ring0, &vecs);
        let mut levels = vec![f0];
        let mut elems: Vec<ModVec<K>> = gb.elements().cloned().collect();
        loop {
            let prev = levels.last().expect("level 0");
            let level = Self::make_level(nvars, r, prev, elems);
            if level.is_empty() {
                break;
            }
            let ring_prev = ModuleRing::new(k, nvars, prev.len(), prev.order());
            elems = Self::syzygies_of_level(&ring_prev, nvars, &level);
            levels.push(level);
        }
        SchreyerResolution { k: k.clone(), nvars, levels }
    }

    /// Sorts the new basis by lead position, then by decreasing lex lead
    /// monomial, and records degrees and total lead monomials.
    fn make_level(nvars: usize, r: usize, prev: &Level<K>, mut elems: Vec<ModVec<K>>) -> Level<K> {
        elems.sort_by(|a, b| {
            let (la, lb) = (a.lead().expect("nonzero"), b.lead().expect("nonzero"));
            la.1.cmp(&lb.1).then_with(|| lb.0.cmp_lex(&la.0))
        });
        let mut degrees = Vec::with_capacity(elems.len());
        let mut tlm = Vec::with_capacity(elems.len());
        for e in &elems {
            let (m, pos, _) = e.lead().expect("nonzero");
            let (di, dj) = bideg(m, r, nvars);
            let (pi, pj) = prev.degrees[*pos as usize];
            degrees.push((di + pi, dj + pj));
            tlm.push(m.mul(&prev.tlm[*pos as usize]));
        }
        Level { elems, degrees, tlm }
    }

    fn syzygies_of_level(ring_prev: &ModuleRing<K>, nvars: usize, level: &Level<K>) -> Vec<ModVec<K>> {
        let k = &ring_prev.k;
        let ring = ModuleRing::new(k, nvars, level.len(), level.order());
        let reducers: Vec<Reducer<K>> = level.elems.iter().map(|e| Reducer::new(k, e.clone())).collect();
        let mut out = Vec::new();
        for a in 0..reducers.len() {
            let ra = &reducers[a];
            // Divisibility-minimal multipliers lcm/lm_a over b > a.
            let mut cands: Vec<(Monomial, usize)> = Vec::new();
            for (b, rb) in reducers.iter().enumerate().skip(a + 1) {
                if rb.pos == ra.pos {
                    cands.push((ra.lm.quotient(&ra.lm.lcm(&rb.lm)).expect("divides"), b));
                }
            }
            cands.sort_by(|x, y| x.0.degree().cmp(&y.0.degree()).then_with(|| y.0.cmp_degrevlex(&x.0)).then(x.1.cmp(&y.1)));
            let mut chosen: Vec<(Monomial, usize)> = Vec::new();
            for (m, b) in cands {
                if !chosen.iter().any(|(c, _)| c.divides(&m)) {
                    chosen.push((m, b));
                }
            }
            for (ma, b) in chosen {
                let rb = &reducers[b];
                let lcm = ma.mul(&ra.lm);
                let mb = rb.lm.quotient(&lcm).expect("divides");
                // s = ca * ma * E_a - cb * mb * E_b with unit leading coefficients.
                let sa = ring_prev.scale_mul(&ra.v, &ra.lc_inv, &ma);
                let s = ModVec { terms: ring_prev.sub_mul(&sa.terms, &rb.lc_inv, &mb, &rb.v.terms) };
                let (rem, quots) = ring_prev.reduce_with_quotients(&s, &reducers);
                assert!(rem.is_zero(), "Schreyer frame level is not a Gröbner basis");
                let mut terms = vec![(ma, a as u32, ra.lc_inv.clone()), (mb, b as u32, k.neg(&rb.lc_inv))];
                for (gi, c, q) in quots {
                    terms.push((q, gi as u32, k.neg(&c)));
                }
                let sigma = ring.vector(terms);
                debug_assert_eq!(sigma.lead().map(|t| (t.0, t.1)), Some((ma, a as u32)));
                out.push(ring.monic(sigma));
            }
        }
        out
    }

    pub fn field(&self) -> &K {
        &self.k
    }

    /// Ranks of `F_0, F_1, …` in the (non-minimal) frame.
    pub fn ranks(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    pub fn levels(&self) -> &[Level<K>] {
        &self.levels
    }

    /// Length of the frame (index of the last nonzero free module).
    pub fn frame_length(&self) -> usize {
        self.levels.len() - 1
    }

    /// `d_p` entries as polynomials: column `a` of level `p` is the image of
    /// its basis element.
    pub fn differential(&self, p: usize) -> Vec<Vec<Poly<K>>> {
        let rank_prev = self.levels[p - 1].len();
        self.levels[p]
            .elems
            .iter()
            .map(|e| (0..rank_prev as u32).map(|i| e.component(&self.k, i, self.nvars)).collect())
            .collect()
    }

    /// Checks `d_(p-1) ∘ d_p = 0` for every `p`.
    pub fn is_complex(&self) -> bool {
        let k = &self.k;
        for p in 2..self.levels.len() {
            let prev = self.differential(p - 1);
            let width = self.levels[p - 2].len();
            for col in self.differential(p) {
                for i in 0..width {
                    let mut acc = Poly::zero(self.nvars);
                    for (a, c) in col.iter().enumerate() {
                        if !c.is_zero() {
                            acc = acc.add(k, &c.mul(k, &prev[a][i]).expect("same ring")).expect("same ring");
                        }
                    }
                    if !acc.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Rank of the scalar part of `d_p` in one bidegree.
    fn scalar_rank(&self, p: usize, d: (usize, usize)) -> usize {
        if p == 0 || p >= self.levels.len() {
            return 0;
        }
        let prev = &self.levels[p - 1];
        let rows: Vec<SparseVec<K::Elem>> = self.levels[p]
            .elems
            .iter()
            .zip(&self.levels[p].degrees)
            .filter(|(_, dd)| **dd == d)
            .map(|(e, _)| {
                let mut v: SparseVec<K::Elem> = e
                    .terms
                    .iter()
                    .filter(|t| t.0.is_one() && prev.degrees[t.1 as usize] == d)
                    .map(|t| (t.1 as usize, t.2.clone()))
                    .collect();
                v.sort_by_key(|x| x.0);
                v
            })
            .collect();
        rank_of(&self.k, rows)
    }

    fn counts(&self) -> BTreeMap<(usize, (usize, usize)), usize> {
        let mut c = BTreeMap::new();
        for (p, l) in self.levels.iter().enumerate() {
            for d in &l.degrees {
                *c.entry((p, *d)).or_insert(0) += 1;
            }
        }
        c
    }

    /// Minimal Betti numbers `dim Tor_p(F_0/M, k)_(i,j)` keyed by `(p, i, j)`.
    pub fn betti_quotient(&self) -> BTreeMap<(usize, usize, usize), usize> {
        let counts = self.counts();
        let degrees: BTreeSet<(usize, usize)> = counts.keys().map(|k| k.1).collect();
        let mut out = BTreeMap::new();
        for d in degrees {
            for p in 0..self.levels.len() {
                let n = counts.get(&(p, d)).copied().unwrap_or(0);
                if n == 0 {
                    continue;
                }
                let b = n - self.scalar_rank(p, d) - self.scalar_rank(p + 1, d);
                if b > 0 {
                    out.insert((p, d.0, d.1), b);
                }
            }
        }
        out
    }

    /// Minimal Betti numbers `dim Tor_p(M, k)_(i,j)` of the submodule itself:
    /// the homology of the truncated complex `F_{≥1}`.
    pub fn betti_module(&self) -> BTreeMap<(usize, usize, usize), usize> {
        let counts = self.counts();
        let degrees: BTreeSet<(usize, usize)> = counts.keys().map(|k| k.1).collect();
        let mut out = BTreeMap::new();
        for d in degrees {
            for p in 1..self.levels.len() {
                let n = counts.get(&(p, d)).copied().unwrap_or(0);
                if n == 0 {
                    continue;
                }
                let incoming = if p == 1 { 0 } else { self.scalar_rank(p, d) };
                let b = n - incoming - self.scalar_rank(p + 1, d);
                if b > 0 {
                    out.insert((p - 1, d.0, d.1), b);
                }
            }
        }
        out
    }

    /// Projective dimension of `F_0/M`.
    pub fn pdim_quotient(&self) -> usize {
        self.betti_quotient().keys().map(|k| k.0).max().unwrap_or(0)
    }
}

/// Betti table of `S/𝔞` from a Schreyer resolution, with its projective
/// dimension. Unlike the Koszul table it covers every bidegree.
pub fn pairs_betti<K: Field>(pi: &PairsIdeal<K>) -> (BettiTable, usize) {
    let res = SchreyerResolution::of_ideal(pi.field(), pi.nvars(), pi.r(), &pi.generator_polys());
    let mut t = BettiTable::new(Target::Quotient, Method::Resolution, None);
    for ((p, i, j), v) in res.betti_quotient() {
        t.set(p, i, j, v);
    }
    let pdim = t.max_p().unwrap_or(0);
    (t, pdim)
}

/// Generators of the syzygies of the vectors `u_1..u_m ∈ S^a` (each given by
/// its `a` components), as `m`-tuples.
pub fn syzygies<K: Field>(k: &K, nvars: usize, vectors: &[Vec<Poly<K>>]) -> Vec<Vec<Poly<K>>> {
    let m = vectors.len();
    let a = vectors.first().map_or(0, |v| v.len());
    let ring = ModuleRing::new(k, nvars, a + m, TermOrder::Pot { mono: crate::poly::MonomialOrder::Degrevlex });
    let gens: Vec<ModVec<K>> = vectors
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let mut terms: Vec<(Monomial, u32, K::Elem)> = Vec::new();
            for (c, p) in u.iter().enumerate() {
                terms.extend(p.terms().iter().map(|(mm, x)| (*mm, c as u32, x.clone())));
            }
            terms.push((Monomial::one(), (a + i) as u32, k.one()));
            ring.vector(terms)
        })
        .collect();
    let gb = GroebnerBasis::compute(&ring, &gens);
    gb.elements()
        .filter(|v| v.lead().is_some_and(|t| t.1 as usize >= a))
        .map(|v| (0..m).map(|i| v.component(k, (a + i) as u32, nvars)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn koszul_complex_on_three_variables() {
        let k = Rationals;
        let gens: Vec<Poly<Rationals>> = (0..3).map(|i| Poly::var(&k, i, 3)).collect();
        let res = SchreyerResolution::of_ideal(&k, 3, 3, &gens);
        assert!(res.is_complex());
        let b = res.betti_quotient();
        assert_eq!(b.get(&(0, 0, 0)), Some(&1));
        assert_eq!(b.get(&(1, 1, 0)), Some(&3));
        assert_eq!(b.get(&(2, 2, 0)), Some(&3));
        assert_eq!(b.get(&(3, 3, 0)), Some(&1));
        assert_eq!(res.pdim_quotient(), 3);
    }

    #[test]
    fn twisted_cubic_betti() {
        let k = PrimeField::new(32003).unwrap();
        let m = |e: &[u32]| Monomial::from_exponents(e).unwrap();
        let p = |a: &[u32], b: &[u32]| Poly::from_terms(&k, 4, vec![(m(a), 1u64), (m(b), 32002u64)]);
        let gens = vec![p(&[1, 0, 1, 0], &[0, 2, 0, 0]), p(&[1, 0, 0, 1], &[0, 1, 1, 0]), p(&[0, 1, 0, 1], &[0, 0, 2, 0])];
        let res = SchreyerResolution::of_ideal(&k, 4, 4, &gens);
        assert!(res.is_complex());
        let b = res.betti_quotient();
        let total = |p: usize| b.iter().filter(|(key, _)| key.0 == p).map(|(_, v)| *v).sum::<usize>();
        assert_eq!((total(0), total(1), total(2), total(3)), (1, 3, 2, 0));
        assert_eq!(b.get(&(2, 3, 0)), Some(&2));
        // The ideal itself: 3 quadrics and 2 linear syzygies.
        let bm = res.betti_module();
        assert_eq!(bm.get(&(0, 2, 0)), Some(&3));
        assert_eq!(bm.get(&(1, 3, 0)), Some(&2));
    }

    #[test]
    fn syzygies_of_two_variables() {
        let k = Rationals;
        let x = Poly::var(&k, 0, 2);
        let y = Poly::var(&k, 1, 2);
        let syz = syzygies(&k, 2, &[vec![x.clone()], vec![y.clone()]]);
        assert_eq!(syz.len(), 1);
        let s = &syz[0];
        let check = s[0].mul(&k, &x).unwrap().add(&k, &s[1].mul(&k, &y).unwrap()).unwrap();
        assert!(check.is_zero());
    }
}
