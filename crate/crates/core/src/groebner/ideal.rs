//! Ideal operations on top of module Gröbner bases.

use thiserror::Error;

use super::{GroebnerBasis, ModVec, ModuleRing, TermOrder};
use crate::field::Field;
use crate::poly::{Monomial, MonomialOrder, Poly, MAX_VARS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error("an auxiliary variable is needed but the ring already has {0} variables")]
    NoRoomForAuxVariable(usize),
    #[error("polynomial lives in a ring with {got} variables, expected {expected}")]
    Ring { got: usize, expected: usize },
}

/// An ideal of `k[z_0..z_(nvars-1)]` together with its reduced Gröbner basis.
#[derive(Clone, Debug)]
pub struct Ideal<K: Field> {
    k: K,
    nvars: usize,
    gens: Vec<Poly<K>>,
    gb: GroebnerBasis<K>,
}

impl<K: Field> Ideal<K> {
    /// Builds the ideal and its degrevlex Gröbner basis.
    pub fn new(k: &K, nvars: usize, gens: Vec<Poly<K>>) -> Self {
        Self::with_order(k, nvars, gens, MonomialOrder::Degrevlex)
    }

    pub fn with_order(k: &K, nvars: usize, gens: Vec<Poly<K>>, mono: MonomialOrder) -> Self {
        let ring = ModuleRing::new(k, nvars, 1, TermOrder::ideal(mono));
        let vecs: Vec<ModVec<K>> = gens.iter().map(|g| ring.embed(g, 0)).collect();
        let gb = GroebnerBasis::compute(&ring, &vecs);
        Ideal { k: k.clone(), nvars, gens, gb }
    }

    pub fn zero(k: &K, nvars: usize) -> Self {
        Self::new(k, nvars, Vec::new())
    }

    pub fn field(&self) -> &K {
        &self.k
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Poly<K>] {
        &self.gens
    }

    pub fn gb(&self) -> &GroebnerBasis<K> {
        &self.gb
    }

    /// The reduced Gröbner basis as polynomials.
    pub fn basis(&self) -> Vec<Poly<K>> {
        self.gb.elements().map(|v| v.component(&self.k, 0, self.nvars)).collect()
    }

    fn ring(&self) -> &ModuleRing<K> {
        &self.gb.ring
    }

    pub fn normal_form(&self, p: &Poly<K>) -> Poly<K> {
        let v = self.gb.normal_form(&self.ring().embed(p, 0));
        v.component(&self.k, 0, self.nvars)
    }

    pub fn contains(&self, p: &Poly<K>) -> bool {
        self.gb.contains(&self.ring().embed(p, 0))
    }

    pub fn contains_ideal(&self, other: &Ideal<K>) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn same_as(&self, other: &Ideal<K>) -> bool {
        self.contains_ideal(other) && other.contains_ideal(self)
    }

    pub fn is_unit(&self) -> bool {
        self.gb.is_whole()
    }

    pub fn is_zero(&self) -> bool {
        self.gb.is_empty()
    }

    /// `I + J`.
    pub fn sum(&self, other: &[Poly<K>]) -> Ideal<K> {
        let mut g = self.gens.clone();
        g.extend(other.iter().cloned());
        Ideal::new(&self.k, self.nvars, g)
    }

    /// `(I : h)`, read off the position-over-term basis of the module
    /// generated by `h e0 + e1` and `I e0`.
    pub fn colon_poly(&self, h: &Poly<K>) -> Ideal<K> {
        self.colon(std::slice::from_ref(h))
    }

    /// `(I : (h_1, ..., h_m))` from one module basis over `S^(m+1)`: the
    /// generators are `∑ h_k e_k + e_m` and `g e_k` for `g ∈ I`, `k < m`.
    pub fn colon(&self, hs: &[Poly<K>]) -> Ideal<K> {
        let hs: Vec<&Poly<K>> = hs.iter().filter(|h| !h.is_zero()).collect();
        if hs.is_empty() {
            return Ideal::new(&self.k, self.nvars, vec![Poly::one(&self.k, self.nvars)]);
        }
        let m = hs.len();
        let ring = ModuleRing::new(&self.k, self.nvars, m + 1, TermOrder::Pot { mono: MonomialOrder::Degrevlex });
        let one = self.k.one();
        let mut gens = Vec::new();
        let mut first: Vec<(Monomial, u32, K::Elem)> = vec![(Monomial::one(), m as u32, one)];
        for (kk, h) in hs.iter().enumerate() {
            first.extend(h.terms().iter().map(|(mm, c)| (*mm, kk as u32, c.clone())));
        }
        gens.push(ring.vector(first));
        for g in self.gb.elements() {
            for kk in 0..m {
                gens.push(ring.vector(g.terms.iter().map(|t| (t.0, kk as u32, t.2.clone()))));
            }
        }
        let gb = GroebnerBasis::compute(&ring, &gens);
        let out: Vec<Poly<K>> = gb
            .elements()
            .filter(|v| v.lead().map(|t| t.1) == Some(m as u32))
            .map(|v| v.component(&self.k, m as u32, self.nvars))
            .collect();
        Ideal::new(&self.k, self.nvars, out)
    }

    /// `I ∩ J` from the module generated by `(f, f)` and `(g, 0)`.
    pub fn intersect(&self, other: &Ideal<K>) -> Ideal<K> {
        let ring = ModuleRing::new(&self.k, self.nvars, 2, TermOrder::Pot { mono: MonomialOrder::Degrevlex });
        let mut gens: Vec<ModVec<K>> = Vec::new();
        for f in &self.gens {
            gens.push(ring.from_polys(&[f.clone(), f.clone()]));
        }
        for g in &other.gens {
            gens.push(ring.embed(g, 0));
        }
        let gb = GroebnerBasis::compute(&ring, &gens);
        let out: Vec<Poly<K>> =
            gb.elements().filter(|v| v.lead().map(|t| t.1) == Some(1)).map(|v| v.component(&self.k, 1, self.nvars)).collect();
        Ideal::new(&self.k, self.nvars, out)
    }

    /// `I ∩ J` as `(t I + (1 − t) J) ∩ S`, eliminating an auxiliary variable.
    pub fn intersect_by_elimination(&self, other: &Ideal<K>) -> Result<Ideal<K>, IdealError> {
        let t = self.aux_var()?;
        let k = &self.k;
        let nv = t + 1;
        let tv = Poly::var(k, t, nv);
        let one_minus_t = Poly::one(k, nv).sub(k, &tv).expect("same ring");
        let mut gens = Vec::new();
        for f in &self.gens {
            gens.push(tv.mul(k, &widen(k, f, nv)).expect("same ring"));
        }
        for g in &other.gens {
            gens.push(one_minus_t.mul(k, &widen(k, g, nv)).expect("same ring"));
        }
        let big = Ideal::with_order(k, nv, gens, MonomialOrder::Elimination { block: 1 << t });
        let out: Vec<Poly<K>> =
            big.basis().into_iter().filter(|p| p.terms().iter().all(|(m, _)| m.exp(t) == 0)).map(|p| widen(k, &p, self.nvars)).collect();
        Ok(Ideal::new(k, self.nvars, out))
    }

    /// `(I : J^∞)`, iterating colons until they stabilize.
    pub fn saturate(&self, hs: &[Poly<K>]) -> Ideal<K> {
        let mut cur = self.clone();
        loop {
            let next = cur.colon(hs);
            if cur.contains_ideal(&next) {
                return cur;
            }
            cur = next;
        }
    }

    /// Whether `h ∈ √I`, using `1 ∈ I + (1 − t h)`.
    pub fn radical_contains(&self, h: &Poly<K>) -> Result<bool, IdealError> {
        let t = self.aux_var()?;
        let k = &self.k;
        let nv = t + 1;
        let mut gens: Vec<Poly<K>> = self.gens.iter().map(|g| widen(k, g, nv)).collect();
        let th = Poly::var(k, t, nv).mul(k, &widen(k, h, nv)).expect("same ring");
        gens.push(Poly::one(k, nv).sub(k, &th).expect("same ring"));
        Ok(Ideal::new(k, nv, gens).is_unit())
    }

    /// Krull dimension of `S/I` (`None` for the unit ideal): the largest set
    /// of variables containing the support of no leading monomial.
    pub fn krull_dim(&self) -> Option<usize> {
        if self.is_unit() {
            return None;
        }
        let leads: Vec<u32> = self.gb.leading_terms().iter().map(|(m, _)| m.support_mask()).collect();
        let mut best = 0;
        independent_sets(&leads, self.nvars, 0, 0, 0, &mut best);
        Some(best)
    }

    fn aux_var(&self) -> Result<usize, IdealError> {
        if self.nvars >= MAX_VARS {
            return Err(IdealError::NoRoomForAuxVariable(self.nvars));
        }
        Ok(self.nvars)
    }
}

fn independent_sets(leads: &[u32], nvars: usize, next: usize, set: u32, size: usize, best: &mut usize) {
    if size + (nvars - next) <= *best {
        return;
    }
    *best = (*best).max(size);
    for v in next..nvars {
        let s = set | (1 << v);
        if leads.iter().all(|&l| l & !s != 0) {
            independent_sets(leads, nvars, v + 1, s, size + 1, best);
        }
    }
}

/// Reinterprets a polynomial in a ring with a different number of variables
/// (only the variables it uses matter).
pub fn widen<K: Field>(k: &K, p: &Poly<K>, nvars: usize) -> Poly<K> {
    Poly::from_terms(k, nvars, p.terms().iter().cloned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn var(k: &Rationals, i: usize, nv: usize) -> Poly<Rationals> {
        Poly::var(k, i, nv)
    }

    #[test]
    fn colon_and_saturation_of_monomial_ideal() {
        let k = Rationals;
        let (x, y) = (var(&k, 0, 2), var(&k, 1, 2));
        let x2 = x.mul(&k, &x).unwrap();
        let xy = x.mul(&k, &y).unwrap();
        // I = (x^2, xy); I : x = (x, y); I : y^inf = (x).
        let i = Ideal::new(&k, 2, vec![x2.clone(), xy.clone()]);
        let c = i.colon_poly(&x);
        assert!(c.same_as(&Ideal::new(&k, 2, vec![x.clone(), y.clone()])));
        let s = i.saturate(std::slice::from_ref(&y));
        assert!(s.same_as(&Ideal::new(&k, 2, vec![x.clone()])));
        assert_eq!(i.krull_dim(), Some(1));
        assert!(i.radical_contains(&x).unwrap());
        assert!(!i.radical_contains(&y).unwrap());
    }

    #[test]
    fn intersection_routes_agree() {
        let k = PrimeField::new(101).unwrap();
        let nv = 3;
        let v = |i| Poly::var(&k, i, nv);
        let a = Ideal::new(&k, nv, vec![v(0), v(1)]);
        let b = Ideal::new(&k, nv, vec![v(1), v(2)]);
        let i1 = a.intersect(&b);
        let i2 = a.intersect_by_elimination(&b).unwrap();
        assert!(i1.same_as(&i2));
        let expected = Ideal::new(&k, nv, vec![v(1), v(0).mul(&k, &v(2)).unwrap()]);
        assert!(i1.same_as(&expected));
    }

    #[test]
    fn unit_and_dims() {
        let k = Rationals;
        let i = Ideal::new(&k, 3, vec![Poly::one(&k, 3)]);
        assert!(i.is_unit());
        assert_eq!(i.krull_dim(), None);
        assert_eq!(Ideal::zero(&k, 3).krull_dim(), Some(3));
    }
}
