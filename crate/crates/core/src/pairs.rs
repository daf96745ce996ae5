//! The ideal of pairs `(f1 g1, ..., fn gn)` of a realization.
//!
//! Coordinates are pinned: with `B` the RREF of the realization matrix and
//! `D` the matching basis of `W⊥`, `fi = ∑_k B[k,i] x_k` and
//! `gi = ∑_l D[l,i] y_l`. Pivot columns therefore give `f = x_k` and free
//! columns give `g = y_l`.

use thiserror::Error;

use crate::field::{Field, FieldDescriptor};
use crate::matroid::{format_set, labels_of, Matroid, Realization, Set};
use crate::poly::{Poly, PolyError, RingSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairsError {
    #[error("realization has loops at elements {0:?}; rerun with drop_loops to delete them")]
    Loops(Vec<usize>),
    #[error("the statement requires a matroid without loops or coloops (coloops: {0})")]
    Coloops(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// What to do with zero columns of the realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopPolicy {
    Reject,
    Drop,
    /// Keep them as zero forms (used for dual realizations, whose loops are
    /// the coloops of the original).
    Keep,
}

#[derive(Clone, Debug)]
pub struct PairsIdeal<K: Field> {
    field: K,
    realization: Realization<K>,
    matroid: Matroid,
    spec: RingSpec,
    f: Vec<Poly<K>>,
    g: Vec<Poly<K>>,
    products: Vec<Poly<K>>,
    components: Vec<Set>,
    dropped: Vec<usize>,
}

impl<K: Field> PairsIdeal<K> {
    pub fn build(re: &Realization<K>, policy: LoopPolicy) -> Result<Self, PairsError> {
        let loops = re.loops();
        let (re, dropped) = if loops.is_empty() {
            (re.clone(), Vec::new())
        } else {
            let labels: Vec<usize> = loops.iter().map(|&j| re.labels()[j]).collect();
            match policy {
                LoopPolicy::Reject => return Err(PairsError::Loops(labels)),
                LoopPolicy::Drop => {
                    log::warn!("deleting loops {labels:?}");
                    (re.drop_loops().expect("at least one column survives or matrix was empty"), labels)
                }
                LoopPolicy::Keep => (re.clone(), Vec::new()),
            }
        };
        let k = re.field().clone();
        let n = re.n();
        let r = re.rank();
        let spec = RingSpec::new(r, n, k.descriptor());
        let basis = re.basis();
        let dual = re.dual_matrix();
        let mut f = Vec::with_capacity(n);
        let mut g = Vec::with_capacity(n);
        let mut products = Vec::with_capacity(n);
        for i in 0..n {
            let fi = Poly::linear(&k, &basis.column(i), 0, n);
            let gi = Poly::linear(&k, &dual.column(i), r, n);
            products.push(fi.mul(&k, &gi)?);
            f.push(fi);
            g.push(gi);
        }
        let matroid = re.matroid();
        let components = matroid.components();
        Ok(PairsIdeal { field: k, realization: re, matroid, spec, f, g, products, components, dropped })
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn realization(&self) -> &Realization<K> {
        &self.realization
    }
    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }
    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }
    pub fn n(&self) -> usize {
        self.spec.n
    }
    pub fn r(&self) -> usize {
        self.spec.r
    }
    pub fn nvars(&self) -> usize {
        self.spec.n
    }
    /// Original labels of deleted loops.
    pub fn dropped_loops(&self) -> &[usize] {
        &self.dropped
    }

    pub fn f(&self, i: usize) -> &Poly<K> {
        &self.f[i]
    }
    pub fn g(&self, i: usize) -> &Poly<K> {
        &self.g[i]
    }
    pub fn fs(&self) -> &[Poly<K>] {
        &self.f
    }
    pub fn gs(&self) -> &[Poly<K>] {
        &self.g
    }

    /// Coefficients of `fi` on `x1..xr`.
    pub fn f_coeffs(&self, i: usize) -> Vec<K::Elem> {
        self.realization.basis().column(i)
    }

    /// Coefficients of `gi` on `y1..y(n-r)`.
    pub fn g_coeffs(&self, i: usize) -> Vec<K::Elem> {
        self.realization.dual_matrix().column(i)
    }

    /// All products `fi gi`, zero ones included, in ground-set order.
    pub fn products(&self) -> &[Poly<K>] {
        &self.products
    }

    /// The nonzero generators with their ground-set index.
    pub fn generators(&self) -> Vec<(usize, Poly<K>)> {
        self.products.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(|(i, p)| (i, p.clone())).collect()
    }

    pub fn generator_polys(&self) -> Vec<Poly<K>> {
        self.products.iter().filter(|p| !p.is_zero()).cloned().collect()
    }

    pub fn components(&self) -> &[Set] {
        &self.components
    }

    pub fn kappa(&self) -> usize {
        self.components.len()
    }

    /// One 0/1 coefficient vector per connected component.
    pub fn euler_vectors(&self) -> Vec<Vec<i64>> {
        self.components
            .iter()
            .map(|&c| (0..self.n()).map(|i| i64::from(c & (1 << i) != 0)).collect())
            .collect()
    }

    /// `∑ ci fi gi` for integer coefficients.
    pub fn combination(&self, c: &[i64]) -> Poly<K> {
        let k = &self.field;
        let mut acc = Poly::zero(self.n());
        for (ci, p) in c.iter().zip(&self.products) {
            acc = acc.add(k, &p.scale(k, &k.from_i64(*ci))).expect("same ring");
        }
        acc
    }

    /// Pairs ideal of the dual realization: the roles of `R` and `R⊥` swap.
    pub fn swap_roles(&self) -> Result<Self, PairsError> {
        Self::build(&self.realization.dual(), LoopPolicy::Keep)
    }

    /// Generators of `p_{I,J} = (fi : i ∈ I) + (gj : j ∈ J)`.
    pub fn prime_generators(&self, i: Set, j: Set) -> Vec<Poly<K>> {
        let mut out: Vec<Poly<K>> = Vec::new();
        for l in labels_of(i) {
            out.push(self.f[l - 1].clone());
        }
        for l in labels_of(j) {
            out.push(self.g[l - 1].clone());
        }
        out.retain(|p| !p.is_zero());
        out
    }

    pub fn require_no_loops(&self) -> Result<(), PairsError> {
        let l = self.matroid.loops();
        if l != 0 {
            return Err(PairsError::Loops(labels_of(l).iter().map(|&i| self.realization.labels()[i - 1]).collect()));
        }
        Ok(())
    }

    pub fn require_no_coloops(&self) -> Result<(), PairsError> {
        let c = self.matroid.coloops();
        if c != 0 {
            return Err(PairsError::Coloops(format_set(c)));
        }
        Ok(())
    }

    /// Euler-derivation statements are only canonically split in characteristic 0.
    pub fn char_warning(&self) -> bool {
        self.field.descriptor() != FieldDescriptor::Rational
    }

    pub fn format_generators(&self) -> Vec<String> {
        let names = self.spec.names();
        self.products.iter().map(|p| p.format(&self.field, names)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rational, Rationals};
    use crate::linalg::ExactMatrix;
    use crate::poly::Monomial;

    fn build(rows: &[Vec<i64>]) -> PairsIdeal<Rationals> {
        let re = Realization::new("t", ExactMatrix::from_i64(&Rationals, rows).unwrap()).unwrap();
        PairsIdeal::build(&re, LoopPolicy::Reject).unwrap()
    }

    #[test]
    fn u12_hand_computation() {
        let p = build(&[vec![1, 1]]);
        let k = Rationals;
        let x = Poly::var(&k, 0, 2);
        let y = Poly::var(&k, 1, 2);
        assert_eq!(p.f(0), &x);
        assert_eq!(p.f(1), &x);
        assert_eq!(p.g(0), &y.neg(&k));
        assert_eq!(p.g(1), &y);
        let xy = Poly::monomial(&k, Rational::one(), Monomial::from_exponents(&[1, 1]).unwrap(), 2);
        assert_eq!(p.products()[1], xy);
        assert_eq!(p.format_generators(), vec!["-x1*y1", "x1*y1"]);
        let s = p.swap_roles().unwrap();
        assert_eq!(s.generator_polys().len(), 2);
    }

    #[test]
    fn boolean_has_zero_ideal() {
        let p = build(&[vec![1, 0], vec![0, 1]]);
        assert!(p.generators().is_empty());
        assert_eq!(p.euler_vectors(), vec![vec![1, 0], vec![0, 1]]);
        assert!(p.require_no_coloops().is_err());
    }

    #[test]
    fn loops_rejected_or_dropped() {
        let re = Realization::new("t", ExactMatrix::from_i64(&Rationals, &[vec![1, 0, 1]]).unwrap()).unwrap();
        assert_eq!(PairsIdeal::build(&re, LoopPolicy::Reject).unwrap_err(), PairsError::Loops(vec![2]));
        let p = PairsIdeal::build(&re, LoopPolicy::Drop).unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(p.dropped_loops(), &[2]);
    }

    #[test]
    fn euler_relation_on_components() {
        let p = build(&[vec![1, 0, 1, 0, 0], vec![0, 1, 1, 0, 0], vec![0, 0, 0, 1, 1]]);
        assert_eq!(p.kappa(), 2);
        for v in p.euler_vectors() {
            assert!(p.combination(&v).is_zero());
        }
    }
}
