//! Matroids of matrix realizations.
//!
//! Subsets of the ground set are bitmasks (`Set`), bit `i` standing for the
//! 1-based element `i + 1`. The full rank table over all `2^n` subsets is
//! computed once, so every query afterwards is a table lookup.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::field::Field;
use crate::linalg::{dense_to_sparse, ExactMatrix, LinalgError, Rref, SparseEchelon};

pub type Set = u32;

/// Largest ground set for which the exhaustive rank table is built.
pub const MAX_GROUND: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("realization matrix is empty")]
    Empty,
    #[error("ground set of size {0} exceeds the supported maximum {MAX_GROUND}")]
    TooLarge(usize),
    #[error("{0} is not a flat")]
    NotAFlat(String),
    #[error("the two realizations have different matroids")]
    Mismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub fn full_set(n: usize) -> Set {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Builds a set from 1-based labels.
pub fn set_of(labels: &[usize]) -> Set {
    labels.iter().fold(0, |s, &l| s | (1 << (l - 1)))
}

/// 1-based labels of a set, increasing.
pub fn labels_of(s: Set) -> Vec<usize> {
    (0..32).filter(|i| s & (1 << i) != 0).map(|i| i + 1).collect()
}

pub fn card(s: Set) -> usize {
    s.count_ones() as usize
}

/// Renders a set as `{1,2,4,6}`.
pub fn format_set(s: Set) -> String {
    let inner: Vec<String> = labels_of(s).iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn elements(s: Set) -> impl Iterator<Item = usize> {
    (0..32usize).filter(move |i| s & (1 << i) != 0)
}

/// A matroid given by its complete rank table.
pub struct Matroid {
    n: usize,
    ranks: Vec<u8>,
    circuits: OnceLock<Vec<Set>>,
    flats: OnceLock<Vec<Set>>,
    cyclic: OnceLock<Vec<Set>>,
}

impl Clone for Matroid {
    fn clone(&self) -> Self {
        Matroid::from_rank_table(self.n, self.ranks.clone())
    }
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.ranks == other.ranks
    }
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matroid(n={}, rank={})", self.n, self.rank_total())
    }
}

impl Matroid {
    /// `ranks[s]` is the rank of subset `s`; the table must have `2^n` entries.
    pub fn from_rank_table(n: usize, ranks: Vec<u8>) -> Self {
        assert_eq!(ranks.len(), 1usize << n, "rank table size");
        Matroid { n, ranks, circuits: OnceLock::new(), flats: OnceLock::new(), cyclic: OnceLock::new() }
    }

    /// The column matroid of a matrix.
    pub fn of_matrix<K: Field>(m: &ExactMatrix<K>) -> Result<Self, MatroidError> {
        let n = m.ncols();
        if n == 0 {
            return Err(MatroidError::Empty);
        }
        if n > MAX_GROUND {
            return Err(MatroidError::TooLarge(n));
        }
        let k = m.field();
        let cols: Vec<_> = (0..n).map(|j| dense_to_sparse(k, &m.column(j))).collect();
        let mut ranks = vec![0u8; 1 << n];
        for s in 1..(1usize << n) {
            let mut e = SparseEchelon::new(k);
            for j in elements(s as Set) {
                e.insert(cols[j].clone());
            }
            ranks[s] = e.rank() as u8;
        }
        Ok(Self::from_rank_table(n, ranks))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ground(&self) -> Set {
        full_set(self.n)
    }

    pub fn rank(&self, s: Set) -> usize {
        self.ranks[s as usize] as usize
    }

    pub fn rank_total(&self) -> usize {
        self.rank(self.ground())
    }

    pub fn rank_table(&self) -> &[u8] {
        &self.ranks
    }

    /// `{e : rank(S ∪ e) = rank(S)}`.
    pub fn closure(&self, s: Set) -> Set {
        let r = self.rank(s);
        (0..self.n).filter(|&e| self.rank(s | (1 << e)) == r).fold(s, |acc, e| acc | (1 << e))
    }

    pub fn is_flat(&self, s: Set) -> bool {
        self.closure(s) == s
    }

    pub fn is_independent(&self, s: Set) -> bool {
        self.rank(s) == card(s)
    }

    pub fn is_basis(&self, s: Set) -> bool {
        card(s) == self.rank_total() && self.is_independent(s)
    }

    /// Some basis, lexicographically first.
    pub fn a_basis(&self) -> Set {
        let mut b = 0;
        for e in 0..self.n {
            if self.is_independent(b | (1 << e)) {
                b |= 1 << e;
            }
        }
        b
    }

    pub fn loops(&self) -> Set {
        (0..self.n).filter(|&e| self.rank(1 << e) == 0).fold(0, |a, e| a | (1 << e))
    }

    /// Elements lying in every basis.
    pub fn coloops(&self) -> Set {
        let g = self.ground();
        let r = self.rank_total();
        (0..self.n).filter(|&e| self.rank(g & !(1 << e)) < r).fold(0, |a, e| a | (1 << e))
    }

    /// The dual matroid, from `r*(S) = |S| + r(E∖S) − r(E)`.
    pub fn dual(&self) -> Matroid {
        let g = self.ground();
        let r = self.rank_total();
        let ranks = (0..(1usize << self.n))
            .map(|s| (card(s as Set) + self.rank(g & !(s as Set)) - r) as u8)
            .collect();
        Matroid::from_rank_table(self.n, ranks)
    }

    /// Minimal dependent sets, in increasing numeric order of bitmask.
    pub fn circuits(&self) -> &[Set] {
        self.circuits.get_or_init(|| {
            (1..(1u64 << self.n))
                .map(|s| s as Set)
                .filter(|&s| {
                    let c = card(s);
                    self.rank(s) + 1 == c && elements(s).all(|e| self.rank(s & !(1 << e)) + 1 == c)
                })
                .collect()
        })
    }

    /// All flats, sorted by rank and then by bitmask.
    pub fn flats(&self) -> &[Set] {
        self.flats.get_or_init(|| {
            let mut v: Vec<Set> = (0..(1u64 << self.n)).map(|s| s as Set).filter(|&s| self.is_flat(s)).collect();
            v.sort_by_key(|&s| (self.rank(s), s));
            v
        })
    }

    /// Union of the circuits contained in a flat `f`.
    pub fn z(&self, f: Set) -> Result<Set, MatroidError> {
        if !self.is_flat(f) {
            return Err(MatroidError::NotAFlat(format_set(f)));
        }
        Ok(self.circuits().iter().filter(|&&c| c & !f == 0).fold(0, |a, &c| a | c))
    }

    /// Flats whose complement is a flat of the dual, sorted by rank then bitmask.
    pub fn cyclic_flats(&self) -> &[Set] {
        self.cyclic.get_or_init(|| {
            let d = self.dual();
            let g = self.ground();
            self.flats().iter().copied().filter(|&f| d.is_flat(g & !f)).collect()
        })
    }

    pub fn is_cyclic(&self, s: Set) -> bool {
        // A set is cyclic iff no element is a coloop of the restriction.
        let r = self.rank(s);
        elements(s).all(|e| self.rank(s & !(1 << e)) == r)
    }

    /// Connected components, as the classes of "lie on a common circuit"
    /// (singletons included), ordered by least element.
    pub fn components(&self) -> Vec<Set> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for &c in self.circuits() {
            let mut it = elements(c);
            let first = it.next().expect("circuits are nonempty");
            for e in it {
                let (a, b) = (find(&mut parent, first), find(&mut parent, e));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut comps: Vec<Set> = Vec::new();
        let mut root_of = vec![usize::MAX; self.n];
        for e in 0..self.n {
            let r = find(&mut parent, e);
            if root_of[r] == usize::MAX {
                root_of[r] = comps.len();
                comps.push(0);
            }
            comps[root_of[r]] |= 1 << e;
        }
        comps
    }

    pub fn kappa(&self) -> usize {
        self.components().len()
    }

    /// Pairs `(F, G)` of flats of the matroid and its dual covering the ground set.
    pub fn biflats(&self) -> Vec<(Set, Set)> {
        let d = self.dual();
        let g = self.ground();
        let mut out = Vec::new();
        for &f in self.flats() {
            for &h in d.flats() {
                if f | h == g {
                    out.push((f, h));
                }
            }
        }
        out
    }

    pub fn is_uniform(&self) -> bool {
        let r = self.rank_total();
        (0..(1u64 << self.n)).all(|s| self.rank(s as Set) == card(s as Set).min(r))
    }

    pub fn minimal_nonempty_cyclic_flats(&self) -> Vec<Set> {
        let nonempty: Vec<Set> = self.cyclic_flats().iter().copied().filter(|&f| f != 0).collect();
        nonempty
            .iter()
            .copied()
            .filter(|&f| !nonempty.iter().any(|&h| h != f && h & !f == 0))
            .collect()
    }

    /// No loops and no parallel pairs.
    pub fn is_simple(&self) -> bool {
        self.loops() == 0 && (0..self.n).all(|a| (a + 1..self.n).all(|b| self.rank((1 << a) | (1 << b)) == 2))
    }
}

/// A matrix over a field whose row space realizes a matroid. Ground-set
/// elements are the columns.
#[derive(Clone, Debug)]
pub struct Realization<K: Field> {
    name: String,
    matrix: ExactMatrix<K>,
    /// Original 1-based label of each column, kept when loops are deleted.
    labels: Vec<usize>,
    rref: Rref<K>,
    dual: ExactMatrix<K>,
}

impl<K: Field> Realization<K> {
    pub fn new(name: impl Into<String>, matrix: ExactMatrix<K>) -> Result<Self, MatroidError> {
        if matrix.nrows() == 0 {
            return Err(MatroidError::Empty);
        }
        let n = matrix.ncols();
        Self::with_labels(name, matrix, (1..=n).collect())
    }

    fn with_labels(name: impl Into<String>, matrix: ExactMatrix<K>, labels: Vec<usize>) -> Result<Self, MatroidError> {
        if matrix.ncols() == 0 {
            return Err(MatroidError::Empty);
        }
        if matrix.ncols() > MAX_GROUND {
            return Err(MatroidError::TooLarge(matrix.ncols()));
        }
        let rref = matrix.rref();
        let dual = rref.matrix.kernel_basis();
        Ok(Realization { name: name.into(), matrix, labels, rref, dual })
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn field(&self) -> &K {
        self.matrix.field()
    }
    pub fn matrix(&self) -> &ExactMatrix<K> {
        &self.matrix
    }
    pub fn n(&self) -> usize {
        self.matrix.ncols()
    }
    pub fn rank(&self) -> usize {
        self.rref.rank
    }
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// The nonzero rows of the RREF, an `r × n` basis of the row space `W`.
    pub fn basis(&self) -> ExactMatrix<K> {
        self.rref.matrix.select_rows(&(0..self.rref.rank).collect::<Vec<_>>())
    }

    pub fn pivots(&self) -> &[usize] {
        &self.rref.pivots
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.n()).filter(|c| !self.rref.pivots.contains(c)).collect()
    }

    /// The `(n − r) × n` matrix `D` whose rows span `W⊥`; on the free columns
    /// it is the identity, on pivot columns minus the transposed RREF block.
    pub fn dual_matrix(&self) -> &ExactMatrix<K> {
        &self.dual
    }

    /// The realization of the dual matroid by `D`; it has no rows when `W⊥ = 0`.
    pub fn dual(&self) -> Realization<K> {
        Self::with_labels(format!("{}^perp", self.name), self.dual.clone(), self.labels.clone())
            .expect("same ground set as a valid realization")
    }

    pub fn matroid(&self) -> Matroid {
        Matroid::of_matrix(&self.matrix).expect("validated at construction")
    }

    /// Zero columns.
    pub fn loops(&self) -> Vec<usize> {
        let k = self.field();
        (0..self.n()).filter(|&j| self.matrix.column(j).iter().all(|v| k.is_zero(v))).collect()
    }

    /// Deletes loop columns, keeping the original labels of the survivors.
    pub fn drop_loops(&self) -> Result<Self, MatroidError> {
        let loops = self.loops();
        let keep: Vec<usize> = (0..self.n()).filter(|j| !loops.contains(j)).collect();
        let labels = keep.iter().map(|&j| self.labels[j]).collect();
        Self::with_labels(self.name.clone(), self.matrix.select_columns(&keep), labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use proptest::prelude::*;

    fn re(rows: &[Vec<i64>]) -> Realization<Rationals> {
        Realization::new("t", ExactMatrix::from_i64(&Rationals, rows).unwrap()).unwrap()
    }

    fn k4() -> Realization<Rationals> {
        re(&[
            vec![1, 1, 1, 0, 0, 0],
            vec![-1, 0, 0, 1, 1, 0],
            vec![0, -1, 0, -1, 0, 1],
            vec![0, 0, -1, 0, -1, -1],
        ])
    }

    #[test]
    fn boolean_is_free() {
        let m = re(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).matroid();
        assert!(m.circuits().is_empty());
        assert_eq!(m.cyclic_flats(), &[0]);
        assert_eq!(m.kappa(), 3);
        assert_eq!(m.closure(0), 0);
        assert_eq!(m.coloops(), 0b111);
        let d = re(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).dual();
        assert_eq!(d.rank(), 0);
        assert_eq!(d.matroid().loops(), 0b111);
    }

    #[test]
    fn u23() {
        let r = re(&[vec![1, 0, 1], vec![0, 1, 1]]);
        let m = r.matroid();
        assert_eq!(m.circuits(), &[0b111]);
        assert!(m.is_uniform());
        let d = r.dual().matroid();
        assert_eq!(d.rank_total(), 1);
        assert!((0..3).all(|e| d.is_basis(1 << e)));
        assert_eq!(d, m.dual());
    }

    #[test]
    fn k4_triangles_and_components() {
        let m = k4().matroid();
        assert_eq!(m.rank_total(), 3);
        let tri: Vec<Set> = m.flats().iter().copied().filter(|&f| m.rank(f) == 2 && card(f) >= 3).collect();
        assert_eq!(tri.len(), 4);
        assert_eq!(m.cyclic_flats().len(), 6);
        assert_eq!(m.kappa(), 1);
        assert_eq!(m.minimal_nonempty_cyclic_flats(), tri);
    }

    #[test]
    fn z_rejects_non_flat() {
        let m = k4().matroid();
        assert!(matches!(m.z(0b11), Err(MatroidError::NotAFlat(_))));
    }

    #[test]
    fn drop_loops_keeps_labels() {
        let r = re(&[vec![1, 0, 1], vec![0, 0, 1]]);
        assert_eq!(r.loops(), vec![1]);
        let d = r.drop_loops().unwrap();
        assert_eq!(d.labels(), &[1, 3]);
        assert_eq!(d.n(), 2);
    }

    #[test]
    fn set_helpers() {
        assert_eq!(set_of(&[1, 2, 4, 6]), 0b101011);
        assert_eq!(labels_of(0b101011), vec![1, 2, 4, 6]);
        assert_eq!(format_set(0b101011), "{1,2,4,6}");
    }

    fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..4, 2usize..8).prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-2i64..3, c), r))
    }

    proptest! {
        #[test]
        fn rank_axioms_and_duality(rows in matrix_strategy()) {
            let r = re(&rows);
            let m = r.matroid();
            let g = m.ground();
            for s in 0..=g {
                for e in 0..m.n() {
                    let t = s | (1 << e);
                    prop_assert!(m.rank(t) >= m.rank(s) && m.rank(t) <= m.rank(s) + 1);
                }
                prop_assert_eq!(m.closure(m.closure(s)), m.closure(s));
                prop_assert_eq!(m.closure(s) & s, s);
            }
            let d = m.dual();
            prop_assert_eq!(&d.dual(), &m);
            let dr = r.dual();
            prop_assert_eq!(&dr.matroid(), &d);
            prop_assert_eq!(dr.rank(), m.n() - m.rank_total());
            prop_assert!(r.matrix().mul(&r.dual_matrix().transpose()).unwrap().is_zero());
            for &f in m.cyclic_flats() {
                prop_assert!(d.cyclic_flats().contains(&(g & !f)));
                prop_assert!(m.is_cyclic(f));
            }
            for &f in m.flats() {
                prop_assert_eq!(d.closure(g & !f), g & !m.z(f).unwrap());
            }
        }
    }
}
