//! Dense and sparse exact linear algebra over a [`Field`].

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::{Field, FieldDescriptor, FieldError, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("ragged matrix: row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, got: usize, expected: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A dense row-major matrix with entries in one field.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    data: Vec<K::Elem>,
}

/// Result of row reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<K: Field> {
    pub matrix: ExactMatrix<K>,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl<K: Field> ExactMatrix<K> {
    pub fn zeros(field: &K, rows: usize, cols: usize) -> Self {
        ExactMatrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &K, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &K, rows: Vec<Vec<K::Elem>>, cols: usize) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Ragged { row: i, got: row.len(), expected: cols });
            }
            data.extend(row);
        }
        Ok(ExactMatrix { field: field.clone(), rows: nrows, cols, data })
    }

    pub fn from_i64(field: &K, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let conv = rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Self::from_rows(field, conv, cols)
    }

    /// Builds a matrix from tagged scalars; all entries must live in `field`.
    pub fn from_scalars(field: &K, rows: &[Vec<Scalar>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut conv = Vec::with_capacity(rows.len());
        for r in rows {
            let mut out = Vec::with_capacity(r.len());
            for s in r {
                if let (Scalar::Mod { .. }, FieldDescriptor::Rational) = (s, field.descriptor()) {
                    return Err(FieldError::Mixed(field.descriptor(), s.descriptor()).into());
                }
                out.push(field.from_scalar(s)?);
            }
            conv.push(out);
        }
        Self::from_rows(field, conv, cols)
    }

    pub fn field(&self) -> &K {
        &self.field
    }
    pub fn nrows(&self) -> usize {
        self.rows
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<K::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<K::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let k = &self.field;
        let mut out = Self::zeros(k, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if k.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !k.is_zero(b) {
                        let v = k.add(out.get(i, j), &k.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    /// Submatrix on the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(&self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut out = Self::zeros(&self.field, rows.len(), self.cols);
        for (ii, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                out.set(ii, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Unique reduced row echelon form with pivot columns and rank.
    pub fn rref(&self) -> Rref<K> {
        let k = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !k.is_zero(m.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = k.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = k.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if k.is_zero(&f) {
                    continue;
                }
                for j in c..m.cols {
                    let pv = m.get(r, j).clone();
                    if !k.is_zero(&pv) {
                        let v = k.sub_mul(m.get(i, j), &f, &pv);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, rank: pivots.len(), pivots }
    }

    pub fn rank(&self) -> usize {
        let mut e = SparseEchelon::new(&self.field);
        for i in 0..self.rows {
            e.insert(dense_to_sparse(&self.field, self.row(i)));
        }
        e.rank()
    }

    /// The nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_space_basis(&self) -> Self {
        let rr = self.rref();
        rr.matrix.select_rows(&(0..rr.rank).collect::<Vec<_>>())
    }

    /// Rows form a basis of the right null space `{v : M v = 0}`.
    pub fn kernel_basis(&self) -> Self {
        let k = &self.field;
        let rr = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !rr.pivots.contains(c)).collect();
        let mut out = Self::zeros(k, free.len(), self.cols);
        for (t, &fc) in free.iter().enumerate() {
            out.set(t, fc, k.one());
            for (pi, &pc) in rr.pivots.iter().enumerate() {
                out.set(t, pc, k.neg(rr.matrix.get(pi, fc)));
            }
        }
        out
    }

    /// Some `x` with `M x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[K::Elem]) -> Result<Option<Vec<K::Elem>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Dimension(format!("rhs of length {} for {} rows", b.len(), self.rows)));
        }
        let k = &self.field;
        let mut aug = Self::zeros(k, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let rr = aug.rref();
        if rr.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![k.zero(); self.cols];
        for (pi, &pc) in rr.pivots.iter().enumerate() {
            x[pc] = rr.matrix.get(pi, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Whether `v` lies in the span of the columns.
    pub fn column_space_contains(&self, v: &[K::Elem]) -> Result<bool, LinalgError> {
        Ok(self.solve(v)?.is_some())
    }
}

pub fn dense_to_sparse<K: Field>(k: &K, row: &[K::Elem]) -> Vec<(usize, K::Elem)> {
    row.iter()
        .enumerate()
        .filter(|(_, v)| !k.is_zero(v))
        .map(|(j, v)| (j, v.clone()))
        .collect()
}

/// Sparse vector: strictly increasing indices, no zero entries.
pub type SparseVec<E> = Vec<(usize, E)>;

/// `a - c * b` for sparse vectors.
pub fn sparse_axpy<K: Field>(k: &K, a: &[(usize, K::Elem)], c: &K::Elem, b: &[(usize, K::Elem)]) -> SparseVec<K::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, k.neg(&k.mul(c, &b[j].1))));
            j += 1;
        } else {
            let v = k.sub_mul(&a[i].1, c, &b[j].1);
            if !k.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incrementally maintained echelon basis of a subspace of `K^N`, rows stored
/// sparsely and keyed by their leading column. Pivot rows are monic.
#[derive(Clone, Debug)]
pub struct SparseEchelon<K: Field> {
    field: K,
    pivots: BTreeMap<usize, SparseVec<K::Elem>>,
}

impl<K: Field> SparseEchelon<K> {
    pub fn new(field: &K) -> Self {
        SparseEchelon { field: field.clone(), pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduces `v` by leading terms until its leading column is not a pivot.
    /// Entries after the leading one are left unreduced.
    fn reduce_head(&self, mut v: SparseVec<K::Elem>) -> SparseVec<K::Elem> {
        let k = &self.field;
        while let Some((c, lead)) = v.first() {
            match self.pivots.get(c) {
                Some(p) => {
                    let lead = lead.clone();
                    v = sparse_axpy(k, &v, &lead, p);
                }
                None => break,
            }
        }
        v
    }

    /// Fully reduces `v` against the stored rows.
    pub fn reduce(&self, v: SparseVec<K::Elem>) -> SparseVec<K::Elem> {
        let k = &self.field;
        let mut v = v;
        let mut idx = 0;
        while idx < v.len() {
            let c = v[idx].0;
            if let Some(p) = self.pivots.get(&c) {
                let coef = v[idx].1.clone();
                v = sparse_axpy(k, &v, &coef, p);
            } else {
                idx += 1;
            }
        }
        v
    }

    /// Inserts `v`; returns true if it enlarged the span.
    pub fn insert(&mut self, v: SparseVec<K::Elem>) -> bool {
        let v = self.reduce_head(v);
        let Some((c, lead)) = v.first() else {
            return false;
        };
        let k = &self.field;
        let inv = k.inv(lead).expect("nonzero lead");
        let c = *c;
        let v: SparseVec<K::Elem> = v.into_iter().map(|(j, e)| (j, k.mul(&e, &inv))).collect();
        self.pivots.insert(c, v);
        true
    }

    pub fn contains(&self, v: SparseVec<K::Elem>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Basis rows in order of leading column.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K::Elem>> {
        self.pivots.values()
    }

    pub fn pivot_row(&self, col: usize) -> Option<&SparseVec<K::Elem>> {
        self.pivots.get(&col)
    }

    /// Back-substitutes so that no row has a nonzero entry in another row's
    /// pivot column (the sparse analogue of RREF).
    pub fn make_reduced(&mut self) {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for c in cols {
            let row = self.pivots.remove(&c).expect("pivot present");
            let (head, tail) = row.split_at(1);
            let mut reduced = head.to_vec();
            reduced.extend(self.reduce(tail.to_vec()));
            self.pivots.insert(c, reduced);
        }
    }
}

/// Rank of the span of some sparse vectors.
pub fn rank_of<K: Field>(k: &K, vectors: impl IntoIterator<Item = SparseVec<K::Elem>>) -> usize {
    let mut e = SparseEchelon::new(k);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Given the images `images[c]` of the basis vectors of a domain under a
/// linear map into a space of dimension `target_dim`, returns a basis of the
/// kernel as sparse vectors over domain indices, together with the rank.
pub fn kernel_of_images<K: Field>(k: &K, images: &[SparseVec<K::Elem>], target_dim: usize) -> (Vec<SparseVec<K::Elem>>, usize) {
    let mut e = SparseEchelon::new(k);
    let mut kernel = Vec::new();
    for (c, img) in images.iter().enumerate() {
        debug_assert!(img.last().is_none_or(|(j, _)| *j < target_dim));
        let mut v = img.clone();
        v.push((target_dim + c, k.one()));
        let v = e.reduce_head(v);
        match v.first() {
            Some((j, _)) if *j >= target_dim => {
                kernel.push(v.into_iter().map(|(j, x)| (j - target_dim, x)).collect());
            }
            Some(_) => {
                e.insert(v);
            }
            None => unreachable!("the identity part keeps the vector nonzero"),
        }
    }
    let rank = e.rank();
    (kernel, rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rational, Rationals};
    use proptest::prelude::*;

    fn q(rows: &[Vec<i64>]) -> ExactMatrix<Rationals> {
        ExactMatrix::from_i64(&Rationals, rows).unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = ExactMatrix::identity(&Rationals, 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);
        assert_eq!(r.rank, 3);
        let z = ExactMatrix::zeros(&Rationals, 2, 4);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert!(r.pivots.is_empty());
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn kernel_of_row_vector() {
        let k = q(&[vec![1, 1]]).kernel_basis();
        assert_eq!(k.nrows(), 1);
        assert_eq!(k.row(0), &[Rational::from_int(-1), Rational::from_int(1)]);
        assert_eq!(ExactMatrix::identity(&Rationals, 4).kernel_basis().nrows(), 0);
    }

    #[test]
    fn membership() {
        let e = q(&[vec![0], vec![1]]);
        assert!(!e.column_space_contains(&[Rational::one(), Rational::zero()]).unwrap());
        let full = q(&[vec![2, 1], vec![1, 1]]);
        assert!(full.column_space_contains(&[Rational::from_int(5), Rational::from_int(-3)]).unwrap());
        assert!(matches!(full.solve(&[Rational::one()]), Err(LinalgError::Dimension(_))));
    }

    #[test]
    fn ragged_and_mixed_rejected() {
        assert!(matches!(
            ExactMatrix::from_i64(&Rationals, &[vec![1, 2], vec![3]]),
            Err(LinalgError::Ragged { row: 1, .. })
        ));
        let rows = vec![vec![Scalar::Rational(Rational::one()), Scalar::Mod { value: 1, p: 5 }]];
        assert!(ExactMatrix::from_scalars(&Rationals, &rows).is_err());
        let f = PrimeField::new(5).unwrap();
        let rows = vec![vec![Scalar::Mod { value: 1, p: 7 }]];
        assert!(ExactMatrix::from_scalars(&f, &rows).is_err());
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r)
        })
    }

    proptest! {
        #[test]
        fn rref_idempotent(rows in small_matrix()) {
            let m = q(&rows);
            let r1 = m.rref();
            let r2 = r1.matrix.rref();
            prop_assert_eq!(&r1.matrix, &r2.matrix);
            prop_assert_eq!(r1.pivots, r2.pivots);
        }

        #[test]
        fn rank_nullity(rows in small_matrix()) {
            let m = q(&rows);
            let ker = m.kernel_basis();
            prop_assert_eq!(m.rank() + ker.nrows(), m.ncols());
            prop_assert_eq!(m.rank(), m.rref().rank);
            prop_assert!(m.mul(&ker.transpose()).unwrap().is_zero());
        }

        #[test]
        fn sparse_kernel_agrees(rows in small_matrix()) {
            let m = q(&rows);
            let k = Rationals;
            // Columns of m are the images of the domain basis.
            let images: Vec<_> = (0..m.ncols()).map(|j| dense_to_sparse(&k, &m.column(j))).collect();
            let (ker, rank) = kernel_of_images(&k, &images, m.nrows());
            prop_assert_eq!(rank, m.rank());
            prop_assert_eq!(ker.len(), m.kernel_basis().nrows());
            for v in &ker {
                let mut dense = vec![k.zero(); m.ncols()];
                for (j, x) in v {
                    dense[*j] = x.clone();
                }
                let col = ExactMatrix::from_rows(&k, dense.into_iter().map(|x| vec![x]).collect(), 1).unwrap();
                prop_assert!(m.mul(&col).unwrap().is_zero());
            }
            let mut e = SparseEchelon::new(&k);
            for i in 0..m.nrows() {
                e.insert(dense_to_sparse(&k, m.row(i)));
            }
            e.make_reduced();
            let pivots: Vec<usize> = e.pivot_columns().collect();
            for row in e.rows() {
                for (j, _) in row.iter().skip(1) {
                    prop_assert!(!pivots.contains(j));
                }
            }
        }

        #[test]
        fn rank_nullity_mod_p(rows in small_matrix()) {
            let f = PrimeField::new(5).unwrap();
            let m = ExactMatrix::from_i64(&f, &rows).unwrap();
            let ker = m.kernel_basis();
            prop_assert_eq!(m.rank() + ker.nrows(), m.ncols());
            prop_assert!(m.mul(&ker.transpose()).unwrap().is_zero());
        }
    }
}
