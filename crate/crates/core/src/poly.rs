//! Monomials, polynomials and monomial orders for the bigraded ring
//! `S = k[x1..xr, y1..y(n-r)]` and its small extensions (an extra variable
//! for elimination tricks, or the `a`-variables of `R[a]`).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldDescriptor};

pub const MAX_VARS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("operands live in rings with {0} and {1} variables")]
    RingMismatch(usize, usize),
    #[error("polynomial is not bihomogeneous")]
    NotHomogeneous,
    #[error("point has {got} coordinates, ring has {expected} variables")]
    PointLength { got: usize, expected: usize },
    #[error("at most {MAX_VARS} variables are supported, got {0}")]
    TooManyVars(usize),
    #[error("exponent {0} out of range")]
    Exponent(u32),
}

/// Exponent vector of a monomial together with its total degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u16,
    e: [u8; MAX_VARS],
}

impl Default for Monomial {
    fn default() -> Self {
        Monomial::one()
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.e.iter().rposition(|&x| x != 0).map_or(0, |p| p + 1);
        write!(f, "m{:?}", &self.e[..last])
    }
}

impl Monomial {
    pub const fn one() -> Self {
        Monomial { deg: 0, e: [0; MAX_VARS] }
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::one();
        m.e[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self, PolyError> {
        if exps.len() > MAX_VARS {
            return Err(PolyError::TooManyVars(exps.len()));
        }
        let mut m = Self::one();
        for (i, &x) in exps.iter().enumerate() {
            if x > u8::MAX as u32 {
                return Err(PolyError::Exponent(x));
            }
            m.e[i] = x as u8;
            m.deg += x as u16;
        }
        Ok(m)
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.e[i] as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.e[..nvars].iter().map(|&x| x as u32).collect()
    }

    pub fn degree(&self) -> usize {
        self.deg as usize
    }

    /// Sum of exponents over variables `lo..hi`.
    pub fn partial_degree(&self, lo: usize, hi: usize) -> usize {
        self.e[lo..hi].iter().map(|&x| x as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.e[i] += o.e[i];
        }
        m.deg += o.deg;
        m
    }

    pub fn divides(&self, o: &Self) -> bool {
        self.deg <= o.deg && (0..MAX_VARS).all(|i| self.e[i] <= o.e[i])
    }

    /// `o / self` when `self` divides `o`.
    pub fn quotient(&self, o: &Self) -> Option<Self> {
        if !self.divides(o) {
            return None;
        }
        let mut m = *o;
        for i in 0..MAX_VARS {
            m.e[i] -= self.e[i];
        }
        m.deg -= self.deg;
        Some(m)
    }

    pub fn lcm(&self, o: &Self) -> Self {
        let mut m = Self::one();
        for i in 0..MAX_VARS {
            m.e[i] = self.e[i].max(o.e[i]);
            m.deg += m.e[i] as u16;
        }
        m
    }

    pub fn coprime(&self, o: &Self) -> bool {
        (0..MAX_VARS).all(|i| self.e[i] == 0 || o.e[i] == 0)
    }

    /// Bit `i` set when variable `i` occurs.
    pub fn support_mask(&self) -> u32 {
        (0..MAX_VARS).filter(|&i| self.e[i] != 0).fold(0, |a, i| a | (1 << i))
    }

    /// Degree reverse lexicographic comparison.
    pub fn cmp_degrevlex(&self, o: &Self) -> Ordering {
        match self.deg.cmp(&o.deg) {
            Ordering::Equal => {}
            c => return c,
        }
        for i in (0..MAX_VARS).rev() {
            if self.e[i] != o.e[i] {
                return o.e[i].cmp(&self.e[i]);
            }
        }
        Ordering::Equal
    }

    /// Pure lexicographic comparison with variable 0 largest.
    pub fn cmp_lex(&self, o: &Self) -> Ordering {
        self.e.cmp(&o.e)
    }

    pub fn format(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, name) in names.iter().enumerate() {
            match self.e[i] {
                0 => {}
                1 => parts.push(name.clone()),
                x => parts.push(format!("{name}^{x}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// All monomials of total degree `d` in the variables `lo..hi`, in descending
/// degrevlex order.
pub fn monomials_of_degree(lo: usize, hi: usize, d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = Monomial::one();
    fn rec(v: usize, hi: usize, left: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if v + 1 == hi {
            cur.e[v] = left as u8;
            cur.deg += left as u16;
            out.push(*cur);
            cur.deg -= left as u16;
            cur.e[v] = 0;
            return;
        }
        for x in (0..=left).rev() {
            cur.e[v] = x as u8;
            cur.deg += x as u16;
            rec(v + 1, hi, left - x, cur, out);
            cur.deg -= x as u16;
            cur.e[v] = 0;
        }
    }
    if lo == hi {
        if d == 0 {
            out.push(cur);
        }
        return out;
    }
    rec(lo, hi, d, &mut cur, &mut out);
    out.sort_by(|a, b| b.cmp_degrevlex(a));
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Number of monomials of degree `d` in `v` variables.
pub fn count_monomials(v: usize, d: usize) -> usize {
    if v == 0 {
        return usize::from(d == 0);
    }
    binomial(d + v - 1, v - 1)
}

/// A monomial order on the variables of one ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    Degrevlex,
    /// Compares the degree in the variables of `block` first, then degrevlex;
    /// any monomial involving the block dominates every monomial free of it.
    Elimination { block: u32 },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Degrevlex => a.cmp_degrevlex(b),
            MonomialOrder::Elimination { block } => {
                let w = |m: &Monomial| -> u32 {
                    (0..MAX_VARS).filter(|&i| block & (1 << i) != 0).map(|i| m.e[i] as u32).sum()
                };
                w(a).cmp(&w(b)).then_with(|| a.cmp_degrevlex(b))
            }
        }
    }
}

/// The bigraded ring: `r` variables of bidegree (1,0) followed by `n − r`
/// variables of bidegree (0,1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    pub r: usize,
    pub n: usize,
    pub field: FieldDescriptor,
    names: Vec<String>,
}

impl RingSpec {
    pub fn new(r: usize, n: usize, field: FieldDescriptor) -> Self {
        assert!(r <= n && n <= MAX_VARS, "invalid ring shape");
        let mut names: Vec<String> = (1..=r).map(|i| format!("x{i}")).collect();
        names.extend((1..=n - r).map(|i| format!("y{i}")));
        RingSpec { r, n, field, names }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn bidegree(&self, m: &Monomial) -> (usize, usize) {
        (m.partial_degree(0, self.r), m.partial_degree(self.r, self.n))
    }

    /// Monomials of bidegree `(i, j)` in descending degrevlex order.
    pub fn monomial_basis(&self, i: usize, j: usize) -> Vec<Monomial> {
        let xs = monomials_of_degree(0, self.r, i);
        let ys = monomials_of_degree(self.r, self.n, j);
        let mut out: Vec<Monomial> = xs.iter().flat_map(|a| ys.iter().map(move |b| a.mul(b))).collect();
        out.sort_by(|a, b| b.cmp_degrevlex(a));
        out
    }

    pub fn dim(&self, i: usize, j: usize) -> usize {
        count_monomials(self.r, i) * count_monomials(self.n - self.r, j)
    }
}

/// A polynomial with terms sorted in descending degrevlex order.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<K: Field> {
    nvars: usize,
    terms: Vec<(Monomial, K::Elem)>,
}

impl<K: Field> Poly<K> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: Vec::new() }
    }

    pub fn constant(k: &K, c: K::Elem, nvars: usize) -> Self {
        Self::monomial(k, c, Monomial::one(), nvars)
    }

    pub fn one(k: &K, nvars: usize) -> Self {
        Self::constant(k, k.one(), nvars)
    }

    pub fn var(k: &K, i: usize, nvars: usize) -> Self {
        Self::monomial(k, k.one(), Monomial::var(i), nvars)
    }

    pub fn monomial(k: &K, c: K::Elem, m: Monomial, nvars: usize) -> Self {
        if k.is_zero(&c) {
            return Self::zero(nvars);
        }
        Poly { nvars, terms: vec![(m, c)] }
    }

    /// Normalizes arbitrary terms: combines like monomials, drops zeros, sorts.
    pub fn from_terms(k: &K, nvars: usize, terms: impl IntoIterator<Item = (Monomial, K::Elem)>) -> Self {
        let mut v: Vec<(Monomial, K::Elem)> = terms.into_iter().collect();
        v.sort_by(|a, b| b.0.cmp_degrevlex(&a.0));
        let mut out: Vec<(Monomial, K::Elem)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = k.add(lc, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !k.is_zero(c));
        Poly { nvars, terms: out }
    }

    /// A linear form `∑ coeffs[i] · var(offset + i)`.
    pub fn linear(k: &K, coeffs: &[K::Elem], offset: usize, nvars: usize) -> Self {
        Self::from_terms(k, nvars, coeffs.iter().enumerate().map(|(i, c)| (Monomial::var(offset + i), c.clone())))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, K::Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, K::Elem)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, K::Elem)> {
        self.terms.first()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&K::Elem> {
        self.terms.iter().find(|(t, _)| t == m).map(|(_, c)| c)
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    fn check(&self, o: &Self) -> Result<(), PolyError> {
        if self.nvars != o.nvars {
            return Err(PolyError::RingMismatch(self.nvars, o.nvars));
        }
        Ok(())
    }

    pub fn add(&self, k: &K, o: &Self) -> Result<Self, PolyError> {
        self.check(o)?;
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp_degrevlex(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = k.add(&a[i].1, &b[j].1);
                    if !k.is_zero(&c) {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(Poly { nvars: self.nvars, terms: out })
    }

    pub fn neg(&self, k: &K) -> Self {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (*m, k.neg(c))).collect() }
    }

    pub fn sub(&self, k: &K, o: &Self) -> Result<Self, PolyError> {
        self.add(k, &o.neg(k))
    }

    pub fn scale(&self, k: &K, c: &K::Elem) -> Self {
        if k.is_zero(c) {
            return Self::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, a)| (*m, k.mul(a, c))).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect() }
    }

    pub fn mul(&self, k: &K, o: &Self) -> Result<Self, PolyError> {
        self.check(o)?;
        let mut acc: BTreeMap<MonoKey, K::Elem> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let key = MonoKey(ma.mul(mb));
                let p = k.mul(ca, cb);
                match acc.get_mut(&key) {
                    Some(v) => *v = k.add(v, &p),
                    None => {
                        acc.insert(key, p);
                    }
                }
            }
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| !k.is_zero(c)).map(|(m, c)| (m.0, c)).collect();
        Ok(Poly { nvars: self.nvars, terms })
    }

    pub fn pow(&self, k: &K, e: u32) -> Self {
        let mut acc = Self::one(k, self.nvars);
        for _ in 0..e {
            acc = acc.mul(k, self).expect("same ring");
        }
        acc
    }

    /// Multiplies by the leading coefficient's inverse.
    pub fn monic(&self, k: &K) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(k, &k.inv(c).expect("nonzero")),
            None => self.clone(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.degree() == w[1].0.degree())
    }

    pub fn bidegree(&self, spec: &RingSpec) -> Result<Option<(usize, usize)>, PolyError> {
        let mut it = self.terms.iter().map(|(m, _)| spec.bidegree(m));
        let Some(first) = it.next() else {
            return Ok(None);
        };
        if it.all(|b| b == first) {
            Ok(Some(first))
        } else {
            Err(PolyError::NotHomogeneous)
        }
    }

    pub fn homogeneous_components(&self, k: &K, spec: &RingSpec) -> BTreeMap<(usize, usize), Self> {
        let mut parts: BTreeMap<(usize, usize), Vec<(Monomial, K::Elem)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts.entry(spec.bidegree(m)).or_default().push((*m, c.clone()));
        }
        parts.into_iter().map(|(b, t)| (b, Self::from_terms(k, self.nvars, t))).collect()
    }

    pub fn evaluate(&self, k: &K, point: &[K::Elem]) -> Result<K::Elem, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointLength { got: point.len(), expected: self.nvars });
        }
        let mut acc = k.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate() {
                for _ in 0..m.exp(i) {
                    t = k.mul(&t, x);
                }
            }
            acc = k.add(&acc, &t);
        }
        Ok(acc)
    }

    pub fn partial(&self, k: &K, var: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.exp(var) > 0).map(|(m, c)| {
            let e = m.exp(var);
            let q = Monomial::var(var).quotient(m).expect("divides");
            (q, k.mul(c, &k.from_i64(e as i64)))
        });
        Self::from_terms(k, self.nvars, terms)
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, k: &K, d: &Self) -> Option<Self> {
        let (dm, dc) = d.leading()?;
        let dinv = k.inv(dc)?;
        let mut rem = self.clone();
        let mut q = Vec::new();
        while let Some((m, c)) = rem.leading().cloned() {
            let qm = dm.quotient(&m)?;
            let qc = k.mul(&c, &dinv);
            rem = rem.sub(k, &d.mul_monomial(&qm).scale(k, &qc)).ok()?;
            q.push((qm, qc));
        }
        Some(Self::from_terms(k, self.nvars, q))
    }

    /// Renders as `c*x1^a*y2^b + ...` with the given variable names.
    pub fn format(&self, k: &K, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mut coef = k.format(c);
            let negative = coef.starts_with('-');
            if negative {
                coef.remove(0);
            }
            if idx == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&coef);
            } else if coef == "1" {
                s.push_str(&m.format(names));
            } else {
                s.push_str(&format!("{coef}*{}", m.format(names)));
            }
        }
        s
    }
}

/// Wrapper ordering monomials by degrevlex, for use as a map key.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MonoKey(pub Monomial);

impl PartialOrd for MonoKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MonoKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp_degrevlex(&other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rational, Rationals};
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    #[test]
    fn bidegree_and_product() {
        let spec = RingSpec::new(2, 4, FieldDescriptor::Rational);
        let k = Rationals;
        let x1 = Poly::var(&k, 0, 4);
        let y1 = Poly::var(&k, 2, 4);
        assert_eq!(x1.mul(&k, &y1).unwrap().bidegree(&spec).unwrap(), Some((1, 1)));
        let x2 = Poly::var(&k, 1, 4);
        let lhs = x1.add(&k, &x2).unwrap().mul(&k, &x1.sub(&k, &x2).unwrap()).unwrap();
        let rhs = x1.mul(&k, &x1).unwrap().sub(&k, &x2.mul(&k, &x2).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.format(&k, spec.names()), "x1^2 - x2^2");
        let inhom = x1.add(&k, &y1.mul(&k, &y1).unwrap()).unwrap();
        assert_eq!(inhom.bidegree(&spec), Err(PolyError::NotHomogeneous));
        assert_eq!(inhom.homogeneous_components(&k, &spec).len(), 2);
        assert!(matches!(x1.add(&k, &Poly::zero(3)), Err(PolyError::RingMismatch(4, 3))));
    }

    #[test]
    fn basis_counts() {
        let s = RingSpec::new(3, 6, FieldDescriptor::Rational);
        assert_eq!(s.monomial_basis(0, 0), vec![Monomial::one()]);
        assert_eq!(s.monomial_basis(1, 1).len(), 9);
        let b = RingSpec::new(4, 9, FieldDescriptor::Rational);
        assert_eq!(b.monomial_basis(2, 1).len(), 50);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(b.monomial_basis(i, j).len(), b.dim(i, j));
            }
        }
    }

    #[test]
    fn evaluation_and_printing() {
        let k = Rationals;
        let p = Poly::from_terms(&k, 2, vec![(Monomial::from_exponents(&[2, 1]).unwrap(), q(3)), (Monomial::one(), q(-1))]);
        assert_eq!(p.evaluate(&k, &[q(2), q(5)]).unwrap(), q(59));
        assert!(p.evaluate(&k, &[q(1)]).is_err());
        let names = vec!["x1".to_string(), "y1".to_string()];
        assert_eq!(p.format(&k, &names), "3*x1^2*y1 - 1");
        assert_eq!(Poly::one(&k, 2).evaluate(&k, &[q(7), q(9)]).unwrap(), q(1));
    }

    #[test]
    fn exact_division_and_partials() {
        let k = Rationals;
        let x = Poly::var(&k, 0, 2);
        let y = Poly::var(&k, 1, 2);
        let f = x.add(&k, &y).unwrap();
        let g = f.mul(&k, &x.sub(&k, &y).unwrap()).unwrap();
        assert_eq!(g.div_exact(&k, &f).unwrap(), x.sub(&k, &y).unwrap());
        assert!(x.div_exact(&k, &y).is_none());
        assert_eq!(g.partial(&k, 0), x.scale(&k, &q(2)));
    }

    fn mono() -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(0u32..4, 5).prop_map(|v| Monomial::from_exponents(&v).unwrap())
    }

    proptest! {
        #[test]
        fn orders_total_and_multiplicative(a in mono(), b in mono(), m in mono()) {
            for ord in [MonomialOrder::Degrevlex, MonomialOrder::Elimination { block: 0b11 }] {
                let c = ord.cmp(&a, &b);
                prop_assert_eq!(c == Ordering::Equal, a == b);
                prop_assert_eq!(ord.cmp(&b, &a), c.reverse());
                prop_assert_eq!(ord.cmp(&a.mul(&m), &b.mul(&m)), c);
                prop_assert_ne!(ord.cmp(&a.mul(&m), &a), Ordering::Less);
            }
        }

        #[test]
        fn evaluation_matches_naive(coeffs in proptest::collection::vec(-5i64..6, 4), ms in proptest::collection::vec(mono(), 4), pt in proptest::collection::vec(-3i64..4, 5)) {
            let k = Rationals;
            let p = Poly::from_terms(&k, 5, ms.iter().zip(&coeffs).map(|(m, c)| (*m, q(*c))));
            let point: Vec<Rational> = pt.iter().map(|&v| q(v)).collect();
            let mut naive = 0i64;
            for (m, c) in ms.iter().zip(&coeffs) {
                let mut t = *c;
                for (i, v) in pt.iter().enumerate() {
                    t *= v.pow(m.exp(i));
                }
                naive += t;
            }
            prop_assert_eq!(p.evaluate(&k, &point).unwrap(), q(naive));
        }
    }
}
