//! Gröbner bases of submodules of free modules `S^m` (ideals are rank 1).
//!
//! Buchberger's algorithm with the sugar selection strategy (which is the
//! normal strategy on homogeneous input), Gebauer–Möller pair elimination
//! and a deterministic pair order, so outputs are reproducible.

pub mod ideal;
pub mod resolution;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::field::Field;
use crate::poly::{Monomial, MonomialOrder, Poly};

/// A term order on `S^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermOrder {
    /// Weighted degree `deg m + shift[pos]` first, then the monomial order,
    /// then the position (smaller position is larger).
    Top { mono: MonomialOrder, shifts: Vec<i64> },
    /// Position first (smaller position is larger), then the monomial order.
    Pot { mono: MonomialOrder },
    /// The order induced by a map `e_a ↦ m_a e_(p(a))`: weighted degree, then
    /// degrevlex on `m · tlm[a]`, then position. With every `tlm[a] = 1` this
    /// is the degrevlex [`TermOrder::Top`] order.
    Schreyer { shifts: Vec<i64>, tlm: Vec<Monomial> },
}

impl TermOrder {
    pub fn ideal(mono: MonomialOrder) -> Self {
        TermOrder::Top { mono, shifts: vec![0] }
    }

    pub fn mono(&self) -> MonomialOrder {
        match self {
            TermOrder::Top { mono, .. } | TermOrder::Pot { mono } => *mono,
            TermOrder::Schreyer { .. } => MonomialOrder::Degrevlex,
        }
    }

    fn shift(&self, pos: u32) -> i64 {
        match self {
            TermOrder::Top { shifts, .. } | TermOrder::Schreyer { shifts, .. } => {
                shifts.get(pos as usize).copied().unwrap_or(0)
            }
            TermOrder::Pot { .. } => 0,
        }
    }

    /// Weighted degree of a term.
    pub fn weight(&self, m: &Monomial, pos: u32) -> i64 {
        m.degree() as i64 + self.shift(pos)
    }

    pub fn cmp(&self, a: (&Monomial, u32), b: (&Monomial, u32)) -> Ordering {
        match self {
            TermOrder::Top { mono, .. } => self
                .weight(a.0, a.1)
                .cmp(&self.weight(b.0, b.1))
                .then_with(|| mono.cmp(a.0, b.0))
                .then_with(|| b.1.cmp(&a.1)),
            TermOrder::Pot { mono } => b.1.cmp(&a.1).then_with(|| mono.cmp(a.0, b.0)),
            TermOrder::Schreyer { tlm, .. } => self
                .weight(a.0, a.1)
                .cmp(&self.weight(b.0, b.1))
                .then_with(|| a.0.mul(&tlm[a.1 as usize]).cmp_degrevlex(&b.0.mul(&tlm[b.1 as usize])))
                .then_with(|| b.1.cmp(&a.1)),
        }
    }
}

/// An element of `S^m`: terms `(monomial, position, coefficient)` sorted in
/// decreasing order for the ambient [`TermOrder`].
#[derive(Clone, Debug, PartialEq)]
pub struct ModVec<K: Field> {
    pub terms: Vec<(Monomial, u32, K::Elem)>,
}

impl<K: Field> ModVec<K> {
    pub fn zero() -> Self {
        ModVec { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Monomial, u32, K::Elem)> {
        self.terms.first()
    }

    /// Component `pos` as a polynomial.
    pub fn component(&self, k: &K, pos: u32, nvars: usize) -> Poly<K> {
        Poly::from_terms(k, nvars, self.terms.iter().filter(|t| t.1 == pos).map(|t| (t.0, t.2.clone())))
    }

    /// Largest weighted degree among the terms (the sugar of an input element).
    pub fn max_weight(&self, order: &TermOrder) -> i64 {
        self.terms.iter().map(|t| order.weight(&t.0, t.1)).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self, order: &TermOrder) -> bool {
        self.terms.windows(2).all(|w| order.weight(&w[0].0, w[0].1) == order.weight(&w[1].0, w[1].1))
    }
}

/// Arithmetic context: field, number of variables, module rank and term order.
#[derive(Clone, Debug)]
pub struct ModuleRing<K: Field> {
    pub k: K,
    pub nvars: usize,
    pub rank: usize,
    pub order: TermOrder,
}

impl<K: Field> ModuleRing<K> {
    pub fn new(k: &K, nvars: usize, rank: usize, order: TermOrder) -> Self {
        ModuleRing { k: k.clone(), nvars, rank, order }
    }

    /// Normalizes raw terms: sorts, merges and drops zeros.
    pub fn vector(&self, terms: impl IntoIterator<Item = (Monomial, u32, K::Elem)>) -> ModVec<K> {
        let k = &self.k;
        let mut v: Vec<(Monomial, u32, K::Elem)> = terms.into_iter().collect();
        v.sort_by(|a, b| self.order.cmp((&b.0, b.1), (&a.0, a.1)));
        let mut out: Vec<(Monomial, u32, K::Elem)> = Vec::with_capacity(v.len());
        for t in v {
            match out.last_mut() {
                Some(l) if l.0 == t.0 && l.1 == t.1 => l.2 = k.add(&l.2, &t.2),
                _ => out.push(t),
            }
        }
        out.retain(|t| !k.is_zero(&t.2));
        ModVec { terms: out }
    }

    /// A polynomial placed in position `pos`.
    pub fn embed(&self, p: &Poly<K>, pos: u32) -> ModVec<K> {
        self.vector(p.terms().iter().map(|(m, c)| (*m, pos, c.clone())))
    }

    /// A tuple of polynomials as one vector.
    pub fn from_polys(&self, ps: &[Poly<K>]) -> ModVec<K> {
        self.vector(ps.iter().enumerate().flat_map(|(i, p)| p.terms().iter().map(move |(m, c)| (*m, i as u32, c.clone()))))
    }

    pub fn to_polys(&self, v: &ModVec<K>) -> Vec<Poly<K>> {
        (0..self.rank as u32).map(|i| v.component(&self.k, i, self.nvars)).collect()
    }

    /// `a − c · m · b`.
    pub fn sub_mul(&self, a: &[(Monomial, u32, K::Elem)], c: &K::Elem, m: &Monomial, b: &[(Monomial, u32, K::Elem)]) -> Vec<(Monomial, u32, K::Elem)> {
        let k = &self.k;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                self.order.cmp((&a[i].0, a[i].1), (&b[j].0.mul(m), b[j].1))
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.mul(m), b[j].1, k.neg(&k.mul(c, &b[j].2))));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = k.sub_mul(&a[i].2, c, &b[j].2);
                    if !k.is_zero(&v) {
                        out.push((a[i].0, a[i].1, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    pub fn add(&self, a: &ModVec<K>, b: &ModVec<K>) -> ModVec<K> {
        let minus_one = self.k.neg(&self.k.one());
        ModVec { terms: self.sub_mul(&a.terms, &minus_one, &Monomial::one(), &b.terms) }
    }

    pub fn scale_mul(&self, v: &ModVec<K>, c: &K::Elem, m: &Monomial) -> ModVec<K> {
        let k = &self.k;
        if k.is_zero(c) {
            return ModVec::zero();
        }
        ModVec { terms: v.terms.iter().map(|t| (t.0.mul(m), t.1, k.mul(&t.2, c))).collect() }
    }

    pub fn monic(&self, v: ModVec<K>) -> ModVec<K> {
        let Some(lc) = v.lead().map(|t| t.2.clone()) else {
            return v;
        };
        if self.k.is_one(&lc) {
            return v;
        }
        let inv = self.k.inv(&lc).expect("nonzero");
        ModVec { terms: v.terms.into_iter().map(|(m, p, c)| (m, p, self.k.mul(&c, &inv))).collect() }
    }

    /// Fully reduces `f` by `basis`; the remainder has no term divisible by a
    /// leading term of the basis.
    pub fn reduce(&self, f: &ModVec<K>, basis: &[Reducer<K>]) -> ModVec<K> {
        let k = &self.k;
        let mut rem: Vec<(Monomial, u32, K::Elem)> = Vec::new();
        let mut cur: Vec<(Monomial, u32, K::Elem)> = f.terms.clone();
        let mut start = 0;
        while start < cur.len() {
            let (m, pos, c) = cur[start].clone();
            let mask = m.support_mask();
            match basis.iter().find(|g| g.pos == pos && g.mask & !mask == 0 && g.lm.divides(&m)) {
                Some(g) => {
                    let q = g.lm.quotient(&m).expect("divides");
                    let coef = k.mul(&c, &g.lc_inv);
                    cur = self.sub_mul(&cur[start..], &coef, &q, &g.v.terms);
                    start = 0;
                }
                None => {
                    rem.push((m, pos, c));
                    start += 1;
                }
            }
        }
        ModVec { terms: rem }
    }

    /// Like [`reduce`](Self::reduce) but also records the quotients: returns
    /// `(remainder, [(basis index, coefficient, monomial)])` with
    /// `f = ∑ c · m · basis[i] + remainder`.
    pub fn reduce_with_quotients(&self, f: &ModVec<K>, basis: &[Reducer<K>]) -> (ModVec<K>, Vec<(usize, K::Elem, Monomial)>) {
        let k = &self.k;
        let mut rem = Vec::new();
        let mut quots = Vec::new();
        let mut cur: Vec<(Monomial, u32, K::Elem)> = f.terms.clone();
        let mut start = 0;
        while start < cur.len() {
            let (m, pos, c) = cur[start].clone();
            let mask = m.support_mask();
            match basis.iter().position(|g| g.pos == pos && g.mask & !mask == 0 && g.lm.divides(&m)) {
                Some(gi) => {
                    let g = &basis[gi];
                    let q = g.lm.quotient(&m).expect("divides");
                    let coef = k.mul(&c, &g.lc_inv);
                    cur = self.sub_mul(&cur[start..], &coef, &q, &g.v.terms);
                    start = 0;
                    quots.push((gi, coef, q));
                }
                None => {
                    rem.push((m, pos, c));
                    start += 1;
                }
            }
        }
        (ModVec { terms: rem }, quots)
    }
}

/// A basis element prepared for division.
#[derive(Clone, Debug)]
pub struct Reducer<K: Field> {
    pub v: ModVec<K>,
    pub lm: Monomial,
    pub pos: u32,
    pub mask: u32,
    pub lc_inv: K::Elem,
}

impl<K: Field> Reducer<K> {
    pub fn new(k: &K, v: ModVec<K>) -> Self {
        let (lm, pos, lc) = v.lead().cloned().expect("nonzero reducer");
        Reducer { lm, pos, mask: lm.support_mask(), lc_inv: k.inv(&lc).expect("nonzero"), v }
    }
}

/// A reduced Gröbner basis.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<K: Field> {
    pub ring: ModuleRing<K>,
    reducers: Vec<Reducer<K>>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    sugar: i64,
    /// Rank of the lcm term under the order is not available as an integer,
    /// so ties in sugar are broken by total degree and then indices.
    deg: usize,
    i: usize,
    j: usize,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    pos: u32,
    sugar: i64,
}

impl<K: Field> GroebnerBasis<K> {
    /// Runs Buchberger's algorithm.
    pub fn compute(ring: &ModuleRing<K>, gens: &[ModVec<K>]) -> Self {
        let k = &ring.k;
        let is_ideal = ring.rank == 1;
        let mut basis: Vec<Reducer<K>> = Vec::new();
        let mut sugar: Vec<i64> = Vec::new();
        let mut dead: Vec<bool> = Vec::new();
        let mut queue: BTreeSet<PairKey> = BTreeSet::new();
        let mut pair_slots: Vec<Option<Pair>> = Vec::new();

        // Inputs are processed by increasing sugar like S-polynomials.
        let mut inputs: Vec<(i64, ModVec<K>)> =
            gens.iter().filter(|g| !g.is_zero()).map(|g| (g.max_weight(&ring.order), g.clone())).collect();
        inputs.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| {
            let (la, lb) = (a.1.lead().unwrap(), b.1.lead().unwrap());
            ring.order.cmp((&la.0, la.1), (&lb.0, lb.1))
        }));
        let mut input_iter = inputs.into_iter().peekable();

        loop {
            // Choose the next polynomial to reduce: an input or an S-pair, lowest sugar first.
            let next_pair_sugar = queue.iter().next().map(|p| p.sugar);
            let next_input_sugar = input_iter.peek().map(|x| x.0);
            let (s, h) = match (next_pair_sugar, next_input_sugar) {
                (None, None) => break,
                (Some(ps), Some(is)) if ps < is => Self::take_pair(ring, &basis, &mut queue, &mut pair_slots),
                (Some(_), None) => Self::take_pair(ring, &basis, &mut queue, &mut pair_slots),
                _ => {
                    let (s, v) = input_iter.next().expect("peeked");
                    (s, v)
                }
            };
            let h = ring.reduce(&h, &basis);
            if h.is_zero() {
                continue;
            }
            let h = ring.monic(h);
            let (hlm, hpos, _) = h.lead().cloned().expect("nonzero");
            let hidx = basis.len();
            // Gebauer–Möller update.
            let mut new_pairs: Vec<Pair> = Vec::new();
            for (gi, g) in basis.iter().enumerate() {
                if dead[gi] || g.pos != hpos {
                    continue;
                }
                let lcm = g.lm.lcm(&hlm);
                let s_new = (sugar[gi] + (lcm.degree() - g.lm.degree()) as i64).max(s + (lcm.degree() - hlm.degree()) as i64);
                new_pairs.push(Pair { i: gi, j: hidx, lcm, pos: hpos, sugar: s_new });
            }
            // Criterion B on existing pairs.
            let mut removed = Vec::new();
            for key in queue.iter() {
                let p = pair_slots[Self::slot_of(key)].as_ref().expect("live pair");
                if p.pos == hpos && hlm.divides(&p.lcm) {
                    let li = basis[p.i].lm.lcm(&hlm);
                    let lj = basis[p.j].lm.lcm(&hlm);
                    if li != p.lcm && lj != p.lcm {
                        removed.push(key.clone());
                    }
                }
            }
            for key in removed {
                queue.remove(&key);
                pair_slots[Self::slot_of(&key)] = None;
            }
            // Criterion M / F on the new pairs.
            new_pairs.sort_by(|a, b| a.lcm.cmp_degrevlex(&b.lcm).then(a.i.cmp(&b.i)));
            let mut kept: Vec<Pair> = Vec::new();
            for p in new_pairs {
                let redundant = kept.iter().any(|q| q.lcm.divides(&p.lcm));
                if !redundant {
                    kept.push(p);
                }
            }
            for p in kept {
                // Product criterion, valid for ideals only.
                if is_ideal && basis[p.i].lm.coprime(&hlm) {
                    continue;
                }
                let slot = pair_slots.len();
                let key = PairKey { sugar: p.sugar, deg: p.lcm.degree(), i: slot, j: 0 };
                pair_slots.push(Some(p));
                queue.insert(key);
            }
            // Older elements whose leading term is now divisible stay as
            // reducers but no longer spawn pairs.
            for (gi, g) in basis.iter().enumerate() {
                if g.pos == hpos && hlm.divides(&g.lm) {
                    dead[gi] = true;
                }
            }
            basis.push(Reducer::new(k, h));
            sugar.push(s);
            dead.push(false);
        }
        Self::finish(ring, basis)
    }

    fn slot_of(key: &PairKey) -> usize {
        key.i
    }

    fn take_pair(ring: &ModuleRing<K>, basis: &[Reducer<K>], queue: &mut BTreeSet<PairKey>, slots: &mut [Option<Pair>]) -> (i64, ModVec<K>) {
        let key = queue.iter().next().cloned().expect("nonempty");
        queue.remove(&key);
        let p = slots[Self::slot_of(&key)].take().expect("live pair");
        let (a, b) = (&basis[p.i], &basis[p.j]);
        let ma = a.lm.quotient(&p.lcm).expect("divides");
        let mb = b.lm.quotient(&p.lcm).expect("divides");
        // Both leading coefficients are 1 (basis elements are monic).
        let sa = ring.scale_mul(&a.v, &ring.k.one(), &ma);
        let spoly = ModVec { terms: ring.sub_mul(&sa.terms, &ring.k.one(), &mb, &b.v.terms) };
        (p.sugar, spoly)
    }

    fn finish(ring: &ModuleRing<K>, basis: Vec<Reducer<K>>) -> Self {
        let k = &ring.k;
        // Minimalize: drop elements whose leading term is divisible by another's.
        let mut keep: Vec<Reducer<K>> = Vec::new();
        for (i, g) in basis.iter().enumerate() {
            let redundant = basis.iter().enumerate().any(|(j, h)| {
                j != i && h.pos == g.pos && h.lm.divides(&g.lm) && (h.lm != g.lm || j < i)
            });
            if !redundant {
                keep.push(g.clone());
            }
        }
        // Tail-reduce each element against the others.
        let mut reduced = Vec::with_capacity(keep.len());
        for i in 0..keep.len() {
            let others: Vec<Reducer<K>> = keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
            let head = keep[i].v.terms[0].clone();
            let tail = ModVec { terms: keep[i].v.terms[1..].to_vec() };
            let mut t = ring.reduce(&tail, &others).terms;
            t.insert(0, head);
            reduced.push(Reducer::new(k, ring.monic(ModVec { terms: t })));
        }
        reduced.sort_by(|a, b| ring.order.cmp((&a.lm, a.pos), (&b.lm, b.pos)));
        GroebnerBasis { ring: ring.clone(), reducers: reduced }
    }

    pub fn elements(&self) -> impl Iterator<Item = &ModVec<K>> {
        self.reducers.iter().map(|r| &r.v)
    }

    pub fn reducers(&self) -> &[Reducer<K>] {
        &self.reducers
    }

    pub fn len(&self) -> usize {
        self.reducers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reducers.is_empty()
    }

    pub fn normal_form(&self, v: &ModVec<K>) -> ModVec<K> {
        self.ring.reduce(v, &self.reducers)
    }

    pub fn contains(&self, v: &ModVec<K>) -> bool {
        self.normal_form(v).is_zero()
    }

    /// Whether the basis generates the unit ideal (rank 1) or the whole module.
    pub fn is_whole(&self) -> bool {
        (0..self.ring.rank as u32).all(|p| self.reducers.iter().any(|r| r.pos == p && r.lm.is_one()))
    }

    /// Leading terms `(monomial, position)`.
    pub fn leading_terms(&self) -> Vec<(Monomial, u32)> {
        self.reducers.iter().map(|r| (r.lm, r.pos)).collect()
    }

    /// Checks Buchberger's criterion directly: every S-pair reduces to zero.
    pub fn verify(&self) -> bool {
        let ring = &self.ring;
        for (i, a) in self.reducers.iter().enumerate() {
            for b in &self.reducers[i + 1..] {
                if a.pos != b.pos {
                    continue;
                }
                let lcm = a.lm.lcm(&b.lm);
                let ma = a.lm.quotient(&lcm).expect("divides");
                let mb = b.lm.quotient(&lcm).expect("divides");
                let sa = ring.scale_mul(&a.v, &a.lc_inv, &ma);
                let s = ModVec { terms: ring.sub_mul(&sa.terms, &b.lc_inv, &mb, &b.v.terms) };
                if !self.normal_form(&s).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}
