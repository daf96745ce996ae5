//! Exact scalar fields: arbitrary-precision rationals and prime fields.
//!
//! Fields are passed around as lightweight handles implementing [`Field`];
//! elements are plain values and all arithmetic goes through the handle, so
//! a prime field can carry its modulus without storing it in every element.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("zero denominator in scalar {0:?}")]
    ZeroDenominator(String),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("denominator {den} is not invertible modulo {p}")]
    NotInvertible { den: String, p: u64 },
    #[error("mixed fields: {0} and {1}")]
    Mixed(FieldDescriptor, FieldDescriptor),
}

/// Which field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldDescriptor {
    Rational,
    Prime(u64),
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "QQ"),
            FieldDescriptor::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// A field handle. All arithmetic on elements goes through it.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    fn descriptor(&self) -> FieldDescriptor;
    fn to_scalar(&self, a: &Self::Elem) -> Scalar;
    fn from_scalar(&self, s: &Scalar) -> Result<Self::Elem, FieldError>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// `a - c * b`
    fn sub_mul(&self, a: &Self::Elem, c: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(c, b))
    }

    fn format(&self, a: &Self::Elem) -> String {
        self.to_scalar(a).to_string()
    }
}

// ---------------------------------------------------------------------------
// Rationals with a machine-word fast path.

/// A reduced rational number with positive denominator.
///
/// Values whose numerator and denominator both fit in an `i64` are always
/// stored in the `Small` variant, so structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(i64, i64),
    Big(Box<BigRational>),
}

impl Rational {
    pub fn zero() -> Self {
        Rational::Small(0, 1)
    }

    pub fn one() -> Self {
        Rational::Small(1, 1)
    }

    pub fn from_int(v: i64) -> Self {
        Rational::Small(v, 1)
    }

    /// Builds `num/den`, reducing and fixing the sign.
    pub fn new(num: BigInt, den: BigInt) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator(format!("{num}/{den}")));
        }
        Ok(Self::from_big(BigRational::new(num, den)))
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(r)),
        }
    }

    fn from_i128(n: i128, d: i128) -> Self {
        debug_assert!(d != 0);
        let g = n.gcd(&d);
        let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(n, _) => BigInt::from(*n),
            Rational::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(_, d) => BigInt::from(*d),
            Rational::Big(b) => b.denom().clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (self, other) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                return Self::from_i128(a + c, b);
            }
            // |a|,|b|,|c|,|d| < 2^63 so these products fit in i128.
            if let (Some(x), Some(y)) = (a.checked_mul(d), c.checked_mul(b)) {
                if let Some(s) = x.checked_add(y) {
                    return Self::from_i128(s, b * d);
                }
            }
        }
        Self::from_big(self.to_big() + other.to_big())
    }

    pub fn neg(&self) -> Self {
        match self {
            Rational::Small(n, d) if *n != i64::MIN => Rational::Small(-n, *d),
            _ => Self::from_big(-self.to_big()),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (self, other) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            return Self::from_i128(a * c, b * d);
        }
        Self::from_big(self.to_big() * other.to_big())
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rational::Small(n, d) if *n != i64::MIN => {
                if *n < 0 {
                    Rational::Small(-d, -n)
                } else {
                    Rational::Small(*d, *n)
                }
            }
            _ => Self::from_big(self.to_big().recip()),
        })
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(n, _) => *n < 0,
            Rational::Big(b) => b.is_negative(),
        }
    }

    /// Parses `"7"`, `"-3/4"` and similar.
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| FieldError::Parse(s.to_string()))?;
        let den: BigInt = den.parse().map_err(|_| FieldError::Parse(s.to_string()))?;
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator(s.to_string()));
        }
        Self::new(num, den)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(b) => {
                if b.denom().is_one() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_int(v)
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &Rational) -> bool {
        matches!(a, Rational::Small(1, 1))
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a.add(b)
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a.sub(b)
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a.mul(b)
    }
    fn neg(&self, a: &Rational) -> Rational {
        a.neg()
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        a.inv()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Rational
    }
    fn to_scalar(&self, a: &Rational) -> Scalar {
        Scalar::Rational(a.clone())
    }
    fn from_scalar(&self, s: &Scalar) -> Result<Rational, FieldError> {
        match s {
            Scalar::Rational(r) => Ok(r.clone()),
            Scalar::Mod { p, .. } => Err(FieldError::Mixed(FieldDescriptor::Rational, FieldDescriptor::Prime(*p))),
        }
    }
}

// ---------------------------------------------------------------------------
// Prime fields.

/// The prime field with `p` elements; residues are kept in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Fails unless `p` is prime and below 2^62.
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) || p >= (1 << 62) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_big(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = v.mod_floor(&m);
        r.to_u64().expect("residue fits")
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a % self.p;
        let mut acc = 1u64 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i128) as u64)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Prime(self.p)
    }
    fn to_scalar(&self, a: &u64) -> Scalar {
        Scalar::Mod { value: *a, p: self.p }
    }
    fn from_scalar(&self, s: &Scalar) -> Result<u64, FieldError> {
        match s {
            Scalar::Mod { value, p } if *p == self.p => Ok(*value),
            Scalar::Mod { p, .. } => Err(FieldError::Mixed(self.descriptor(), FieldDescriptor::Prime(*p))),
            // Rationals with invertible denominators map into the prime field.
            Scalar::Rational(r) => {
                let n = self.reduce_big(&r.numer());
                let d = self.reduce_big(&r.denom());
                let di = self.inv(&d).ok_or_else(|| FieldError::NotInvertible {
                    den: r.denom().to_string(),
                    p: self.p,
                })?;
                Ok(self.mul(&n, &di))
            }
        }
    }
}

// ---------------------------------------------------------------------------

/// A field element tagged with its field, used at I/O boundaries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Mod { value: u64, p: u64 },
}

impl Scalar {
    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            Scalar::Rational(_) => FieldDescriptor::Rational,
            Scalar::Mod { p, .. } => FieldDescriptor::Prime(*p),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_normalize() {
        assert_eq!(Rational::parse("6/4").unwrap(), Rational::Small(3, 2));
        assert_eq!(Rational::parse("3/-6").unwrap(), Rational::Small(-1, 2));
        assert_eq!(Rational::parse(" -0/5 ").unwrap(), Rational::zero());
        assert!(matches!(Rational::parse("1/0"), Err(FieldError::ZeroDenominator(_))));
        assert!(matches!(Rational::parse("x"), Err(FieldError::Parse(_))));
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rational::from_int(i64::MAX);
        let sq = big.mul(&big);
        assert!(matches!(sq, Rational::Big(_)));
        let back = sq.mul(&big.inv().unwrap());
        assert_eq!(back, big);
        let s = big.add(&Rational::one());
        assert!(matches!(s, Rational::Big(_)));
        assert_eq!(s.sub(&Rational::one()), big);
    }

    #[test]
    fn prime_field_basics() {
        assert!(PrimeField::new(15).is_err());
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.inv(&0), None);
        let half = f.from_scalar(&Scalar::Rational(Rational::parse("1/2").unwrap())).unwrap();
        assert_eq!(f.mul(&half, &2), 1);
        assert!(f.from_scalar(&Scalar::Rational(Rational::parse("1/7").unwrap())).is_err());
    }

    proptest! {
        #[test]
        fn rational_inverse(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
            let q = Rationals;
            let a = Rational::new(n.into(), d.into()).unwrap();
            prop_assume!(!a.is_zero());
            let b = q.inv(&a).unwrap();
            prop_assert!(q.is_one(&q.mul(&a, &b)));
        }

        #[test]
        fn rational_matches_bigrational(a in any::<i64>(), b in 1i64.., c in any::<i64>(), d in 1i64..) {
            let x = Rational::new(a.into(), b.into()).unwrap();
            let y = Rational::new(c.into(), d.into()).unwrap();
            let bx = x.to_big();
            let by = y.to_big();
            prop_assert_eq!(x.add(&y).to_big(), &bx + &by);
            prop_assert_eq!(x.mul(&y).to_big(), &bx * &by);
            prop_assert_eq!(x.sub(&y).to_big(), &bx - &by);
        }

        #[test]
        fn fermat_inverse(a in 1u64..32003) {
            let f = PrimeField::new(32003).unwrap();
            prop_assert_eq!(f.inv(&a).unwrap(), f.pow(a, 32001));
        }
    }
}
