//! Exact scalar fields: the rationals and prime fields `F_p`.
//!
//! Every rank decision in the crate goes through a [`Field`]. Elements are
//! plain values (`BigRational` or a canonical `u64` residue); the field value
//! itself carries whatever runtime data is needed (the modulus).

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Default prime used for modular cross-checks.
pub const DEFAULT_PRIME: u64 = 32003;

/// Which field a scalar or matrix lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldTag {
    Rational,
    Prime(u64),
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => f.write_str("QQ"),
            FieldTag::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("cannot parse {input:?} as a field element: {reason}")]
    Parse { input: String, reason: &'static str },
    #[error("modulus {0} is not a prime in [2, 2^31)")]
    NotPrime(u64),
    #[error("field tag mismatch: expected {expected}, found {found}")]
    TagMismatch { expected: FieldTag, found: FieldTag },
}

/// A tagged scalar, used at API boundaries where the field is only known at runtime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, p: u64 },
}

impl Scalar {
    pub fn tag(&self) -> FieldTag {
        match self {
            Scalar::Rational(_) => FieldTag::Rational,
            Scalar::Prime { p, .. } => FieldTag::Prime(*p),
        }
    }
}

/// An exact field. Implementations must be cheap to clone.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Send + Sync;

    fn tag(&self) -> FieldTag;
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
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError>;
    fn render(&self, a: &Self::Elem) -> String;
    fn to_scalar(&self, a: &Self::Elem) -> Scalar;
    fn from_scalar(&self, s: &Scalar) -> Result<Self::Elem, FieldError>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `y -= a * x`, elementwise.
    fn sub_scaled(&self, y: &mut [Self::Elem], a: &Self::Elem, x: &[Self::Elem]) {
        for (yi, xi) in y.iter_mut().zip(x) {
            if !self.is_zero(xi) {
                *yi = self.sub(yi, &self.mul(a, xi));
            }
        }
    }

    /// `y *= a`, elementwise.
    fn scale(&self, y: &mut [Self::Elem], a: &Self::Elem) {
        for yi in y.iter_mut() {
            *yi = self.mul(yi, a);
        }
    }
}

/// The rational numbers with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn tag(&self) -> FieldTag {
        FieldTag::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational, FieldError> {
        parse_rational(s)
    }
    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn to_scalar(&self, a: &BigRational) -> Scalar {
        Scalar::Rational(a.clone())
    }
    fn from_scalar(&self, s: &Scalar) -> Result<BigRational, FieldError> {
        match s {
            Scalar::Rational(q) => Ok(q.clone()),
            other => Err(FieldError::TagMismatch { expected: FieldTag::Rational, found: other.tag() }),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, FieldError> {
    let err = |reason| FieldError::Parse { input: s.to_string(), reason };
    let t = s.trim();
    if t.is_empty() {
        return Err(err("empty string"));
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (t, None),
    };
    let num: BigInt = num.parse().map_err(|_| err("bad numerator"))?;
    let den: BigInt = match den {
        Some(d) => d.parse().map_err(|_| err("bad denominator"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// The prime field `Z/pZ` with `p < 2^31`, so products fit in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces an integer modulo `p`.
    pub fn reduce(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = v.mod_floor(&m);
        r.to_u64().unwrap_or(0)
    }

    /// Reduces a rational modulo `p`; `None` when the denominator vanishes mod `p`.
    pub fn reduce_rational(&self, q: &BigRational) -> Option<u64> {
        let d = self.reduce(q.denom());
        let d_inv = self.inv(&d)?;
        Some(self.mul(&self.reduce(q.numer()), &d_inv))
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

/// Trial division; moduli are below 2^31.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn tag(&self) -> FieldTag {
        FieldTag::Prime(self.p)
    }
    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a % self.p == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn parse(&self, s: &str) -> Result<u64, FieldError> {
        let q = parse_rational(s)?;
        self.reduce_rational(&q).ok_or(FieldError::Parse {
            input: s.to_string(),
            reason: "denominator vanishes modulo p",
        })
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
    fn to_scalar(&self, a: &u64) -> Scalar {
        Scalar::Prime { value: *a, p: self.p }
    }
    fn from_scalar(&self, s: &Scalar) -> Result<u64, FieldError> {
        match s {
            Scalar::Prime { value, p } if *p == self.p => Ok(*value % self.p),
            other => Err(FieldError::TagMismatch { expected: self.tag(), found: other.tag() }),
        }
    }

    fn sub_scaled(&self, y: &mut [u64], a: &u64, x: &[u64]) {
        if *a == 0 {
            return;
        }
        let na = self.p - a;
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = (*yi + na * xi) % self.p;
        }
    }

    fn scale(&self, y: &mut [u64], a: &u64) {
        for yi in y.iter_mut() {
            *yi = *yi * a % self.p;
        }
    }
}

/// Clears denominators of a rational vector and divides by the content,
/// giving the primitive integer representative of the projective point.
pub fn primitive_integer_vector(v: &[BigRational]) -> alloc::vec::Vec<BigInt> {
    let mut lcm = BigInt::one();
    for q in v {
        lcm = lcm.lcm(q.denom());
    }
    let mut ints: alloc::vec::Vec<BigInt> =
        v.iter().map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in ints.iter_mut() {
            *x = &*x / &g;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.sign() == Sign::Minus {
            for x in ints.iter_mut() {
                *x = -&*x;
            }
        }
    }
    ints
}

/// True when `q` has no `p` in its denominator.
pub fn is_p_integral(q: &BigRational, p: u64) -> bool {
    !(q.denom() % BigInt::from(p)).is_zero()
}

/// True when `q` is a unit in the localization at `p`.
pub fn is_p_unit(q: &BigRational, p: u64) -> bool {
    is_p_integral(q, p) && !(q.numer() % BigInt::from(p)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_canonical() {
        let q = Rationals;
        let a = q.parse("6/-4").unwrap();
        assert_eq!(q.render(&a), "-3/2");
        assert_eq!(q.render(&q.parse(" 4/2 ").unwrap()), "2");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("x").is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.from_i64(-1), 4);
        assert_eq!(f.inv(&2), Some(3));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.parse("1/2").unwrap(), 3);
        assert!(f.parse("1/5").is_err());
        assert!(PrimeField::new(32003).is_ok());
        assert_eq!(PrimeField::new(9), Err(FieldError::NotPrime(9)));
    }

    #[test]
    fn tag_mismatch_is_reported() {
        let f = PrimeField::new(7).unwrap();
        let s = Scalar::Prime { value: 1, p: 5 };
        assert!(matches!(f.from_scalar(&s), Err(FieldError::TagMismatch { .. })));
        assert!(Rationals.from_scalar(&s).is_err());
    }

    #[test]
    fn primitive_vectors() {
        let q = Rationals;
        let v: alloc::vec::Vec<_> = ["-1/2", "1/3", "0"].iter().map(|s| q.parse(s).unwrap()).collect();
        let p = primitive_integer_vector(&v);
        assert_eq!(p, alloc::vec![BigInt::from(3), BigInt::from(-2), BigInt::from(0)]);
    }

    proptest::proptest! {
        #[test]
        fn add_sub_roundtrip(a in -1000i64..1000, b in -1000i64..1000, c in 1i64..50) {
            let q = Rationals;
            let x = BigRational::new(BigInt::from(a), BigInt::from(c));
            let y = q.from_i64(b);
            proptest::prop_assert_eq!(q.sub(&q.add(&x, &y), &y), x);
            let f = PrimeField::new(DEFAULT_PRIME).unwrap();
            let (u, v) = (f.from_i64(a), f.from_i64(b));
            proptest::prop_assert_eq!(f.sub(&f.add(&u, &v), &v), u);
        }
    }
}
