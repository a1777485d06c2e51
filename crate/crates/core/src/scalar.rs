//! Exact scalars: arbitrary-precision rationals (characteristic 0) and
//! residues modulo a prime.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("operands live in different fields: {0} and {1}")]
    ContextMismatch(Field, Field),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime below 2^63")]
    NotPrime(u64),
    #[error("{value} has no image in Z_{p}")]
    NotRepresentable { value: String, p: u64 },
}

/// The field a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// The prime field Z_p. Fails unless `p` is a prime below 2^63.
    pub fn prime(p: u64) -> Result<Field, ScalarError> {
        if is_prime(p) && p < (1 << 63) {
            Ok(Field::Prime(p))
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Z_{p}"),
        }
    }
}

/// Deterministic Miller-Rabin; the witness set is exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for w in WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let (mut d, mut r) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for w in WITNESSES {
        let mut x = pow_mod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// An exact field element together with its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod { value: u64, p: u64 },
}

impl Scalar {
    pub fn zero(field: Field) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: Field) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, v: i64) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.into())),
            Field::Prime(p) => Scalar::Mod { value: (v as i128).rem_euclid(p as i128) as u64, p },
        }
    }

    pub fn from_bigint(field: Field, v: &BigInt) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => Scalar::Mod { value: reduce_bigint(v, p), p },
        }
    }

    pub fn rational(num: i64, den: i64) -> Scalar {
        Scalar::Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Mod { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Mod { .. } => None,
        }
    }

    /// Residue in `[0, p)` for Z_p scalars.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    fn check(&self, other: &Scalar) -> Result<(), ScalarError> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(ScalarError::ContextMismatch(self.field(), other.field()))
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => {
                Scalar::Mod { value: add_mod(*a, *b, *p), p: *p }
            }
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, .. }) => {
                Scalar::Mod { value: mul_mod(*a, *b, *p), p: *p }
            }
            _ => unreachable!(),
        })
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Mod { value, p } => Scalar::Mod { value: inv_mod(*value, *p).unwrap(), p: *p },
        })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(num_traits::pow(r.clone(), exp as usize)),
            Scalar::Mod { value, p } => Scalar::Mod { value: pow_mod(*value, exp as u64, *p), p: *p },
        }
    }

    /// Image of this scalar in `field`. Rationals map into Z_p when the
    /// denominator is invertible; Z_p residues only map to themselves.
    pub fn to_field(&self, field: Field) -> Result<Scalar, ScalarError> {
        if self.field() == field {
            return Ok(self.clone());
        }
        match (self, field) {
            (Scalar::Rational(r), Field::Prime(p)) => {
                let num = reduce_bigint(r.numer(), p);
                let den = reduce_bigint(r.denom(), p);
                let inv = inv_mod(den, p).ok_or_else(|| ScalarError::NotRepresentable { value: r.to_string(), p })?;
                Ok(Scalar::Mod { value: mul_mod(num, inv, p), p })
            }
            _ => Err(ScalarError::ContextMismatch(self.field(), field)),
        }
    }
}

pub(crate) fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.partial_cmp(b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) if p == q => a.partial_cmp(b),
            _ => None,
        }
    }
}

impl Scalar {
    /// Negative rationals; Z_p scalars are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.abs()),
            s => s.clone(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Mod { value, p } => Scalar::Mod { value: (p - value) % p, p: *p },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

// The operator impls treat a field mismatch as a programming error; the
// `try_*` methods are the fallible surface.
impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.try_add(rhs).expect("scalar addition across fields")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.try_sub(rhs).expect("scalar subtraction across fields")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.try_mul(rhs).expect("scalar multiplication across fields")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::rational(n, d)
    }

    fn zp(v: i64, p: u64) -> Scalar {
        Scalar::from_i64(Field::Prime(p), v)
    }

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial(n), "{n}");
        }
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3_215_031_751));
        assert!(Field::prime(9_223_372_036_854_775_783).is_ok());
    }

    #[test]
    fn addition_examples() {
        assert_eq!(&q(1, 2) + &q(1, 2), q(1, 1));
        assert_eq!(&zp(2, 3) + &zp(2, 3), zp(1, 3));
        let x = q(-7, 3);
        assert_eq!(&Scalar::zero(Field::Rational) + &x, x);
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(&q(1, 2) * &q(1, 2), q(1, 4));
        assert_eq!(&zp(2, 5) * &zp(3, 5), zp(1, 5));
        let x = zp(4, 7);
        assert_eq!(&Scalar::one(Field::Prime(7)) * &x, x);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(q(2, 1).inv().unwrap(), q(1, 2));
        assert_eq!(zp(2, 3).inv().unwrap(), zp(2, 3));
        assert_eq!(q(0, 1).inv(), Err(ScalarError::DivisionByZero));
        assert_eq!(zp(0, 5).inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let err = q(1, 2).try_add(&zp(1, 3)).unwrap_err();
        assert_eq!(err, ScalarError::ContextMismatch(Field::Rational, Field::Prime(3)));
        assert!(zp(1, 3).try_mul(&zp(1, 5)).is_err());
    }

    #[test]
    fn rendering() {
        assert_eq!(q(-1, 2).to_string(), "-1/2");
        assert_eq!(q(6, 3).to_string(), "2");
        assert_eq!(zp(-1, 5).to_string(), "4");
    }

    #[test]
    fn rational_to_prime_field() {
        assert_eq!(q(1, 2).to_field(Field::Prime(3)).unwrap(), zp(2, 3));
        assert!(q(1, 3).to_field(Field::Prime(3)).is_err());
        assert!(zp(1, 3).to_field(Field::Rational).is_err());
    }

    #[test]
    fn prime_field_constructor() {
        assert!(Field::prime(5).is_ok());
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1).is_err());
    }

    fn small_rational() -> impl Strategy<Value = Scalar> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn prime_field_axioms(p in prop::sample::select(vec![2u64, 3, 5, 7, 101]), a in 0i64..1000, b in 0i64..1000, c in 0i64..1000) {
            let (a, b, c) = (zp(a, p), zp(b, p), zp(c, p));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a + &-&a).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn freshmans_dream(p in prop::sample::select(vec![2u64, 3, 5, 7, 13]), a in 0i64..100, b in 0i64..100) {
            let (a, b) = (zp(a, p), zp(b, p));
            let e = p as u32;
            prop_assert_eq!((&a + &b).pow(e), &a.pow(e) + &b.pow(e));
        }
    }
}
