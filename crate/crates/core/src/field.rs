//! Exact coefficient arithmetic: arbitrary-precision rationals and prime fields.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;

use crate::error::{AlgebraError, Result};

/// The coefficient field of a [`crate::ring::RingContext`]: either the
/// rationals or a prime field with machine-word arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    /// Prime field of the given characteristic (a checked prime below 2^31).
    Prime(u64),
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    /// Prime field constructor; rejects non-primes and primes >= 2^31.
    pub fn prime_field(p: u64) -> Result<Self> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(AlgebraError::NotAPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Fp(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::one()),
            FieldSpec::Prime(_) => Scalar::Fp(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from(BigInt::from(n))),
            FieldSpec::Prime(p) => Scalar::Fp((n.rem_euclid(*p as i64)) as u64),
        }
    }

    /// Builds p/q; fails on q = 0 or on a rational literal whose denominator
    /// vanishes in a prime field.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(AlgebraError::DivisionByZero);
        }
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        self.div(&n, &d)
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + y) % p),
            _ => panic!("coefficient/field mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (FieldSpec::Prime(p), Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            _ => panic!("coefficient/field mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x * y) % p),
            _ => panic!("coefficient/field mismatch"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(match (self, a) {
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(x.recip()),
            (FieldSpec::Prime(p), Scalar::Fp(x)) => Scalar::Fp(mod_inverse(*x, *p)),
            _ => panic!("coefficient/field mismatch"),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "QQ"),
            FieldSpec::Prime(p) => write!(f, "FP({p})"),
        }
    }
}

/// A field element. The variant must match the ambient [`FieldSpec`]; all
/// arithmetic goes through the field so the modulus is always available.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp(u64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Fp(x) => *x == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_one(),
            Scalar::Fp(x) => *x == 1,
        }
    }

    /// Canonical text form: `p/q` with the denominator omitted when 1;
    /// prime-field elements print their least nonnegative representative.
    pub fn render(&self) -> String {
        match self {
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Fp(x) => x.to_string(),
        }
    }

    /// True for rationals with negative sign; prime-field elements are never
    /// displayed with a leading minus.
    pub fn is_display_negative(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_negative(),
            Scalar::Fp(_) => false,
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid on (a, p), p prime and a != 0 mod p
    let (mut r0, mut r1) = (a as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(p as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_construction() {
        assert!(FieldSpec::prime_field(31).is_ok());
        assert!(FieldSpec::prime_field(1).is_err());
        assert!(FieldSpec::prime_field(91).is_err());
        assert!(FieldSpec::prime_field(1 << 31).is_err());
    }

    #[test]
    fn fp_arithmetic() {
        let f = FieldSpec::prime_field(31).unwrap();
        let a = f.from_i64(17);
        let b = f.from_i64(20);
        assert_eq!(f.add(&a, &b), f.from_i64(6));
        assert_eq!(f.mul(&a, &b), f.from_i64(340 % 31));
        let inv = f.inv(&a).unwrap();
        assert!(f.mul(&a, &inv).is_one());
        assert_eq!(f.neg(&f.zero()), f.zero());
    }

    #[test]
    fn rational_render() {
        let f = FieldSpec::Rationals;
        assert_eq!(f.from_ratio(-1, 2).unwrap().render(), "-1/2");
        assert_eq!(f.from_i64(3).render(), "3");
    }
}
