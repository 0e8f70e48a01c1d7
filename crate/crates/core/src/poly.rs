//! Sparse multivariate polynomials over an exact coefficient field.
//!
//! A [`Poly`] stores `(exponent vector, coefficient)` pairs sorted descending
//! under the owning ring's monomial order, with no zero coefficients. All
//! arithmetic lives on [`crate::ring::RingContext`] so that the order, the
//! field and the defining ideal are always in scope.

use std::cmp::Ordering;

use crate::field::Scalar;

/// Exponent vector; the length always equals the ring's variable count.
pub type Exp = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
}

impl MonomialOrder {
    /// Compares two exponent vectors of equal length.
    pub fn cmp_exp(&self, a: &[u32], b: &[u32]) -> Ordering {
        debug_assert_eq!(a.len(), b.len());
        match self {
            MonomialOrder::Lex => {
                for (x, y) in a.iter().zip(b.iter()) {
                    match x.cmp(y) {
                        Ordering::Equal => {}
                        other => return other,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Grevlex => {
                let da: u64 = a.iter().map(|&e| e as u64).sum();
                let db: u64 = b.iter().map(|&e| e as u64).sum();
                match da.cmp(&db) {
                    Ordering::Equal => {}
                    other => return other,
                }
                // ties: the last nonzero entry of a - b negative means a > b
                for (x, y) in a.iter().zip(b.iter()).rev() {
                    match x.cmp(y) {
                        Ordering::Equal => {}
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }
        }
    }
}

pub fn exp_mul(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

pub fn exp_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x <= y)
}

/// b / a, assuming divisibility.
pub fn exp_quot(b: &[u32], a: &[u32]) -> Exp {
    b.iter().zip(a.iter()).map(|(x, y)| x - y).collect()
}

pub fn exp_lcm(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b.iter()).map(|(x, y)| *x.max(y)).collect()
}

pub fn exp_is_constant(a: &[u32]) -> bool {
    a.iter().all(|&e| e == 0)
}

/// A polynomial in canonical sparse form. Construct through
/// [`crate::ring::RingContext`] methods only; the context maintains sorting,
/// zero-coefficient stripping and reduction by the defining ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    pub(crate) terms: Vec<(Exp, Scalar)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Exp, Scalar)] {
        &self.terms
    }

    /// Leading (exponent, coefficient) under the owning ring's order.
    pub fn leading(&self) -> Option<(&Exp, &Scalar)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    /// True iff the polynomial is a (possibly zero) field constant.
    pub fn is_constant(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((e, _)) => exp_is_constant(e),
        }
    }

    /// Coefficient of the constant monomial (the smallest term), if present.
    pub fn constant_coeff(&self) -> Option<&Scalar> {
        match self.terms.last() {
            Some((e, c)) if exp_is_constant(e) => Some(c),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().map(|&x| x as u64).sum())
            .max()
    }
}
