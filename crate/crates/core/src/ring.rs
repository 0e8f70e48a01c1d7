//! The ambient ring of every computation: a coefficient field, named
//! variables, a monomial order and an optional defining ideal with its cached
//! reduced Groebner basis. Arithmetic always returns normal forms, so two
//! elements are equal iff they are identical.

use std::fmt;
use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::field::{FieldSpec, Scalar};
use crate::poly::{exp_divides, exp_mul, exp_quot, Exp, MonomialOrder, Poly};

#[derive(Debug, PartialEq, Eq)]
struct RingData {
    field: FieldSpec,
    vars: Vec<String>,
    order: MonomialOrder,
    defining_ideal: Vec<Poly>,
    ideal_gb: Vec<Poly>,
}

/// Cheap-to-clone handle on the ring data; equality is structural.
#[derive(Debug, Clone)]
pub struct RingContext {
    data: Arc<RingData>,
}

impl PartialEq for RingContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) || self.data == other.data
    }
}
impl Eq for RingContext {}

impl RingContext {
    /// Polynomial ring without defining ideal. The variable list may be empty
    /// (constants-only ring).
    pub fn new(field: FieldSpec, vars: &[&str], order: MonomialOrder) -> Result<Self> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        for (i, v) in names.iter().enumerate() {
            if names[..i].contains(v) {
                return Err(AlgebraError::DuplicateVariable(v.clone()));
            }
        }
        Ok(RingContext {
            data: Arc::new(RingData {
                field,
                vars: names,
                order,
                defining_ideal: Vec::new(),
                ideal_gb: Vec::new(),
            }),
        })
    }

    /// Quotient ring: attaches a defining ideal and caches its reduced
    /// Groebner basis. Generators are given over the free ring.
    pub fn with_ideal(&self, gens: Vec<Poly>) -> Result<Self> {
        let free = RingContext {
            data: Arc::new(RingData {
                field: self.data.field,
                vars: self.data.vars.clone(),
                order: self.data.order,
                defining_ideal: Vec::new(),
                ideal_gb: Vec::new(),
            }),
        };
        let gb = crate::groebner::ideal_groebner_basis(&free, &gens);
        Ok(RingContext {
            data: Arc::new(RingData {
                field: self.data.field,
                vars: self.data.vars.clone(),
                order: self.data.order,
                defining_ideal: gens,
                ideal_gb: gb,
            }),
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.data.field
    }

    pub fn vars(&self) -> &[String] {
        &self.data.vars
    }

    pub fn nvars(&self) -> usize {
        self.data.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.data.order
    }

    pub fn defining_ideal(&self) -> &[Poly] {
        &self.data.defining_ideal
    }

    /// Cached reduced Groebner basis of the defining ideal.
    pub fn ideal_gb(&self) -> &[Poly] {
        &self.data.ideal_gb
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.data
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
    }

    // ---- constructors -------------------------------------------------

    pub fn zero(&self) -> Poly {
        Poly::zero()
    }

    pub fn one(&self) -> Poly {
        self.constant(self.data.field.one())
    }

    pub fn constant(&self, c: Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        self.normalize(Poly {
            terms: vec![(vec![0; self.nvars()], c)],
        })
    }

    pub fn int(&self, n: i64) -> Poly {
        self.constant(self.data.field.from_i64(n))
    }

    pub fn var(&self, name: &str) -> Result<Poly> {
        let i = self.var_index(name)?;
        let mut e = vec![0u32; self.nvars()];
        e[i] = 1;
        Ok(self.normalize(Poly {
            terms: vec![(e, self.data.field.one())],
        }))
    }

    pub fn monomial(&self, exp: Exp, c: Scalar) -> Poly {
        assert_eq!(exp.len(), self.nvars());
        if c.is_zero() {
            return Poly::zero();
        }
        self.normalize(Poly {
            terms: vec![(exp, c)],
        })
    }

    // ---- arithmetic (results in normal form) --------------------------

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.normalize(self.raw_add(a, b))
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.normalize(self.raw_add(a, &self.raw_neg(b)))
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        // negation commutes with reduction, no renormalization needed
        self.raw_neg(a)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.normalize(self.raw_mul(a, b))
    }

    pub fn scale(&self, c: &Scalar, a: &Poly) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), self.data.field.mul(c, k)))
                .collect(),
        }
    }

    /// c * m * a for a monomial m given by its exponent vector.
    pub fn mul_term(&self, c: &Scalar, m: &[u32], a: &Poly) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(e, k)| (exp_mul(e, m), self.data.field.mul(c, k)))
                .collect(),
        }
    }

    pub fn pow(&self, a: &Poly, n: u32) -> Poly {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`; used by base change. The
    /// images live over `target`.
    pub fn substitute(&self, p: &Poly, target: &RingContext, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars());
        let mut acc = target.zero();
        for (e, c) in &p.terms {
            let mut m = match c {
                Scalar::Rat(_) | Scalar::Fp(_) => target.constant(c.clone()),
            };
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    m = target.mul(&m, &target.pow(&images[i], k));
                }
            }
            acc = target.add(&acc, &m);
        }
        acc
    }

    // ---- raw layer (no ideal reduction) --------------------------------

    pub(crate) fn raw_add(&self, a: &Poly, b: &Poly) -> Poly {
        let order = self.data.order;
        let field = &self.data.field;
        let mut terms: Vec<(Exp, Scalar)> = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            match order.cmp_exp(&a.terms[i].0, &b.terms[j].0) {
                std::cmp::Ordering::Greater => {
                    terms.push(a.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    terms.push(b.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = field.add(&a.terms[i].1, &b.terms[j].1);
                    if !c.is_zero() {
                        terms.push((a.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&a.terms[i..]);
        terms.extend_from_slice(&b.terms[j..]);
        Poly { terms }
    }

    pub(crate) fn raw_neg(&self, a: &Poly) -> Poly {
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), self.data.field.neg(c)))
                .collect(),
        }
    }

    pub(crate) fn raw_mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for (e, c) in &a.terms {
            acc = self.raw_add(&acc, &self.mul_term(c, e, b));
        }
        acc
    }

    /// Full division remainder of `p` against `basis` (raw polynomials, no
    /// ideal reduction). No remainder term is divisible by any basis leading
    /// monomial.
    pub(crate) fn raw_reduce(&self, p: &Poly, basis: &[Poly]) -> Poly {
        let field = self.data.field;
        let mut work = p.clone();
        let mut rem: Vec<(Exp, Scalar)> = Vec::new();
        'outer: while let Some((le, lc)) = work.leading().map(|(e, c)| (e.clone(), c.clone())) {
            for g in basis {
                if let Some((ge, gc)) = g.leading() {
                    if exp_divides(ge, &le) {
                        let q = exp_quot(&le, ge);
                        let factor = field.neg(&field.div(&lc, gc).expect("nonzero lead"));
                        work = self.raw_add(&work, &self.mul_term(&factor, &q, g));
                        continue 'outer;
                    }
                }
            }
            rem.push((le, lc));
            work.terms.remove(0);
        }
        Poly { terms: rem }
    }

    /// Normal form with respect to the defining ideal.
    pub fn normalize(&self, p: Poly) -> Poly {
        if self.data.ideal_gb.is_empty() {
            p
        } else {
            self.raw_reduce(&p, &self.data.ideal_gb)
        }
    }

    pub fn eq_poly(&self, a: &Poly, b: &Poly) -> bool {
        a == b
    }

    /// True iff the potential is an invertible constant in the quotient ring:
    /// the normal form is a nonzero field constant and 1 lies in
    /// (defining ideal, w).
    pub fn is_unit_constant(&self, w: &Poly) -> bool {
        if w.is_zero() || !w.is_constant() {
            return false;
        }
        let mut gens: Vec<Poly> = self.data.defining_ideal.clone();
        gens.push(w.clone());
        let free = self.free_ring();
        let gb = crate::groebner::ideal_groebner_basis(&free, &gens);
        free.raw_reduce(&free.one(), &gb).is_zero()
    }

    /// The same ring without its defining ideal.
    pub fn free_ring(&self) -> RingContext {
        if self.data.defining_ideal.is_empty() {
            self.clone()
        } else {
            RingContext {
                data: Arc::new(RingData {
                    field: self.data.field,
                    vars: self.data.vars.clone(),
                    order: self.data.order,
                    defining_ideal: Vec::new(),
                    ideal_gb: Vec::new(),
                }),
            }
        }
    }

    // ---- text form ------------------------------------------------------

    /// Canonical text form, e.g. `3*x^2*y - 1/2`.
    pub fn render(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in p.terms.iter().enumerate() {
            let neg = c.is_display_negative();
            let abs = if neg { self.data.field.neg(c) } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mono = self.render_monomial(e);
            if mono.is_empty() {
                out.push_str(&abs.render());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&abs.render());
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    fn render_monomial(&self, e: &[u32]) -> String {
        let mut parts = Vec::new();
        for (i, &k) in e.iter().enumerate() {
            if k == 1 {
                parts.push(self.data.vars[i].clone());
            } else if k > 1 {
                parts.push(format!("{}^{}", self.data.vars[i], k));
            }
        }
        parts.join("*")
    }

    /// Parses the canonical text form (and general `+ - * ^ ( )` expressions
    /// with integer or `p/q` literals).
    pub fn parse_poly(&self, text: &str) -> Result<Poly> {
        crate::parse::parse_poly(self, text)
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.data.field, self.data.vars.join(","))?;
        if !self.data.defining_ideal.is_empty() {
            let gens: Vec<String> = self
                .data
                .defining_ideal
                .iter()
                .map(|p| self.render(p))
                .collect();
            write!(f, "/({})", gens.join(", "))?;
        }
        Ok(())
    }
}
