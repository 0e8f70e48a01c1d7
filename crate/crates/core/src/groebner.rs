//! Groebner bases for ideals and submodules of free modules, with membership
//! lifts and syzygies.
//!
//! Vectors are elements of a free module `A^k`, stored densely by position.
//! The module order is position-over-term with positions compared ascending:
//! a term in position `i` beats every term in position `j > i`, and ties are
//! broken by the ring's monomial order. Syzygies and lifts come from a
//! Groebner basis of the graph module `{ (g_i, e_i) }` in `A^(k+m)`, where
//! the first block dominates; basis elements with vanishing first block
//! generate the syzygy module, and reduction tails give exact lift
//! certificates.
//!
//! Every entry point except [`ideal_groebner_basis`] works over the quotient
//! by the ring's defining ideal: generators are silently augmented with
//! `q * e_p` for each cached ideal basis element `q` and position `p`.

use std::cmp::Ordering;

use crate::field::Scalar;
use crate::poly::{exp_divides, exp_lcm, exp_quot, Exp, Poly};
use crate::ring::RingContext;

pub type Vector = Vec<Poly>;

pub fn vec_zero(len: usize) -> Vector {
    vec![Poly::zero(); len]
}

pub fn vec_is_zero(v: &[Poly]) -> bool {
    v.iter().all(|p| p.is_zero())
}

/// Leading term under position-over-term: `(position, exponent, coefficient)`.
pub fn vec_leading(v: &[Poly]) -> Option<(usize, Exp, Scalar)> {
    for (pos, p) in v.iter().enumerate() {
        if let Some((e, c)) = p.leading() {
            return Some((pos, e.clone(), c.clone()));
        }
    }
    None
}

fn vec_add(ctx: &RingContext, a: &[Poly], b: &[Poly]) -> Vector {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| ctx.raw_add(x, y))
        .collect()
}

fn vec_mul_term(ctx: &RingContext, c: &Scalar, m: &[u32], v: &[Poly]) -> Vector {
    v.iter().map(|p| ctx.mul_term(c, m, p)).collect()
}

fn vec_scale(ctx: &RingContext, c: &Scalar, v: &[Poly]) -> Vector {
    v.iter()
        .map(|p| {
            if p.is_zero() {
                Poly::zero()
            } else {
                ctx.scale(c, p)
            }
        })
        .collect()
}

/// Full normal form of `v` against `basis`: no remaining term in any
/// position is divisible by a basis leading term in the same position.
pub fn reduce_vector(ctx: &RingContext, v: &[Poly], basis: &[Vector]) -> Vector {
    reduce_vector_bounded(ctx, v, basis, usize::MAX)
}

/// Like [`reduce_vector`] but only reduces terms in positions `< bound`
/// using basis elements leading in positions `< bound`. Terms at positions
/// `>= bound` are carried along untouched; this is the lift-extraction mode.
fn reduce_vector_bounded(
    ctx: &RingContext,
    v: &[Poly],
    basis: &[Vector],
    bound: usize,
) -> Vector {
    let field = *ctx.field();
    let mut work: Vector = v.to_vec();
    let mut rem: Vector = vec_zero(v.len());
    loop {
        let Some((pos, le, lc)) = vec_leading(&work) else {
            break;
        };
        if pos >= bound {
            // everything left lives in the carried block
            for p in pos..work.len() {
                rem[p] = ctx.raw_add(&rem[p], &work[p]);
            }
            break;
        }
        let mut reduced = false;
        for g in basis {
            if let Some((gp, ge, gc)) = vec_leading(g) {
                if gp == pos && gp < bound && exp_divides(&ge, &le) {
                    let q = exp_quot(&le, &ge);
                    let factor = field.neg(&field.div(&lc, &gc).expect("nonzero lead"));
                    work = vec_add(ctx, &work, &vec_mul_term(ctx, &factor, &q, g));
                    reduced = true;
                    break;
                }
            }
        }
        if !reduced {
            // move the irreducible leading term to the remainder
            let (e, c) = work[pos].terms[0].clone();
            rem[pos] = ctx.raw_add(&rem[pos], &Poly { terms: vec![(e, c)] });
            work[pos].terms.remove(0);
        }
    }
    rem
}

fn monic(ctx: &RingContext, v: &[Poly]) -> Vector {
    match vec_leading(v) {
        Some((_, _, c)) => {
            let inv = ctx.field().inv(&c).expect("nonzero lead");
            vec_scale(ctx, &inv, v)
        }
        None => v.to_vec(),
    }
}

fn s_pair(ctx: &RingContext, f: &[Poly], g: &[Poly]) -> Vector {
    let (pf, ef, cf) = vec_leading(f).unwrap();
    let (pg, eg, cg) = vec_leading(g).unwrap();
    debug_assert_eq!(pf, pg);
    let lcm = exp_lcm(&ef, &eg);
    let field = ctx.field();
    let mf = vec_mul_term(
        ctx,
        &field.inv(&cf).unwrap(),
        &exp_quot(&lcm, &ef),
        f,
    );
    let mg = vec_mul_term(
        ctx,
        &field.inv(&cg).unwrap(),
        &exp_quot(&lcm, &eg),
        g,
    );
    let neg: Vector = mg.iter().map(|p| ctx.raw_neg(p)).collect();
    vec_add(ctx, &mf, &neg)
}

/// Compares leading terms under position-over-term (positions ascending
/// dominate, ties by the ring's monomial order).
fn cmp_pot(ctx: &RingContext, a: (usize, &Exp), b: (usize, &Exp)) -> Ordering {
    match a.0.cmp(&b.0) {
        Ordering::Less => Ordering::Greater,
        Ordering::Greater => Ordering::Less,
        Ordering::Equal => ctx.order().cmp_exp(a.1, b.1),
    }
}

/// Buchberger's algorithm on module vectors. Returns a (not yet reduced)
/// Groebner basis with monic leading coefficients.
fn buchberger(ctx: &RingContext, gens: &[Vector]) -> Vec<Vector> {
    let mut basis: Vec<Vector> = gens
        .iter()
        .filter(|v| !vec_is_zero(v))
        .map(|v| monic(ctx, v))
        .collect();
    let ambient_one = basis.first().map(|v| v.len() == 1).unwrap_or(false);

    let lead = |basis: &Vec<Vector>, i: usize| -> (usize, Exp) {
        let (p, e, _) = vec_leading(&basis[i]).unwrap();
        (p, e)
    };

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if lead(&basis, i).0 == lead(&basis, j).0 {
                pairs.push((i, j));
            }
        }
    }

    while !pairs.is_empty() {
        // normal selection: smallest lcm first, then indices
        let mut best = 0usize;
        let key = |basis: &Vec<Vector>, (i, j): (usize, usize)| -> (usize, Exp) {
            let (p, ei) = lead(basis, i);
            let (_, ej) = lead(basis, j);
            (p, exp_lcm(&ei, &ej))
        };
        for t in 1..pairs.len() {
            let ka = key(&basis, pairs[t]);
            let kb = key(&basis, pairs[best]);
            let ord = match ka.0.cmp(&kb.0) {
                Ordering::Equal => ctx.order().cmp_exp(&ka.1, &kb.1),
                o => o,
            };
            if ord == Ordering::Less || (ord == Ordering::Equal && pairs[t] < pairs[best]) {
                best = t;
            }
        }
        let (i, j) = pairs.swap_remove(best);
        let (p, ei) = lead(&basis, i);
        let (_, ej) = lead(&basis, j);
        let lcm = exp_lcm(&ei, &ej);

        // product criterion (sound for the ideal case only)
        if ambient_one && exp_lcm(&ei, &ej).iter().sum::<u32>()
            == ei.iter().sum::<u32>() + ej.iter().sum::<u32>()
        {
            continue;
        }
        // conservative chain criterion: a third element whose leading term
        // divides the lcm with both sub-lcms strictly smaller
        let mut skip = false;
        for l in 0..basis.len() {
            if l == i || l == j {
                continue;
            }
            let (pl, el) = lead(&basis, l);
            if pl != p || !exp_divides(&el, &lcm) {
                continue;
            }
            let lcm_il = exp_lcm(&ei, &el);
            let lcm_jl = exp_lcm(&ej, &el);
            if lcm_il != lcm && lcm_jl != lcm {
                skip = true;
                break;
            }
        }
        if skip {
            continue;
        }

        let s = s_pair(ctx, &basis[i], &basis[j]);
        let r = reduce_vector(ctx, &s, &basis);
        if !vec_is_zero(&r) {
            let r = monic(ctx, &r);
            let new = basis.len();
            let (rp, _, _) = vec_leading(&r).unwrap();
            basis.push(r);
            for t in 0..new {
                if lead(&basis, t).0 == rp {
                    pairs.push((t, new));
                }
            }
        }
    }
    basis
}

/// Inter-reduction: minimalizes, tail-reduces, sorts descending by leading
/// term. The result is the unique reduced Groebner basis of the submodule.
fn interreduce(ctx: &RingContext, basis: Vec<Vector>) -> Vec<Vector> {
    // minimalize: drop elements whose leading term is divisible by another's
    let mut kept: Vec<Vector> = Vec::new();
    'outer: for (i, v) in basis.iter().enumerate() {
        let (p, e, _) = vec_leading(v).unwrap();
        for (j, w) in basis.iter().enumerate() {
            if i == j {
                continue;
            }
            let (q, f, _) = vec_leading(w).unwrap();
            if q == p && exp_divides(&f, &e) && (f != e || j < i) {
                continue 'outer;
            }
        }
        kept.push(v.clone());
    }
    // tail-reduce each against the rest
    let mut out: Vec<Vector> = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<Vector> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, w)| w.clone())
            .collect();
        let r = reduce_vector(ctx, &kept[i], &others);
        if !vec_is_zero(&r) {
            out.push(monic(ctx, &r));
        }
    }
    out.sort_by(|a, b| {
        let (pa, ea, _) = vec_leading(a).unwrap();
        let (pb, eb, _) = vec_leading(b).unwrap();
        cmp_pot(ctx, (pb, &eb), (pa, &ea))
    });
    out
}

fn ideal_augmentation(ctx: &RingContext, ambient: usize) -> Vec<Vector> {
    let mut extra = Vec::new();
    for q in ctx.ideal_gb() {
        for p in 0..ambient {
            let mut v = vec_zero(ambient);
            v[p] = q.clone();
            extra.push(v);
        }
    }
    extra
}

/// Reduced Groebner basis of an ideal over the free ring (no quotient
/// augmentation); this is what [`RingContext::with_ideal`] caches.
pub fn ideal_groebner_basis(ctx: &RingContext, gens: &[Poly]) -> Vec<Poly> {
    let vecs: Vec<Vector> = gens.iter().map(|p| vec![p.clone()]).collect();
    let gb = interreduce(ctx, buchberger(ctx, &vecs));
    gb.into_iter().map(|mut v| v.pop().unwrap()).collect()
}

/// Reduced Groebner basis of the submodule of `A^ambient` generated by the
/// given vectors together with the defining ideal times each basis vector.
pub fn module_groebner_basis(ctx: &RingContext, gens: &[Vector], ambient: usize) -> Vec<Vector> {
    let mut all: Vec<Vector> = gens.to_vec();
    all.extend(ideal_augmentation(ctx, ambient));
    interreduce(ctx, buchberger(ctx, &all))
}

/// Normal form of a vector against a module Groebner basis.
pub fn vector_normal_form(ctx: &RingContext, v: &[Poly], basis: &[Vector]) -> Vector {
    reduce_vector(ctx, v, basis)
        .into_iter()
        .map(|p| ctx.normalize(p))
        .collect()
}

pub enum Membership {
    /// Lift coefficients: `gens * lift == v` modulo the defining ideal.
    Yes(Vec<Poly>),
    /// Nonzero normal form witnessing non-membership.
    No(Vector),
}

/// Graph-module Groebner basis over `A^(ambient + ngens)`; the engine behind
/// membership-with-lift and syzygies.
pub struct ExtendedGb {
    ambient: usize,
    ngens: usize,
    total: usize,
    basis: Vec<Vector>,
}

impl ExtendedGb {
    /// `gens` are vectors in `A^ambient`; the defining ideal is augmented in
    /// automatically (its lift coefficients are tracked and then dropped).
    pub fn new(ctx: &RingContext, gens: &[Vector], ambient: usize) -> Self {
        let mut all: Vec<Vector> = gens.to_vec();
        all.extend(ideal_augmentation(ctx, ambient));
        let total = all.len();
        let combined: Vec<Vector> = all
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut v = vec_zero(ambient + total);
                v[..ambient].clone_from_slice(g);
                v[ambient + i] = ctx.one();
                v
            })
            .collect();
        let basis = interreduce(ctx, buchberger(ctx, &combined));
        ExtendedGb {
            ambient,
            ngens: gens.len(),
            total,
            basis,
        }
    }

    /// Normal form plus exact lift: `v == nf + sum_i lift[i] * gens[i]`
    /// modulo the defining ideal. `lift` covers the original generators only.
    pub fn reduce_with_lift(&self, ctx: &RingContext, v: &[Poly]) -> (Vector, Vec<Poly>) {
        assert_eq!(v.len(), self.ambient);
        let mut ext = v.to_vec();
        ext.extend(vec_zero(self.total));
        let red = reduce_vector_bounded(ctx, &ext, &self.basis, self.ambient);
        let nf: Vector = red[..self.ambient]
            .iter()
            .map(|p| ctx.normalize(p.clone()))
            .collect();
        let lift: Vec<Poly> = red[self.ambient..self.ambient + self.ngens]
            .iter()
            .map(|p| ctx.normalize(ctx.raw_neg(p)))
            .collect();
        (nf, lift)
    }

    pub fn membership(&self, ctx: &RingContext, v: &[Poly]) -> Membership {
        let (nf, lift) = self.reduce_with_lift(ctx, v);
        if vec_is_zero(&nf) {
            Membership::Yes(lift)
        } else {
            Membership::No(nf)
        }
    }

    /// Generating set (a Groebner basis, in fact) of the syzygy module of
    /// the original generators over the quotient ring: coefficients on the
    /// ideal augmentation are dropped.
    pub fn syzygies(&self, ctx: &RingContext) -> Vec<Vector> {
        let mut out = Vec::new();
        for b in &self.basis {
            if vec_is_zero(&b[..self.ambient]) {
                let syz: Vector = b[self.ambient..self.ambient + self.ngens]
                    .iter()
                    .map(|p| ctx.normalize(p.clone()))
                    .collect();
                if !vec_is_zero(&syz) {
                    out.push(syz);
                }
            }
        }
        out
    }
}

/// One-call membership test with lift certificate.
pub fn submodule_membership(ctx: &RingContext, v: &[Poly], gens: &[Vector]) -> Membership {
    ExtendedGb::new(ctx, gens, v.len()).membership(ctx, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::poly::MonomialOrder;

    fn qq(vars: &[&str], order: MonomialOrder) -> RingContext {
        RingContext::new(FieldSpec::Rationals, vars, order).unwrap()
    }

    fn polys(ctx: &RingContext, ss: &[&str]) -> Vec<Poly> {
        ss.iter().map(|s| ctx.parse_poly(s).unwrap()).collect()
    }

    #[test]
    fn already_reduced_basis() {
        let ctx = qq(&["x", "y"], MonomialOrder::Grevlex);
        let gb = ideal_groebner_basis(&ctx, &polys(&ctx, &["x", "y"]));
        let rendered: Vec<String> = gb.iter().map(|p| ctx.render(p)).collect();
        assert_eq!(rendered, vec!["x", "y"]);
    }

    #[test]
    fn lex_basis_matches_hand_computation() {
        // {x^2 - y, x*y - 1} under lex(x > y): S-pair chains give
        // x - y^2 and y^3 - 1, and the original generators reduce away.
        let ctx = qq(&["x", "y"], MonomialOrder::Lex);
        let gb = ideal_groebner_basis(&ctx, &polys(&ctx, &["x^2 - y", "x*y - 1"]));
        let rendered: Vec<String> = gb.iter().map(|p| ctx.render(p)).collect();
        assert_eq!(rendered, vec!["x - y^2", "y^3 - 1"]);
    }

    #[test]
    fn zero_generator_dropped() {
        let ctx = qq(&["x"], MonomialOrder::Grevlex);
        let gb = ideal_groebner_basis(&ctx, &[Poly::zero()]);
        assert!(gb.is_empty());
    }

    #[test]
    fn canonical_under_permutation_and_scaling() {
        let ctx = qq(&["x", "y", "z"], MonomialOrder::Grevlex);
        let a = polys(&ctx, &["x^2 + y*z", "x*z - y", "y^2 - z"]);
        let b = polys(&ctx, &["3*y^2 - 3*z", "x*z - y", "-2*x^2 - 2*y*z"]);
        let gb_a = ideal_groebner_basis(&ctx, &a);
        let gb_b = ideal_groebner_basis(&ctx, &b);
        assert_eq!(gb_a, gb_b);
    }

    #[test]
    fn normal_form_by_substitution_chain() {
        let ctx = qq(&["x", "y"], MonomialOrder::Lex);
        let gb = ideal_groebner_basis(&ctx, &polys(&ctx, &["x^2 - y", "x*y - 1"]));
        let basis: Vec<Vector> = gb.iter().map(|p| vec![p.clone()]).collect();
        let x3 = vec![ctx.parse_poly("x^3").unwrap()];
        let nf = vector_normal_form(&ctx, &x3, &basis);
        assert_eq!(ctx.render(&nf[0]), "1");
        let nf0 = vector_normal_form(&ctx, &[Poly::zero()], &basis);
        assert!(nf0[0].is_zero());
    }

    #[test]
    fn membership_with_lift() {
        let ctx = qq(&["x", "y"], MonomialOrder::Grevlex);
        let gens = vec![polys(&ctx, &["x"])];
        match submodule_membership(&ctx, &polys(&ctx, &["x^2 + x*y"]), &gens) {
            Membership::Yes(lift) => assert_eq!(ctx.render(&lift[0]), "x + y"),
            Membership::No(_) => panic!("expected member"),
        }
        let gens2 = vec![polys(&ctx, &["x"]), polys(&ctx, &["y"])];
        match submodule_membership(&ctx, &polys(&ctx, &["1"]), &gens2) {
            Membership::Yes(_) => panic!("1 is not in (x, y)"),
            Membership::No(w) => assert_eq!(ctx.render(&w[0]), "1"),
        }
    }

    #[test]
    fn membership_derived_from_basis_example() {
        let ctx = qq(&["x", "y"], MonomialOrder::Lex);
        let gens = vec![
            polys(&ctx, &["x^2 - y"]),
            polys(&ctx, &["x*y - 1"]),
        ];
        match submodule_membership(&ctx, &polys(&ctx, &["y^3 - 1"]), &gens) {
            Membership::Yes(lift) => {
                // verify the certificate exactly
                let mut acc = Poly::zero();
                for (c, g) in lift.iter().zip(gens.iter()) {
                    acc = ctx.add(&acc, &ctx.mul(c, &g[0]));
                }
                assert_eq!(ctx.render(&acc), "y^3 - 1");
            }
            Membership::No(_) => panic!("y^3 - 1 is in the ideal"),
        }
    }

    #[test]
    fn koszul_syzygy() {
        let ctx = qq(&["x", "y"], MonomialOrder::Grevlex);
        let gens = vec![polys(&ctx, &["x"]), polys(&ctx, &["y"])];
        let ext = ExtendedGb::new(&ctx, &gens, 1);
        let syz = ext.syzygies(&ctx);
        assert_eq!(syz.len(), 1);
        // the Koszul relation (y, -x) up to sign
        let rendered: Vec<String> = syz[0].iter().map(|p| ctx.render(p)).collect();
        assert!(rendered == vec!["y", "-x"] || rendered == vec!["-y", "x"]);
    }

    #[test]
    fn quotient_ring_membership() {
        let ctx = qq(&["x", "y"], MonomialOrder::Grevlex);
        let ideal = polys(&ctx, &["x*y"]);
        let qctx = ctx.with_ideal(ideal).unwrap();
        // y^2 * x is zero in QQ[x,y]/(xy), so it lies in the submodule (x^2)
        match submodule_membership(
            &qctx,
            &[qctx.parse_poly("x^3").unwrap()],
            &[vec![qctx.parse_poly("x^2").unwrap()]],
        ) {
            Membership::Yes(lift) => assert_eq!(qctx.render(&lift[0]), "x"),
            Membership::No(_) => panic!(),
        }
    }
}
