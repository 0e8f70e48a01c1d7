//! Binary functors on matrix factorizations: tensor product, internal Hom,
//! duality, external tensor, Koszul factorizations, and the canonical
//! swap/associator isomorphisms between tensor layouts.
//!
//! Sign conventions. The displayed matrices in the source material carry
//! implicit Koszul signs; we use the unambiguous operator form throughout:
//! the tensor differential is `p (x) 1 + sigma (1 (x) q)` with `sigma`
//! negating on `P_1 (x) Q_*`, and the Hom differential is
//! `d(f) = q . f - (-1)^{|f|} f . p`. The normative statement is that every
//! functor output passes validation with the stated potential, exactly.

use crate::error::{AlgebraError, Result};
use crate::matrix::FreeMatrix;
use crate::mf::{MFMorphism, MatFac};
use crate::poly::Poly;
use crate::ring::RingContext;

/// Kronecker product with row-major index convention:
/// `(A (x) B)[(i*rB + k), (j*cB + l)] = A[i][j] * B[k][l]`.
fn kron(ctx: &RingContext, a: &FreeMatrix, b: &FreeMatrix) -> FreeMatrix {
    let mut out = FreeMatrix::zero(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            if a[(i, j)].is_zero() {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    if b[(k, l)].is_zero() {
                        continue;
                    }
                    out[(i * b.rows + k, j * b.cols + l)] = ctx.mul(&a[(i, j)], &b[(k, l)]);
                }
            }
        }
    }
    out
}

fn kron_id_left(ctx: &RingContext, n: usize, b: &FreeMatrix) -> FreeMatrix {
    kron(ctx, &FreeMatrix::identity(ctx, n), b)
}

fn kron_id_right(ctx: &RingContext, a: &FreeMatrix, n: usize) -> FreeMatrix {
    kron(ctx, a, &FreeMatrix::identity(ctx, n))
}

/// `P (x) Q`: a factorization of `W + V`.
///
/// Components: odd `(P1 (x) Q0) + (P0 (x) Q1)`, even
/// `(P1 (x) Q1) + (P0 (x) Q0)`.
pub fn tensor(p: &MatFac, q: &MatFac) -> Result<MatFac> {
    let ctx = p.ctx();
    if ctx != q.ctx() {
        return Err(AlgebraError::RingMismatch);
    }
    let (r1, r0) = (p.rank1, p.rank0);
    let (s1, s0) = (q.rank1, q.rank0);

    // odd -> even
    let blk_11_10 = kron_id_left(ctx, r1, &q.e0).neg(ctx);
    let blk_11_01 = kron_id_right(ctx, &p.e0, s1);
    let blk_00_10 = kron_id_right(ctx, &p.e1, s0);
    let blk_00_01 = kron_id_left(ctx, r0, &q.e1);
    let e1 = FreeMatrix::block(
        &[
            vec![Some(&blk_11_10), Some(&blk_11_01)],
            vec![Some(&blk_00_10), Some(&blk_00_01)],
        ],
        &[r1 * s1, r0 * s0],
        &[r1 * s0, r0 * s1],
    );

    // even -> odd
    let blk_10_11 = kron_id_left(ctx, r1, &q.e1).neg(ctx);
    let blk_10_00 = kron_id_right(ctx, &p.e0, s0);
    let blk_01_11 = kron_id_right(ctx, &p.e1, s1);
    let blk_01_00 = kron_id_left(ctx, r0, &q.e0);
    let e0 = FreeMatrix::block(
        &[
            vec![Some(&blk_10_11), Some(&blk_10_00)],
            vec![Some(&blk_01_11), Some(&blk_01_00)],
        ],
        &[r1 * s0, r0 * s1],
        &[r1 * s1, r0 * s0],
    );

    let pot = p.pot.add(&q.pot)?;
    MatFac::new(pot, e1, e0)
}

/// Internal Hom `Hom(P, Q)`: a factorization of `V - W` on the flattened
/// Hom blocks, odd `(Hom(P1,Q0), Hom(P0,Q1))`, even
/// `(Hom(P0,Q0), Hom(P1,Q1))`.
pub fn hom_mf(p: &MatFac, q: &MatFac) -> Result<MatFac> {
    let ctx = p.ctx();
    if ctx != q.ctx() {
        return Err(AlgebraError::RingMismatch);
    }
    let dim10 = q.rank0 * p.rank1;
    let dim01 = q.rank1 * p.rank0;
    let dim00 = q.rank0 * p.rank0;
    let dim11 = q.rank1 * p.rank1;

    let post = |m: &FreeMatrix, fr: usize, fc: usize| FreeMatrix::hom_action(ctx, Some(m), None, fr, fc);
    let pre = |m: &FreeMatrix, fr: usize, fc: usize| FreeMatrix::hom_action(ctx, None, Some(m), fr, fc);

    // d(f) = q . f + f . p on odd f
    let e1 = FreeMatrix::block(
        &[
            vec![
                Some(&pre(&p.e0, q.rank0, p.rank1)),
                Some(&post(&q.e1, q.rank1, p.rank0)),
            ],
            vec![
                Some(&post(&q.e0, q.rank0, p.rank1)),
                Some(&pre(&p.e1, q.rank1, p.rank0)),
            ],
        ],
        &[dim00, dim11],
        &[dim10, dim01],
    );
    // d(f) = q . f - f . p on even f
    let e0 = FreeMatrix::block(
        &[
            vec![
                Some(&pre(&p.e1, q.rank0, p.rank0).neg(ctx)),
                Some(&post(&q.e1, q.rank1, p.rank1)),
            ],
            vec![
                Some(&post(&q.e0, q.rank0, p.rank0)),
                Some(&pre(&p.e0, q.rank1, p.rank1).neg(ctx)),
            ],
        ],
        &[dim10, dim01],
        &[dim00, dim11],
    );

    let pot = q.pot.sub(&p.pot)?;
    MatFac::new(pot, e1, e0)
}

/// Duality `D(P) = Hom(P, (0 <-> O))`: components `(P1*, P0*)` with maps
/// `(p0^T, -p1^T)`, a factorization of `-W`. Applying it twice gives
/// `(P1, -p1, P0, -p0)` on the nose, conjugated back by `diag(-1, +1)`.
pub fn dual(p: &MatFac) -> MatFac {
    let ctx = p.ctx();
    let e1 = p.e0.transpose();
    let e0 = p.e1.transpose().neg(ctx);
    MatFac::new(p.pot.neg(), e1, e0).expect("dual of a factorization is a factorization")
}

/// Contravariant action on closed degree-0 morphisms: transpose both
/// components.
pub fn dual_morphism(phi: &MFMorphism) -> Result<MFMorphism> {
    if phi.degree != 0 {
        return Err(AlgebraError::NotClosed);
    }
    MFMorphism::degree_zero(
        dual(&phi.target),
        dual(&phi.source),
        phi.a.transpose(),
        phi.b.transpose(),
    )
}

/// The canonical isomorphism `D(D(P)) -> P`, given by `diag(-1, +1)`.
pub fn double_dual_iso(p: &MatFac) -> MFMorphism {
    let ctx = p.ctx();
    let dd = dual(&dual(p));
    let minus1 = FreeMatrix::identity(ctx, p.rank1).neg(ctx);
    MFMorphism::degree_zero(dd, p.clone(), minus1, FreeMatrix::identity(ctx, p.rank0))
        .expect("shape")
}

/// External tensor product: forms the coproduct ring (suffix-renaming the
/// second factor's variables on clashes), base-changes both factors and
/// tensors. Returns the result together with the rename report.
pub fn external_tensor(p: &MatFac, q: &MatFac) -> Result<(MatFac, Vec<(String, String)>)> {
    let rctx = p.ctx();
    let sctx = q.ctx();
    if rctx.field() != sctx.field() {
        return Err(AlgebraError::RingMismatch);
    }
    let mut names: Vec<String> = rctx.vars().to_vec();
    let mut renames = Vec::new();
    let mut s_names = Vec::new();
    for v in sctx.vars() {
        let mut candidate = v.clone();
        let mut k = 0;
        while names.contains(&candidate) {
            k += 1;
            candidate = format!("{v}_{k}");
        }
        if &candidate != v {
            renames.push((v.clone(), candidate.clone()));
        }
        names.push(candidate.clone());
        s_names.push(candidate);
    }
    let all: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut t = RingContext::new(*rctx.field(), &all, rctx.order())?;
    // carry both defining ideals across
    let r_images: Vec<Poly> = rctx
        .vars()
        .iter()
        .map(|v| t.var(v).expect("present"))
        .collect();
    let s_images: Vec<Poly> = s_names
        .iter()
        .map(|v| t.var(v).expect("present"))
        .collect();
    let mut ideal = Vec::new();
    for g in rctx.defining_ideal() {
        ideal.push(rctx.substitute(g, &t, &r_images));
    }
    for g in sctx.defining_ideal() {
        ideal.push(sctx.substitute(g, &t, &s_images));
    }
    if !ideal.is_empty() {
        t = t.with_ideal(ideal)?;
    }
    let pt = crate::mf::base_change(rctx, &t, &r_images, p)?;
    let qt = crate::mf::base_change(sctx, &t, &s_images, q)?;
    Ok((tensor(&pt, &qt)?, renames))
}

/// Left-fold tensor of the rank-1 factorizations `{a_i; b_i}`: a
/// factorization of `sum a_i b_i` with components of rank `2^(m-1)`.
pub fn koszul_factorization(a: &[Poly], b: &[Poly], ctx: &RingContext) -> Result<MatFac> {
    if a.len() != b.len() {
        return Err(AlgebraError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(AlgebraError::LengthMismatch(0, 0));
    }
    let mut acc = MatFac::rank_one(ctx, &a[0], &b[0])?;
    for i in 1..a.len() {
        let next = MatFac::rank_one(ctx, &a[i], &b[i])?;
        acc = tensor(&acc, &next)?;
    }
    Ok(acc)
}

// ---- canonical isomorphisms between tensor layouts -----------------------

/// `(parity-i, parity-j)` block labels of one Z/2 component of a tensor.
fn pair_layout(parity: usize) -> [(usize, usize); 2] {
    if parity == 1 {
        [(1, 0), (0, 1)]
    } else {
        [(1, 1), (0, 0)]
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct TripleBlock {
    label: (usize, usize, usize),
    size: usize,
    offset: usize,
}

fn triple_sizes(p: &MatFac, q: &MatFac, r: &MatFac, label: (usize, usize, usize)) -> usize {
    p.rank(label.0) * q.rank(label.1) * r.rank(label.2)
}

/// The signed swap `P (x) Q -> Q (x) P`, `x (x) y -> (-1)^{|x||y|} y (x) x`;
/// closed and a homotopy isomorphism.
pub fn tensor_swap(p: &MatFac, q: &MatFac) -> Result<MFMorphism> {
    let ctx = p.ctx();
    let pq = tensor(p, q)?;
    let qp = tensor(q, p)?;
    let build = |parity: usize| -> FreeMatrix {
        let src_blocks = pair_layout(parity);
        let tgt_blocks = pair_layout(parity);
        let src_sizes: Vec<usize> = src_blocks
            .iter()
            .map(|&(i, j)| p.rank(i) * q.rank(j))
            .collect();
        let tgt_sizes: Vec<usize> = tgt_blocks
            .iter()
            .map(|&(j, i)| q.rank(j) * p.rank(i))
            .collect();
        let total_src: usize = src_sizes.iter().sum();
        let total_tgt: usize = tgt_sizes.iter().sum();
        let mut m = FreeMatrix::zero(total_tgt, total_src);
        let mut src_off = 0;
        for (bi, &(i, j)) in src_blocks.iter().enumerate() {
            // target block is (j, i) in the (Q, P) layout
            let tgt_idx = tgt_blocks
                .iter()
                .position(|&(tj, ti)| tj == j && ti == i)
                .expect("parity preserved");
            let tgt_off: usize = tgt_sizes[..tgt_idx].iter().sum();
            let sign = if i == 1 && j == 1 {
                ctx.int(-1)
            } else {
                ctx.one()
            };
            for u in 0..p.rank(i) {
                for v in 0..q.rank(j) {
                    let s = src_off + u * q.rank(j) + v;
                    let t = tgt_off + v * p.rank(i) + u;
                    m[(t, s)] = sign.clone();
                }
            }
            src_off += src_sizes[bi];
        }
        m
    };
    MFMorphism::degree_zero(pq, qp, build(1), build(0))
}

/// The associator `(P (x) Q) (x) R -> P (x) (Q (x) R)`: a block permutation
/// with no signs, closed and invertible on the nose.
pub fn tensor_assoc(p: &MatFac, q: &MatFac, r: &MatFac) -> Result<MFMorphism> {
    let ctx = p.ctx();
    let lhs = tensor(&tensor(p, q)?, r)?;
    let rhs = tensor(p, &tensor(q, r)?)?;

    let lhs_blocks = |parity: usize| -> Vec<TripleBlock> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (m, k) in pair_layout(parity) {
            for (i, j) in pair_layout(m) {
                let size = triple_sizes(p, q, r, (i, j, k));
                out.push(TripleBlock {
                    label: (i, j, k),
                    size,
                    offset,
                });
                offset += size;
            }
        }
        out
    };
    let rhs_blocks = |parity: usize| -> Vec<TripleBlock> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (i, n) in pair_layout(parity) {
            for (j, k) in pair_layout(n) {
                let size = triple_sizes(p, q, r, (i, j, k));
                out.push(TripleBlock {
                    label: (i, j, k),
                    size,
                    offset,
                });
                offset += size;
            }
        }
        out
    };

    let build = |parity: usize| -> FreeMatrix {
        let src = lhs_blocks(parity);
        let tgt = rhs_blocks(parity);
        let total: usize = src.iter().map(|b| b.size).sum();
        let mut m = FreeMatrix::zero(total, total);
        for s in &src {
            let t = tgt
                .iter()
                .find(|t| t.label == s.label)
                .expect("same labels");
            // identical row-major index within the triple block
            for idx in 0..s.size {
                m[(t.offset + idx, s.offset + idx)] = ctx.one();
            }
        }
        m
    };
    MFMorphism::degree_zero(lhs, rhs, build(1), build(0))
}

/// Degree-0 morphism tensor: `(phi (x) psi)` acting blockwise by Kronecker
/// products (no signs in even degree).
pub fn morphism_tensor(phi: &MFMorphism, psi: &MFMorphism) -> Result<MFMorphism> {
    if phi.degree != 0 || psi.degree != 0 {
        return Err(AlgebraError::NotClosed);
    }
    let ctx = phi.source.ctx();
    let src = tensor(&phi.source, &psi.source)?;
    let tgt = tensor(&phi.target, &psi.target)?;
    let comp = |parity: usize| -> FreeMatrix {
        let blocks = pair_layout(parity);
        let src_sizes: Vec<usize> = blocks
            .iter()
            .map(|&(i, j)| phi.source.rank(i) * psi.source.rank(j))
            .collect();
        let tgt_sizes: Vec<usize> = blocks
            .iter()
            .map(|&(i, j)| phi.target.rank(i) * psi.target.rank(j))
            .collect();
        let pieces: Vec<FreeMatrix> = blocks
            .iter()
            .map(|&(i, j)| {
                let f = if i == 1 { &phi.a } else { &phi.b };
                let g = if j == 1 { &psi.a } else { &psi.b };
                kron(ctx, f, g)
            })
            .collect();
        FreeMatrix::block(
            &[
                vec![Some(&pieces[0]), None],
                vec![None, Some(&pieces[1])],
            ],
            &tgt_sizes,
            &src_sizes,
        )
    };
    MFMorphism::degree_zero(src, tgt, comp(1), comp(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::homotopy::{is_closed, is_homotopy_iso};
    use crate::mf::Potential;
    use crate::poly::MonomialOrder;

    fn qq(vars: &[&str]) -> RingContext {
        RingContext::new(FieldSpec::Rationals, vars, MonomialOrder::Grevlex).unwrap()
    }

    fn mf(ctx: &RingContext, a: &str, b: &str) -> MatFac {
        MatFac::rank_one(ctx, &ctx.parse_poly(a).unwrap(), &ctx.parse_poly(b).unwrap()).unwrap()
    }

    #[test]
    fn tensor_rank_one_matrices() {
        let ctx = qq(&["a1", "b1", "a2", "b2"]);
        let p = mf(&ctx, "a1", "b1");
        let q = mf(&ctx, "a2", "b2");
        let t = tensor(&p, &q).unwrap();
        assert_eq!(ctx.render(&t.pot.w), "a1*b1 + a2*b2");
        let e1: Vec<String> = t.e1.vectorize().iter().map(|x| ctx.render(x)).collect();
        assert_eq!(e1, vec!["-b2", "b1", "a1", "a2"]);
        let e0: Vec<String> = t.e0.vectorize().iter().map(|x| ctx.render(x)).collect();
        assert_eq!(e0, vec!["-a2", "b1", "a1", "b2"]);
    }

    #[test]
    fn tensor_with_zero_and_unit() {
        let ctx = qq(&["x", "y"]);
        let p = mf(&ctx, "x", "y");
        let z = MatFac::zero_object(Potential::zero(ctx.clone()));
        let t = tensor(&p, &z).unwrap();
        assert_eq!((t.rank1, t.rank0), (0, 0));
        // the unit: O in even degree, nothing in odd degree
        let unit = MatFac::new(
            Potential::zero(ctx.clone()),
            FreeMatrix::zero(1, 0),
            FreeMatrix::zero(0, 1),
        )
        .unwrap();
        let u = tensor(&p, &unit).unwrap();
        assert_eq!(u.e1, p.e1);
        assert_eq!(u.e0, p.e0);
    }

    #[test]
    fn hom_squares_to_difference() {
        let ctx = qq(&["x", "y"]);
        let p = mf(&ctx, "x", "y");
        let h = hom_mf(&p, &p).unwrap();
        assert!(h.pot.is_zero());
        let z = MatFac::zero_object(p.pot.clone());
        let hz = hom_mf(&p, &z).unwrap();
        assert_eq!((hz.rank1, hz.rank0), (0, 0));
    }

    #[test]
    fn dual_matrices_and_involution() {
        let ctx = qq(&["x", "y"]);
        let p = mf(&ctx, "x", "y^2");
        let d = dual(&p);
        assert_eq!(ctx.render(&d.e1[(0, 0)]), "y^2");
        assert_eq!(ctx.render(&d.e0[(0, 0)]), "-x");
        assert_eq!(ctx.render(&d.pot.w), "-x*y^2");
        let dd = dual(&d);
        assert_eq!(ctx.render(&dd.e1[(0, 0)]), "-x");
        assert_eq!(ctx.render(&dd.e0[(0, 0)]), "-y^2");
        let iso = double_dual_iso(&p);
        assert!(is_closed(&iso).unwrap());
        assert!(is_homotopy_iso(&iso).unwrap());
        let z = MatFac::zero_object(p.pot.clone());
        assert_eq!((dual(&z).rank1, dual(&z).rank0), (0, 0));
    }

    #[test]
    fn external_tensor_forms_coproduct() {
        let cx = qq(&["x"]);
        let cy = qq(&["y"]);
        let p = mf(&cx, "x", "1");
        let q = mf(&cy, "y", "1");
        let (t, renames) = external_tensor(&p, &q).unwrap();
        assert!(renames.is_empty());
        assert_eq!(t.ctx().vars(), &["x".to_string(), "y".to_string()]);
        assert_eq!(t.ctx().render(&t.pot.w), "x + y");
        // clash gets suffixed
        let cx2 = qq(&["x"]);
        let p2 = mf(&cx2, "x", "x");
        let (t2, renames2) = external_tensor(&p, &p2).unwrap();
        assert_eq!(renames2, vec![("x".to_string(), "x_1".to_string())]);
        assert_eq!(t2.ctx().render(&t2.pot.w), "x_1^2 + x");
    }

    #[test]
    fn knoerrer_unit_of_external_tensor() {
        let k = qq(&[]);
        let unit = MatFac::new(
            Potential::zero(k.clone()),
            FreeMatrix::zero(1, 0),
            FreeMatrix::zero(0, 1),
        )
        .unwrap();
        let cuv = qq(&["u", "v"]);
        let c = mf(&cuv, "u", "v");
        let (t, _) = external_tensor(&unit, &c).unwrap();
        assert_eq!((t.rank1, t.rank0), (1, 1));
        assert_eq!(t.ctx().render(&t.pot.w), "u*v");
        assert_eq!(t.ctx().render(&t.e1[(0, 0)]), "u");
    }

    #[test]
    fn koszul_small_cases() {
        let ctx = qq(&["x", "y"]);
        let x = ctx.parse_poly("x").unwrap();
        let y = ctx.parse_poly("y").unwrap();
        let y2 = ctx.parse_poly("y^2").unwrap();
        let one = ctx.one();
        let zero = ctx.zero();

        let k1 = koszul_factorization(&[x.clone()], &[y2.clone()], &ctx).unwrap();
        assert_eq!((k1.rank1, k1.rank0), (1, 1));

        let k2 = koszul_factorization(&[x.clone(), y.clone()], &[x.clone(), y.clone()], &ctx).unwrap();
        assert_eq!(ctx.render(&k2.pot.w), "x^2 + y^2");
        let e1: Vec<String> = k2.e1.vectorize().iter().map(|p| ctx.render(p)).collect();
        assert_eq!(e1, vec!["-y", "x", "x", "y"]);
        let e0: Vec<String> = k2.e0.vectorize().iter().map(|p| ctx.render(p)).collect();
        assert_eq!(e0, vec!["-y", "x", "x", "y"]);

        let deg = koszul_factorization(&[x.clone(), zero], &[one.clone(), one.clone()], &ctx).unwrap();
        assert_eq!(ctx.render(&deg.pot.w), "x");

        assert!(matches!(
            koszul_factorization(&[x], &[], &ctx),
            Err(AlgebraError::LengthMismatch(1, 0))
        ));
    }

    #[test]
    fn swap_is_closed_homotopy_iso() {
        let ctx = qq(&["x", "y"]);
        let p = mf(&ctx, "x", "y");
        let q = mf(&ctx, "y", "x^2");
        let s = tensor_swap(&p, &q).unwrap();
        assert!(is_closed(&s).unwrap());
        assert!(is_homotopy_iso(&s).unwrap());
    }

    #[test]
    fn associator_is_closed_iso() {
        let ctx = qq(&["x", "y", "z"]);
        let p = mf(&ctx, "x", "y");
        let q = mf(&ctx, "y", "z");
        let r = mf(&ctx, "z", "x");
        let a = tensor_assoc(&p, &q, &r).unwrap();
        assert!(is_closed(&a).unwrap());
        assert!(is_homotopy_iso(&a).unwrap());
    }
}
