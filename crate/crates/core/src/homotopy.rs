//! The homotopy engine: flattened Hom complexes, closedness, null-homotopy
//! witnesses by submodule membership, contractibility, homotopy
//! isomorphisms via cones, Ext modules, and the W = 0 quasi-isomorphism
//! criterion. Everything here is licensed by the affine setting, where the
//! naive homotopy category already computes the category of matrix
//! factorizations.

use crate::error::{AlgebraError, Result};
use crate::groebner::{ExtendedGb, Membership};
use crate::homology::{
    lift_through, module_homology, HomologyData, ModulePresentation, PresentedMap,
};
use crate::matrix::FreeMatrix;
use crate::mf::{cone, MFMorphism, MatFac};
use crate::poly::Poly;
use crate::ring::RingContext;

/// The flattened 2-periodic complex of free modules computing morphisms
/// between two factorizations.
///
/// Flattening convention: row-major vectorization of each Hom block, blocks
/// ordered `Hom(P1,Q0), Hom(P0,Q1)` in odd degree and
/// `Hom(P0,Q0), Hom(P1,Q1)` in even degree.
#[derive(Debug, Clone)]
pub struct HomComplex {
    pub source: MatFac,
    pub target: MatFac,
    pub d_odd_to_even: FreeMatrix,
    pub d_even_to_odd: FreeMatrix,
    /// V - W
    pub potential_diff: Poly,
}

impl HomComplex {
    pub fn odd_rank(&self) -> usize {
        self.d_odd_to_even.cols
    }

    pub fn even_rank(&self) -> usize {
        self.d_even_to_odd.cols
    }
}

/// Builds the Hom complex of `(P, Q)` and asserts
/// `d^2 = (V - W) * id` exactly.
pub fn assemble_hom_complex(p: &MatFac, q: &MatFac) -> Result<HomComplex> {
    let ctx = p.ctx();
    if ctx != q.ctx() {
        return Err(AlgebraError::RingMismatch);
    }
    let dim10 = q.rank0 * p.rank1;
    let dim01 = q.rank1 * p.rank0;
    let dim00 = q.rank0 * p.rank0;
    let dim11 = q.rank1 * p.rank1;

    // d(f) = q . f - (-1)^{|f|} f . p on each block
    let post = |m: &FreeMatrix, fr: usize, fc: usize| FreeMatrix::hom_action(ctx, Some(m), None, fr, fc);
    let pre = |m: &FreeMatrix, fr: usize, fc: usize| FreeMatrix::hom_action(ctx, None, Some(m), fr, fc);

    // odd -> even: f10 -> (f10 . p0, q0 . f10); f01 -> (q1 . f01, f01 . p1)
    let blk_00_10 = pre(&p.e0, q.rank0, p.rank1);
    let blk_11_10 = post(&q.e0, q.rank0, p.rank1);
    let blk_00_01 = post(&q.e1, q.rank1, p.rank0);
    let blk_11_01 = pre(&p.e1, q.rank1, p.rank0);
    let d_odd_to_even = FreeMatrix::block(
        &[
            vec![Some(&blk_00_10), Some(&blk_00_01)],
            vec![Some(&blk_11_10), Some(&blk_11_01)],
        ],
        &[dim00, dim11],
        &[dim10, dim01],
    );

    // even -> odd: f00 -> (-f00 . p1, q0 . f00); f11 -> (q1 . f11, -f11 . p0)
    let blk_10_00 = pre(&p.e1, q.rank0, p.rank0).neg(ctx);
    let blk_01_00 = post(&q.e0, q.rank0, p.rank0);
    let blk_10_11 = post(&q.e1, q.rank1, p.rank1);
    let blk_01_11 = pre(&p.e0, q.rank1, p.rank1).neg(ctx);
    let d_even_to_odd = FreeMatrix::block(
        &[
            vec![Some(&blk_10_00), Some(&blk_10_11)],
            vec![Some(&blk_01_00), Some(&blk_01_11)],
        ],
        &[dim10, dim01],
        &[dim00, dim11],
    );

    let diff = ctx.sub(&q.pot.w, &p.pot.w);
    let check = |prod: &FreeMatrix| -> Result<()> {
        for i in 0..prod.rows {
            for j in 0..prod.cols {
                let expected = if i == j { diff.clone() } else { Poly::zero() };
                if prod.entry(i, j) != &expected {
                    return Err(AlgebraError::Invalid(format!(
                        "hom complex differential does not square to V - W at ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    };
    check(&d_even_to_odd.mul(ctx, &d_odd_to_even))?;
    check(&d_odd_to_even.mul(ctx, &d_even_to_odd))?;

    Ok(HomComplex {
        source: p.clone(),
        target: q.clone(),
        d_odd_to_even,
        d_even_to_odd,
        potential_diff: diff,
    })
}

/// Row-major flattening of a morphism in the Hom-complex convention.
pub fn flatten_morphism(phi: &MFMorphism) -> Vec<Poly> {
    // degree 0 blocks: (f0, f1); degree 1 blocks: (f10, f01)
    let mut v = Vec::new();
    if phi.degree == 0 {
        v.extend(phi.b.vectorize());
        v.extend(phi.a.vectorize());
    } else {
        v.extend(phi.a.vectorize());
        v.extend(phi.b.vectorize());
    }
    v
}

fn unflatten(degree: u8, source: &MatFac, target: &MatFac, v: &[Poly]) -> MFMorphism {
    if degree == 0 {
        let n0 = target.rank0 * source.rank0;
        let f0 = FreeMatrix::from_vec(target.rank0, source.rank0, v[..n0].to_vec());
        let f1 = FreeMatrix::from_vec(target.rank1, source.rank1, v[n0..].to_vec());
        MFMorphism::degree_zero(source.clone(), target.clone(), f1, f0).unwrap()
    } else {
        let n10 = target.rank0 * source.rank1;
        let f10 = FreeMatrix::from_vec(target.rank0, source.rank1, v[..n10].to_vec());
        let f01 = FreeMatrix::from_vec(target.rank1, source.rank0, v[n10..].to_vec());
        MFMorphism::degree_one(source.clone(), target.clone(), f10, f01).unwrap()
    }
}

/// Is `d(phi) = 0` exactly?
pub fn is_closed(phi: &MFMorphism) -> Result<bool> {
    Ok(phi.differential().is_zero())
}

/// Null-homotopy solver: for closed `phi`, finds `h` with `d(h) = phi`
/// bit-exactly, or certifies non-membership. The solve is a submodule
/// membership problem for the flattened Hom differential.
pub fn null_homotopy(phi: &MFMorphism) -> Result<Option<MFMorphism>> {
    if phi.source.pot != phi.target.pot {
        return Err(AlgebraError::PotentialMismatch(
            phi.source.ctx().render(&phi.source.pot.w),
            phi.target.ctx().render(&phi.target.pot.w),
        ));
    }
    if !is_closed(phi)? {
        return Err(AlgebraError::NotClosed);
    }
    let ctx = phi.source.ctx();
    let hc = assemble_hom_complex(&phi.source, &phi.target)?;
    let d = if phi.degree == 0 {
        // h is odd, d: odd -> even
        &hc.d_odd_to_even
    } else {
        &hc.d_even_to_odd
    };
    let target_vec = flatten_morphism(phi);
    let ext = ExtendedGb::new(ctx, &d.columns(), d.rows);
    match ext.membership(ctx, &target_vec) {
        Membership::Yes(lift) => {
            let h = unflatten(1 - phi.degree, &phi.source, &phi.target, &lift);
            // exactness of the witness
            let dh = h.differential();
            debug_assert!(morphism_eq_mod(ctx, &dh, phi));
            Ok(Some(h))
        }
        Membership::No(_) => Ok(None),
    }
}

fn morphism_eq_mod(ctx: &RingContext, a: &MFMorphism, b: &MFMorphism) -> bool {
    let norm = |m: &FreeMatrix| m.map(|p| ctx.normalize(p.clone()));
    norm(&a.a) == norm(&b.a) && norm(&a.b) == norm(&b.b)
}

/// Contractible = the identity is a boundary.
pub fn is_contractible(e: &MatFac) -> Result<bool> {
    Ok(null_homotopy(&MFMorphism::identity(e))?.is_some())
}

/// A closed degree-0 morphism is a homotopy isomorphism iff its cone is
/// contractible; this is the single decision procedure used everywhere.
pub fn is_homotopy_iso(phi: &MFMorphism) -> Result<bool> {
    let c = cone(phi)?;
    is_contractible(&c.cone)
}

/// Homology of the Hom complex in one parity: the Ext module.
#[derive(Debug, Clone)]
pub struct ExtResult {
    pub degree: u8,
    pub presentation: ModulePresentation,
}

impl ExtResult {
    pub fn k_dim(&self) -> crate::homology::KDim {
        self.presentation.k_dim
    }

    pub fn to_json(&self, ctx: &RingContext) -> serde_json::Value {
        let mut v = self.presentation.to_json(ctx);
        v.as_object_mut()
            .unwrap()
            .insert("degree".into(), serde_json::json!(self.degree));
        v
    }
}

/// Ext^degree(P, Q) for factorizations of one potential.
pub fn ext_module(p: &MatFac, q: &MatFac, degree: u8) -> Result<ExtResult> {
    let hc = assemble_hom_complex(p, q)?;
    if !hc.potential_diff.is_zero() {
        return Err(AlgebraError::PotentialMismatch(
            p.ctx().render(&p.pot.w),
            q.ctx().render(&q.pot.w),
        ));
    }
    let ctx = p.ctx();
    let data = if degree == 0 {
        module_homology(ctx, &hc.d_odd_to_even, &hc.d_even_to_odd)?
    } else {
        module_homology(ctx, &hc.d_even_to_odd, &hc.d_odd_to_even)?
    };
    Ok(ExtResult {
        degree,
        presentation: data.presentation,
    })
}

/// Cohomology of a W = 0 factorization: `H_0 = ker e0 / im e1` and
/// `H_1 = ker e1 / im e0`, as presented modules with kernel generators.
pub fn homology_w0(e: &MatFac) -> Result<(HomologyData, HomologyData)> {
    if !e.pot.is_zero() {
        return Err(AlgebraError::PotentialNotZero(
            e.ctx().render(&e.pot.w),
        ));
    }
    let ctx = e.ctx();
    let h0 = module_homology(ctx, &e.e1, &e.e0)?;
    let h1 = module_homology(ctx, &e.e0, &e.e1)?;
    Ok((h0, h1))
}

/// Does the closed degree-0 morphism induce isomorphisms on both homology
/// modules? Decided at presentation level via mutual membership.
pub fn quasi_iso(phi: &MFMorphism) -> Result<bool> {
    if !phi.source.pot.is_zero() || !phi.target.pot.is_zero() {
        return Err(AlgebraError::PotentialNotZero(
            phi.source.ctx().render(&phi.source.pot.w),
        ));
    }
    if phi.degree != 0 || !is_closed(phi)? {
        return Err(AlgebraError::NotClosed);
    }
    let ctx = phi.source.ctx();
    let (src_h0, src_h1) = homology_w0(&phi.source)?;
    let (tgt_h0, tgt_h1) = homology_w0(&phi.target)?;
    let ok0 = induced_map_is_iso(ctx, &phi.b, &src_h0, &tgt_h0)?;
    if !ok0 {
        return Ok(false);
    }
    induced_map_is_iso(ctx, &phi.a, &src_h1, &tgt_h1)
}

fn induced_map_is_iso(
    ctx: &RingContext,
    component: &FreeMatrix,
    src: &HomologyData,
    tgt: &HomologyData,
) -> Result<bool> {
    // express the image of each source kernel generator through the target
    // kernel generators
    let tgt_gens = tgt.kernel_gens.columns();
    let mut cols = Vec::new();
    for col in src.kernel_gens.columns() {
        let v = component.mul(ctx, &FreeMatrix::from_columns(col.len(), vec![col]));
        let image = v.column(0);
        match lift_through(ctx, &image, &tgt_gens) {
            Some(lift) => cols.push(lift),
            None => {
                return Err(AlgebraError::Invalid(
                    "closed morphism does not preserve kernels".into(),
                ))
            }
        }
    }
    let matrix = FreeMatrix::from_columns(tgt_gens.len(), cols);
    let map = PresentedMap {
        ctx,
        matrix,
        source_rels: src.presentation.relations.clone(),
        target_rels: tgt.presentation.relations.clone(),
    };
    Ok(map.is_isomorphism())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::homology::KDim;
    use crate::mf::{g_plus, unit_contraction, Potential};
    use crate::poly::MonomialOrder;

    fn qq(vars: &[&str]) -> RingContext {
        RingContext::new(FieldSpec::Rationals, vars, MonomialOrder::Grevlex).unwrap()
    }

    fn mf(ctx: &RingContext, a: &str, b: &str) -> MatFac {
        MatFac::rank_one(ctx, &ctx.parse_poly(a).unwrap(), &ctx.parse_poly(b).unwrap()).unwrap()
    }

    #[test]
    fn hom_complex_squares_to_potential_difference() {
        let ctx = qq(&["x", "y"]);
        let p = mf(&ctx, "x", "y");
        let hc = assemble_hom_complex(&p, &p).unwrap();
        assert!(hc.potential_diff.is_zero());
        let q = mf(&ctx, "x^2", "y");
        let hc2 = assemble_hom_complex(&p, &q).unwrap();
        assert_eq!(ctx.render(&hc2.potential_diff), "x^2*y - x*y");
        // Hom(P, rank-0) is the zero complex
        let z = MatFac::zero_object(p.pot.clone());
        let hz = assemble_hom_complex(&p, &z).unwrap();
        assert_eq!(hz.odd_rank(), 0);
        assert_eq!(hz.even_rank(), 0);
    }

    #[test]
    fn closedness_basics() {
        let ctx = qq(&["x", "y"]);
        let e = mf(&ctx, "x", "y");
        assert!(is_closed(&MFMorphism::identity(&e)).unwrap());
        assert!(is_closed(&MFMorphism::zero_map(&e, &e, 1)).unwrap());
    }

    #[test]
    fn unit_contraction_is_not_closed() {
        let ctx = qq(&[]);
        let pot = Potential::new(ctx.clone(), ctx.int(2));
        let e = MatFac::new(
            pot,
            FreeMatrix::from_rows(&ctx, &[vec!["2"]]).unwrap(),
            FreeMatrix::from_rows(&ctx, &[vec!["1"]]).unwrap(),
        )
        .unwrap();
        let h = unit_contraction(&e).unwrap();
        assert!(!is_closed(&h).unwrap());
    }

    #[test]
    fn null_homotopy_on_unit_object() {
        // identity on (A, 1, A, W) is null-homotopic: solve t + sW = 1
        let ctx = qq(&["x"]);
        let w = ctx.parse_poly("x").unwrap();
        let e = mf(&ctx, "1", "x");
        let h = null_homotopy(&MFMorphism::identity(&e)).unwrap().unwrap();
        let dh = h.differential();
        assert_eq!(dh.a, FreeMatrix::identity(&ctx, 1));
        assert_eq!(dh.b, FreeMatrix::identity(&ctx, 1));
        let _ = w;
    }

    #[test]
    fn null_homotopy_of_zero_is_zero_solvable() {
        let ctx = qq(&["x", "y"]);
        let e = mf(&ctx, "x", "y");
        let z = MFMorphism::zero_map(&e, &e, 0);
        assert!(null_homotopy(&z).unwrap().is_some());
    }

    #[test]
    fn koszul_cell_is_not_contractible() {
        let ctx = qq(&["x", "y"]);
        let e = mf(&ctx, "x", "y");
        assert!(!is_contractible(&e).unwrap());
    }

    #[test]
    fn g_plus_is_contractible() {
        let ctx = qq(&["x"]);
        let pot = Potential::new(ctx.clone(), ctx.parse_poly("x^2").unwrap());
        assert!(is_contractible(&g_plus(1, 1, &pot)).unwrap());
        assert!(is_contractible(&g_plus(2, 1, &pot)).unwrap());
    }

    #[test]
    fn homotopy_iso_examples() {
        let ctx = qq(&["x", "y"]);
        let e = mf(&ctx, "x", "y");
        assert!(is_homotopy_iso(&MFMorphism::identity(&e)).unwrap());
        assert!(!is_homotopy_iso(&MFMorphism::zero_map(&e, &e, 0)).unwrap());
        // x * id is null-homotopic but not an isomorphism
        let x = ctx.parse_poly("x").unwrap();
        let xid = MFMorphism::identity(&e).scale(&x);
        assert!(!is_homotopy_iso(&xid).unwrap());
        assert!(null_homotopy(&xid).unwrap().is_some());
    }

    #[test]
    fn ext_benchmarks() {
        // A1 singularity: E = (A, x, A, x) over QQ[x], W = x^2
        let ctx = qq(&["x"]);
        let e = mf(&ctx, "x", "x");
        let e0 = ext_module(&e, &e, 0).unwrap();
        let e1 = ext_module(&e, &e, 1).unwrap();
        assert_eq!(e0.k_dim(), KDim::Finite(1));
        assert_eq!(e1.k_dim(), KDim::Finite(1));

        // Knoerrer cell over QQ[u, v], W = uv
        let cuv = qq(&["u", "v"]);
        let k = mf(&cuv, "u", "v");
        assert_eq!(ext_module(&k, &k, 0).unwrap().k_dim(), KDim::Finite(1));
        assert_eq!(ext_module(&k, &k, 1).unwrap().k_dim(), KDim::Finite(0));

        // contractible object against anything
        let pot = Potential::new(cuv.clone(), cuv.parse_poly("u*v").unwrap());
        let g = g_plus(1, 1, &pot);
        assert_eq!(ext_module(&g, &k, 0).unwrap().k_dim(), KDim::Finite(0));
        assert_eq!(ext_module(&g, &k, 1).unwrap().k_dim(), KDim::Finite(0));
    }

    #[test]
    fn w0_homology_and_quasi_iso() {
        let ctx = qq(&["x"]);
        // (A, x, A, 0): H_0 = A/(x), H_1 = 0
        let pot = Potential::zero(ctx.clone());
        let e = MatFac::new(
            pot.clone(),
            FreeMatrix::from_rows(&ctx, &[vec!["x"]]).unwrap(),
            FreeMatrix::zero(1, 1),
        )
        .unwrap();
        let (h0, h1) = homology_w0(&e).unwrap();
        assert_eq!(h0.presentation.k_dim, KDim::Finite(1));
        assert!(h1.presentation.is_zero());

        // zero differentials: H_0 = H_1 = A
        let z = MatFac::new(pot.clone(), FreeMatrix::zero(1, 1), FreeMatrix::zero(1, 1)).unwrap();
        let (z0, z1) = homology_w0(&z).unwrap();
        assert_eq!(z0.presentation.k_dim, KDim::Infinite);
        assert_eq!(z1.presentation.k_dim, KDim::Infinite);

        assert!(quasi_iso(&MFMorphism::identity(&e)).unwrap());
        assert!(!quasi_iso(&MFMorphism::zero_map(&z, &z, 0)).unwrap());

        // W != 0 is rejected
        let f = mf(&ctx, "x", "x");
        assert!(matches!(
            homology_w0(&f),
            Err(AlgebraError::PotentialNotZero(_))
        ));
    }
}
