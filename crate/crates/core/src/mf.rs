//! Matrix factorizations over an affine ring: objects with exact validation,
//! shift, totalization, cones, direct sums, the G^+ construction, base
//! change and the unit-potential contraction.

use crate::error::{AlgebraError, Result};
use crate::matrix::FreeMatrix;
use crate::poly::Poly;
use crate::ring::RingContext;

/// A ring together with a fixed potential W (kept in normal form).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Potential {
    pub ctx: RingContext,
    pub w: Poly,
}

impl Potential {
    pub fn new(ctx: RingContext, w: Poly) -> Self {
        let w = ctx.normalize(w);
        Potential { ctx, w }
    }

    pub fn zero(ctx: RingContext) -> Self {
        Potential {
            w: Poly::zero(),
            ctx,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.w.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.ctx.is_unit_constant(&self.w)
    }

    pub fn neg(&self) -> Potential {
        Potential {
            ctx: self.ctx.clone(),
            w: self.ctx.neg(&self.w),
        }
    }

    pub fn add(&self, other: &Potential) -> Result<Potential> {
        if self.ctx != other.ctx {
            return Err(AlgebraError::RingMismatch);
        }
        Ok(Potential {
            ctx: self.ctx.clone(),
            w: self.ctx.add(&self.w, &other.w),
        })
    }

    pub fn sub(&self, other: &Potential) -> Result<Potential> {
        self.add(&other.neg())
    }
}

/// A matrix factorization of W: maps `e1: E_1 -> E_0` and `e0: E_0 -> E_1`
/// of free modules with both composites equal to `W * id`, exactly after
/// normal form. Validated at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatFac {
    pub pot: Potential,
    pub rank1: usize,
    pub rank0: usize,
    /// rank0 x rank1
    pub e1: FreeMatrix,
    /// rank1 x rank0
    pub e0: FreeMatrix,
}

impl MatFac {
    pub fn new(pot: Potential, e1: FreeMatrix, e0: FreeMatrix) -> Result<Self> {
        let rank1 = e1.cols;
        let rank0 = e1.rows;
        if e0.rows != rank1 || e0.cols != rank0 {
            return Err(AlgebraError::ShapeMismatch(format!(
                "e1 is {}x{}, e0 is {}x{}",
                e1.rows, e1.cols, e0.rows, e0.cols
            )));
        }
        let ctx = &pot.ctx;
        let e1 = e1.map(|p| ctx.normalize(p.clone()));
        let e0 = e0.map(|p| ctx.normalize(p.clone()));
        check_product(ctx, &e0.mul(ctx, &e1), &pot.w, "e0*e1")?;
        check_product(ctx, &e1.mul(ctx, &e0), &pot.w, "e1*e0")?;
        Ok(MatFac {
            pot,
            rank1,
            rank0,
            e1,
            e0,
        })
    }

    pub fn ctx(&self) -> &RingContext {
        &self.pot.ctx
    }

    /// The zero object (both ranks zero).
    pub fn zero_object(pot: Potential) -> Self {
        MatFac {
            pot,
            rank1: 0,
            rank0: 0,
            e1: FreeMatrix::zero(0, 0),
            e0: FreeMatrix::zero(0, 0),
        }
    }

    /// Rank-1 factorization `{a; b}` of `W = a*b`.
    pub fn rank_one(ctx: &RingContext, a: &Poly, b: &Poly) -> Result<Self> {
        let w = ctx.mul(a, b);
        MatFac::new(
            Potential::new(ctx.clone(), w),
            FreeMatrix::new(1, 1, vec![a.clone()]),
            FreeMatrix::new(1, 1, vec![b.clone()]),
        )
    }

    pub fn rank(&self, parity: usize) -> usize {
        if parity % 2 == 1 {
            self.rank1
        } else {
            self.rank0
        }
    }

    /// [1]E = (E_0, -e_0, E_1, -e_1); an exact involution.
    pub fn shift(&self) -> MatFac {
        let ctx = self.ctx();
        MatFac {
            pot: self.pot.clone(),
            rank1: self.rank0,
            rank0: self.rank1,
            e1: self.e0.neg(ctx),
            e0: self.e1.neg(ctx),
        }
    }

    pub fn shift_by(&self, n: i64) -> MatFac {
        if n.rem_euclid(2) == 0 {
            self.clone()
        } else {
            self.shift()
        }
    }

    pub fn direct_sum(&self, other: &MatFac) -> Result<MatFac> {
        if self.pot != other.pot {
            return Err(AlgebraError::PotentialMismatch(
                self.ctx().render(&self.pot.w),
                other.ctx().render(&other.pot.w),
            ));
        }
        let e1 = FreeMatrix::block(
            &[
                vec![Some(&self.e1), None],
                vec![None, Some(&other.e1)],
            ],
            &[self.rank0, other.rank0],
            &[self.rank1, other.rank1],
        );
        let e0 = FreeMatrix::block(
            &[
                vec![Some(&self.e0), None],
                vec![None, Some(&other.e0)],
            ],
            &[self.rank1, other.rank1],
            &[self.rank0, other.rank0],
        );
        MatFac::new(self.pot.clone(), e1, e0)
    }

    /// JSON form `{ring, W, e1, e0}` with polynomials in canonical text form.
    pub fn to_json(&self) -> serde_json::Value {
        let ctx = self.ctx();
        let grid = |m: &FreeMatrix| -> Vec<Vec<String>> {
            (0..m.rows)
                .map(|i| (0..m.cols).map(|j| ctx.render(m.entry(i, j))).collect())
                .collect()
        };
        serde_json::json!({
            "ring": ctx.to_string(),
            "W": ctx.render(&self.pot.w),
            "e1": grid(&self.e1),
            "e0": grid(&self.e0),
        })
    }
}

fn check_product(
    ctx: &RingContext,
    prod: &FreeMatrix,
    w: &Poly,
    which: &'static str,
) -> Result<()> {
    for i in 0..prod.rows {
        for j in 0..prod.cols {
            let expected = if i == j { w.clone() } else { Poly::zero() };
            if prod.entry(i, j) != &expected {
                return Err(AlgebraError::NotAFactorization {
                    which,
                    row: i,
                    col: j,
                    entry: ctx.render(prod.entry(i, j)),
                    expected: ctx.render(&expected),
                });
            }
        }
    }
    Ok(())
}

/// Construction entry point named as in the artifact's operation table.
pub fn make_mf(pot: Potential, e1: FreeMatrix, e0: FreeMatrix) -> Result<MatFac> {
    MatFac::new(pot, e1, e0)
}

/// A Z/2-homogeneous pair of matrices between two factorizations.
///
/// Degree 0: `f1: E_1 -> F_1`, `f0: E_0 -> F_0`.
/// Degree 1: `f10: E_1 -> F_0`, `f01: E_0 -> F_1`.
#[derive(Debug, Clone)]
pub struct MFMorphism {
    pub source: MatFac,
    pub target: MatFac,
    pub degree: u8,
    /// degree 0: f1; degree 1: f10
    pub a: FreeMatrix,
    /// degree 0: f0; degree 1: f01
    pub b: FreeMatrix,
}

impl MFMorphism {
    pub fn degree_zero(source: MatFac, target: MatFac, f1: FreeMatrix, f0: FreeMatrix) -> Result<Self> {
        if f1.rows != target.rank1 || f1.cols != source.rank1 || f0.rows != target.rank0
            || f0.cols != source.rank0
        {
            return Err(AlgebraError::ShapeMismatch("degree-0 morphism".into()));
        }
        Ok(MFMorphism {
            source,
            target,
            degree: 0,
            a: f1,
            b: f0,
        })
    }

    pub fn degree_one(source: MatFac, target: MatFac, f10: FreeMatrix, f01: FreeMatrix) -> Result<Self> {
        if f10.rows != target.rank0 || f10.cols != source.rank1 || f01.rows != target.rank1
            || f01.cols != source.rank0
        {
            return Err(AlgebraError::ShapeMismatch("degree-1 morphism".into()));
        }
        Ok(MFMorphism {
            source,
            target,
            degree: 1,
            a: f10,
            b: f01,
        })
    }

    pub fn identity(obj: &MatFac) -> Self {
        let ctx = obj.ctx();
        MFMorphism {
            source: obj.clone(),
            target: obj.clone(),
            degree: 0,
            a: FreeMatrix::identity(ctx, obj.rank1),
            b: FreeMatrix::identity(ctx, obj.rank0),
        }
    }

    pub fn zero_map(source: &MatFac, target: &MatFac, degree: u8) -> Self {
        let (a, b) = if degree == 0 {
            (
                FreeMatrix::zero(target.rank1, source.rank1),
                FreeMatrix::zero(target.rank0, source.rank0),
            )
        } else {
            (
                FreeMatrix::zero(target.rank0, source.rank1),
                FreeMatrix::zero(target.rank1, source.rank0),
            )
        };
        MFMorphism {
            source: source.clone(),
            target: target.clone(),
            degree,
            a,
            b,
        }
    }

    pub fn scale(&self, w: &Poly) -> MFMorphism {
        let ctx = self.source.ctx();
        MFMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            a: self.a.scale(ctx, w),
            b: self.b.scale(ctx, w),
        }
    }

    /// `d(f) = e_target . f - (-1)^{|f|} f . e_source`, returned as the pair
    /// of component matrices of the ambient Hom complex.
    pub fn differential(&self) -> MFMorphism {
        let ctx = self.source.ctx();
        let (p, q) = (&self.source, &self.target);
        if self.degree == 0 {
            // result degree 1: components (E_1 -> F_0, E_0 -> F_1)
            let f10 = q.e1.mul(ctx, &self.a).sub(ctx, &self.b.mul(ctx, &p.e1));
            let f01 = q.e0.mul(ctx, &self.b).sub(ctx, &self.a.mul(ctx, &p.e0));
            MFMorphism {
                source: p.clone(),
                target: q.clone(),
                degree: 1,
                a: f10,
                b: f01,
            }
        } else {
            // result degree 0: components (E_1 -> F_1, E_0 -> F_0)
            let f1 = q.e0.mul(ctx, &self.a).add(ctx, &self.b.mul(ctx, &p.e1));
            let f0 = q.e1.mul(ctx, &self.b).add(ctx, &self.a.mul(ctx, &p.e0));
            MFMorphism {
                source: p.clone(),
                target: q.clone(),
                degree: 0,
                a: f1,
                b: f0,
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn compose(&self, inner: &MFMorphism) -> Result<MFMorphism> {
        if inner.target != self.source {
            return Err(AlgebraError::ShapeMismatch("composition".into()));
        }
        let ctx = self.source.ctx();
        match (self.degree, inner.degree) {
            (0, 0) => MFMorphism::degree_zero(
                inner.source.clone(),
                self.target.clone(),
                self.a.mul(ctx, &inner.a),
                self.b.mul(ctx, &inner.b),
            ),
            (0, 1) => MFMorphism::degree_one(
                inner.source.clone(),
                self.target.clone(),
                self.b.mul(ctx, &inner.a),
                self.a.mul(ctx, &inner.b),
            ),
            (1, 0) => MFMorphism::degree_one(
                inner.source.clone(),
                self.target.clone(),
                self.a.mul(ctx, &inner.a),
                self.b.mul(ctx, &inner.b),
            ),
            _ => Err(AlgebraError::ShapeMismatch(
                "odd-odd composition not needed".into(),
            )),
        }
    }
}

/// A bounded complex of factorizations with closed differentials composing
/// to zero exactly.
pub struct MFComplex {
    /// lowest complex degree
    pub start: i64,
    pub objects: Vec<MatFac>,
    /// differentials d_i: objects[i] -> objects[i+1], all degree 0
    pub diffs: Vec<MFMorphism>,
}

impl MFComplex {
    pub fn new(start: i64, objects: Vec<MatFac>, diffs: Vec<MFMorphism>) -> Result<Self> {
        assert_eq!(diffs.len() + 1, objects.len().max(1));
        for (i, d) in diffs.iter().enumerate() {
            if d.degree != 0 {
                return Err(AlgebraError::NotClosed);
            }
            if d.source != objects[i] || d.target != objects[i + 1] {
                return Err(AlgebraError::ShapeMismatch("complex differential".into()));
            }
            if !crate::homotopy::is_closed(d)? {
                return Err(AlgebraError::NotClosed);
            }
        }
        for i in 0..diffs.len().saturating_sub(1) {
            let comp = diffs[i + 1].compose(&diffs[i])?;
            if !comp.is_zero() {
                return Err(AlgebraError::CompositionNonzero(0, 0));
            }
        }
        for o in &objects[1..] {
            if o.pot != objects[0].pot {
                return Err(AlgebraError::PotentialMismatch(
                    objects[0].ctx().render(&objects[0].pot.w),
                    o.ctx().render(&o.pot.w),
                ));
            }
        }
        Ok(MFComplex {
            start,
            objects,
            diffs,
        })
    }

    pub fn single(object: MatFac, degree: i64) -> Self {
        MFComplex {
            start: degree,
            objects: vec![object],
            diffs: Vec::new(),
        }
    }

    pub fn two_term(phi: &MFMorphism, target_degree: i64) -> Result<Self> {
        MFComplex::new(
            target_degree - 1,
            vec![phi.source.clone(), phi.target.clone()],
            vec![phi.clone()],
        )
    }
}

/// Summand bookkeeping for one Z/2 component of a totalization: complex
/// degree, internal parity, rank, offset.
struct Summand {
    idx: usize,
    degree: i64,
    parity: usize,
    rank: usize,
    offset: usize,
}

/// Collapse of a bounded complex of factorizations into a single
/// factorization. Within each Z/2 component the summands `F^i_j` are laid
/// out by descending complex degree `i`, so a cone comes out as
/// `E' + [1]E` with an upper-triangular differential; the differential is
/// the complex differential plus `(-1)^i` times the internal ones.
pub fn totalize(complex: &MFComplex) -> Result<MatFac> {
    let pot = complex.objects[0].pot.clone();
    let ctx = &pot.ctx;

    let summands = |l: usize| -> Vec<Summand> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (idx, obj) in complex.objects.iter().enumerate().rev() {
            let degree = complex.start + idx as i64;
            for parity in [1usize, 0usize] {
                if (degree + parity as i64).rem_euclid(2) == l as i64 {
                    let rank = obj.rank(parity);
                    out.push(Summand {
                        idx,
                        degree,
                        parity,
                        rank,
                        offset,
                    });
                    offset += rank;
                }
            }
        }
        out
    };
    // per fixed degree exactly one parity matches
    let odd = summands(1);
    let even = summands(0);
    let total = |s: &Vec<Summand>| s.iter().map(|x| x.rank).sum::<usize>();

    let build = |from: &Vec<Summand>, to: &Vec<Summand>| -> FreeMatrix {
        let mut m = FreeMatrix::zero(total(to), total(from));
        for s in from {
            let obj = &complex.objects[s.idx];
            // internal differential with the (-1)^i twist
            let internal = if s.parity == 1 { &obj.e1 } else { &obj.e0 };
            if let Some(t) = to
                .iter()
                .find(|t| t.idx == s.idx && t.parity == 1 - s.parity)
            {
                let signed = if s.degree.rem_euclid(2) == 1 {
                    internal.neg(ctx)
                } else {
                    internal.clone()
                };
                copy_block(&mut m, &signed, t.offset, s.offset);
            }
            // complex differential (degree-0 component on this parity)
            if s.idx + 1 < complex.objects.len() {
                if let Some(t) = to
                    .iter()
                    .find(|t| t.idx == s.idx + 1 && t.parity == s.parity)
                {
                    let d = &complex.diffs[s.idx];
                    let comp = if s.parity == 1 { &d.a } else { &d.b };
                    copy_block(&mut m, comp, t.offset, s.offset);
                }
            }
        }
        m
    };

    let e1 = build(&odd, &even);
    let e0 = build(&even, &odd);
    MatFac::new(pot, e1, e0)
}

fn copy_block(dst: &mut FreeMatrix, src: &FreeMatrix, row_off: usize, col_off: usize) {
    for i in 0..src.rows {
        for j in 0..src.cols {
            dst[(row_off + i, col_off + j)] = src[(i, j)].clone();
        }
    }
}

/// Cone of a closed degree-0 morphism: the totalization of
/// `E -> E'` with `E'` in degree 0, together with the canonical closed
/// morphisms `E' -> Cone(phi) -> [1]E`.
pub struct ConeData {
    pub cone: MatFac,
    pub inclusion: MFMorphism,
    pub projection: MFMorphism,
}

pub fn cone(phi: &MFMorphism) -> Result<ConeData> {
    if phi.degree != 0 {
        return Err(AlgebraError::NotClosed);
    }
    if !crate::homotopy::is_closed(phi)? {
        return Err(AlgebraError::NotClosed);
    }
    let complex = MFComplex::two_term(phi, 0)?;
    let cone_obj = totalize(&complex)?;
    let ctx = phi.source.ctx();
    let tgt = &phi.target;
    let src = &phi.source;
    // layout: odd = E'_1 + E_0, even = E'_0 + E_1 (degree -1 shifts parity)
    let inc1 = FreeMatrix::block(
        &[vec![Some(&FreeMatrix::identity(ctx, tgt.rank1))], vec![None]],
        &[tgt.rank1, src.rank0],
        &[tgt.rank1],
    );
    let inc0 = FreeMatrix::block(
        &[vec![Some(&FreeMatrix::identity(ctx, tgt.rank0))], vec![None]],
        &[tgt.rank0, src.rank1],
        &[tgt.rank0],
    );
    let inclusion = MFMorphism::degree_zero(tgt.clone(), cone_obj.clone(), inc1, inc0)?;
    let sh = src.shift();
    let proj1 = FreeMatrix::block(
        &[vec![None, Some(&FreeMatrix::identity(ctx, src.rank0))]],
        &[src.rank0],
        &[tgt.rank1, src.rank0],
    );
    let proj0 = FreeMatrix::block(
        &[vec![None, Some(&FreeMatrix::identity(ctx, src.rank1))]],
        &[src.rank1],
        &[tgt.rank0, src.rank1],
    );
    let projection = MFMorphism::degree_zero(cone_obj.clone(), sh, proj1, proj0)?;
    Ok(ConeData {
        cone: cone_obj,
        inclusion,
        projection,
    })
}

/// The contractible factorization `G^+(N)` on free components
/// `N_0 + N_1` in both parities, with `e0 = id + W` and `e1 = W + id`
/// blockwise.
pub fn g_plus(n0_rank: usize, n1_rank: usize, pot: &Potential) -> MatFac {
    let ctx = &pot.ctx;
    let id0 = FreeMatrix::identity(ctx, n0_rank);
    let id1 = FreeMatrix::identity(ctx, n1_rank);
    let w0 = FreeMatrix::scalar(ctx, &pot.w, n0_rank);
    let w1 = FreeMatrix::scalar(ctx, &pot.w, n1_rank);
    let e0 = FreeMatrix::block(
        &[vec![Some(&id0), None], vec![None, Some(&w1)]],
        &[n0_rank, n1_rank],
        &[n0_rank, n1_rank],
    );
    let e1 = FreeMatrix::block(
        &[vec![Some(&w0), None], vec![None, Some(&id1)]],
        &[n0_rank, n1_rank],
        &[n0_rank, n1_rank],
    );
    MatFac::new(pot.clone(), e1, e0).expect("G^+ is always a factorization")
}

/// Entrywise substitution along a ring map given by variable images; the
/// map must send the defining ideal to zero.
pub fn base_change(
    source: &RingContext,
    target: &RingContext,
    images: &[Poly],
    e: &MatFac,
) -> Result<MatFac> {
    if images.len() != source.nvars() {
        return Err(AlgebraError::ShapeMismatch(
            "one image per source variable".into(),
        ));
    }
    if e.ctx() != source {
        return Err(AlgebraError::RingMismatch);
    }
    for g in source.defining_ideal() {
        let img = source.substitute(g, target, images);
        if !img.is_zero() {
            return Err(AlgebraError::IllDefinedRingMap(source.render(g)));
        }
    }
    let w = source.substitute(&e.pot.w, target, images);
    let subst = |m: &FreeMatrix| m.map(|p| source.substitute(p, target, images));
    MatFac::new(
        Potential::new(target.clone(), w),
        subst(&e.e1),
        subst(&e.e0),
    )
}

/// For a unit potential, the degree-1 endomorphism `h = (W^{-1} e_0, 0)`
/// with `d(h) = id`, certifying that every object is contractible.
pub fn unit_contraction(e: &MatFac) -> Result<MFMorphism> {
    let ctx = e.ctx();
    if !e.pot.is_unit() {
        return Err(AlgebraError::PotentialNotUnit(ctx.render(&e.pot.w)));
    }
    let c = e
        .pot
        .w
        .constant_coeff()
        .cloned()
        .expect("unit potential is a nonzero constant");
    let inv = ctx.field().inv(&c)?;
    let winv = ctx.constant(inv);
    // components: f01 = W^{-1} e0 (E_0 -> E_1), f10 = 0
    let h = MFMorphism::degree_one(
        e.clone(),
        e.clone(),
        FreeMatrix::zero(e.rank0, e.rank1),
        e.e0.scale(ctx, &winv),
    )?;
    let dh = h.differential();
    let idm = MFMorphism::identity(e);
    if dh.a != idm.a || dh.b != idm.b {
        return Err(AlgebraError::Invalid(
            "unit contraction identity failed".into(),
        ));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::poly::MonomialOrder;

    fn qq(vars: &[&str]) -> RingContext {
        RingContext::new(FieldSpec::Rationals, vars, MonomialOrder::Grevlex).unwrap()
    }

    fn mf(ctx: &RingContext, a: &str, b: &str) -> MatFac {
        MatFac::rank_one(ctx, &ctx.parse_poly(a).unwrap(), &ctx.parse_poly(b).unwrap()).unwrap()
    }

    #[test]
    fn rank_one_validation() {
        let ctx = qq(&["x", "y"]);
        let e = mf(&ctx, "x", "y^2");
        assert_eq!(ctx.render(&e.pot.w), "x*y^2");
        // wrong potential rejected
        let bad = MatFac::new(
            Potential::new(ctx.clone(), ctx.parse_poly("x*y^2").unwrap()),
            FreeMatrix::from_rows(&ctx, &[vec!["x"]]).unwrap(),
            FreeMatrix::from_rows(&ctx, &[vec!["y"]]).unwrap(),
        );
        assert!(matches!(bad, Err(AlgebraError::NotAFactorization { .. })));
    }

    #[test]
    fn zero_differential_object() {
        let ctx = qq(&[]);
        let pot = Potential::zero(ctx);
        let e = MatFac::new(pot, FreeMatrix::zero(1, 1), FreeMatrix::zero(1, 1)).unwrap();
        assert_eq!(e.rank0, 1);
    }

    #[test]
    fn shift_formula_and_involution() {
        let ctx = qq(&["x", "y"]);
        let e = mf(&ctx, "x", "y^2");
        let s = e.shift();
        assert_eq!(ctx.render(&s.e1[(0, 0)]), "-y^2");
        assert_eq!(ctx.render(&s.e0[(0, 0)]), "-x");
        assert_eq!(s.shift(), e);
        let z = MatFac::zero_object(e.pot.clone());
        assert_eq!(z.shift(), z);
    }

    #[test]
    fn totalize_single_degrees() {
        let ctx = qq(&["x", "y"]);
        let e = mf(&ctx, "x", "y");
        let t0 = totalize(&MFComplex::single(e.clone(), 0)).unwrap();
        assert_eq!(t0, e);
        let t1 = totalize(&MFComplex::single(e.clone(), 1)).unwrap();
        assert_eq!(t1, e.shift());
    }

    #[test]
    fn cone_of_identity_and_maps() {
        let ctx = qq(&["x", "y"]);
        let e = mf(&ctx, "x", "y");
        let data = cone(&MFMorphism::identity(&e)).unwrap();
        assert_eq!(data.cone.rank0, 2);
        // canonical compositions vanish exactly
        let comp = data.projection.compose(&data.inclusion).unwrap();
        assert!(comp.is_zero());
        // both canonical maps are closed
        assert!(crate::homotopy::is_closed(&data.inclusion).unwrap());
        assert!(crate::homotopy::is_closed(&data.projection).unwrap());
    }

    #[test]
    fn cone_example_rank_two() {
        let ctx = qq(&["x", "y"]);
        let e = mf(&ctx, "x", "y");
        let x = ctx.parse_poly("x").unwrap();
        let phi = MFMorphism::identity(&e).scale(&x);
        let data = cone(&phi).unwrap();
        assert_eq!((data.cone.rank1, data.cone.rank0), (2, 2));
        assert_eq!(ctx.render(&data.cone.pot.w), "x*y");
    }

    #[test]
    fn direct_sum_blocks() {
        let ctx = qq(&["x", "y"]);
        let e = mf(&ctx, "x", "y");
        let f = mf(&ctx, "y", "x");
        let s = e.direct_sum(&f).unwrap();
        assert_eq!((s.rank1, s.rank0), (2, 2));
        let z = MatFac::zero_object(e.pot.clone());
        assert_eq!(e.direct_sum(&z).unwrap(), e);
        let g = mf(&ctx, "x", "x");
        assert!(e.direct_sum(&g).is_err());
    }

    #[test]
    fn g_plus_formula() {
        let ctx = qq(&["x"]);
        let pot = Potential::new(ctx.clone(), ctx.parse_poly("x^2").unwrap());
        let g = g_plus(1, 1, &pot);
        assert_eq!(ctx.render(&g.e0[(0, 0)]), "1");
        assert_eq!(ctx.render(&g.e0[(1, 1)]), "x^2");
        assert_eq!(ctx.render(&g.e1[(0, 0)]), "x^2");
        assert_eq!(ctx.render(&g.e1[(1, 1)]), "1");
        let z = g_plus(0, 0, &pot);
        assert_eq!((z.rank1, z.rank0), (0, 0));
    }

    #[test]
    fn base_change_chart_map() {
        let a = qq(&["x", "y"]);
        let b = qq(&["y", "z"]);
        let e = mf(&a, "x", "y");
        let images = vec![b.parse_poly("y*z").unwrap(), b.parse_poly("y").unwrap()];
        let pulled = base_change(&a, &b, &images, &e).unwrap();
        assert_eq!(b.render(&pulled.pot.w), "y^2*z");
        assert_eq!(b.render(&pulled.e1[(0, 0)]), "y*z");
        // identity map
        let id_images = vec![a.parse_poly("x").unwrap(), a.parse_poly("y").unwrap()];
        assert_eq!(base_change(&a, &a, &id_images, &e).unwrap(), e);
        // x -> 0 specialization of {x; x}
        let k = qq(&[]);
        let ex = mf(&a, "x", "x");
        let zero_images = vec![k.zero(), k.zero()];
        let coll = base_change(&a, &k, &zero_images, &ex).unwrap();
        assert!(coll.pot.is_zero());
        assert!(coll.e1.is_zero() && coll.e0.is_zero());
    }

    #[test]
    fn base_change_must_kill_ideal() {
        let a0 = qq(&["x", "y"]);
        let a = a0.with_ideal(vec![a0.parse_poly("x*y").unwrap()]).unwrap();
        let b = qq(&["t"]);
        let e = MatFac::new(
            Potential::zero(a.clone()),
            FreeMatrix::from_rows(&a, &[vec!["x"]]).unwrap(),
            FreeMatrix::from_rows(&a, &[vec!["y"]]).unwrap(),
        )
        .unwrap();
        // x -> t, y -> t does not kill (xy)
        let images = vec![b.parse_poly("t").unwrap(), b.parse_poly("t").unwrap()];
        assert!(matches!(
            base_change(&a, &b, &images, &e),
            Err(AlgebraError::IllDefinedRingMap(_))
        ));
    }

    #[test]
    fn unit_contraction_formula() {
        let ctx = qq(&[]);
        let pot = Potential::new(ctx.clone(), ctx.int(2));
        let e = MatFac::new(
            pot,
            FreeMatrix::from_rows(&ctx, &[vec!["2"]]).unwrap(),
            FreeMatrix::from_rows(&ctx, &[vec!["1"]]).unwrap(),
        )
        .unwrap();
        let h = unit_contraction(&e).unwrap();
        assert_eq!(ctx.render(&h.b[(0, 0)]), "1/2");
        let cx = qq(&["x"]);
        let ex = mf(&cx, "x", "x");
        assert!(matches!(
            unit_contraction(&ex),
            Err(AlgebraError::PotentialNotUnit(_))
        ));
    }
}
