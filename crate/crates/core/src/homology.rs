//! Finitely presented modules: homology of two-step complexes, Krull
//! dimension from the leading-term staircase, and k-dimension by counting
//! standard monomials.

use crate::error::{AlgebraError, Result};
use crate::groebner::{
    module_groebner_basis, submodule_membership, vec_is_zero, vec_leading, vector_normal_form,
    ExtendedGb, Membership, Vector,
};
use crate::matrix::FreeMatrix;
use crate::poly::exp_divides;
use crate::ring::RingContext;

/// Krull dimension of a presented module, with the zero module singled out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KrullDim {
    ZeroModule,
    Dim(usize),
    Unknown,
}

/// k-dimension (vector-space dimension over the coefficient field).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KDim {
    Finite(usize),
    Infinite,
}

/// Generators and relations of a finitely presented module over the ring;
/// columns of `relations` are the relations.
#[derive(Debug, Clone)]
pub struct ModulePresentation {
    pub ambient_rank: usize,
    pub relations: FreeMatrix,
    pub krull_dim: KrullDim,
    pub k_dim: KDim,
}

impl ModulePresentation {
    /// Builds the presentation `A^rank / <columns>` and computes both
    /// dimension invariants from the module Groebner basis.
    pub fn new(ctx: &RingContext, ambient_rank: usize, relations: FreeMatrix) -> Self {
        assert_eq!(relations.rows, ambient_rank);
        let gb = module_groebner_basis(ctx, &relations.columns(), ambient_rank);
        Self::from_groebner(ctx, ambient_rank, relations, &gb)
    }

    fn from_groebner(
        ctx: &RingContext,
        ambient_rank: usize,
        relations: FreeMatrix,
        gb: &[Vector],
    ) -> Self {
        let (krull_dim, k_dim) = staircase_dimensions(ctx, ambient_rank, gb);
        ModulePresentation {
            ambient_rank,
            relations,
            krull_dim,
            k_dim,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.krull_dim == KrullDim::ZeroModule
    }

    pub fn to_json(&self, ctx: &RingContext) -> serde_json::Value {
        let rels: Vec<Vec<String>> = (0..self.relations.rows)
            .map(|i| {
                (0..self.relations.cols)
                    .map(|j| ctx.render(self.relations.entry(i, j)))
                    .collect()
            })
            .collect();
        serde_json::json!({
            "ambient_rank": self.ambient_rank,
            "relations": rels,
            "krull_dim": match self.krull_dim {
                KrullDim::ZeroModule => serde_json::json!("zero module"),
                KrullDim::Dim(d) => serde_json::json!(d),
                KrullDim::Unknown => serde_json::json!("unknown"),
            },
            "k_dim": match self.k_dim {
                KDim::Finite(d) => serde_json::json!(d),
                KDim::Infinite => serde_json::json!("infinite"),
            },
        })
    }
}

/// Krull dimension and standard-monomial count of `A^rank / <gb>` over the
/// quotient ring (the basis is already ideal-augmented).
fn staircase_dimensions(
    ctx: &RingContext,
    ambient_rank: usize,
    gb: &[Vector],
) -> (KrullDim, KDim) {
    if ambient_rank == 0 {
        return (KrullDim::ZeroModule, KDim::Finite(0));
    }
    let n = ctx.nvars();
    // leading monomials per position
    let mut leads: Vec<Vec<Vec<u32>>> = vec![Vec::new(); ambient_rank];
    for v in gb {
        if let Some((p, e, _)) = vec_leading(v) {
            leads[p].push(e);
        }
    }
    // zero module: a constant leading monomial in every position
    let zero = leads
        .iter()
        .all(|l| l.iter().any(|e| e.iter().all(|&x| x == 0)));
    if zero {
        return (KrullDim::ZeroModule, KDim::Finite(0));
    }

    let mut dim = 0usize;
    let mut kdim: Option<usize> = Some(0);
    for l in &leads {
        if l.iter().any(|e| e.iter().all(|&x| x == 0)) {
            continue; // this position contributes the zero quotient
        }
        dim = dim.max(monomial_ideal_dimension(n, l));
        kdim = match (kdim, standard_monomial_count(n, l)) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
    }
    let k = match kdim {
        Some(c) => KDim::Finite(c),
        None => KDim::Infinite,
    };
    (KrullDim::Dim(dim), k)
}

/// Dimension of `A / <monomials>`: the largest subset S of the variables
/// such that no generator has support inside S.
fn monomial_ideal_dimension(n: usize, monomials: &[Vec<u32>]) -> usize {
    if monomials.is_empty() {
        return n;
    }
    let mut best = 0usize;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let disjoint = monomials.iter().all(|m| {
            m.iter()
                .enumerate()
                .any(|(i, &e)| e > 0 && mask & (1 << i) == 0)
        });
        if disjoint {
            best = size;
        }
    }
    best
}

/// Number of monomials outside the staircase, if finite.
fn standard_monomial_count(n: usize, monomials: &[Vec<u32>]) -> Option<usize> {
    if n == 0 {
        // constants-only ring: either the position is killed (handled by the
        // caller) or the quotient is the field itself
        return Some(1);
    }
    // finite iff a pure power of every variable appears
    let mut bounds = vec![None::<u32>; n];
    for m in monomials {
        let support: Vec<usize> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect();
        if support.len() == 1 {
            let i = support[0];
            bounds[i] = Some(bounds[i].map_or(m[i], |b| b.min(m[i])));
        }
    }
    let bounds: Option<Vec<u32>> = bounds.into_iter().collect();
    let bounds = bounds?;
    let mut count = 0usize;
    let mut stack = vec![vec![0u32; 0]];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == n {
            let standard = monomials.iter().all(|m| !exp_divides(m, &prefix));
            if standard {
                count += 1;
            }
            continue;
        }
        let i = prefix.len();
        for e in 0..bounds[i] {
            let mut next = prefix.clone();
            next.push(e);
            stack.push(next);
        }
    }
    Some(count)
}

/// Kernel generators together with the presentation of a homology module.
#[derive(Debug, Clone)]
pub struct HomologyData {
    /// Columns generate `ker(d_out)`.
    pub kernel_gens: FreeMatrix,
    pub presentation: ModulePresentation,
}

/// Presentation of `ker(d_out) / im(d_in)` for a composable pair
/// `d_in: A^a -> A^b`, `d_out: A^b -> A^c` with `d_out * d_in = 0` over the
/// quotient ring (checked).
pub fn module_homology(
    ctx: &RingContext,
    d_in: &FreeMatrix,
    d_out: &FreeMatrix,
) -> Result<HomologyData> {
    if d_in.rows != d_out.cols {
        return Err(AlgebraError::ShapeMismatch(format!(
            "d_in is {}x{}, d_out is {}x{}",
            d_in.rows, d_in.cols, d_out.rows, d_out.cols
        )));
    }
    let comp = d_out.mul(ctx, d_in);
    for i in 0..comp.rows {
        for j in 0..comp.cols {
            if !ideal_zero(ctx, comp.entry(i, j)) {
                return Err(AlgebraError::CompositionNonzero(i, j));
            }
        }
    }

    let mid = d_in.rows;
    // kernel of d_out as syzygies of its columns
    let kernel: Vec<Vector> = if d_out.rows == 0 {
        (0..mid)
            .map(|i| {
                let mut v = vec![crate::poly::Poly::zero(); mid];
                v[i] = ctx.one();
                v
            })
            .collect()
    } else {
        let ext = ExtendedGb::new(ctx, &d_out.columns(), d_out.rows);
        ext.syzygies(ctx)
    };
    let kmat = FreeMatrix::from_columns(mid, kernel.clone());

    // relations of the homology: lifts of the d_in columns through the
    // kernel generators, plus the syzygies among the kernel generators
    let mut relations: Vec<Vector> = Vec::new();
    let kext = ExtendedGb::new(ctx, &kernel, mid);
    for col in d_in.columns() {
        match kext.membership(ctx, &col) {
            Membership::Yes(lift) => relations.push(lift),
            Membership::No(_) => {
                // d_out * d_in = 0, so every image column lies in the kernel
                unreachable!("image column not in kernel despite zero composition")
            }
        }
    }
    relations.extend(kext.syzygies(ctx));
    let rel = FreeMatrix::from_columns(kernel.len(), relations);
    Ok(HomologyData {
        kernel_gens: kmat,
        presentation: ModulePresentation::new(ctx, kernel.len(), rel),
    })
}

fn ideal_zero(ctx: &RingContext, p: &crate::poly::Poly) -> bool {
    ctx.normalize(p.clone()).is_zero()
}

/// Do the columns of `a` and `b` generate the same submodule of `A^rank`?
pub fn same_submodule(ctx: &RingContext, rank: usize, a: &FreeMatrix, b: &FreeMatrix) -> bool {
    assert_eq!(a.rows, rank);
    assert_eq!(b.rows, rank);
    module_groebner_basis(ctx, &a.columns(), rank) == module_groebner_basis(ctx, &b.columns(), rank)
}

/// Presented-module map `Phi: A^a/R_M -> A^b/R_N`; isomorphism is decided by
/// mutual membership: surjectivity of the induced map and containment of the
/// relation preimage.
pub struct PresentedMap<'a> {
    pub ctx: &'a RingContext,
    pub matrix: FreeMatrix,
    pub source_rels: FreeMatrix,
    pub target_rels: FreeMatrix,
}

impl<'a> PresentedMap<'a> {
    pub fn is_surjective(&self) -> bool {
        let b = self.matrix.rows;
        let mut gens: Vec<Vector> = self.matrix.columns();
        gens.extend(self.target_rels.columns());
        let ext = ExtendedGb::new(self.ctx, &gens, b);
        (0..b).all(|i| {
            let mut v = vec![crate::poly::Poly::zero(); b];
            v[i] = self.ctx.one();
            matches!(ext.membership(self.ctx, &v), Membership::Yes(_))
        })
    }

    pub fn is_injective(&self) -> bool {
        let a = self.matrix.cols;
        // preimage of the target relations: syzygies of [Phi | R_N]
        // restricted to the Phi block
        let mut gens: Vec<Vector> = self.matrix.columns();
        gens.extend(self.target_rels.columns());
        let ext = ExtendedGb::new(self.ctx, &gens, self.matrix.rows);
        let syz = ext.syzygies(self.ctx);
        let source_cols = self.source_rels.columns();
        for s in syz {
            let first: Vector = s[..a].to_vec();
            if vec_is_zero(&first) {
                continue;
            }
            match submodule_membership(self.ctx, &first, &source_cols) {
                Membership::Yes(_) => {}
                Membership::No(_) => return false,
            }
        }
        true
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }
}

/// Is the presented module `A^rank / <rels>` the zero module?
pub fn presentation_is_zero(ctx: &RingContext, rank: usize, rels: &FreeMatrix) -> bool {
    let cols = rels.columns();
    (0..rank).all(|i| {
        let mut v = vec![crate::poly::Poly::zero(); rank];
        v[i] = ctx.one();
        matches!(
            submodule_membership(ctx, &v, &cols),
            Membership::Yes(_)
        )
    })
}

/// Express `v` in terms of the columns of `gens` modulo nothing: membership
/// lift wrapper used for induced maps on homology.
pub fn lift_through(ctx: &RingContext, v: &Vector, gens: &[Vector]) -> Option<Vec<crate::poly::Poly>> {
    match submodule_membership(ctx, v, gens) {
        Membership::Yes(l) => Some(l),
        Membership::No(_) => None,
    }
}

/// Syzygy basis of a matrix: columns generate the kernel of the induced map
/// `A^cols -> A^rows` over the quotient ring.
pub fn syzygy_basis(ctx: &RingContext, m: &FreeMatrix) -> FreeMatrix {
    if m.rows == 0 {
        return FreeMatrix::identity(ctx, m.cols);
    }
    let ext = ExtendedGb::new(ctx, &m.columns(), m.rows);
    let syz = ext.syzygies(ctx);
    FreeMatrix::from_columns(m.cols, syz)
}

/// Canonical normal form of a single polynomial against the Groebner basis
/// of an ideal given by generators (over the quotient ring).
pub fn normal_form_poly(ctx: &RingContext, f: &crate::poly::Poly, gens: &[crate::poly::Poly]) -> crate::poly::Poly {
    let vecs: Vec<Vector> = gens.iter().map(|p| vec![p.clone()]).collect();
    let gb = module_groebner_basis(ctx, &vecs, 1);
    vector_normal_form(ctx, &[f.clone()], &gb).pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::poly::MonomialOrder;

    fn qq(vars: &[&str]) -> RingContext {
        RingContext::new(FieldSpec::Rationals, vars, MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn cokernel_of_x_on_the_line() {
        let ctx = qq(&["x"]);
        let d_in = FreeMatrix::from_rows(&ctx, &[vec!["x"]]).unwrap();
        let d_out = FreeMatrix::zero(0, 1);
        let h = module_homology(&ctx, &d_in, &d_out).unwrap();
        assert_eq!(h.presentation.krull_dim, KrullDim::Dim(0));
        assert_eq!(h.presentation.k_dim, KDim::Finite(1));
    }

    #[test]
    fn identity_has_zero_homology() {
        let ctx = qq(&["x"]);
        let d_in = FreeMatrix::identity(&ctx, 2);
        let d_out = FreeMatrix::zero(0, 2);
        let h = module_homology(&ctx, &d_in, &d_out).unwrap();
        assert!(h.presentation.is_zero());
        assert_eq!(h.presentation.k_dim, KDim::Finite(0));
    }

    #[test]
    fn koszul_complex_is_exact_in_the_middle() {
        let ctx = qq(&["x", "y"]);
        let d_in = FreeMatrix::from_rows(&ctx, &[vec!["x"], vec!["y"]]).unwrap();
        let d_out = FreeMatrix::from_rows(&ctx, &[vec!["y", "-x"]]).unwrap();
        let h = module_homology(&ctx, &d_in, &d_out).unwrap();
        assert!(h.presentation.is_zero());
    }

    #[test]
    fn composition_check_fires() {
        let ctx = qq(&["x"]);
        let d_in = FreeMatrix::identity(&ctx, 1);
        let d_out = FreeMatrix::from_rows(&ctx, &[vec!["x"]]).unwrap();
        assert!(matches!(
            module_homology(&ctx, &d_in, &d_out),
            Err(AlgebraError::CompositionNonzero(0, 0))
        ));
    }

    #[test]
    fn syzygy_of_row_with_zero_row() {
        let ctx = qq(&["x", "y"]);
        let m = FreeMatrix::from_rows(&ctx, &[vec!["x", "y"], vec!["0", "0"]]).unwrap();
        let syz = syzygy_basis(&ctx, &m);
        // the kernel is the Koszul syzygy; membership both ways
        let expected = FreeMatrix::from_rows(&ctx, &[vec!["y"], vec!["-x"]]).unwrap();
        assert!(same_submodule(&ctx, 2, &syz, &expected));
        assert!(m.mul(&ctx, &syz).is_zero());
    }

    #[test]
    fn identity_matrix_has_no_syzygies() {
        let ctx = qq(&["x", "y"]);
        let m = FreeMatrix::identity(&ctx, 2);
        let syz = syzygy_basis(&ctx, &m);
        assert_eq!(syz.cols, 0);
    }

    #[test]
    fn dimension_of_plane_quotients() {
        let ctx = qq(&["x", "y"]);
        // A/(x) is a line: dim 1, infinite k-dimension
        let rel = FreeMatrix::from_rows(&ctx, &[vec!["x"]]).unwrap();
        let p = ModulePresentation::new(&ctx, 1, rel);
        assert_eq!(p.krull_dim, KrullDim::Dim(1));
        assert_eq!(p.k_dim, KDim::Infinite);
        // A/(x^2, y) has length 2
        let rel = FreeMatrix::from_rows(&ctx, &[vec!["x^2", "y"]]).unwrap();
        let p = ModulePresentation::new(&ctx, 1, rel);
        assert_eq!(p.krull_dim, KrullDim::Dim(0));
        assert_eq!(p.k_dim, KDim::Finite(2));
    }
}
