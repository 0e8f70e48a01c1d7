//! Dense matrices of polynomials: the carrier for every map of free modules.

use crate::error::{AlgebraError, Result};
use crate::field::Scalar;
use crate::poly::Poly;
use crate::ring::RingContext;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Poly>, // row-major
}

impl FreeMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Poly>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        FreeMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        FreeMatrix {
            rows,
            cols,
            entries: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(ctx: &RingContext, n: usize) -> Self {
        Self::scalar(ctx, &ctx.one(), n)
    }

    /// w * identity.
    pub fn scalar(ctx: &RingContext, w: &Poly, n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = w.clone();
        }
        let _ = ctx;
        m
    }

    pub fn from_rows(ctx: &RingContext, rows: &[Vec<&str>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(AlgebraError::ShapeMismatch("ragged rows".into()));
            }
            for s in row {
                entries.push(ctx.parse_poly(s)?);
            }
        }
        Ok(Self::new(r, c, entries))
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn transpose(&self) -> FreeMatrix {
        let mut out = FreeMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn add(&self, ctx: &RingContext, other: &FreeMatrix) -> FreeMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FreeMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(other.entries.iter())
                .map(|(a, b)| ctx.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, ctx: &RingContext, other: &FreeMatrix) -> FreeMatrix {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn neg(&self, ctx: &RingContext) -> FreeMatrix {
        FreeMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| ctx.neg(p)).collect(),
        }
    }

    pub fn mul(&self, ctx: &RingContext, other: &FreeMatrix) -> FreeMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matrix product shape {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = FreeMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero();
                for k in 0..self.cols {
                    if !self[(i, k)].is_zero() && !other[(k, j)].is_zero() {
                        acc = ctx.add(&acc, &ctx.mul(&self[(i, k)], &other[(k, j)]));
                    }
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn scale(&self, ctx: &RingContext, w: &Poly) -> FreeMatrix {
        FreeMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| ctx.mul(w, p)).collect(),
        }
    }

    pub fn map<F: FnMut(&Poly) -> Poly>(&self, mut f: F) -> FreeMatrix {
        FreeMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| f(p)).collect(),
        }
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Poly>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<Poly>>) -> FreeMatrix {
        let ncols = cols.len();
        let mut out = FreeMatrix::zero(rows, ncols);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in 0..rows {
                out[(i, j)] = col[i].clone();
            }
        }
        out
    }

    /// Assembles a block matrix; `blocks[i][j]` may be `None` for a zero
    /// block. Row/column counts are taken from the first present block in
    /// each band.
    pub fn block(blocks: &[Vec<Option<&FreeMatrix>>], row_sizes: &[usize], col_sizes: &[usize]) -> FreeMatrix {
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut out = FreeMatrix::zero(rows, cols);
        let mut roff = 0;
        for (bi, band) in blocks.iter().enumerate() {
            let mut coff = 0;
            for (bj, blk) in band.iter().enumerate() {
                if let Some(m) = blk {
                    assert_eq!(m.rows, row_sizes[bi], "block ({bi},{bj}) rows");
                    assert_eq!(m.cols, col_sizes[bj], "block ({bi},{bj}) cols");
                    for i in 0..m.rows {
                        for j in 0..m.cols {
                            out[(roff + i, coff + j)] = m[(i, j)].clone();
                        }
                    }
                }
                coff += col_sizes[bj];
            }
            roff += row_sizes[bi];
        }
        out
    }

    pub fn render(&self, ctx: &RingContext) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> =
                    (0..self.cols).map(|j| ctx.render(&self[(i, j)])).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }

    /// Matrix of the linear map `f -> a * f * b` on row-major flattened
    /// entries of `f` (an `f_rows x f_cols` matrix). `None` stands for the
    /// identity of the appropriate size.
    pub fn hom_action(
        ctx: &RingContext,
        a: Option<&FreeMatrix>,
        b: Option<&FreeMatrix>,
        f_rows: usize,
        f_cols: usize,
    ) -> FreeMatrix {
        let out_rows = a.map(|m| m.rows).unwrap_or(f_rows);
        let out_cols = b.map(|m| m.cols).unwrap_or(f_cols);
        let mut out = FreeMatrix::zero(out_rows * out_cols, f_rows * f_cols);
        for i in 0..out_rows {
            for j in 0..out_cols {
                for k in 0..f_rows {
                    for l in 0..f_cols {
                        let fa = match a {
                            Some(m) => m[(i, k)].clone(),
                            None => {
                                if i == k {
                                    ctx.one()
                                } else {
                                    continue;
                                }
                            }
                        };
                        if fa.is_zero() {
                            continue;
                        }
                        let fb = match b {
                            Some(m) => m[(l, j)].clone(),
                            None => {
                                if l == j {
                                    ctx.one()
                                } else {
                                    continue;
                                }
                            }
                        };
                        if fb.is_zero() {
                            continue;
                        }
                        out[(i * out_cols + j, k * f_cols + l)] = ctx.mul(&fa, &fb);
                    }
                }
            }
        }
        out
    }

    /// Row-major flattening of the matrix as a column vector.
    pub fn vectorize(&self) -> Vec<Poly> {
        self.entries.clone()
    }

    pub fn from_vec(rows: usize, cols: usize, v: Vec<Poly>) -> FreeMatrix {
        FreeMatrix::new(rows, cols, v)
    }

    /// Rank over the fraction field by fraction-free Gaussian elimination.
    pub fn symbolic_rank(&self, ctx: &RingContext) -> usize {
        let mut m: Vec<Vec<Poly>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].clone()).collect())
            .collect();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..self.cols {
            let Some(p) = (row..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let pivot = m[row][col].clone();
            for r in row + 1..self.rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].clone();
                for c in col..self.cols {
                    let t = ctx.sub(
                        &ctx.mul(&pivot, &m[r][c]),
                        &ctx.mul(&factor, &m[row][c]),
                    );
                    m[r][c] = t;
                }
            }
            rank += 1;
            row += 1;
            if row == self.rows {
                break;
            }
        }
        rank
    }

    /// Rank of the matrix evaluated at a rational point.
    pub fn rank_at_point(&self, ctx: &RingContext, point: &[Scalar]) -> usize {
        let field = ctx.field();
        let mut m: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| eval_poly(ctx, &self[(i, j)], point))
                    .collect()
            })
            .collect();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..self.cols {
            let Some(p) = (row..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let inv = field.inv(&m[row][col].clone()).unwrap();
            for r in row + 1..self.rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = field.mul(&m[r][col], &inv);
                for c in col..self.cols {
                    let t = field.sub(&m[r][c], &field.mul(&factor, &m[row][c]));
                    m[r][c] = t;
                }
            }
            rank += 1;
            row += 1;
            if row == self.rows {
                break;
            }
        }
        rank
    }
}

fn eval_poly(ctx: &RingContext, p: &Poly, point: &[Scalar]) -> Scalar {
    let field = ctx.field();
    let mut acc = field.zero();
    for (e, c) in p.terms() {
        let mut t = c.clone();
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                t = field.mul(&t, &point[i]);
            }
        }
        acc = field.add(&acc, &t);
    }
    acc
}

impl std::ops::Index<(usize, usize)> for FreeMatrix {
    type Output = Poly;
    fn index(&self, (i, j): (usize, usize)) -> &Poly {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FreeMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Poly {
        &mut self.entries[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::poly::MonomialOrder;

    fn ctx() -> RingContext {
        RingContext::new(FieldSpec::Rationals, &["x", "y"], MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn product_and_transpose() {
        let ctx = ctx();
        let a = FreeMatrix::from_rows(&ctx, &[vec!["x", "y"], vec!["0", "1"]]).unwrap();
        let b = FreeMatrix::from_rows(&ctx, &[vec!["1", "0"], vec!["y", "x"]]).unwrap();
        let ab = a.mul(&ctx, &b);
        assert_eq!(ctx.render(&ab[(0, 0)]), "y^2 + x");
        assert_eq!(ctx.render(&ab[(0, 1)]), "x*y");
        let t = a.transpose();
        assert_eq!(ctx.render(&t[(1, 0)]), "y");
    }

    #[test]
    fn hom_action_matches_direct_composition() {
        let ctx = ctx();
        let a = FreeMatrix::from_rows(&ctx, &[vec!["x", "1"], vec!["0", "y"]]).unwrap();
        let b = FreeMatrix::from_rows(&ctx, &[vec!["y", "0"], vec!["1", "x"]]).unwrap();
        let f = FreeMatrix::from_rows(&ctx, &[vec!["x+y", "2"], vec!["x*y", "0"]]).unwrap();
        let direct = a.mul(&ctx, &f).mul(&ctx, &b);
        let action = FreeMatrix::hom_action(&ctx, Some(&a), Some(&b), 2, 2);
        let flat = FreeMatrix::from_vec(4, 1, f.vectorize());
        let via_action = action.mul(&ctx, &flat);
        assert_eq!(via_action.vectorize(), direct.vectorize());
    }

    #[test]
    fn symbolic_rank_detects_dependent_rows() {
        let ctx = ctx();
        let m = FreeMatrix::from_rows(
            &ctx,
            &[vec!["x", "y"], vec!["x*y", "y^2"], vec!["1", "0"]],
        )
        .unwrap();
        assert_eq!(m.symbolic_rank(&ctx), 2);
    }
}
