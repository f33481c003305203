//! Dense exact matrices over any `Fld`.

use crate::scalars::Fld;
use std::fmt;

#[derive(Clone, PartialEq)]
pub struct Mat<F: Fld> {
    pub rows: usize,
    pub cols: usize,
    pub ctx: F::Ctx,
    data: Vec<F>,
}

impl<F: Fld> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<F: Fld> fmt::Display for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}

impl<F: Fld> std::ops::Index<(usize, usize)> for Mat<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.data[r * self.cols + c]
    }
}

impl<F: Fld> std::ops::IndexMut<(usize, usize)> for Mat<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.data[r * self.cols + c]
    }
}

impl<F: Fld> Mat<F> {
    pub fn zeros(ctx: &F::Ctx, rows: usize, cols: usize) -> Self {
        Mat { rows, cols, ctx: ctx.clone(), data: vec![F::zero(ctx); rows * cols] }
    }

    pub fn identity(ctx: &F::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m[(i, i)] = F::one(ctx);
        }
        m
    }

    pub fn scalar(ctx: &F::Ctx, n: usize, c: &F) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_vec(ctx: &F::Ctx, rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, ctx: ctx.clone(), data }
    }

    pub fn from_rows(ctx: &F::Ctx, rows: Vec<Vec<F>>, cols: usize) -> Self {
        let r = rows.len();
        let data: Vec<F> = rows.into_iter().flatten().collect();
        Self::from_vec(ctx, r, cols, data)
    }

    pub fn from_cols(ctx: &F::Ctx, rows: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(ctx, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<F> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in add");
        Mat { rows: self.rows, cols: self.cols, ctx: self.ctx.clone(), data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in sub");
        Mat { rows: self.rows, cols: self.cols, ctx: self.ctx.clone(), data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        Mat { rows: self.rows, cols: self.cols, ctx: self.ctx.clone(), data: self.data.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn neg(&self) -> Self {
        Mat { rows: self.rows, cols: self.cols, ctx: self.ctx.clone(), data: self.data.iter().map(|a| a.neg()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in mul");
        let mut out = Self::zeros(&self.ctx, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero(&self.ctx);
                for k in 0..self.cols {
                    if !v[k].is_zero() {
                        acc = acc.add(&self[(i, k)].mul(&v[k]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut r = Self::identity(&self.ctx, self.rows);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(&self.ctx, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        let mut out = Self::zeros(&self.ctx, self.rows, self.cols + o.cols);
        out.set_block(0, 0, self);
        out.set_block(0, self.cols, o);
        out
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut out = Self::zeros(&self.ctx, self.rows + o.rows, self.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, 0, o);
        out
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        let mut out = Self::zeros(&self.ctx, self.rows + o.rows, self.cols + o.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, o);
        out
    }

    /// Kronecker product with an identity: self ⊗ I_n.
    pub fn kron_identity(&self, n: usize) -> Self {
        let mut out = Self::zeros(&self.ctx, self.rows * n, self.cols * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self[(i, j)].is_zero() {
                    continue;
                }
                for t in 0..n {
                    out[(i * n + t, j * n + t)] = self[(i, j)].clone();
                }
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m[(r, c)].inv().unwrap();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].mul(&inv);
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = m[(r, j)].mul(&f);
                        m[(i, j)] = m[(i, j)].sub(&v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space {v : self v = 0}.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(&self.ctx); self.cols];
                v[f] = F::one(&self.ctx);
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = r[(i, f)].neg();
                }
                v
            })
            .collect()
    }

    /// Some x with self x = b.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Mat::from_cols(&self.ctx, self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(&self.ctx); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.ctx, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Basis (as columns) of the column space.
    pub fn column_space(&self) -> Vec<Vec<F>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.col(c)).collect()
    }
}

/// Row-reduced basis of the span of the given vectors.
pub fn span_basis<F: Fld>(ctx: &F::Ctx, dim: usize, vecs: &[Vec<F>]) -> Vec<Vec<F>> {
    if vecs.is_empty() {
        return vec![];
    }
    let m = Mat::from_rows(ctx, vecs.to_vec(), dim);
    let (r, p) = m.rref();
    (0..p.len()).map(|i| r.row(i)).collect()
}

pub fn rank_of<F: Fld>(ctx: &F::Ctx, dim: usize, vecs: &[Vec<F>]) -> usize {
    if vecs.is_empty() || dim == 0 {
        return 0;
    }
    Mat::from_rows(ctx, vecs.to_vec(), dim).rank()
}

/// Coordinates of v in the basis given as columns, if v lies in their span.
pub fn coordinates<F: Fld>(ctx: &F::Ctx, basis: &[Vec<F>], v: &[F]) -> Option<Vec<F>> {
    if basis.is_empty() {
        return if v.iter().all(|x| x.is_zero()) { Some(vec![]) } else { None };
    }
    Mat::from_cols(ctx, v.len(), basis).solve(v)
}

/// Extend an independent list to a basis of F^dim; returns the added vectors.
pub fn complement<F: Fld>(ctx: &F::Ctx, dim: usize, vecs: &[Vec<F>]) -> Vec<Vec<F>> {
    let mut cur: Vec<Vec<F>> = vecs.to_vec();
    let mut added = vec![];
    let mut r = rank_of(ctx, dim, &cur);
    for i in 0..dim {
        let mut e = vec![F::zero(ctx); dim];
        e[i] = F::one(ctx);
        cur.push(e.clone());
        let nr = rank_of(ctx, dim, &cur);
        if nr > r {
            r = nr;
            added.push(e);
        } else {
            cur.pop();
        }
    }
    added
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Field, Scalar};

    fn m(f: Field, rows: &[&[i64]]) -> Mat<Scalar> {
        let c = rows[0].len();
        Mat::from_rows(&f, rows.iter().map(|r| r.iter().map(|&x| f.int(x)).collect()).collect(), c)
    }

    #[test]
    fn kernel_and_inverse() {
        let f = Field::Rationals;
        let a = m(f, &[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        for v in a.kernel() {
            assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(a.kernel().len(), 2);
        let b = m(f, &[&[2, 1], &[1, 1]]);
        let bi = b.inverse().unwrap();
        assert_eq!(b.mul(&bi), Mat::identity(&f, 2));
        let f2 = Field::Prime(2);
        assert!(m(f2, &[&[1, 1], &[1, 1]]).inverse().is_none());
    }

    #[test]
    fn solve_consistency() {
        let f = Field::Prime(5);
        let a = m(f, &[&[1, 2], &[3, 4]]);
        let x = a.solve(&[f.int(1), f.int(0)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![f.int(1), f.int(0)]);
    }
}
