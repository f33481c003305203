//! Modules and two-component morphisms over a ditalgebra; Hom, End, endolength, isomorphism, enumeration.

use crate::bigraph::{ArrowKind, Ditalgebra, Path, PathElem, Sym};
use crate::fdalg::{find_invertible_combination, FdAlgebra, Vector};
use crate::linalg::Mat;
use crate::scalars::{Field, Fld, Poly, Scalar};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DitModError {
    #[error("domain mismatch")]
    DomainMismatch,
    #[error("zero module")]
    ZeroModule,
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("budget exceeded: {needed} states needed, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DitModule<F: Fld> {
    pub ctx: F::Ctx,
    pub dims: Vec<usize>,
    /// one matrix (target × source) per full arrow, keyed by arrow index
    pub arrows: BTreeMap<usize, Mat<F>>,
    /// action of x at each rational point
    pub xs: BTreeMap<usize, Mat<F>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DitMorphism<F: Fld> {
    pub f0: Vec<Mat<F>>,
    /// value on each dashed arrow, keyed by arrow index
    pub f1: BTreeMap<usize, Mat<F>>,
}

pub type Module = DitModule<Scalar>;
pub type Morphism = DitMorphism<Scalar>;

pub fn poly_at_matrix<F: Fld>(ctx: &F::Ctx, g: &Poly, x: &Mat<F>) -> Mat<F> {
    let n = x.rows;
    let mut acc = Mat::zeros(ctx, n, n);
    for c in g.coeffs().iter().rev() {
        acc = acc.mul(x).add(&Mat::scalar(ctx, n, &F::embed(ctx, c)));
    }
    acc
}

impl<F: Fld> DitModule<F> {
    pub fn zero(d: &Ditalgebra, ctx: &F::Ctx) -> Self {
        Self::with_dims(d, ctx, &vec![0; d.points()])
    }

    /// All matrices zero (x acting by 0 where rational).
    pub fn with_dims(d: &Ditalgebra, ctx: &F::Ctx, dims: &[usize]) -> Self {
        let mut arrows = BTreeMap::new();
        for a in d.bigraph.full_arrows() {
            let ar = d.arrow(a);
            arrows.insert(a, Mat::zeros(ctx, dims[ar.target], dims[ar.source]));
        }
        let xs = d.rational_points().into_iter().map(|p| (p, Mat::zeros(ctx, dims[p], dims[p]))).collect();
        DitModule { ctx: ctx.clone(), dims: dims.to_vec(), arrows, xs }
    }

    pub fn simple(d: &Ditalgebra, ctx: &F::Ctx, p: usize) -> Self {
        let mut dims = vec![0; d.points()];
        dims[p] = 1;
        Self::with_dims(d, ctx, &dims)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn sym_mat(&self, s: &Sym) -> &Mat<F> {
        match s {
            Sym::Arrow(a) => &self.arrows[a],
            Sym::X(p) => &self.xs[p],
        }
    }

    /// Matrix of a degree-0 path.
    pub fn eval_path(&self, p: &Path) -> Mat<F> {
        let mut acc = Mat::identity(&self.ctx, self.dims[p.start]);
        for s in &p.syms {
            acc = self.sym_mat(s).mul(&acc);
        }
        acc
    }

    /// Matrix of a degree-0 element restricted to paths start → end.
    pub fn eval_block(&self, e: &PathElem, start: usize, end: usize) -> Mat<F> {
        let mut acc = Mat::zeros(&self.ctx, self.dims[end], self.dims[start]);
        for (p, c) in &e.terms {
            if p.start == start && p.end == end {
                acc = acc.add(&self.eval_path(p).scale(&F::embed(&self.ctx, c)));
            }
        }
        acc
    }

    pub fn validate(&self, d: &Ditalgebra) -> Result<(), DitModError> {
        let bad = |m: String| Err(DitModError::InvalidModule(m));
        if self.dims.len() != d.points() {
            return bad("dimension vector length".into());
        }
        for a in d.bigraph.full_arrows() {
            let ar = d.arrow(a);
            match self.arrows.get(&a) {
                Some(m) if m.rows == self.dims[ar.target] && m.cols == self.dims[ar.source] => {}
                _ => return bad(format!("matrix for {} has the wrong shape", ar.name)),
            }
        }
        if self.arrows.keys().any(|&a| d.arrow(a).kind != ArrowKind::Full) {
            return bad("matrix on a dashed arrow".into());
        }
        for p in 0..d.points() {
            match (d.base.localizer(p), self.xs.get(&p)) {
                (None, None) => {}
                (Some(g), Some(x)) if x.rows == self.dims[p] && x.cols == self.dims[p] => {
                    if self.dims[p] > 0 && !poly_at_matrix(&self.ctx, g, x).is_invertible() {
                        return bad(format!("g(x) not invertible at point {}", p + 1));
                    }
                }
                _ => return bad(format!("x action at point {}", p + 1)),
            }
        }
        for g in &d.ideal {
            for s in 0..d.points() {
                for t in 0..d.points() {
                    if !self.eval_block(g, s, t).is_zero() {
                        return bad("ideal does not annihilate the module".into());
                    }
                }
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        let dims = self.dims.iter().zip(&o.dims).map(|(a, b)| a + b).collect();
        let arrows = self.arrows.iter().map(|(k, m)| (*k, m.direct_sum(&o.arrows[k]))).collect();
        let xs = self.xs.iter().map(|(k, m)| (*k, m.direct_sum(&o.xs[k]))).collect();
        DitModule { ctx: self.ctx.clone(), dims, arrows, xs }
    }

    /// Transport of structure along invertible per-point matrices.
    pub fn base_change(&self, d: &Ditalgebra, p: &[Mat<F>]) -> Self {
        let inv: Vec<Mat<F>> = p.iter().map(|m| m.inverse().expect("base change must be invertible")).collect();
        let arrows = self.arrows.iter().map(|(&a, m)| (a, p[d.arrow(a).target].mul(m).mul(&inv[d.arrow(a).source]))).collect();
        let xs = self.xs.iter().map(|(&q, m)| (q, p[q].mul(m).mul(&inv[q]))).collect();
        DitModule { ctx: self.ctx.clone(), dims: self.dims.clone(), arrows, xs }
    }
}

impl<F: Fld> DitMorphism<F> {
    pub fn zero(d: &Ditalgebra, m: &DitModule<F>, n: &DitModule<F>) -> Self {
        let f0 = (0..d.points()).map(|p| Mat::zeros(&m.ctx, n.dims[p], m.dims[p])).collect();
        let f1 = d.dashed_arrows().into_iter().map(|v| (v, Mat::zeros(&m.ctx, n.dims[d.arrow(v).target], m.dims[d.arrow(v).source]))).collect();
        DitMorphism { f0, f1 }
    }

    pub fn identity(d: &Ditalgebra, m: &DitModule<F>) -> Self {
        let mut f = Self::zero(d, m, m);
        for p in 0..d.points() {
            f.f0[p] = Mat::identity(&m.ctx, m.dims[p]);
        }
        f
    }

    pub fn add(&self, o: &Self) -> Self {
        DitMorphism {
            f0: self.f0.iter().zip(&o.f0).map(|(a, b)| a.add(b)).collect(),
            f1: self.f1.iter().map(|(k, a)| (*k, a.add(&o.f1[k]))).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        DitMorphism { f0: self.f0.iter().map(|a| a.scale(c)).collect(), f1: self.f1.iter().map(|(k, a)| (*k, a.scale(c))).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.f0.iter().all(|m| m.is_zero()) && self.f1.values().all(|m| m.is_zero())
    }

    /// f¹ on a degree-1 element: N(u) f1(v) M(w) on each path u v w.
    pub fn eval1(&self, m: &DitModule<F>, n: &DitModule<F>, d: &Ditalgebra, e: &PathElem) -> Vec<((usize, usize), Mat<F>)> {
        let mut blocks: BTreeMap<(usize, usize), Mat<F>> = BTreeMap::new();
        for (p, c) in &e.terms {
            let k = p.syms.iter().position(|s| matches!(s, Sym::Arrow(a) if d.arrow(*a).kind == ArrowKind::Dashed)).expect("degree-1 path");
            let Sym::Arrow(v) = p.syms[k] else { unreachable!() };
            let w = Path { start: p.start, end: d.arrow(v).source, syms: p.syms[..k].to_vec() };
            let u = Path { start: d.arrow(v).target, end: p.end, syms: p.syms[k + 1..].to_vec() };
            let val = n.eval_path(&u).mul(&self.f1[&v]).mul(&m.eval_path(&w)).scale(&F::embed(&m.ctx, c));
            let entry = blocks.entry((p.start, p.end)).or_insert_with(|| Mat::zeros(&m.ctx, n.dims[p.end], m.dims[p.start]));
            *entry = entry.add(&val);
        }
        blocks.into_iter().collect()
    }

    /// f¹ applied to the block start → end of a degree-1 element.
    pub fn eval1_block(&self, m: &DitModule<F>, n: &DitModule<F>, d: &Ditalgebra, e: &PathElem, start: usize, end: usize) -> Mat<F> {
        self.eval1(m, n, d, e)
            .into_iter()
            .find(|(k, _)| *k == (start, end))
            .map(|(_, v)| v)
            .unwrap_or_else(|| Mat::zeros(&m.ctx, n.dims[end], m.dims[start]))
    }

    pub fn is_morphism(&self, d: &Ditalgebra, m: &DitModule<F>, n: &DitModule<F>) -> bool {
        for a in d.bigraph.full_arrows() {
            let ar = d.arrow(a);
            let lhs = n.arrows[&a].mul(&self.f0[ar.source]).sub(&self.f0[ar.target].mul(&m.arrows[&a]));
            if lhs != self.eval1_block(m, n, d, &d.delta[a], ar.source, ar.target) {
                return false;
            }
        }
        m.xs.iter().all(|(p, x)| n.xs[p].mul(&self.f0[*p]) == self.f0[*p].mul(x))
    }

    pub fn is_iso(&self) -> bool {
        self.f0.iter().all(|m| m.rows == m.cols && (m.rows == 0 || m.is_invertible()))
    }
}

/// g∘f for f: M → N, g: N → L.
pub fn compose<F: Fld>(d: &Ditalgebra, l: &DitModule<F>, n: &DitModule<F>, m: &DitModule<F>, g: &DitMorphism<F>, f: &DitMorphism<F>) -> DitMorphism<F> {
    let f0: Vec<Mat<F>> = g.f0.iter().zip(&f.f0).map(|(a, b)| a.mul(b)).collect();
    let mut f1 = BTreeMap::new();
    for v in d.dashed_arrows() {
        let (s, t) = (d.arrow(v).source, d.arrow(v).target);
        let mut val = g.f0[t].mul(&f.f1[&v]).add(&g.f1[&v].mul(&f.f0[s]));
        for (p, c) in &d.delta[v].terms {
            let ks: Vec<usize> = p.syms.iter().enumerate().filter(|(_, s)| matches!(s, Sym::Arrow(a) if d.arrow(*a).kind == ArrowKind::Dashed)).map(|(i, _)| i).collect();
            let (k1, k2) = (ks[0], ks[1]);
            let (Sym::Arrow(v1), Sym::Arrow(v2)) = (p.syms[k1], p.syms[k2]) else { unreachable!() };
            let z = Path { start: p.start, end: d.arrow(v1).source, syms: p.syms[..k1].to_vec() };
            let w = Path { start: d.arrow(v1).target, end: d.arrow(v2).source, syms: p.syms[k1 + 1..k2].to_vec() };
            let u = Path { start: d.arrow(v2).target, end: p.end, syms: p.syms[k2 + 1..].to_vec() };
            let term = l.eval_path(&u).mul(&g.f1[&v2]).mul(&n.eval_path(&w)).mul(&f.f1[&v1]).mul(&m.eval_path(&z));
            val = val.add(&term.scale(&F::embed(&m.ctx, c)));
        }
        f1.insert(v, val);
    }
    DitMorphism { f0, f1 }
}

/// Unknown layout for (f0, f1) as one flat vector.
struct Layout {
    f0: Vec<usize>,
    f1: BTreeMap<usize, usize>,
    total: usize,
}

impl Layout {
    fn new<F: Fld>(d: &Ditalgebra, m: &DitModule<F>, n: &DitModule<F>) -> Self {
        let mut off = 0;
        let mut f0 = vec![];
        for p in 0..d.points() {
            f0.push(off);
            off += n.dims[p] * m.dims[p];
        }
        let mut f1 = BTreeMap::new();
        for v in d.dashed_arrows() {
            f1.insert(v, off);
            off += n.dims[d.arrow(v).target] * m.dims[d.arrow(v).source];
        }
        Layout { f0, f1, total: off }
    }

    fn unpack<F: Fld>(&self, d: &Ditalgebra, m: &DitModule<F>, n: &DitModule<F>, v: &[F]) -> DitMorphism<F> {
        let f0 = (0..d.points()).map(|p| Mat::from_vec(&m.ctx, n.dims[p], m.dims[p], v[self.f0[p]..self.f0[p] + n.dims[p] * m.dims[p]].to_vec())).collect();
        let f1 = self
            .f1
            .iter()
            .map(|(&a, &o)| {
                let (r, c) = (n.dims[d.arrow(a).target], m.dims[d.arrow(a).source]);
                (a, Mat::from_vec(&m.ctx, r, c, v[o..o + r * c].to_vec()))
            })
            .collect();
        DitMorphism { f0, f1 }
    }

    fn pack<F: Fld>(&self, f: &DitMorphism<F>) -> Vec<F> {
        let mut out = vec![];
        for m in &f.f0 {
            out.extend(m.data().iter().cloned());
        }
        for m in f.f1.values() {
            out.extend(m.data().iter().cloned());
        }
        out
    }
}

/// Exact basis of Hom(M, N).
pub fn hom_space<F: Fld>(d: &Ditalgebra, m: &DitModule<F>, n: &DitModule<F>) -> Vec<DitMorphism<F>> {
    let lay = Layout::new(d, m, n);
    if lay.total == 0 {
        return vec![];
    }
    let ctx = &m.ctx;
    let mut rows: Vec<Vec<F>> = vec![];
    let zero_row = || vec![F::zero(ctx); lay.total];
    // N_a f0_s - f0_t M_a - f¹(δa) = 0
    for a in d.bigraph.full_arrows() {
        let ar = d.arrow(a);
        let (s, t) = (ar.source, ar.target);
        let (na, ma) = (&n.arrows[&a], &m.arrows[&a]);
        let mut eqs = vec![zero_row(); n.dims[t] * m.dims[s]];
        for i in 0..n.dims[t] {
            for j in 0..m.dims[s] {
                let row = &mut eqs[i * m.dims[s] + j];
                for k in 0..n.dims[s] {
                    let idx = lay.f0[s] + k * m.dims[s] + j;
                    row[idx] = row[idx].add(&na[(i, k)]);
                }
                for k in 0..m.dims[t] {
                    let idx = lay.f0[t] + i * m.dims[t] + k;
                    row[idx] = row[idx].sub(&ma[(k, j)]);
                }
            }
        }
        for (p, c) in &d.delta[a].terms {
            let k = p.syms.iter().position(|x| matches!(x, Sym::Arrow(b) if d.arrow(*b).kind == ArrowKind::Dashed)).unwrap();
            let Sym::Arrow(v) = p.syms[k] else { unreachable!() };
            let w = m.eval_path(&Path { start: p.start, end: d.arrow(v).source, syms: p.syms[..k].to_vec() });
            let u = n.eval_path(&Path { start: d.arrow(v).target, end: p.end, syms: p.syms[k + 1..].to_vec() });
            let cc = F::embed(ctx, c);
            let (vr, vc) = (n.dims[d.arrow(v).target], m.dims[d.arrow(v).source]);
            for i in 0..n.dims[t] {
                for j in 0..m.dims[s] {
                    let row = &mut eqs[i * m.dims[s] + j];
                    for kk in 0..vr {
                        if u[(i, kk)].is_zero() {
                            continue;
                        }
                        for l in 0..vc {
                            let coef = u[(i, kk)].mul(&w[(l, j)]).mul(&cc);
                            if !coef.is_zero() {
                                let idx = lay.f1[&v] + kk * vc + l;
                                row[idx] = row[idx].sub(&coef);
                            }
                        }
                    }
                }
            }
        }
        rows.extend(eqs);
    }
    for (&p, mx) in &m.xs {
        let nx = &n.xs[&p];
        for i in 0..n.dims[p] {
            for j in 0..m.dims[p] {
                let mut row = zero_row();
                for k in 0..n.dims[p] {
                    let idx = lay.f0[p] + k * m.dims[p] + j;
                    row[idx] = row[idx].add(&nx[(i, k)]);
                }
                for k in 0..m.dims[p] {
                    let idx = lay.f0[p] + i * m.dims[p] + k;
                    row[idx] = row[idx].sub(&mx[(k, j)]);
                }
                rows.push(row);
            }
        }
    }
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let ker = if rows.is_empty() {
        Mat::<F>::identity(ctx, lay.total).column_space()
    } else {
        Mat::from_rows(ctx, rows, lay.total).kernel()
    };
    ker.iter().map(|v| lay.unpack(d, m, n, v)).collect()
}

/// End(M) as an algebra under composition, with its morphism basis.
pub fn end_algebra(d: &Ditalgebra, m: &Module) -> (FdAlgebra, Vec<Morphism>) {
    let basis = hom_space(d, m, m);
    let lay = Layout::new(d, m, m);
    let flat: Vec<Vector> = basis.iter().map(|f| lay.pack(f)).collect();
    let field = m.ctx;
    let id = lay.pack(&DitMorphism::identity(d, m));
    let alg = FdAlgebra::from_basis(field, &flat, &id, &|x, y| {
        let fx = lay.unpack(d, m, m, x);
        let fy = lay.unpack(d, m, m, y);
        lay.pack(&compose(d, m, m, m, &fx, &fy))
    });
    (alg, basis)
}

/// Rebuilds a morphism from coordinates in an `end_algebra` basis.
pub fn combine(basis: &[Morphism], coords: &[Scalar]) -> Morphism {
    let mut acc = basis[0].scale(&coords[0]);
    for (b, c) in basis.iter().zip(coords).skip(1) {
        if !c.is_zero() {
            acc = acc.add(&b.scale(c));
        }
    }
    acc
}

pub fn is_indecomposable(d: &Ditalgebra, m: &Module) -> Result<bool, DitModError> {
    if m.total_dim() == 0 {
        return Err(DitModError::ZeroModule);
    }
    Ok(end_algebra(d, m).0.is_local())
}

/// Length of M as a right module over its endomorphism algebra.
pub fn endolength(d: &Ditalgebra, m: &Module) -> usize {
    if m.total_dim() == 0 {
        return 0;
    }
    let (alg, basis) = end_algebra(d, m);
    let dec = alg.decompose();
    alg.module_length_from_ranks(&dec, &|e| combine(&basis, e).f0.iter().map(|b| b.rank()).sum())
}

pub fn are_isomorphic(d: &Ditalgebra, m: &Module, n: &Module) -> Option<Morphism> {
    if m.dims != n.dims {
        return None;
    }
    if m.total_dim() == 0 {
        return Some(DitMorphism::zero(d, m, n));
    }
    let mn = hom_space(d, m, n);
    if mn.len() != hom_space(d, n, n).len() || mn.len() != hom_space(d, m, m).len() || mn.len() != hom_space(d, n, m).len() {
        return None;
    }
    let blocks: Vec<Vec<Mat<Scalar>>> = mn.iter().map(|f| f.f0.clone()).collect();
    let found = find_invertible_combination(m.ctx, &blocks, 0x1d)?;
    // recover the full morphism with these f0 blocks
    let lay = Layout::new(d, m, n);
    let target: Vec<Scalar> = found.iter().flat_map(|b| b.data().iter().cloned()).collect();
    let nf0 = target.len();
    let cols: Vec<Vector> = mn.iter().map(|f| lay.pack(f)[..nf0].to_vec()).collect();
    let a = Mat::from_cols(&m.ctx, nf0, &cols);
    let c = a.solve(&target)?;
    Some(combine(&mn, &c))
}

/// Parameter grid for enumeration: all of F_p, or {0, 1, -1, 2} over Q.
pub fn parameter_grid(field: Field) -> Vec<Scalar> {
    match field.elements() {
        Some(e) => e,
        None => [0, 1, -1, 2].iter().map(|&n| field.int(n)).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Exec {
    pub fn default_mode() -> Exec {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

pub fn map_indices<T: Send>(exec: Exec, n: usize, f: &(dyn Fn(usize) -> T + Sync)) -> Vec<T> {
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

fn dim_vectors(points: usize, dmax: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = vec![0; points];
    fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            if cur.iter().any(|&x| x > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, dmax, &mut cur, &mut out);
    out.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    out
}

/// Module with the given dims whose matrix entries are read off `idx` in base `grid.len()`.
fn module_from_index(d: &Ditalgebra, field: Field, dims: &[usize], grid: &[Scalar], mut idx: u128) -> Module {
    let mut m = Module::with_dims(d, &field, dims);
    let q = grid.len() as u128;
    let mut next = || {
        let v = grid[(idx % q) as usize].clone();
        idx /= q;
        v
    };
    for mat in m.arrows.values_mut().chain(m.xs.values_mut()) {
        for r in 0..mat.rows {
            for c in 0..mat.cols {
                mat[(r, c)] = next();
            }
        }
    }
    m
}

fn state_count(d: &Ditalgebra, dims: &[usize], q: u128) -> Option<u128> {
    let mut entries = 0u32;
    for a in d.bigraph.full_arrows() {
        entries += (dims[d.arrow(a).source] * dims[d.arrow(a).target]) as u32;
    }
    for p in d.rational_points() {
        entries += (dims[p] * dims[p]) as u32;
    }
    q.checked_pow(entries)
}

/// Indecomposables of total dimension ≤ dmax, one per isoclass, by exhaustive matrix enumeration.
pub fn enumerate_indecomposables(d: &Ditalgebra, dmax: usize, budget: u128) -> Result<Vec<Module>, DitModError> {
    enumerate_indecomposables_with(d, dmax, budget, Exec::default_mode())
}

pub fn enumerate_indecomposables_with(d: &Ditalgebra, dmax: usize, budget: u128, exec: Exec) -> Result<Vec<Module>, DitModError> {
    let field = d.field;
    let grid = parameter_grid(field);
    let dvs = dim_vectors(d.points(), dmax);
    let mut needed: u128 = 0;
    for dv in &dvs {
        needed = needed.saturating_add(state_count(d, dv, grid.len() as u128).unwrap_or(u128::MAX));
    }
    if needed > budget {
        return Err(DitModError::BudgetExceeded { needed, budget });
    }
    let mut out: Vec<Module> = vec![];
    for dv in dvs {
        let count = state_count(d, &dv, grid.len() as u128).unwrap() as usize;
        let cands: Vec<Option<Module>> = map_indices(exec, count, &|i| {
            let m = module_from_index(d, field, &dv, &grid, i as u128);
            (m.validate(d).is_ok() && is_indecomposable(d, &m).unwrap_or(false)).then_some(m)
        });
        let mut reps: Vec<(usize, Module)> = vec![];
        for m in cands.into_iter().flatten() {
            let e = hom_space(d, &m, &m).len();
            if !reps.iter().any(|(re, r)| *re == e && are_isomorphic(d, r, &m).is_some()) {
                reps.push((e, m));
            }
        }
        out.extend(reps.into_iter().map(|(_, m)| m));
    }
    Ok(out)
}

/// Index of the isoclass of `m` in `list`, if present.
pub fn find_iso(d: &Ditalgebra, list: &[Module], m: &Module) -> Option<usize> {
    list.iter().position(|r| are_isomorphic(d, r, m).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::fixtures;

    const F2: Field = Field::Prime(2);

    fn m1(field: Field, v: i64) -> Mat<Scalar> {
        Mat::from_vec(&field, 1, 1, vec![field.int(v)])
    }

    fn kron_mod(field: Field, a: i64, b: i64) -> Module {
        let d = fixtures::kron(field);
        let mut m = Module::with_dims(&d, &field, &[1, 1]);
        m.arrows.insert(0, m1(field, a));
        m.arrows.insert(1, m1(field, b));
        m
    }

    #[test]
    fn hom_examples() {
        let q = Field::Rationals;
        let ss = fixtures::ss(q);
        let s1 = Module::simple(&ss, &q, 0);
        let s2 = Module::simple(&ss, &q, 1);
        assert_eq!(hom_space(&ss, &s1, &s2).len(), 0);
        assert_eq!(hom_space(&ss, &s1, &s1).len(), 1);
        let a2 = fixtures::a2(q);
        let mut p = Module::with_dims(&a2, &q, &[1, 1]);
        p.arrows.insert(0, m1(q, 1));
        // a: 1 → 2, so S2 is the socle of P and S1 its top
        assert_eq!(hom_space(&a2, &p, &Module::simple(&a2, &q, 0)).len(), 1);
        assert_eq!(hom_space(&a2, &p, &Module::simple(&a2, &q, 1)).len(), 0);
        assert_eq!(hom_space(&a2, &Module::simple(&a2, &q, 1), &p).len(), 1);
        assert!(is_indecomposable(&a2, &p).unwrap());
        assert_eq!(endolength(&a2, &p), 2);
        // δ(a) = v: f1(v) absorbs the arrow, so a = 1 and a = 0 give isomorphic modules
        let reg = fixtures::reg(q);
        let r1 = Module::simple(&reg, &q, 0);
        let r2 = Module::simple(&reg, &q, 1);
        assert_eq!(hom_space(&reg, &r1, &r2).len(), 0);
        assert_eq!(hom_space(&reg, &r2, &r1).len(), 0);
        let mut m = Module::with_dims(&reg, &q, &[1, 1]);
        m.arrows.insert(0, m1(q, 1));
        let iso = are_isomorphic(&reg, &m, &r1.direct_sum(&r2)).unwrap();
        assert!(iso.is_morphism(&reg, &m, &r1.direct_sum(&r2)));
        assert!(!is_indecomposable(&reg, &m).unwrap());
    }

    #[test]
    fn composition_closes() {
        let q = Field::Rationals;
        let reg = fixtures::reg(q);
        let mut m = Module::with_dims(&reg, &q, &[1, 1]);
        m.arrows.insert(0, m1(q, 1));
        let n = Module::with_dims(&reg, &q, &[1, 1]);
        for f in hom_space(&reg, &m, &n) {
            for g in hom_space(&reg, &n, &m) {
                let gf = compose(&reg, &m, &n, &m, &g, &f);
                assert!(gf.is_morphism(&reg, &m, &m));
                let id = DitMorphism::identity(&reg, &m);
                assert_eq!(compose(&reg, &m, &m, &m, &id, &gf), gf);
            }
        }
    }

    #[test]
    fn kronecker_isoclasses() {
        let q = Field::Rationals;
        let d = fixtures::kron(q);
        assert!(are_isomorphic(&d, &kron_mod(q, 1, 2), &kron_mod(q, 1, 3)).is_none());
        assert!(are_isomorphic(&d, &kron_mod(q, 1, 2), &kron_mod(q, 3, 6)).is_some());
        assert_eq!(endolength(&d, &kron_mod(q, 1, 2)), 2);
        let m = kron_mod(q, 1, 0).direct_sum(&kron_mod(q, 0, 1));
        assert!(!is_indecomposable(&d, &m).unwrap());
    }

    #[test]
    fn enumeration_examples() {
        let ss = enumerate_indecomposables(&fixtures::ss(F2), 2, 1 << 20).unwrap();
        assert_eq!(ss.len(), 2);
        let a2 = enumerate_indecomposables(&fixtures::a2(F2), 2, 1 << 20).unwrap();
        assert_eq!(a2.len(), 3);
        let k = enumerate_indecomposables(&fixtures::kron(F2), 2, 1 << 20).unwrap();
        assert_eq!(k.len(), 5);
        assert!(matches!(enumerate_indecomposables(&fixtures::kron(F2), 4, 10), Err(DitModError::BudgetExceeded { .. })));
    }

    #[test]
    fn endolength_of_powers() {
        let d = fixtures::kron(F2);
        let m = kron_mod(F2, 1, 1);
        let m2 = m.direct_sum(&m);
        let m3 = m2.direct_sum(&m);
        assert_eq!(endolength(&d, &m), 2);
        assert_eq!(endolength(&d, &m2), 2);
        assert_eq!(endolength(&d, &m3), 2);
    }
}
