//! Functors between module categories given by block matrices of path elements.

use crate::bigraph::{Ditalgebra, Path, PathElem, Sym};
use crate::ditmod::{DitModule, DitMorphism};
use crate::linalg::Mat;
use crate::scalars::{Field, Fld, Scalar};
use std::collections::BTreeMap;

/// Block matrix whose rows and columns are slots tagged by target points.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMat {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub entries: Vec<PathElem>,
}

impl SymMat {
    pub fn zero(field: Field, rows: &[usize], cols: &[usize]) -> Self {
        SymMat { rows: rows.to_vec(), cols: cols.to_vec(), entries: vec![PathElem::zero(field); rows.len() * cols.len()] }
    }

    pub fn identity(field: Field, slots: &[usize]) -> Self {
        let mut m = Self::zero(field, slots, slots);
        for (i, &p) in slots.iter().enumerate() {
            m.set(i, i, PathElem::from_path(field, Path::trivial(p)));
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &PathElem {
        &self.entries[r * self.cols.len() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, e: PathElem) {
        let n = self.cols.len();
        self.entries[r * n + c] = e;
    }

    /// Algebra-order product: `self` acts after `first`.
    pub fn mul(&self, first: &SymMat) -> SymMat {
        assert_eq!(self.cols, first.rows);
        let field = self.field_hint(first);
        let mut out = SymMat::zero(field, &self.rows, &first.cols);
        for r in 0..self.rows.len() {
            for c in 0..first.cols.len() {
                let mut acc = PathElem::zero(field);
                for k in 0..self.cols.len() {
                    let a = self.get(r, k);
                    let b = first.get(k, c);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    fn field_hint(&self, o: &SymMat) -> Field {
        self.entries.iter().chain(&o.entries).map(|e| e.field).next().unwrap_or(Field::Rationals)
    }

    pub fn add(&self, o: &SymMat) -> SymMat {
        assert_eq!((&self.rows, &self.cols), (&o.rows, &o.cols));
        SymMat { rows: self.rows.clone(), cols: self.cols.clone(), entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> SymMat {
        SymMat { rows: self.rows.clone(), cols: self.cols.clone(), entries: self.entries.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }
}

/// A functor from modules over `target` to modules over `source` (slot-wise X ⊗ −).
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFunctor {
    /// per source point: the target point of each slot
    pub slots: Vec<Vec<usize>>,
    /// per source arrow (full and dashed)
    pub arrows: BTreeMap<usize, SymMat>,
    /// per source rational point
    pub xs: BTreeMap<usize, SymMat>,
    /// per source point: degree-1 correction added to f⁰
    pub pi: Vec<SymMat>,
}

impl LinearFunctor {
    pub fn sym(&self, s: &Sym) -> &SymMat {
        match s {
            Sym::Arrow(a) => &self.arrows[a],
            Sym::X(p) => &self.xs[p],
        }
    }

    /// σ: image of a source element as a block matrix over the target path algebra.
    pub fn sigma(&self, field: Field, e: &PathElem, start: usize, end: usize) -> SymMat {
        let mut acc = SymMat::zero(field, &self.slots[end], &self.slots[start]);
        for (p, c) in &e.terms {
            if p.start != start || p.end != end {
                continue;
            }
            let mut m = SymMat::identity(field, &self.slots[p.start]);
            for s in &p.syms {
                m = self.sym(s).mul(&m);
            }
            acc = acc.add(&m.scale(c));
        }
        acc
    }

    pub fn dims_of<F: Fld>(&self, n: &DitModule<F>) -> Vec<usize> {
        self.slots.iter().map(|sl| sl.iter().map(|&t| n.dims[t]).sum()).collect()
    }

    fn offsets<F: Fld>(&self, n: &DitModule<F>, i: usize) -> Vec<usize> {
        let mut off = vec![0];
        for &t in &self.slots[i] {
            off.push(off.last().unwrap() + n.dims[t]);
        }
        off
    }

    fn eval0<F: Fld>(&self, n: &DitModule<F>, m: &SymMat, si: usize, ti: usize) -> Mat<F> {
        let (ro, co) = (self.offsets(n, ti), self.offsets(n, si));
        let mut out = Mat::zeros(&n.ctx, *ro.last().unwrap(), *co.last().unwrap());
        for (r, &tr) in m.rows.iter().enumerate() {
            for (c, &tc) in m.cols.iter().enumerate() {
                let e = m.get(r, c);
                if !e.is_zero() {
                    out.set_block(ro[r], co[c], &n.eval_block(e, tc, tr));
                }
            }
        }
        out
    }

    /// F(N) as a module over the source ditalgebra.
    pub fn apply_module<F: Fld>(&self, source: &Ditalgebra, n: &DitModule<F>) -> DitModule<F> {
        let dims = self.dims_of(n);
        let mut arrows = BTreeMap::new();
        for a in source.bigraph.full_arrows() {
            let ar = source.arrow(a);
            arrows.insert(a, self.eval0(n, &self.arrows[&a], ar.source, ar.target));
        }
        let xs = source.rational_points().into_iter().map(|p| (p, self.eval0(n, &self.xs[&p], p, p))).collect();
        DitModule { ctx: n.ctx.clone(), dims, arrows, xs }
    }

    fn eval1<F: Fld>(&self, target: &Ditalgebra, m: &DitModule<F>, n: &DitModule<F>, f: &DitMorphism<F>, sm: &SymMat, si: usize, ti: usize) -> Mat<F> {
        let (ro, co) = (self.offsets(n, ti), self.offsets(m, si));
        let mut out = Mat::zeros(&m.ctx, *ro.last().unwrap(), *co.last().unwrap());
        for (r, &tr) in sm.rows.iter().enumerate() {
            for (c, &tc) in sm.cols.iter().enumerate() {
                let e = sm.get(r, c);
                if !e.is_zero() {
                    out.set_block(ro[r], co[c], &f.eval1_block(m, n, target, e, tc, tr));
                }
            }
        }
        out
    }

    /// F(f) for f: M → N over the target.
    pub fn apply_morphism<F: Fld>(&self, source: &Ditalgebra, target: &Ditalgebra, m: &DitModule<F>, n: &DitModule<F>, f: &DitMorphism<F>) -> DitMorphism<F> {
        let mut f0 = vec![];
        for i in 0..source.points() {
            let (ro, co) = (self.offsets(n, i), self.offsets(m, i));
            let mut d = self.eval1(target, m, n, f, &self.pi[i], i, i);
            for (k, &t) in self.slots[i].iter().enumerate() {
                let blk = d.block(ro[k], co[k], n.dims[t], m.dims[t]).add(&f.f0[t]);
                d.set_block(ro[k], co[k], &blk);
            }
            f0.push(d);
        }
        let mut f1 = BTreeMap::new();
        for v in source.dashed_arrows() {
            let ar = source.arrow(v);
            f1.insert(v, self.eval1(target, m, n, f, &self.arrows[&v], ar.source, ar.target));
        }
        DitMorphism { f0, f1 }
    }

    /// Functor sending each kept point to one slot and each symbol to a 1×1 image.
    pub fn substitution(field: Field, source: &Ditalgebra, point_map: &[Option<usize>], images: &BTreeMap<Sym, PathElem>) -> Self {
        let slots: Vec<Vec<usize>> = point_map.iter().map(|p| p.iter().cloned().collect()).collect();
        let one_by = |s: usize, t: usize, sym: Sym| -> SymMat {
            let mut m = SymMat::zero(field, &slots[t], &slots[s]);
            if !slots[t].is_empty() && !slots[s].is_empty() {
                m.set(0, 0, images.get(&sym).cloned().unwrap_or_else(|| PathElem::zero(field)));
            }
            m
        };
        let arrows = (0..source.bigraph.arrows.len()).map(|a| (a, one_by(source.arrow(a).source, source.arrow(a).target, Sym::Arrow(a)))).collect();
        let xs = source.rational_points().into_iter().map(|p| (p, one_by(p, p, Sym::X(p)))).collect();
        let pi = (0..source.points()).map(|i| SymMat::zero(field, &slots[i], &slots[i])).collect();
        LinearFunctor { slots, arrows, xs, pi }
    }
}

/// Fills in δ and the ideal of `target` by transporting those of `source` through σ.
pub fn transport_structure(source: &Ditalgebra, target: &mut Ditalgebra, fun: &LinearFunctor, new_of: &BTreeMap<usize, Vec<(usize, usize, usize)>>) {
    let field = source.field;
    for (&w, cells) in new_of {
        let ar = source.arrow(w);
        let s = fun.sigma(field, &source.delta[w], ar.source, ar.target);
        for &(r, c, new) in cells {
            target.delta[new] = s.get(r, c).clone();
        }
    }
    let mut ideal = vec![];
    for g in &source.ideal {
        for s in 0..source.points() {
            for t in 0..source.points() {
                let m = fun.sigma(field, g, s, t);
                for e in &m.entries {
                    if !e.is_zero() && !ideal.contains(e) {
                        ideal.push(e.clone());
                    }
                }
            }
        }
    }
    target.ideal = ideal;
}
