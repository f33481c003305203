//! Right algebra Γ = End(Ā)^op, the functor H = Hom(Ā, −), induction Γ ⊗_Ā −,
//! Δ-filtrations, quasi-heredity checks and basic algebras.

use crate::bigraph::{ArrowKind, Ditalgebra, Path};
use crate::ditmod::{compose, end_algebra, hom_space, DitMorphism, Module, Morphism};
use crate::fdalg::{candidate_coefficients, is_zero_vec, lincomb, vzero, FdAlgebra, FdModule, Vector};
use crate::linalg::{coordinates, span_basis, Mat};
use crate::scalars::{Field, Scalar};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QhError {
    #[error("not a special ditalgebra: {0}")]
    NotSpecial(String),
    #[error("algebra is not basic and split")]
    NotBasic,
    #[error("oracle budget exceeded")]
    OracleBudgetExceeded,
}

/// Ā = kQ/I for the quiver of full arrows, with a basis of paths.
#[derive(Clone, Debug)]
pub struct PathAlgebra {
    pub alg: FdAlgebra,
    /// basis paths
    pub paths: Vec<Path>,
    all: Vec<Path>,
    /// reduced row echelon rows of I, with pivot columns
    rows: Vec<(usize, Vector)>,
    keep: Vec<usize>,
}

impl PathAlgebra {
    pub fn new(d: &Ditalgebra) -> Result<PathAlgebra, QhError> {
        let field = d.field;
        if !d.rational_points().is_empty() {
            return Err(QhError::NotSpecial("base has rational components".into()));
        }
        let full: Vec<usize> = d.bigraph.full_arrows().collect();
        let mut all: Vec<Path> = (0..d.points()).map(Path::trivial).collect();
        let mut frontier = all.clone();
        for len in 0.. {
            if frontier.is_empty() {
                break;
            }
            if len > d.points() {
                return Err(QhError::NotSpecial("full arrows form an oriented cycle".into()));
            }
            let mut next = vec![];
            for p in &frontier {
                for &a in &full {
                    if let Some(q) = Path::arrow(&d.bigraph, a).after(p) {
                        next.push(q);
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        let index = |p: &Path| all.iter().position(|q| q == p);
        let mut ivecs = vec![];
        for g in &d.ideal {
            for p in &all {
                for q in &all {
                    let e = crate::bigraph::PathElem::from_path(field, q.clone()).mul(g).mul(&crate::bigraph::PathElem::from_path(field, p.clone()));
                    if e.is_zero() {
                        continue;
                    }
                    let mut v = vzero(field, all.len());
                    for (path, c) in &e.terms {
                        let i = index(path).ok_or_else(|| QhError::NotSpecial("ideal is not in degree 0".into()))?;
                        v[i] = v[i].add(c);
                    }
                    ivecs.push(v);
                }
            }
        }
        let k = span_basis(&field, all.len(), &ivecs);
        let mut rows = vec![];
        if !k.is_empty() {
            let (r, piv) = Mat::from_rows(&field, k.clone(), all.len()).rref();
            for (i, &c) in piv.iter().enumerate() {
                rows.push((c, r.row(i)));
            }
        }
        let pivots: BTreeSet<usize> = rows.iter().map(|r| r.0).collect();
        let keep: Vec<usize> = (0..all.len()).filter(|i| !pivots.contains(i)).collect();
        let mut pa = PathAlgebra { alg: FdAlgebra::from_table(field, vec![], vec![]), paths: keep.iter().map(|&i| all[i].clone()).collect(), all, rows, keep };
        let n = pa.paths.len();
        let mut table = vec![vec![vzero(field, n); n]; n];
        for i in 0..n {
            for j in 0..n {
                if let Some(p) = pa.paths[i].after(&pa.paths[j]) {
                    table[i][j] = pa.coords(&p);
                }
            }
        }
        let mut one = vzero(field, n);
        for p in 0..d.points() {
            one = crate::fdalg::vadd(&one, &pa.coords(&Path::trivial(p)));
        }
        pa.alg = FdAlgebra::from_table(field, table, one);
        pa.alg.labels = pa.paths.iter().map(|p| crate::format::path_to_string(d, p)).collect();
        Ok(pa)
    }

    /// Coordinates of a path modulo I in the basis paths.
    pub fn coords(&self, p: &Path) -> Vector {
        let field = self.alg.field;
        let mut v = vzero(field, self.all.len());
        if let Some(i) = self.all.iter().position(|q| q == p) {
            v[i] = field.one();
        }
        for (c, row) in &self.rows {
            let f = v[*c].clone();
            if !f.is_zero() {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = x.sub(&f.mul(r));
                }
            }
        }
        self.keep.iter().map(|&i| v[i].clone()).collect()
    }

    pub fn idempotent(&self, p: usize) -> Vector {
        self.coords(&Path::trivial(p))
    }

    fn ending_at(&self, i: usize) -> Vec<usize> {
        (0..self.paths.len()).filter(|&k| self.paths[k].end == i).collect()
    }

    /// Ā as a left module over the ditalgebra: e_i Ā spanned by basis paths ending at i.
    pub fn regular_module(&self, d: &Ditalgebra) -> Module {
        let field = d.field;
        let ends: Vec<Vec<usize>> = (0..d.points()).map(|i| self.ending_at(i)).collect();
        let dims: Vec<usize> = ends.iter().map(|e| e.len()).collect();
        let mut m = Module::with_dims(d, &field, &dims);
        for a in d.bigraph.full_arrows() {
            let (s, t) = (d.arrow(a).source, d.arrow(a).target);
            let mut mat = Mat::zeros(&field, dims[t], dims[s]);
            for (c, &k) in ends[s].iter().enumerate() {
                let v = Path::arrow(&d.bigraph, a).after(&self.paths[k]).map(|p| self.coords(&p)).unwrap_or_else(|| vzero(field, self.paths.len()));
                for (r, &l) in ends[t].iter().enumerate() {
                    mat[(r, c)] = v[l].clone();
                }
            }
            m.arrows.insert(a, mat);
        }
        m
    }

    /// Right multiplication by a basis path, as an endomorphism of the regular module.
    fn right_mult(&self, d: &Ditalgebra, reg: &Module, b: usize) -> Morphism {
        let field = d.field;
        let mut f = DitMorphism::zero(d, reg, reg);
        for i in 0..d.points() {
            let ends = self.ending_at(i);
            for (c, &k) in ends.iter().enumerate() {
                if let Some(p) = self.paths[k].after(&self.paths[b]) {
                    let v = self.coords(&p);
                    for (r, &l) in ends.iter().enumerate() {
                        f.f0[i][(r, c)] = v[l].clone();
                    }
                }
            }
        }
        let _ = field;
        f
    }

    /// A module over the ditalgebra as a left Ā-module.
    pub fn as_fd_module(&self, m: &Module) -> FdModule {
        let field = self.alg.field;
        let mut off = vec![0];
        for &x in &m.dims {
            off.push(off.last().unwrap() + x);
        }
        let n = m.total_dim();
        let act = self
            .paths
            .iter()
            .map(|p| {
                let mut a = Mat::zeros(&field, n, n);
                a.set_block(off[p.end], off[p.start], &m.eval_path(p));
                a
            })
            .collect();
        FdModule { field, dim: n, act }
    }
}

pub fn flat_morphism(f: &Morphism) -> Vector {
    f.f0.iter().chain(f.f1.values()).flat_map(|m| m.data().iter().cloned()).collect()
}

#[derive(Clone, Debug)]
pub struct RightAlgebra {
    pub d: Ditalgebra,
    pub abar: PathAlgebra,
    pub regular: Module,
    /// Γ = End(Ā)^op; its basis is `endos`
    pub gamma: FdAlgebra,
    pub endos: Vec<Morphism>,
    /// image in Γ of each basis path of Ā
    pub embedding: Vec<Vector>,
}

pub fn right_algebra(d: &Ditalgebra) -> Result<RightAlgebra, QhError> {
    let abar = PathAlgebra::new(d)?;
    let regular = abar.regular_module(d);
    let (end, endos) = end_algebra(d, &regular);
    let gamma = end.opposite();
    let flats: Vec<Vector> = endos.iter().map(flat_morphism).collect();
    let embedding = (0..abar.paths.len())
        .map(|b| coordinates(&d.field, &flats, &flat_morphism(&abar.right_mult(d, &regular, b))).expect("right multiplication is an endomorphism"))
        .collect();
    Ok(RightAlgebra { d: d.clone(), abar, regular, gamma, endos, embedding })
}

impl RightAlgebra {
    /// H(N) = Hom(Ā, N) with Γ acting by precomposition.
    pub fn functor_h(&self, n: &Module) -> FdModule {
        let d = &self.d;
        let field = d.field;
        let homs = hom_space(d, &self.regular, n);
        let flats: Vec<Vector> = homs.iter().map(flat_morphism).collect();
        let act = self
            .endos
            .iter()
            .map(|g| {
                let cols: Vec<Vector> = homs
                    .iter()
                    .map(|phi| coordinates(&field, &flats, &flat_morphism(&compose(d, &self.regular, &self.regular, n, phi, g))).expect("closed under precomposition"))
                    .collect();
                Mat::from_cols(&field, homs.len(), &cols)
            })
            .collect();
        FdModule { field, dim: homs.len(), act }
    }

    /// Γ ⊗_Ā M for a module M over Ā.
    pub fn induce(&self, m: &Module) -> FdModule {
        let all: Vec<Vector> = self.gamma.basis();
        tensor_induce(&self.gamma, &all, &self.embedding, &self.abar.as_fd_module(m))
    }

    /// Δ'_j = Γ ⊗ S_j, one per point.
    pub fn standard_like(&self) -> Vec<FdModule> {
        (0..self.d.points()).map(|p| self.induce(&Module::simple(&self.d, &self.d.field, p))).collect()
    }

    /// Whether the embedding Ā → Γ is onto.
    pub fn equals_abar(&self) -> bool {
        span_basis(&self.d.field, self.gamma.dim, &self.embedding).len() == self.gamma.dim
    }
}

/// L ⊗_S N, where L is a subspace of `big` stable under left multiplication and
/// right multiplication by the elements `s`, and N is a module over S (one matrix per element of `s`).
pub fn tensor_induce(big: &FdAlgebra, l: &[Vector], s: &[Vector], n: &FdModule) -> FdModule {
    let field = big.field;
    let (ld, nd) = (l.len(), n.dim);
    let dim = ld * nd;
    let lc = |v: &Vector| coordinates(&field, l, v).expect("L is not stable");
    let idx = |i: usize, k: usize| i * nd + k;
    let mut rels = vec![];
    for (i, li) in l.iter().enumerate() {
        for (j, sj) in s.iter().enumerate() {
            let c = lc(&big.mul(li, sj));
            for k in 0..nd {
                let mut v = vzero(field, dim);
                for (ci, cv) in c.iter().enumerate() {
                    if !cv.is_zero() {
                        v[idx(ci, k)] = v[idx(ci, k)].add(cv);
                    }
                }
                for mm in 0..nd {
                    let x = &n.act[j][(mm, k)];
                    if !x.is_zero() {
                        v[idx(i, mm)] = v[idx(i, mm)].sub(x);
                    }
                }
                if !is_zero_vec(&v) {
                    rels.push(v);
                }
            }
        }
    }
    let act = big
        .basis()
        .iter()
        .map(|b| {
            let mut a = Mat::zeros(&field, dim, dim);
            for (i, li) in l.iter().enumerate() {
                let c = lc(&big.mul(b, li));
                for (ci, cv) in c.iter().enumerate() {
                    if !cv.is_zero() {
                        for k in 0..nd {
                            a[(idx(ci, k), idx(i, k))] = cv.clone();
                        }
                    }
                }
            }
            a
        })
        .collect();
    let free = FdModule { field, dim, act };
    let sub = span_basis(&field, dim, &rels);
    free.quotient(&sub).0
}

/// Maximal quotient of Λe_i with composition factors among S_j, j ≤ i, for the given order.
pub fn standard_modules(lam: &FdAlgebra, idems: &[Vector]) -> Vec<FdModule> {
    let field = lam.field;
    let reg = lam.regular_module();
    (0..idems.len())
        .map(|i| {
            let p = reg.submodule_span(&[idems[i].clone()]);
            let mut gens = vec![];
            for ej in &idems[i + 1..] {
                for b in lam.basis() {
                    let v = lam.mul(&lam.mul(ej, &b), &idems[i]);
                    if !is_zero_vec(&v) {
                        gens.push(v);
                    }
                }
            }
            let u = reg.submodule_span(&gens);
            let pm = reg.restrict(&p);
            let uc: Vec<Vector> = u.iter().map(|v| coordinates(&field, &p, v).unwrap()).collect();
            pm.quotient(&uc).0
        })
        .collect()
}

/// dim Ext¹(X, Y) from the free presentation 0 → Ω → Λ ⊗ X → X → 0.
pub fn ext1_dim(lam: &FdAlgebra, x: &FdModule, y: &FdModule) -> usize {
    let field = lam.field;
    if x.dim == 0 || y.dim == 0 {
        return 0;
    }
    let (ld, xd) = (lam.dim, x.dim);
    let free_act: Vec<Mat<Scalar>> = lam
        .regular_module()
        .act
        .iter()
        .map(|l| {
            let mut a = Mat::zeros(&field, ld * xd, ld * xd);
            for r in 0..ld {
                for c in 0..ld {
                    if !l[(r, c)].is_zero() {
                        for k in 0..xd {
                            a[(r * xd + k, c * xd + k)] = l[(r, c)].clone();
                        }
                    }
                }
            }
            a
        })
        .collect();
    let free = FdModule { field, dim: ld * xd, act: free_act };
    let mut pi = Mat::zeros(&field, xd, ld * xd);
    for i in 0..ld {
        for k in 0..xd {
            for r in 0..xd {
                pi[(r, i * xd + k)] = x.act[i][(r, k)].clone();
            }
        }
    }
    let omega = free.restrict(&pi.kernel());
    omega.hom(y).len() + x.hom(y).len() - xd * y.dim
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiltrationWitness {
    /// ascending chain of submodules ending at M (bases in M's coordinates)
    pub chain: Vec<Vec<Vector>>,
    /// family index of each successive quotient
    pub layers: Vec<usize>,
}

impl FiltrationWitness {
    pub fn verify(&self, family: &[FdModule], m: &FdModule) -> bool {
        let field = m.field;
        if self.chain.last().map(|c| c.len()) != Some(m.dim) && !(m.dim == 0 && self.chain.is_empty()) {
            return false;
        }
        let mut prev: Vec<Vector> = vec![];
        for (sub, &j) in self.chain.iter().zip(&self.layers) {
            if m.submodule_span(sub).len() != sub.len() || prev.iter().any(|v| coordinates(&field, sub, v).is_none()) {
                return false;
            }
            let sm = m.restrict(sub);
            let pc: Vec<Vector> = prev.iter().map(|v| coordinates(&field, sub, v).unwrap()).collect();
            if sm.quotient(&pc).0.is_isomorphic(&family[j]).is_none() {
                return false;
            }
            prev = sub.clone();
        }
        true
    }
}

const SEARCH_BUDGET: usize = 200_000;

/// Δ-filtration of M by exhaustive search over bottom submodules isomorphic to a member
/// of the family. Over F_q with small Hom spaces every candidate is tried, so `None`
/// certifies M ∉ F(Δ); over Q the candidates are sampled.
pub fn delta_filtration(family: &[FdModule], m: &FdModule) -> Result<Option<FiltrationWitness>, QhError> {
    let mut budget = SEARCH_BUDGET;
    Ok(search(family, m, &mut budget)?.map(|(chain, layers)| FiltrationWitness { chain, layers }))
}

type Chain = (Vec<Vec<Vector>>, Vec<usize>);

fn search(family: &[FdModule], m: &FdModule, budget: &mut usize) -> Result<Option<Chain>, QhError> {
    let field = m.field;
    if m.dim == 0 {
        return Ok(Some((vec![], vec![])));
    }
    let mut seen: BTreeSet<Vec<String>> = BTreeSet::new();
    for (j, dj) in family.iter().enumerate() {
        if dj.dim == 0 || dj.dim > m.dim {
            continue;
        }
        let homs = dj.hom(m);
        if homs.is_empty() {
            continue;
        }
        for c in candidate_coefficients(field, homs.len(), 0xf17 + j as u64) {
            if *budget == 0 {
                return Err(QhError::OracleBudgetExceeded);
            }
            *budget -= 1;
            let mut f = Mat::zeros(&field, m.dim, dj.dim);
            for (h, cv) in homs.iter().zip(&c) {
                if !cv.is_zero() {
                    f = f.add(&h.scale(cv));
                }
            }
            if f.rank() != dj.dim {
                continue;
            }
            let u = f.column_space();
            let key: Vec<String> = Mat::from_cols(&field, m.dim, &u).transpose().rref().0.data().iter().map(|x| x.to_string()).collect();
            if !seen.insert(key) {
                continue;
            }
            let (q, comp) = m.quotient(&u);
            if let Some((chain, mut layers)) = search(family, &q, budget)? {
                let mut out = vec![u.clone()];
                for sub in chain {
                    let mut vs = u.clone();
                    vs.extend(sub.iter().map(|v| lincomb(field, m.dim, v, &comp)));
                    out.push(vs);
                }
                layers.insert(0, j);
                return Ok(Some((out, layers)));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct QhCertificate {
    pub end_dims: Vec<usize>,
    pub hom_pairs: Vec<(usize, usize)>,
    pub ext_pairs: Vec<(usize, usize)>,
    pub filtration: Option<FiltrationWitness>,
    /// verdicts for the four conditions
    pub conditions: [bool; 4],
}

impl QhCertificate {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|&c| c)
    }
}

pub fn check_quasi_hereditary(lam: &FdAlgebra, delta: &[FdModule]) -> Result<QhCertificate, QhError> {
    let end_dims: Vec<usize> = delta.iter().map(|d| d.hom(d).len()).collect();
    let mut hom_pairs = vec![];
    let mut ext_pairs = vec![];
    for (i, di) in delta.iter().enumerate() {
        for (j, dj) in delta.iter().enumerate() {
            if i != j && !di.hom(dj).is_empty() {
                hom_pairs.push((i, j));
            }
            if ext1_dim(lam, di, dj) > 0 {
                ext_pairs.push((i, j));
            }
        }
    }
    let filtration = delta_filtration(delta, &lam.regular_module())?;
    let conditions = [
        end_dims.iter().all(|&e| e == 1),
        hom_pairs.iter().all(|&(i, j)| i <= j),
        ext_pairs.iter().all(|&(i, j)| i < j),
        filtration.is_some(),
    ];
    Ok(QhCertificate { end_dims, hom_pairs, ext_pairs, filtration, conditions })
}

/// Basic algebra eΛe for e a sum of one primitive idempotent per isoclass, with the
/// Morita functors Ω(M) = eM and Ω'(N) = Λe ⊗_{eΛe} N.
#[derive(Clone, Debug)]
pub struct BasicAlgebra {
    pub basic: FdAlgebra,
    pub e: Vector,
    /// basis of eΛe inside Λ
    pub corner: Vec<Vector>,
    /// basis of the progenerator Λe inside Λ
    pub progenerator: Vec<Vector>,
}

pub fn basic_algebra(lam: &FdAlgebra) -> BasicAlgebra {
    let dec = lam.decompose();
    let mut e = lam.zero();
    for &r in &dec.representatives {
        e = crate::fdalg::vadd(&e, &dec.idempotents[r]);
    }
    let (basic, corner) = lam.corner(&e);
    let gens: Vec<Vector> = lam.basis().iter().map(|b| lam.mul(b, &e)).collect();
    let progenerator = span_basis(&lam.field, lam.dim, &gens);
    BasicAlgebra { basic, e, corner, progenerator }
}

impl BasicAlgebra {
    pub fn omega(&self, lam: &FdAlgebra, m: &FdModule) -> FdModule {
        let field = lam.field;
        let em = lam.act_of(m, &self.e).column_space();
        let act = self
            .corner
            .iter()
            .map(|s| {
                let a = lam.act_of(m, s);
                let cols: Vec<Vector> = em.iter().map(|v| coordinates(&field, &em, &a.mul_vec(v)).expect("eM is stable")).collect();
                Mat::from_cols(&field, em.len(), &cols)
            })
            .collect();
        FdModule { field, dim: em.len(), act }
    }

    pub fn omega_inverse(&self, lam: &FdAlgebra, n: &FdModule) -> FdModule {
        tensor_induce(lam, &self.progenerator, &self.corner, n)
    }
}

/// Quiver presentation of a basic split algebra: primitive idempotents and arrows
/// (a basis of e_j (J/J²) e_i), with every basis element written through paths.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub idempotents: Vec<Vector>,
    /// (source, target, element)
    pub arrows: Vec<(usize, usize, Vector)>,
    /// words: (start idempotent, arrow indices in application order)
    words: Vec<(usize, Vec<usize>)>,
    /// basis element k = Σ expr[k][w] word_w
    expr: Vec<Vector>,
}

pub fn presentation(lam: &FdAlgebra) -> Result<Presentation, QhError> {
    let field = lam.field;
    let dec = lam.decompose();
    if dec.division_dims.iter().any(|&d| d != 1) || dec.representatives.len() != dec.idempotents.len() {
        return Err(QhError::NotBasic);
    }
    let idems = dec.idempotents.clone();
    let rad = lam.radical();
    let rad2 = lam.product_span(&rad, &rad);
    let sand = |ej: &Vector, s: &[Vector], ei: &Vector| -> Vec<Vector> {
        let v: Vec<Vector> = s.iter().map(|x| lam.mul(&lam.mul(ej, x), ei)).collect();
        span_basis(&field, lam.dim, &v)
    };
    let mut arrows = vec![];
    for (i, ei) in idems.iter().enumerate() {
        for (j, ej) in idems.iter().enumerate() {
            let mut acc = sand(ej, &rad2, ei);
            for v in sand(ej, &rad, ei) {
                let mut t = acc.clone();
                t.push(v.clone());
                if span_basis(&field, lam.dim, &t).len() > acc.len() {
                    acc.push(v.clone());
                    arrows.push((i, j, v));
                }
            }
        }
    }
    let mut words: Vec<(usize, Vec<usize>)> = vec![];
    let mut vecs: Vec<Vector> = vec![];
    let mut frontier: Vec<(usize, Vec<usize>, usize, Vector)> = idems.iter().enumerate().map(|(i, e)| (i, vec![], i, e.clone())).collect();
    while !frontier.is_empty() {
        let mut next = vec![];
        for (start, w, end, v) in frontier {
            if is_zero_vec(&v) {
                continue;
            }
            let mut t = vecs.clone();
            t.push(v.clone());
            if span_basis(&field, lam.dim, &t).len() > vecs.len() {
                vecs.push(v.clone());
                words.push((start, w.clone()));
            }
            for (k, (s, tt, a)) in arrows.iter().enumerate() {
                if *s == end {
                    let mut w2 = w.clone();
                    w2.push(k);
                    next.push((start, w2, *tt, lam.mul(a, &v)));
                }
            }
        }
        frontier = next;
    }
    if vecs.len() != lam.dim {
        return Err(QhError::NotBasic);
    }
    let expr = lam.basis().iter().map(|b| coordinates(&field, &vecs, b).unwrap()).collect();
    Ok(Presentation { idempotents: idems, arrows, words, expr })
}

impl Presentation {
    /// The module with block dims `dims` and arrow blocks `blocks`, if the relations hold.
    pub fn module(&self, lam: &FdAlgebra, dims: &[usize], blocks: &[Mat<Scalar>]) -> Option<FdModule> {
        let field = lam.field;
        let mut off = vec![0];
        for &x in dims {
            off.push(off.last().unwrap() + x);
        }
        let n = *off.last().unwrap();
        let idem = |i: usize| {
            let mut m = Mat::zeros(&field, n, n);
            m.set_block(off[i], off[i], &Mat::identity(&field, dims[i]));
            m
        };
        let arrow = |k: usize| {
            let (s, t, _) = &self.arrows[k];
            let mut m = Mat::zeros(&field, n, n);
            m.set_block(off[*t], off[*s], &blocks[k]);
            m
        };
        let words: Vec<Mat<Scalar>> = self.words.iter().map(|(s, w)| w.iter().fold(idem(*s), |acc, &k| arrow(k).mul(&acc))).collect();
        let act: Vec<Mat<Scalar>> = self
            .expr
            .iter()
            .map(|c| c.iter().zip(&words).filter(|(x, _)| !x.is_zero()).fold(Mat::zeros(&field, n, n), |acc, (x, w)| acc.add(&w.scale(x))))
            .collect();
        let m = FdModule { field, dim: n, act };
        m.is_module_over(lam).then_some(m)
    }
}

/// Indecomposable modules of dimension ≤ dmax, one per isoclass. Algebras that are not
/// basic go through eΛe and Λe ⊗ −, which does not increase dimensions on the way down.
pub fn enumerate_fd_modules(lam: &FdAlgebra, dmax: usize, budget: u128) -> Result<Vec<FdModule>, QhError> {
    match presentation(lam) {
        Ok(p) => enumerate_presented(lam, &p, dmax, budget),
        Err(QhError::NotBasic) => {
            let b = basic_algebra(lam);
            if b.basic.dim == lam.dim {
                return Err(QhError::NotBasic);
            }
            let p = presentation(&b.basic)?;
            let small = enumerate_presented(&b.basic, &p, dmax, budget)?;
            Ok(small.iter().map(|n| b.omega_inverse(lam, n)).filter(|m| m.dim <= dmax).collect())
        }
        Err(e) => Err(e),
    }
}

fn enumerate_presented(lam: &FdAlgebra, pres: &Presentation, dmax: usize, budget: u128) -> Result<Vec<FdModule>, QhError> {
    let field = lam.field;
    let grid = crate::ditmod::parameter_grid(field);
    let q = grid.len() as u128;
    let np = pres.idempotents.len();
    let mut dvs = vec![];
    let mut cur = vec![0; np];
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
    rec(0, dmax, &mut cur, &mut dvs);
    let entries = |dv: &[usize]| pres.arrows.iter().map(|(s, t, _)| dv[*s] * dv[*t]).sum::<usize>() as u32;
    let needed: u128 = dvs.iter().map(|dv| q.checked_pow(entries(dv)).unwrap_or(u128::MAX)).fold(0u128, |a, b| a.saturating_add(b));
    if needed > budget {
        return Err(QhError::OracleBudgetExceeded);
    }
    let mut out: Vec<FdModule> = vec![];
    for dv in dvs {
        for mut idx in 0..q.pow(entries(&dv)) {
            let blocks: Vec<Mat<Scalar>> = pres
                .arrows
                .iter()
                .map(|(s, t, _)| {
                    let mut b = Mat::zeros(&field, dv[*t], dv[*s]);
                    for r in 0..dv[*t] {
                        for c in 0..dv[*s] {
                            b[(r, c)] = grid[(idx % q) as usize].clone();
                            idx /= q;
                        }
                    }
                    b
                })
                .collect();
            if let Some(m) = pres.module(lam, &dv, &blocks) {
                if m.is_indecomposable() && !out.iter().any(|o| o.is_isomorphic(&m).is_some()) {
                    out.push(m);
                }
            }
        }
    }
    Ok(out)
}

/// Endolength of a module over a finite-dimensional algebra.
pub fn fd_endolength(m: &FdModule) -> usize {
    if m.dim == 0 {
        return 0;
    }
    let (alg, basis) = m.end_algebra();
    let dec = alg.decompose();
    alg.module_length_from_ranks(&dec, &|e| {
        let f = e.iter().zip(&basis).filter(|(c, _)| !c.is_zero()).fold(Mat::zeros(&m.field, m.dim, m.dim), |acc, (c, b)| acc.add(&b.scale(c)));
        f.rank()
    })
}

/// Path algebra of A_n (linear orientation 1 → 2 → … → n) as an FdAlgebra, for QH checks.
pub fn path_algebra_an(field: Field, n: usize) -> FdAlgebra {
    let mut d = Ditalgebra::new(field, n);
    for i in 0..n.saturating_sub(1) {
        d.add_arrow(&format!("a{}", i + 1), ArrowKind::Full, i, i + 1);
    }
    PathAlgebra::new(&d).expect("directed quiver").alg
}

#[cfg(test)]
mod tests;
