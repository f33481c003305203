//! Generic modules: fields of fractions at rational points, transfer bimodules T̄ = F(B),
//! free realizations Z_G over (Be_i)_g and their specializations.

use crate::bigraph::Ditalgebra;
use crate::ditmod::{are_isomorphic, hom_space, is_indecomposable, map_indices, DitModule, Exec, Module};
use crate::linalg::{span_basis, Mat};
use crate::reduction::{reduce_to_minimal, ReductionError, ReductionTrace};
use crate::scalars::{Field, Fld, Poly, RatFunc, RationalAlgebra, Scalar};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

pub type KxModule = DitModule<RatFunc>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenericError {
    #[error("point {0} is not rational")]
    NotRationalPoint(usize),
    #[error("T e_i is not finitely generated over Be_i")]
    NotFinitelyGenerated,
    #[error("{0} is not in the spectrum of the localized algebra")]
    NotInSpectrum(String),
    #[error("End is not k(x) plus a nilpotent radical")]
    NotSplitLocal,
    #[error("malformed realization: {0}")]
    Format(String),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

/// Q_i: k(x) at point i with x acting as x.
pub fn q_module(d: &Ditalgebra, i: usize) -> Result<KxModule, GenericError> {
    if !d.base.is_rational(i) {
        return Err(GenericError::NotRationalPoint(i));
    }
    let mut m = KxModule::simple(d, &d.field, i);
    m.xs.insert(i, Mat::scalar(&d.field, 1, &RatFunc::x(d.field)));
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KxEndolength {
    pub length: usize,
    /// dim_{k(x)} End
    pub end_dim: usize,
}

fn block_diag(field: Field, ms: &[Mat<RatFunc>]) -> Mat<RatFunc> {
    ms.iter().fold(Mat::zeros(&field, 0, 0), |acc, m| acc.direct_sum(m))
}

fn is_nilpotent(m: &Mat<RatFunc>) -> bool {
    m.pow(m.rows.max(1)).is_zero()
}

fn eigen_candidates(field: Field, b: &Mat<RatFunc>) -> Vec<RatFunc> {
    let n = b.rows;
    let mut out: Vec<RatFunc> = (0..n).map(|i| b[(i, i)].clone()).collect();
    let p = field.characteristic();
    if p == 0 || n % p as usize != 0 {
        let tr = out.iter().fold(RatFunc::zero(&field), |a, c| a.add(c));
        out.push(tr.mul(&RatFunc::constant(&field.int(n as i64)).inv().unwrap()));
    }
    out
}

/// Endolength of a module over k(x), verifying End = k(x)·1 ⊕ nilpotent radical.
pub fn endolength_kx(d: &Ditalgebra, g: &KxModule) -> Result<KxEndolength, GenericError> {
    let field = d.field;
    let n = g.total_dim();
    if n == 0 {
        return Ok(KxEndolength { length: 0, end_dim: 0 });
    }
    let ends = hom_space(d, g, g);
    let mut rad = vec![];
    for f in &ends {
        let b = block_diag(field, &f.f0);
        let lam = eigen_candidates(field, &b).into_iter().find(|l| is_nilpotent(&b.sub(&Mat::scalar(&field, n, l))));
        match lam {
            Some(l) => rad.push(b.sub(&Mat::scalar(&field, n, &l))),
            None => return Err(GenericError::NotSplitLocal),
        }
    }
    let flat = |m: &Mat<RatFunc>| m.data().to_vec();
    let j = span_basis(&field, n * n, &rad.iter().map(flat).collect::<Vec<_>>());
    if j.len() + 1 != ends.len() {
        return Err(GenericError::NotSplitLocal);
    }
    let jm: Vec<Mat<RatFunc>> = j.iter().map(|v| Mat::from_vec(&field, n, n, v.clone())).collect();
    let mut pow = jm.clone();
    for _ in 1..n {
        let prods: Vec<Vec<RatFunc>> = pow.iter().flat_map(|a| jm.iter().map(move |b| flat(&a.mul(b)))).collect();
        pow = span_basis(&field, n * n, &prods).into_iter().map(|v| Mat::from_vec(&field, n, n, v)).collect();
    }
    if !pow.is_empty() {
        return Err(GenericError::NotSplitLocal);
    }
    Ok(KxEndolength { length: n, end_dim: ends.len() })
}

type PolyMat = Vec<Vec<Poly>>;

/// Diagonal form P·R·Q = D over k[x] with P tracked together with its inverse.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diag: Vec<Poly>,
    pub p: PolyMat,
    pub p_inv: PolyMat,
}

fn poly_identity(field: Field, n: usize) -> PolyMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { Poly::one(field) } else { Poly::zero(field) }).collect()).collect()
}

pub fn smith_normal_form(field: Field, rel: &[Vec<Poly>], rows: usize) -> Smith {
    let cols = rel.first().map(|r| r.len()).unwrap_or(0);
    let mut a: PolyMat = rel.to_vec();
    let mut p = poly_identity(field, rows);
    let mut pi = poly_identity(field, rows);
    let mut diag = vec![];
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, e) in row.iter().enumerate().skip(t) {
                    if let Some(dg) = e.degree() {
                        if !e.is_zero() && best.map_or(true, |b| dg < b.2) {
                            best = Some((i, j, dg));
                        }
                    }
                }
            }
            let Some((bi, bj, _)) = best else {
                return Smith { diag, p, p_inv: pi };
            };
            a.swap(t, bi);
            p.swap(t, bi);
            for r in pi.iter_mut() {
                r.swap(t, bi);
            }
            for r in a.iter_mut() {
                r.swap(t, bj);
            }
            let piv = a[t][t].clone();
            let mut done = true;
            for i in t + 1..rows {
                let (q, rem) = a[i][t].div_rem(&piv);
                if !q.is_zero() {
                    for j in 0..cols {
                        a[i][j] = a[i][j].sub(&q.mul(&a[t][j]));
                    }
                    for j in 0..rows {
                        p[i][j] = p[i][j].sub(&q.mul(&p[t][j]));
                        pi[j][t] = pi[j][t].add(&q.mul(&pi[j][i]));
                    }
                }
                done &= rem.is_zero();
            }
            for j in t + 1..cols {
                let (q, rem) = a[t][j].div_rem(&piv);
                if !q.is_zero() {
                    for r in a.iter_mut() {
                        r[j] = r[j].sub(&q.mul(&r[t]));
                    }
                }
                done &= rem.is_zero();
            }
            if done {
                break;
            }
        }
        let u = a[t][t].lc();
        let ui = u.inv().unwrap();
        for j in 0..cols {
            a[t][j] = a[t][j].scale(&ui);
        }
        for j in 0..rows {
            p[t][j] = p[t][j].scale(&ui);
            pi[j][t] = pi[j][t].scale(&u);
        }
        diag.push(a[t][t].clone());
    }
    Smith { diag, p, p_inv: pi }
}

fn to_kx(field: Field, m: &PolyMat, cols: usize) -> Mat<RatFunc> {
    let mut out = Mat::zeros(&field, m.len(), cols);
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            out[(i, j)] = RatFunc::from_poly(e.clone());
        }
    }
    out
}

/// The part of d coprime to g0.
fn strip(d: &Poly, g0: &Poly) -> Poly {
    let mut d = d.clone();
    loop {
        let h = d.gcd(g0);
        if h.is_constant() {
            return d.monic();
        }
        d = d.exact_div(&h);
    }
}

/// T e_i presented over Be_i: a left action on generators (entries in Be_i) and, per
/// input point, a relation matrix (generators × relations).
#[derive(Clone, Debug)]
pub struct PointTransfer {
    pub generators: KxModule,
    pub relations: Vec<PolyMat>,
    pub g0: Poly,
}

#[derive(Clone, Debug)]
pub struct TransferBimodule {
    pub source: Ditalgebra,
    pub target: Ditalgebra,
    /// T e_j = F(S_j) at trivial points
    pub finite: BTreeMap<usize, Module>,
    pub rational: BTreeMap<usize, PointTransfer>,
}

/// T̄ = F(B) read off the chained functor: F(S_j) at trivial points and F(Q_i), whose
/// matrices have entries in Be_i, at rational points (free on the slots).
pub fn transfer_bimodule(trace: &ReductionTrace) -> TransferBimodule {
    let b = trace.terminal().clone();
    let field = b.field;
    let mut finite = BTreeMap::new();
    let mut rational = BTreeMap::new();
    for j in 0..b.points() {
        match b.base.localizer(j) {
            None => {
                finite.insert(j, trace.apply_module(&Module::simple(&b, &field, j)));
            }
            Some(g0) => {
                let generators = trace.apply_module(&q_module(&b, j).unwrap());
                let relations = generators.dims.iter().map(|&m| vec![vec![]; m]).collect();
                rational.insert(j, PointTransfer { generators, relations, g0: g0.clone() });
            }
        }
    }
    TransferBimodule { source: trace.input.clone(), target: b, finite, rational }
}

fn eval_at_matrix(field: Field, f: &RatFunc, c: &Mat<Scalar>) -> Mat<Scalar> {
    let num = crate::ditmod::poly_at_matrix(&field, &f.num, c);
    let den = crate::ditmod::poly_at_matrix(&field, &f.den, c);
    num.mul(&den.inverse().expect("denominator invertible at the substituted matrix"))
}

/// Replaces x by the matrix c in every entry.
pub fn substitute(field: Field, g: &KxModule, c: &Mat<Scalar>) -> Module {
    let k = c.rows;
    let sub = |m: &Mat<RatFunc>| {
        let mut out = Mat::zeros(&field, m.rows * k, m.cols * k);
        for i in 0..m.rows {
            for j in 0..m.cols {
                if !m[(i, j)].is_zero() {
                    out.set_block(i * k, j * k, &eval_at_matrix(field, &m[(i, j)], c));
                }
            }
        }
        out
    };
    DitModule {
        ctx: field,
        dims: g.dims.iter().map(|&m| m * k).collect(),
        arrows: g.arrows.iter().map(|(a, m)| (*a, sub(m))).collect(),
        xs: g.xs.iter().map(|(p, m)| (*p, sub(m))).collect(),
    }
}

impl TransferBimodule {
    /// T̄ ⊗_B N for a module over the terminal minimal ditalgebra.
    pub fn tensor(&self, n: &Module) -> Module {
        let field = self.target.field;
        let mut out = Module::zero(&self.source, &field);
        for (j, &dj) in n.dims.iter().enumerate() {
            if dj == 0 {
                continue;
            }
            if let Some(f) = self.finite.get(&j) {
                for _ in 0..dj {
                    out = out.direct_sum(f);
                }
            } else {
                out = out.direct_sum(&substitute(field, &self.rational[&j].generators, &n.xs[&j]));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenericRealization {
    pub point: usize,
    pub g0: Poly,
    pub g: Poly,
    pub rank: usize,
    /// left action on a basis of Z_G (entries in (Be_i)_g); over k(x) this is G
    pub z: KxModule,
}

pub fn realize_generic(t: &TransferBimodule, i: usize) -> Result<GenericRealization, GenericError> {
    let field = t.target.field;
    let pt = t.rational.get(&i).ok_or(GenericError::NotRationalPoint(i))?;
    let ra = RationalAlgebra::new(pt.g0.clone());
    let gen = &pt.generators;
    if gen.arrows.values().chain(gen.xs.values()).any(|m| m.data().iter().any(|e| !ra.contains(e))) {
        return Err(GenericError::NotFinitelyGenerated);
    }
    let mut g = pt.g0.monic();
    let mut free: Vec<Vec<usize>> = vec![];
    let mut ps = vec![];
    for (p, rel) in pt.relations.iter().enumerate() {
        let m = gen.dims[p];
        let s = smith_normal_form(field, rel, m);
        let mut keep = vec![];
        for k in 0..m {
            match s.diag.get(k) {
                Some(dk) if !dk.is_zero() => {
                    let dk = strip(dk, &pt.g0);
                    if !dk.is_constant() {
                        g = g.mul(&dk).monic();
                    }
                }
                _ => keep.push(k),
            }
        }
        free.push(keep);
        ps.push((to_kx(field, &s.p, m), to_kx(field, &s.p_inv, m)));
    }
    let restrict = |m: &Mat<RatFunc>, s: usize, tgt: usize| {
        let full = ps[tgt].0.mul(m).mul(&ps[s].1);
        let mut out = Mat::zeros(&field, free[tgt].len(), free[s].len());
        for (r, &fr) in free[tgt].iter().enumerate() {
            for (c, &fc) in free[s].iter().enumerate() {
                out[(r, c)] = full[(fr, fc)].clone();
            }
        }
        out
    };
    let src = &t.source;
    let z = DitModule {
        ctx: field,
        dims: free.iter().map(|f| f.len()).collect(),
        arrows: gen.arrows.iter().map(|(a, m)| (*a, restrict(m, src.arrow(*a).source, src.arrow(*a).target))).collect(),
        xs: gen.xs.iter().map(|(p, m)| (*p, restrict(m, *p, *p))).collect(),
    };
    let rank = z.total_dim();
    Ok(GenericRealization { point: i, g0: pt.g0.clone(), g, rank, z })
}

/// Values λ ∈ k with g(λ) ≠ 0: 0, 1, −1, 2, −2, … over Q, all of F_p otherwise.
pub fn spectrum_points(field: Field, g: &Poly, count: usize) -> Vec<Scalar> {
    let cands: Box<dyn Iterator<Item = Scalar>> = match field.elements() {
        Some(e) => Box::new(e.into_iter()),
        None => Box::new((0i64..).flat_map(|n| if n == 0 { vec![0] } else { vec![n, -n] }).map(move |n| field.int(n))),
    };
    cands.filter(|l| !g.eval(l).is_zero()).take(count).collect()
}

impl GenericRealization {
    pub fn specialize(&self, lambda: &Scalar) -> Result<Module, GenericError> {
        if self.g.eval(lambda).is_zero() {
            return Err(GenericError::NotInSpectrum(lambda.to_string()));
        }
        let field = lambda.field();
        Ok(substitute(field, &self.z, &Mat::scalar(&field, 1, lambda)))
    }

    pub fn to_json(&self, d: &Ditalgebra) -> String {
        serde_json::to_string_pretty(&RealizationRecord::from_realization(d, self)).expect("serializable realization")
    }

    pub fn from_json(d: &Ditalgebra, s: &str) -> Result<GenericRealization, GenericError> {
        let r: RealizationRecord = serde_json::from_str(s).map_err(|e| GenericError::Format(e.to_string()))?;
        r.to_realization(d)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RealizationRecord {
    point: usize,
    g0: String,
    g: String,
    rank: usize,
    dims: Vec<usize>,
    arrows: BTreeMap<String, Vec<Vec<String>>>,
    xs: BTreeMap<usize, Vec<Vec<String>>>,
}

fn mat_strings(m: &Mat<RatFunc>) -> Vec<Vec<String>> {
    (0..m.rows).map(|i| (0..m.cols).map(|j| m[(i, j)].to_string()).collect()).collect()
}

fn parse_kx(field: Field, rows: usize, cols: usize, s: &[Vec<String>]) -> Result<Mat<RatFunc>, GenericError> {
    let bad = |e: String| GenericError::Format(e);
    if s.len() != rows || s.iter().any(|r| r.len() != cols) {
        return Err(bad("matrix shape".into()));
    }
    let mut m = Mat::zeros(&field, rows, cols);
    for (i, r) in s.iter().enumerate() {
        for (j, e) in r.iter().enumerate() {
            m[(i, j)] = RatFunc::parse(field, e).map_err(|e| bad(e.to_string()))?;
        }
    }
    Ok(m)
}

impl RealizationRecord {
    fn from_realization(d: &Ditalgebra, r: &GenericRealization) -> Self {
        RealizationRecord {
            point: r.point,
            g0: r.g0.to_string(),
            g: r.g.to_string(),
            rank: r.rank,
            dims: r.z.dims.clone(),
            arrows: r.z.arrows.iter().map(|(a, m)| (d.arrow(*a).name.clone(), mat_strings(m))).collect(),
            xs: r.z.xs.iter().map(|(p, m)| (*p, mat_strings(m))).collect(),
        }
    }

    fn to_realization(&self, d: &Ditalgebra) -> Result<GenericRealization, GenericError> {
        let field = d.field;
        let poly = |s: &str| Poly::parse(field, s).map_err(|e| GenericError::Format(e.to_string()));
        let mut z = KxModule::with_dims(d, &field, &self.dims);
        for (name, m) in &self.arrows {
            let a = d.bigraph.arrow_index(name).ok_or_else(|| GenericError::Format(format!("unknown arrow {name}")))?;
            let ar = d.arrow(a);
            z.arrows.insert(a, parse_kx(field, self.dims[ar.target], self.dims[ar.source], m)?);
        }
        for (p, m) in &self.xs {
            z.xs.insert(*p, parse_kx(field, self.dims[*p], self.dims[*p], m)?);
        }
        Ok(GenericRealization { point: self.point, g0: poly(&self.g0)?, g: poly(&self.g)?, rank: self.rank, z })
    }
}

#[derive(Clone, Debug)]
pub struct CensusEntry {
    pub realization: GenericRealization,
    pub endolength: KxEndolength,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub trace: ReductionTrace,
    /// rational points of the terminal minimal ditalgebra
    pub rational_points: usize,
    pub entries: Vec<CensusEntry>,
}

/// One realization per rational point of the terminal minimal ditalgebra whose generic
/// module has endolength ≤ d.
pub fn generic_census(d: &Ditalgebra, dmax: usize, budget: usize) -> Result<Census, GenericError> {
    generic_census_with(d, dmax, budget, Exec::default_mode())
}

pub fn generic_census_with(d: &Ditalgebra, dmax: usize, budget: usize, exec: Exec) -> Result<Census, GenericError> {
    let trace = reduce_to_minimal(d, dmax, budget)?;
    let t = transfer_bimodule(&trace);
    let points: Vec<usize> = t.rational.keys().cloned().collect();
    let results = map_indices(exec, points.len(), &|k| -> Result<Option<CensusEntry>, GenericError> {
        let r = realize_generic(&t, points[k])?;
        let e = endolength_kx(d, &r.z)?;
        Ok((e.length <= dmax).then_some(CensusEntry { realization: r, endolength: e }))
    });
    let mut entries = vec![];
    for r in results {
        if let Some(e) = r? {
            entries.push(e);
        }
    }
    Ok(Census { rational_points: points.len(), trace, entries })
}

/// Specializations at `count` spectrum points: each indecomposable of dimension rank,
/// pairwise non-isomorphic.
pub fn check_specializations(d: &Ditalgebra, r: &GenericRealization, count: usize) -> Result<Vec<Module>, String> {
    let lams = spectrum_points(d.field, &r.g, count);
    if lams.len() < count {
        return Err(format!("only {} spectrum points available", lams.len()));
    }
    let mods: Vec<Module> = lams.iter().map(|l| r.specialize(l).unwrap()).collect();
    for (k, m) in mods.iter().enumerate() {
        m.validate(d).map_err(|e| e.to_string())?;
        if m.total_dim() != r.rank {
            return Err(format!("specialization at {} has dimension {}", lams[k], m.total_dim()));
        }
        if !is_indecomposable(d, m).map_err(|e| e.to_string())? {
            return Err(format!("specialization at {} decomposes", lams[k]));
        }
        for j in 0..k {
            if are_isomorphic(d, &mods[j], m).is_some() {
                return Err(format!("specializations at {} and {} are isomorphic", lams[j], lams[k]));
            }
        }
    }
    Ok(mods)
}

#[cfg(test)]
mod tests;
