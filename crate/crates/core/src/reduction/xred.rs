//! Reduction by an admissible module X = ⊕ X_j over B = T_R(W0'), and unravelling at rational points.

use super::functor::{transport_structure, LinearFunctor, SymMat};
use super::{arrow_named, ReductionError, ReductionStep, StepData, StepKind, SummandSpec};
use crate::bigraph::{ArrowKind, Component, Ditalgebra, Path, PathElem};
use crate::ditmod::{are_isomorphic, combine, end_algebra, hom_space, poly_at_matrix, DitModule, Module};
use crate::format::{mat_to_string, parse_mat};
use crate::linalg::{coordinates, Mat};
use crate::scalars::{factor_squarefree, Poly, RationalAlgebra, Scalar};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq)]
pub enum Summand {
    /// indecomposable B-module with End/rad = k
    Finite(Module),
    /// k[x]_{gh} at a rational point
    Localized { point: usize, h: Poly },
}

impl Summand {
    pub fn rank(&self) -> usize {
        match self {
            Summand::Finite(m) => m.total_dim(),
            Summand::Localized { .. } => 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AdmissibleData {
    pub b: Ditalgebra,
    pub w0: Vec<usize>,
    pub summands: Vec<Summand>,
    /// basis of P: (source summand, target summand, f0 blocks)
    pub p_basis: Vec<(usize, usize, Vec<Mat<Scalar>>)>,
    /// p_a ∘ p_b = Σ c_j p_j, keyed by (a, b)
    pub structure: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
}

impl AdmissibleData {
    pub fn mu(&self) -> usize {
        self.summands.iter().map(|s| s.rank()).max().unwrap_or(0)
    }
}

/// B = T_R(W0') as a ditalgebra on the same points whose arrows are W0' in order.
pub fn b_algebra(d: &Ditalgebra, w0: &[usize]) -> Result<Ditalgebra, ReductionError> {
    let mut b = Ditalgebra::new(d.field, d.points());
    b.base = d.base.clone();
    for &w in w0 {
        let ar = d.arrow(w);
        if ar.kind != ArrowKind::Full {
            return Err(ReductionError::HypothesisFailed(format!("{} is not a full arrow", ar.name)));
        }
        if !d.delta[w].is_zero() {
            return Err(ReductionError::HypothesisFailed(format!("delta({}) != 0", ar.name)));
        }
        b.add_arrow(&ar.name, ArrowKind::Full, ar.source, ar.target);
    }
    Ok(b)
}

fn flat(f0: &[Mat<Scalar>]) -> Vec<Scalar> {
    f0.iter().flat_map(|m| m.data().iter().cloned()).collect()
}

fn is_nilpotent(m: &Mat<Scalar>) -> bool {
    m.rows == 0 || m.pow(m.rows).is_zero()
}

pub fn build_admissible(d: &Ditalgebra, w0: &[usize], summands: Vec<Summand>) -> Result<AdmissibleData, ReductionError> {
    let b = b_algebra(d, w0)?;
    let invalid = |m: String| Err(ReductionError::DecompositionInvalid(m));
    let mut p_basis = vec![];
    let mut localized_at = BTreeSet::new();
    for (j, s) in summands.iter().enumerate() {
        match s {
            Summand::Finite(m) => {
                m.validate(&b).map_err(|e| ReductionError::InvalidModule(e.to_string()))?;
                if m.total_dim() == 0 {
                    return invalid(format!("summand {j} is zero"));
                }
                let (alg, basis) = end_algebra(&b, m);
                let rad = alg.radical();
                if rad.len() + 1 != alg.dim {
                    return invalid(format!("summand {j}: End/rad is not k"));
                }
                for v in &rad {
                    p_basis.push((j, j, combine(&basis, v).f0));
                }
            }
            Summand::Localized { point, h } => {
                if !d.base.is_rational(*point) || h.is_zero() {
                    return invalid(format!("localized summand at non-rational point {}", point + 1));
                }
                if w0.iter().any(|&w| d.arrow(w).source == *point || d.arrow(w).target == *point) {
                    return invalid(format!("W0' touches localized point {}", point + 1));
                }
                if !localized_at.insert(*point) {
                    return invalid(format!("two localized summands at point {}", point + 1));
                }
            }
        }
    }
    for (i, si) in summands.iter().enumerate() {
        for (j, sj) in summands.iter().enumerate() {
            if i == j {
                continue;
            }
            match (si, sj) {
                (Summand::Finite(a), Summand::Finite(c)) => {
                    if i < j && are_isomorphic(&b, a, c).is_some() {
                        return invalid(format!("summands {i} and {j} are isomorphic"));
                    }
                    for f in hom_space(&b, a, c) {
                        p_basis.push((i, j, f.f0));
                    }
                }
                (Summand::Localized { point, h }, Summand::Finite(c)) => {
                    if c.dims[*point] > 0 && !is_nilpotent(&poly_at_matrix(&c.ctx, h, &c.xs[point])) {
                        return Err(ReductionError::HomNotZero);
                    }
                }
                _ => {}
            }
        }
    }
    p_basis.sort_by_key(|p| (p.0, p.1));
    let mut structure = BTreeMap::new();
    for (a, (sa, ta, fa)) in p_basis.iter().enumerate() {
        for (bb, (sb, tb, fb)) in p_basis.iter().enumerate() {
            if tb != sa {
                continue;
            }
            let comp: Vec<Mat<Scalar>> = fa.iter().zip(fb).map(|(x, y)| x.mul(y)).collect();
            let v = flat(&comp);
            if v.iter().all(|c| c.is_zero()) {
                continue;
            }
            let idx: Vec<usize> = (0..p_basis.len()).filter(|&k| p_basis[k].0 == *sb && p_basis[k].1 == *ta).collect();
            let vecs: Vec<Vec<Scalar>> = idx.iter().map(|&k| flat(&p_basis[k].2)).collect();
            let Some(c) = coordinates(&d.field, &vecs, &v) else {
                return invalid("P is not closed under composition".into());
            };
            let terms: Vec<(usize, Scalar)> = idx.iter().zip(c).filter(|(_, c)| !c.is_zero()).map(|(&k, c)| (k, c)).collect();
            structure.insert((a, bb), terms);
        }
    }
    Ok(AdmissibleData { b, w0: w0.to_vec(), summands, p_basis, structure })
}

fn unique_name(used: &mut BTreeSet<String>, base: String) -> String {
    let mut n = base;
    while used.contains(&n) {
        n.push('\'');
    }
    used.insert(n.clone());
    n
}

fn const_entry(c: &Scalar, j: usize) -> PathElem {
    PathElem::monomial(Path::trivial(j), c.clone())
}

pub fn step_reduce_x(d: &Ditalgebra, x: &AdmissibleData) -> Result<ReductionStep, ReductionError> {
    let mut step = reduce_x_raw(d, x)?;
    step.data = StepData::X { w0: x.w0.iter().map(|&w| d.arrow(w).name.clone()).collect(), summands: x.summands.iter().map(|s| summand_spec(d, x, s)).collect() };
    Ok(step)
}

fn reduce_x_raw(d: &Ditalgebra, x: &AdmissibleData) -> Result<ReductionStep, ReductionError> {
    let field = d.field;
    let n = x.summands.len();
    // slots per source point: (summand, basis index)
    let mut slot_info: Vec<Vec<(usize, usize)>> = vec![vec![]; d.points()];
    for (j, s) in x.summands.iter().enumerate() {
        match s {
            Summand::Finite(m) => {
                for (i, info) in slot_info.iter_mut().enumerate() {
                    info.extend((0..m.dims[i]).map(|k| (j, k)));
                }
            }
            Summand::Localized { point, .. } => slot_info[*point].push((j, 0)),
        }
    }
    let slots: Vec<Vec<usize>> = slot_info.iter().map(|v| v.iter().map(|s| s.0).collect()).collect();
    let mut target = Ditalgebra::new(field, n);
    for (j, s) in x.summands.iter().enumerate() {
        if let Summand::Localized { point, h } = s {
            let g = d.base.localizer(*point).cloned().unwrap_or_else(|| Poly::one(field));
            target.base.components[j] = Component::Rational(RationalAlgebra::new(g.mul(h).monic()));
        }
    }
    let w0_pos: BTreeMap<usize, usize> = x.w0.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let mut used = BTreeSet::new();
    let mut arrows = BTreeMap::new();
    let mut new_of: BTreeMap<usize, Vec<(usize, usize, usize)>> = BTreeMap::new();
    for w in 0..d.bigraph.arrows.len() {
        let ar = d.arrow(w).clone();
        let (rs, cs) = (&slot_info[ar.target], &slot_info[ar.source]);
        let mut m = SymMat::zero(field, &slots[ar.target], &slots[ar.source]);
        if let Some(&bi) = w0_pos.get(&w) {
            for (r, &(jr, kr)) in rs.iter().enumerate() {
                for (c, &(jc, kc)) in cs.iter().enumerate() {
                    if let (true, Summand::Finite(xm)) = (jr == jc, &x.summands[jr]) {
                        let v = &xm.arrows[&bi][(kr, kc)];
                        if !v.is_zero() {
                            m.set(r, c, const_entry(v, jr));
                        }
                    }
                }
            }
        } else {
            let count = rs.len() * cs.len();
            let mut cells = vec![];
            for (r, &(jr, _)) in rs.iter().enumerate() {
                for (c, &(jc, _)) in cs.iter().enumerate() {
                    let base = if count == 1 { ar.name.clone() } else { format!("{}_{}", ar.name, cells.len() + 1) };
                    let name = unique_name(&mut used, base);
                    let na = target.add_arrow(&name, ar.kind, jc, jr);
                    m.set(r, c, target.arrow_elem(na));
                    cells.push((r, c, na));
                }
            }
            new_of.insert(w, cells);
        }
        arrows.insert(w, m);
    }
    let mut gammas = vec![];
    for (k, (s, t, _)) in x.p_basis.iter().enumerate() {
        let name = unique_name(&mut used, format!("p{}", k + 1));
        gammas.push(target.add_arrow(&name, ArrowKind::Dashed, *s, *t));
    }
    let mut xs = BTreeMap::new();
    for p in d.rational_points() {
        let info = &slot_info[p];
        let mut m = SymMat::zero(field, &slots[p], &slots[p]);
        for (r, &(jr, kr)) in info.iter().enumerate() {
            for (c, &(jc, kc)) in info.iter().enumerate() {
                if jr != jc {
                    continue;
                }
                match &x.summands[jr] {
                    Summand::Finite(xm) => {
                        let v = &xm.xs[&p][(kr, kc)];
                        if !v.is_zero() {
                            m.set(r, c, const_entry(v, jr));
                        }
                    }
                    Summand::Localized { .. } => m.set(r, c, PathElem::from_path(field, Path::x(jr))),
                }
            }
        }
        xs.insert(p, m);
    }
    let mut pi = vec![];
    for (i, info) in slot_info.iter().enumerate() {
        let mut m = SymMat::zero(field, &slots[i], &slots[i]);
        for (r, &(jr, kr)) in info.iter().enumerate() {
            for (c, &(jc, kc)) in info.iter().enumerate() {
                let mut e = PathElem::zero(field);
                for (k, (s, t, f0)) in x.p_basis.iter().enumerate() {
                    if *s == jc && *t == jr {
                        let v = &f0[i][(kr, kc)];
                        if !v.is_zero() {
                            e = e.add(&target.arrow_elem(gammas[k]).scale(v));
                        }
                    }
                }
                m.set(r, c, e);
            }
        }
        pi.push(m);
    }
    let fun = LinearFunctor { slots, arrows, xs, pi };
    transport_structure(d, &mut target, &fun, &new_of);
    for (&w, cells) in &new_of {
        let ar = d.arrow(w);
        let u = &fun.arrows[&w];
        let (pt, ps) = (&fun.pi[ar.target], &fun.pi[ar.source]);
        let corr = if ar.kind == ArrowKind::Full {
            pt.mul(u).add(&u.mul(ps).scale(&field.one().neg()))
        } else {
            pt.mul(u).add(&u.mul(ps))
        };
        for &(r, c, na) in cells {
            target.delta[na] = target.delta[na].add(corr.get(r, c));
        }
    }
    for (j, &gj) in gammas.iter().enumerate() {
        let mut e = PathElem::zero(field);
        for (&(a, b), terms) in &x.structure {
            for (k, c) in terms {
                if *k == j {
                    e = e.add(&target.arrow_elem(gammas[a]).mul(&target.arrow_elem(gammas[b])).scale(c));
                }
            }
        }
        target.delta[gj] = e;
    }
    target.filtration = None;
    let data = StepData::X { w0: vec![], summands: vec![] };
    Ok(ReductionStep { kind: StepKind::X, data, source: d.clone(), target, functor: fun, factor: x.mu(), equivalence: false })
}

fn summand_spec(d: &Ditalgebra, x: &AdmissibleData, s: &Summand) -> SummandSpec {
    match s {
        Summand::Finite(m) => SummandSpec::Finite {
            dims: m.dims.clone(),
            arrows: m.arrows.iter().map(|(&bi, a)| (d.arrow(x.w0[bi]).name.clone(), mat_to_string(a))).collect(),
            xs: m.xs.iter().map(|(&p, a)| (p, mat_to_string(a))).collect(),
        },
        Summand::Localized { point, h } => SummandSpec::Localized { point: *point, h: h.to_string() },
    }
}

pub fn summand_from_spec(d: &Ditalgebra, w0: &[usize], s: &SummandSpec) -> Result<Summand, ReductionError> {
    let bad = |e: String| ReductionError::HypothesisFailed(e);
    match s {
        SummandSpec::Finite { dims, arrows, xs } => {
            let b = b_algebra(d, w0)?;
            if dims.len() != d.points() {
                return Err(bad("summand dimension vector".into()));
            }
            let mut m = DitModule::with_dims(&b, &d.field, dims);
            for (name, txt) in arrows {
                let w = arrow_named(d, name)?;
                let bi = w0.iter().position(|&v| v == w).ok_or_else(|| bad(format!("{name} not in W0'")))?;
                let ar = d.arrow(w);
                m.arrows.insert(bi, parse_mat(d.field, dims[ar.target], dims[ar.source], txt).map_err(|e| bad(e.to_string()))?);
            }
            for (p, txt) in xs {
                if !d.base.is_rational(*p) {
                    return Err(bad(format!("point {} is not rational", p + 1)));
                }
                m.xs.insert(*p, parse_mat(d.field, dims[*p], dims[*p], txt).map_err(|e| bad(e.to_string()))?);
            }
            Ok(Summand::Finite(m))
        }
        SummandSpec::Localized { point, h } => Ok(Summand::Localized { point: *point, h: Poly::parse(d.field, h).map_err(|e| bad(e.to_string()))? }),
    }
}

/// Companion matrix of a monic polynomial: x acting on k[x]/(q) in the basis 1, x, x², ….
pub fn companion(q: &Poly) -> Mat<Scalar> {
    let field = q.field;
    let q = q.monic();
    let n = q.degree().unwrap_or(0);
    let mut m = Mat::zeros(&field, n, n);
    for i in 0..n {
        if i + 1 < n {
            m[(i + 1, i)] = field.one();
        }
        m[(i, n - 1)] = q.coeff(i).neg();
    }
    m
}

/// Projections onto the summand where h(x) acts invertibly and onto the one h(x)^d kills.
pub fn fitting_split(x_action: &Mat<Scalar>, h: &Poly, d: usize) -> (Mat<Scalar>, Mat<Scalar>) {
    let field = h.field;
    let n = x_action.rows;
    if n == 0 {
        return (Mat::zeros(&field, 0, 0), Mat::zeros(&field, 0, 0));
    }
    let a = poly_at_matrix(&field, h, x_action).pow(n.max(d));
    let mut basis = a.column_space();
    let r = basis.len();
    basis.extend(a.kernel());
    let q = Mat::from_cols(&field, n, &basis);
    let qi = q.inverse().expect("Fitting decomposition");
    let mut e = Mat::zeros(&field, n, n);
    for i in 0..r {
        e[(i, i)] = field.one();
    }
    let p_star = q.mul(&e).mul(&qi);
    let p_nil = Mat::identity(&field, n).sub(&p_star);
    (p_star, p_nil)
}

/// Unravelling at rational points: X-reduction with W0' = 0 at the module
/// Z ⊕ ⊕_j k[x]_{g_j h_j} ⊕ (simples at trivial points), Z = ⊕ k[x]/π^a for the
/// linear factors π of h_j not dividing g_j and 1 ≤ a ≤ depth.
pub fn step_unravel(d: &Ditalgebra, points: &[(usize, Poly)], depth: usize) -> Result<ReductionStep, ReductionError> {
    let field = d.field;
    let b = b_algebra(d, &[])?;
    let hs: BTreeMap<usize, &Poly> = points.iter().map(|(p, h)| (*p, h)).collect();
    let mut summands = vec![];
    for p in 0..d.points() {
        if !d.base.is_rational(p) {
            if hs.contains_key(&p) {
                return Err(ReductionError::HypothesisFailed(format!("point {} is not rational", p + 1)));
            }
            summands.push(Summand::Finite(DitModule::simple(&b, &field, p)));
            continue;
        }
        let Some(h) = hs.get(&p) else {
            summands.push(Summand::Localized { point: p, h: Poly::one(field) });
            continue;
        };
        let factors = factor_squarefree(h).map_err(|_| ReductionError::FactorizationUnavailable(h.to_string()))?;
        let g = d.base.localizer(p).cloned().unwrap_or_else(|| Poly::one(field));
        for (pi, _) in factors {
            if pi.degree() != Some(1) {
                return Err(ReductionError::FactorizationUnavailable(pi.to_string()));
            }
            if g.gcd(&pi).degree().unwrap_or(0) > 0 {
                continue;
            }
            for a in 1..=depth {
                let mut dims = vec![0; d.points()];
                dims[p] = a;
                let mut m = DitModule::with_dims(&b, &field, &dims);
                m.xs.insert(p, companion(&pi.pow(a)));
                summands.push(Summand::Finite(m));
            }
        }
        summands.push(Summand::Localized { point: p, h: (*h).clone() });
    }
    let x = build_admissible(d, &[], summands)?;
    let mut step = step_reduce_x(d, &x)?;
    step.kind = StepKind::Unravel;
    step.data = StepData::Unravel { points: points.iter().map(|(p, h)| (*p, h.to_string())).collect(), depth };
    Ok(step)
}
