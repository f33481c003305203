//! Reduction steps d, r, q, a, X, detachment and unravelling, and the driver towards minimal ditalgebras.

pub mod driver;
pub mod functor;
pub mod xred;

use crate::bigraph::{ArrowKind, Component, Ditalgebra, Path, PathElem, Sym};
use crate::ditmod::{DitModule, DitMorphism};
use crate::scalars::{Fld, Poly, RationalAlgebra};
use functor::{transport_structure, LinearFunctor};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub use driver::{reduce_to_minimal, ReductionTrace};
pub use xred::{build_admissible, fitting_split, step_reduce_x, step_unravel, AdmissibleData, Summand};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("not an idempotent: {0}")]
    NotIdempotent(String),
    #[error("invalid decomposition: {0}")]
    DecompositionInvalid(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("point {0} is not a source")]
    NotASource(usize),
    #[error("irreducible factorization unavailable for {0}")]
    FactorizationUnavailable(String),
    #[error("Hom between summands is not zero")]
    HomNotZero,
    #[error("not an epimorphism")]
    NotEpimorphism,
    #[error("wildness encountered: {0}")]
    WildnessEncountered(String),
    #[error("budget exceeded after {0} steps")]
    BudgetExceeded(usize),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("trace replay mismatch at step {0}")]
    ReplayMismatch(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    #[serde(rename = "d")]
    Delete,
    #[serde(rename = "r")]
    Regularize,
    #[serde(rename = "q")]
    FactorOut,
    #[serde(rename = "a")]
    Absorb,
    #[serde(rename = "X")]
    X,
    #[serde(rename = "detach")]
    Detach,
    #[serde(rename = "Y")]
    Unravel,
}

/// Replayable construction data, with arrows and polynomials written as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum StepData {
    Delete { keep: Vec<usize> },
    Regularize { arrow: String, dashed: String },
    FactorOut { arrows: Vec<String> },
    Absorb { arrows: Vec<String>, to_rational: bool },
    X { w0: Vec<String>, summands: Vec<SummandSpec> },
    Detach { point: usize },
    Unravel { points: Vec<(usize, String)>, depth: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum SummandSpec {
    Finite { dims: Vec<usize>, arrows: Vec<(String, String)>, xs: Vec<(usize, String)> },
    Localized { point: usize, h: String },
}

#[derive(Clone, Debug)]
pub struct ReductionStep {
    pub kind: StepKind,
    pub data: StepData,
    pub source: Ditalgebra,
    pub target: Ditalgebra,
    /// target modules → source modules (for detachment: source → target)
    pub functor: LinearFunctor,
    /// endolength control factor: 1, or μ(X) for X-steps
    pub factor: usize,
    /// points of the target whose image under the functor is an equivalence onto its image
    pub equivalence: bool,
}

impl ReductionStep {
    pub fn apply_module<F: Fld>(&self, n: &DitModule<F>) -> DitModule<F> {
        let dom = if self.kind == StepKind::Detach { &self.target } else { &self.source };
        self.functor.apply_module(dom, n)
    }

    pub fn apply_morphism<F: Fld>(&self, m: &DitModule<F>, n: &DitModule<F>, f: &DitMorphism<F>) -> DitMorphism<F> {
        let (dom, cod) = if self.kind == StepKind::Detach { (&self.target, &self.source) } else { (&self.source, &self.target) };
        self.functor.apply_morphism(dom, cod, m, n, f)
    }

    /// Ditalgebra whose modules the functor consumes.
    pub fn input(&self) -> &Ditalgebra {
        if self.kind == StepKind::Detach {
            &self.source
        } else {
            &self.target
        }
    }

    pub fn output(&self) -> &Ditalgebra {
        if self.kind == StepKind::Detach {
            &self.target
        } else {
            &self.source
        }
    }
}

pub(crate) fn arrow_named(d: &Ditalgebra, name: &str) -> Result<usize, ReductionError> {
    d.bigraph.arrow_index(name).ok_or_else(|| ReductionError::HypothesisFailed(format!("unknown arrow {name}")))
}

/// Target skeleton keeping the given points (in order) and the arrows among them not in `drop`.
fn skeleton(d: &Ditalgebra, point_map: &[Option<usize>], drop: &BTreeSet<usize>) -> (Ditalgebra, BTreeMap<usize, usize>) {
    let n = point_map.iter().flatten().count();
    let mut t = Ditalgebra::new(d.field, n);
    for (p, q) in point_map.iter().enumerate() {
        if let Some(q) = q {
            t.base.components[*q] = d.base.components[p].clone();
        }
    }
    let mut amap = BTreeMap::new();
    for (a, ar) in d.bigraph.arrows.iter().enumerate() {
        if drop.contains(&a) {
            continue;
        }
        if let (Some(s), Some(tt)) = (point_map[ar.source], point_map[ar.target]) {
            let new = t.add_arrow(&ar.name, ar.kind, s, tt);
            amap.insert(a, new);
        }
    }
    for a in &d.absorbed {
        if let Some(&na) = amap.get(a) {
            t.absorbed.insert(na);
        }
    }
    (t, amap)
}

/// Builds a step whose functor substitutes each symbol by a single target element.
fn substitution_step(
    kind: StepKind,
    data: StepData,
    d: &Ditalgebra,
    point_map: Vec<Option<usize>>,
    mut target: Ditalgebra,
    amap: &BTreeMap<usize, usize>,
    extra: BTreeMap<Sym, PathElem>,
    equivalence: bool,
) -> ReductionStep {
    let mut images = extra;
    for (&a, &na) in amap {
        images.entry(Sym::Arrow(a)).or_insert_with(|| target.arrow_elem(na));
    }
    for p in d.rational_points() {
        if let Some(q) = point_map[p] {
            if target.base.is_rational(q) {
                images.entry(Sym::X(p)).or_insert_with(|| PathElem::from_path(d.field, Path::x(q)));
            }
        }
    }
    let fun = LinearFunctor::substitution(d.field, d, &point_map, &images);
    let new_of = amap.iter().map(|(&a, &na)| (a, vec![(0, 0, na)])).collect();
    transport_structure(d, &mut target, &fun, &new_of);
    if let Some(f) = &d.filtration {
        let stages: Vec<Vec<usize>> = f.iter().map(|st| st.iter().filter_map(|a| amap.get(a).cloned()).collect()).collect();
        let stages: Vec<Vec<usize>> = stages.into_iter().filter(|s| !s.is_empty()).collect();
        if target.check_filtration(&stages) {
            target.filtration = Some(stages);
        }
    }
    ReductionStep { kind, data, source: d.clone(), target, functor: fun, factor: 1, equivalence }
}

/// Deletion of the idempotent 1 - e, with e = Σ_{p ∈ keep} e_p.
pub fn step_delete(d: &Ditalgebra, keep: &[usize]) -> Result<ReductionStep, ReductionError> {
    let keep: BTreeSet<usize> = keep.iter().cloned().collect();
    if keep.iter().any(|&p| p >= d.points()) {
        return Err(ReductionError::NotIdempotent(format!("{keep:?}")));
    }
    let mut next = 0;
    let point_map: Vec<Option<usize>> = (0..d.points())
        .map(|p| {
            keep.contains(&p).then(|| {
                next += 1;
                next - 1
            })
        })
        .collect();
    let (target, amap) = skeleton(d, &point_map, &BTreeSet::new());
    let data = StepData::Delete { keep: keep.iter().cloned().collect() };
    Ok(substitution_step(StepKind::Delete, data, d, point_map, target, &amap, BTreeMap::new(), false))
}

/// Regularization of a full arrow α with δ(α) = c·γ + (terms without γ).
pub fn step_regularize(d: &Ditalgebra, alpha: usize, gamma: usize) -> Result<ReductionStep, ReductionError> {
    let bad = |m: &str| Err(ReductionError::DecompositionInvalid(m.to_string()));
    if d.arrow(alpha).kind != ArrowKind::Full || d.arrow(gamma).kind != ArrowKind::Dashed {
        return bad("need a full arrow and a dashed arrow");
    }
    let lone = Path::arrow(&d.bigraph, gamma);
    let Some(c) = d.delta[alpha].terms.get(&lone).cloned() else {
        return bad("delta(W0') is not a direct summand of W1");
    };
    let mut rest = d.delta[alpha].clone();
    rest.terms.remove(&lone);
    let mentions = |e: &PathElem, a: usize| e.terms.keys().any(|p| p.arrows().any(|b| b == a));
    if mentions(&rest, gamma) || mentions(&rest, alpha) {
        return bad("the dashed arrow occurs elsewhere in delta(alpha)");
    }
    let point_map: Vec<Option<usize>> = (0..d.points()).map(Some).collect();
    let drop: BTreeSet<usize> = [alpha, gamma].into_iter().collect();
    let (target, amap) = skeleton(d, &point_map, &drop);
    // φ(γ) = -φ(rest)/c, where φ renames the surviving arrows
    let mut rename = BTreeMap::new();
    for (&a, &na) in &amap {
        rename.insert(Sym::Arrow(a), target.arrow_elem(na));
    }
    for p in d.rational_points() {
        rename.insert(Sym::X(p), PathElem::from_path(d.field, Path::x(p)));
    }
    let fun0 = LinearFunctor::substitution(d.field, d, &point_map, &rename);
    let (s, t) = (d.arrow(alpha).source, d.arrow(alpha).target);
    let phi_rest = fun0.sigma(d.field, &rest, s, t).get(0, 0).clone();
    let mut extra = BTreeMap::new();
    extra.insert(Sym::Arrow(alpha), PathElem::zero(d.field));
    extra.insert(Sym::Arrow(gamma), phi_rest.scale(&c.inv().unwrap().neg()));
    let data = StepData::Regularize { arrow: d.arrow(alpha).name.clone(), dashed: d.arrow(gamma).name.clone() };
    Ok(substitution_step(StepKind::Regularize, data, d, point_map, target, &amap, extra, true))
}

/// Factoring out full arrows lying in I whose δ stays in the ideal they generate.
pub fn step_factor_out(d: &Ditalgebra, arrows: &[usize]) -> Result<ReductionStep, ReductionError> {
    let set: BTreeSet<usize> = arrows.iter().cloned().collect();
    for &a in &set {
        if d.arrow(a).kind != ArrowKind::Full {
            return Err(ReductionError::HypothesisFailed(format!("{} is not a full arrow", d.arrow(a).name)));
        }
        if !d.ideal_membership(&d.arrow_elem(a)).unwrap_or(false) {
            return Err(ReductionError::HypothesisFailed(format!("W0' ⊄ I: {} not in I", d.arrow(a).name)));
        }
        if d.delta[a].terms.keys().any(|p| !p.arrows().any(|b| set.contains(&b))) {
            return Err(ReductionError::HypothesisFailed(format!("delta({}) ⊄ A W0' V + V W0' A", d.arrow(a).name)));
        }
    }
    let point_map: Vec<Option<usize>> = (0..d.points()).map(Some).collect();
    let (target, amap) = skeleton(d, &point_map, &set);
    let extra = set.iter().map(|&a| (Sym::Arrow(a), PathElem::zero(d.field))).collect();
    let data = StepData::FactorOut { arrows: set.iter().map(|&a| d.arrow(a).name.clone()).collect() };
    let mut step = substitution_step(StepKind::FactorOut, data, d, point_map, target, &amap, extra, true);
    step.target.ideal.retain(|g| !g.is_zero());
    Ok(step)
}

/// Absorption of full arrows with δ = 0 into the base. A single loop at a trivial
/// point becomes the generator of a rational point k[x].
pub fn step_absorb(d: &Ditalgebra, arrows: &[usize]) -> Result<ReductionStep, ReductionError> {
    let set: BTreeSet<usize> = arrows.iter().cloned().collect();
    for &a in &set {
        if d.arrow(a).kind != ArrowKind::Full || !d.delta[a].is_zero() {
            return Err(ReductionError::HypothesisFailed(format!("delta({}) != 0", d.arrow(a).name)));
        }
    }
    let point_map: Vec<Option<usize>> = (0..d.points()).map(Some).collect();
    let loop_point = match set.iter().next() {
        Some(&a) if set.len() == 1 && d.arrow(a).source == d.arrow(a).target && !d.base.is_rational(d.arrow(a).source) => {
            let p = d.arrow(a).source;
            let others = d.bigraph.full_arrows().filter(|&b| b != a && d.arrow(b).source == p && d.arrow(b).target == p).count();
            (others == 0).then_some(p)
        }
        _ => None,
    };
    let names: Vec<String> = set.iter().map(|&a| d.arrow(a).name.clone()).collect();
    if let Some(p) = loop_point {
        let a = *set.iter().next().unwrap();
        let (mut target, amap) = skeleton(d, &point_map, &set);
        target.base.components[p] = Component::Rational(RationalAlgebra::new(Poly::one(d.field)));
        let mut extra = BTreeMap::new();
        extra.insert(Sym::Arrow(a), PathElem::from_path(d.field, Path::x(p)));
        let data = StepData::Absorb { arrows: names, to_rational: true };
        return Ok(substitution_step(StepKind::Absorb, data, d, point_map, target, &amap, extra, true));
    }
    let (mut target, amap) = skeleton(d, &point_map, &BTreeSet::new());
    for a in &set {
        target.absorbed.insert(amap[a]);
    }
    let data = StepData::Absorb { arrows: names, to_rational: false };
    Ok(substitution_step(StepKind::Absorb, data, d, point_map, target, &amap, BTreeMap::new(), true))
}

/// Detachment of a source point: removes every arrow at e0; the functor is Res(M) = fM.
pub fn step_detach(d: &Ditalgebra, e0: usize) -> Result<ReductionStep, ReductionError> {
    if !d.check_source(e0) {
        return Err(ReductionError::NotASource(e0));
    }
    let point_map: Vec<Option<usize>> = (0..d.points()).map(Some).collect();
    let drop: BTreeSet<usize> = (0..d.bigraph.arrows.len()).filter(|&a| d.arrow(a).source == e0 || d.arrow(a).target == e0).collect();
    let (mut target, amap) = skeleton(d, &point_map, &drop);
    // Res goes from the source ditalgebra to the detached one: slots over the target's points
    let res_map: Vec<Option<usize>> = (0..d.points()).map(|p| (p != e0).then_some(p)).collect();
    let mut images = BTreeMap::new();
    for (&a, &na) in &amap {
        images.insert(Sym::Arrow(na), d.arrow_elem(a));
    }
    for p in d.rational_points() {
        images.insert(Sym::X(p), PathElem::from_path(d.field, Path::x(p)));
    }
    let skeleton_t = target.clone();
    let fun = LinearFunctor::substitution(d.field, &skeleton_t, &res_map, &images);
    let forward = LinearFunctor::substitution(d.field, d, &point_map, &amap.iter().map(|(&a, &na)| (Sym::Arrow(a), target.arrow_elem(na))).collect());
    let new_of = amap.iter().map(|(&a, &na)| (a, vec![(0, 0, na)])).collect();
    let ideal_src = Ditalgebra { ideal: vec![], ..d.clone() };
    transport_structure(&ideal_src, &mut target, &forward, &new_of);
    // the ideal keeps only generators supported away from e0
    target.ideal = d
        .ideal
        .iter()
        .map(|g| {
            let mut h = PathElem::zero(d.field);
            for (p, c) in &g.terms {
                if p.start != e0 && p.end != e0 && p.arrows().all(|a| amap.contains_key(&a)) {
                    let mut q = p.clone();
                    q.syms = q.syms.iter().map(|s| if let Sym::Arrow(a) = s { Sym::Arrow(amap[a]) } else { *s }).collect();
                    h.add_term(q, c.clone());
                }
            }
            h
        })
        .filter(|h| !h.is_zero())
        .collect();
    Ok(ReductionStep { kind: StepKind::Detach, data: StepData::Detach { point: e0 }, source: d.clone(), target, functor: fun, factor: 1, equivalence: false })
}

/// Re-runs a step from its recorded data.
pub fn replay_step(d: &Ditalgebra, data: &StepData) -> Result<ReductionStep, ReductionError> {
    match data {
        StepData::Delete { keep } => step_delete(d, keep),
        StepData::Regularize { arrow, dashed } => step_regularize(d, arrow_named(d, arrow)?, arrow_named(d, dashed)?),
        StepData::FactorOut { arrows } => step_factor_out(d, &arrows.iter().map(|a| arrow_named(d, a)).collect::<Result<Vec<_>, _>>()?),
        StepData::Absorb { arrows, .. } => step_absorb(d, &arrows.iter().map(|a| arrow_named(d, a)).collect::<Result<Vec<_>, _>>()?),
        StepData::X { w0, summands } => {
            let w0: Vec<usize> = w0.iter().map(|a| arrow_named(d, a)).collect::<Result<_, _>>()?;
            let sums = summands.iter().map(|s| xred::summand_from_spec(d, &w0, s)).collect::<Result<Vec<_>, _>>()?;
            let x = build_admissible(d, &w0, sums)?;
            step_reduce_x(d, &x)
        }
        StepData::Detach { point } => step_detach(d, *point),
        StepData::Unravel { points, depth } => {
            let ps = points
                .iter()
                .map(|(p, h)| Poly::parse(d.field, h).map(|h| (*p, h)).map_err(|e| ReductionError::HypothesisFailed(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            step_unravel(d, &ps, *depth)
        }
    }
}

#[cfg(test)]
mod tests;
