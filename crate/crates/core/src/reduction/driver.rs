//! The reduction loop towards a minimal ditalgebra, chained functors and replayable traces.

use super::xred::{b_algebra, build_admissible, companion, step_reduce_x, Summand};
use super::{replay_step, step_absorb, step_delete, step_factor_out, step_regularize, ReductionError, ReductionStep, StepData, StepKind};
use crate::bigraph::{Ditalgebra, Path};
use crate::ditmod::{endolength, enumerate_indecomposables, find_iso, DitModule, Module, Morphism};
use crate::linalg::Mat;
use crate::scalars::{factor_squarefree, Field, Poly};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub input: Ditalgebra,
    pub steps: Vec<ReductionStep>,
    /// dim of the image of the simple module at each terminal point
    pub weights: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub kind: StepKind,
    pub data: StepData,
    pub source_hash: String,
    pub target_hash: String,
    pub factor: usize,
}

impl ReductionTrace {
    pub fn terminal(&self) -> &Ditalgebra {
        self.steps.last().map(|s| &s.target).unwrap_or(&self.input)
    }

    /// Chained functor F_1 ∘ … ∘ F_t applied to a terminal module.
    pub fn apply_module<F: crate::scalars::Fld>(&self, n: &DitModule<F>) -> DitModule<F> {
        self.steps.iter().rev().fold(n.clone(), |m, s| s.apply_module(&m))
    }

    pub fn apply_morphism(&self, m: &Module, n: &Module, f: &Morphism) -> Morphism {
        let (mut m, mut n, mut f) = (m.clone(), n.clone(), f.clone());
        for s in self.steps.iter().rev() {
            f = s.apply_morphism(&m, &n, &f);
            m = s.apply_module(&m);
            n = s.apply_module(&n);
        }
        f
    }

    /// Product of the per-step endolength control factors.
    pub fn factor(&self) -> usize {
        self.steps.iter().map(|s| s.factor).product()
    }

    pub fn records(&self) -> Vec<StepRecord> {
        self.steps
            .iter()
            .map(|s| StepRecord { kind: s.kind, data: s.data.clone(), source_hash: s.source.hash_hex(), target_hash: s.target.hash_hex(), factor: s.factor })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.records()).expect("serializable trace")
    }

    /// Rebuilds a trace from its records, checking every hash.
    pub fn replay(input: &Ditalgebra, records: &[StepRecord]) -> Result<ReductionTrace, ReductionError> {
        let mut cur = input.clone();
        let mut weights = vec![1; input.points()];
        let mut steps = vec![];
        for (i, r) in records.iter().enumerate() {
            if cur.hash_hex() != r.source_hash {
                return Err(ReductionError::ReplayMismatch(i));
            }
            let step = replay_step(&cur, &r.data)?;
            if step.target.hash_hex() != r.target_hash || step.kind != r.kind {
                return Err(ReductionError::ReplayMismatch(i));
            }
            weights = next_weights(&step, &weights);
            cur = step.target.clone();
            steps.push(step);
        }
        Ok(ReductionTrace { input: input.clone(), steps, weights })
    }

    pub fn from_json(input: &Ditalgebra, json: &str) -> Result<ReductionTrace, ReductionError> {
        let records: Vec<StepRecord> = serde_json::from_str(json).map_err(|e| ReductionError::HypothesisFailed(e.to_string()))?;
        Self::replay(input, &records)
    }
}

fn next_weights(step: &ReductionStep, w: &[usize]) -> Vec<usize> {
    let mut out = vec![0; step.target.points()];
    for (i, slots) in step.functor.slots.iter().enumerate() {
        for &t in slots {
            out[t] += w[i];
        }
    }
    out
}

fn mentions(d: &Ditalgebra, a: usize, set: &BTreeSet<usize>) -> bool {
    d.delta[a].terms.keys().all(|p| p.arrows().any(|b| set.contains(&b)))
}

fn factor_out_candidates(d: &Ditalgebra) -> Vec<usize> {
    let mut set: BTreeSet<usize> = d.full_arrows().into_iter().filter(|&a| d.ideal_membership(&d.arrow_elem(a)).unwrap_or(false)).collect();
    loop {
        let keep: BTreeSet<usize> = set.iter().cloned().filter(|&a| mentions(d, a, &set)).collect();
        if keep == set {
            return set.into_iter().collect();
        }
        set = keep;
    }
}

fn regularization(d: &Ditalgebra) -> Option<ReductionStep> {
    for a in d.full_arrows() {
        for v in d.dashed_arrows() {
            if d.delta[a].terms.contains_key(&Path::arrow(&d.bigraph, v)) {
                if let Ok(s) = step_regularize(d, a, v) {
                    return Some(s);
                }
            }
        }
    }
    None
}

/// X = S_s ⊕ S_t ⊕ P_α plus a simple or a localized summand at every other point.
pub fn edge_reduction(d: &Ditalgebra, alpha: usize) -> Result<ReductionStep, ReductionError> {
    let field = d.field;
    let b = b_algebra(d, &[alpha])?;
    let (s, t) = (d.arrow(alpha).source, d.arrow(alpha).target);
    let mut summands = vec![];
    for p in 0..d.points() {
        if d.base.is_rational(p) {
            summands.push(Summand::Localized { point: p, h: Poly::one(field) });
        } else {
            summands.push(Summand::Finite(DitModule::simple(&b, &field, p)));
        }
        if p == s {
            let mut dims = vec![0; d.points()];
            dims[s] = 1;
            dims[t] = 1;
            let mut pm = DitModule::with_dims(&b, &field, &dims);
            pm.arrows.insert(0, Mat::identity(&field, 1));
            summands.push(Summand::Finite(pm));
        }
    }
    let x = build_admissible(d, &[alpha], summands)?;
    step_reduce_x(d, &x)
}

fn edge_candidate(d: &Ditalgebra, w: &[usize]) -> Option<usize> {
    d.full_arrows()
        .into_iter()
        .filter(|&a| {
            let ar = d.arrow(a);
            d.delta[a].is_zero() && ar.source != ar.target && !d.base.is_rational(ar.source) && !d.base.is_rational(ar.target) && !d.absorbed.contains(&a)
        })
        .min_by_key(|&a| (w[d.arrow(a).source] + w[d.arrow(a).target], a))
}

fn loop_candidate(d: &Ditalgebra) -> Option<usize> {
    let loops: Vec<usize> = d
        .full_arrows()
        .into_iter()
        .filter(|&a| {
            let ar = d.arrow(a);
            ar.source == ar.target && d.delta[a].is_zero() && !d.base.is_rational(ar.source)
        })
        .collect();
    let lonely = |a: usize| {
        let p = d.arrow(a).source;
        d.bigraph.arrows.iter().enumerate().all(|(b, ar)| b == a || (ar.source != p && ar.target != p))
    };
    loops.iter().cloned().find(|&a| lonely(a)).or_else(|| loops.first().cloned())
}

/// Iterated deletion, factoring out, regularization, edge X-reduction and loop
/// absorption, keeping only points whose simple has image of dimension ≤ dmax.
pub fn reduce_to_minimal(d: &Ditalgebra, dmax: usize, budget: usize) -> Result<ReductionTrace, ReductionError> {
    let mut cur = d.clone();
    let mut weights = vec![1; d.points()];
    let mut steps: Vec<ReductionStep> = vec![];
    loop {
        let keep: Vec<usize> = (0..cur.points()).filter(|&p| weights[p] <= dmax && !cur.ideal_membership(&cur.idempotent(p)).unwrap_or(false)).collect();
        let next = if keep.len() < cur.points() {
            Some(step_delete(&cur, &keep)?)
        } else if cur.is_minimal() && cur.ideal.iter().all(|g| g.is_zero()) {
            return Ok(ReductionTrace { input: d.clone(), steps, weights });
        } else if let Some(fs) = Some(factor_out_candidates(&cur)).filter(|f| !f.is_empty()) {
            Some(step_factor_out(&cur, &fs)?)
        } else if let Some(s) = regularization(&cur) {
            Some(s)
        } else if let Some(a) = edge_candidate(&cur, &weights) {
            Some(edge_reduction(&cur, a)?)
        } else if let Some(a) = loop_candidate(&cur) {
            Some(step_absorb(&cur, &[a])?)
        } else {
            None
        };
        let Some(step) = next else {
            let left: Vec<String> = cur.full_arrows().iter().map(|&a| cur.arrow(a).name.clone()).collect();
            return Err(ReductionError::WildnessEncountered(format!("no reduction applies; full arrows left: {}", left.join(", "))));
        };
        if steps.len() >= budget {
            return Err(ReductionError::BudgetExceeded(steps.len()));
        }
        weights = next_weights(&step, &weights);
        cur = step.target.clone();
        steps.push(step);
    }
}

fn monic_irreducibles(field: Field, deg: usize) -> Vec<Poly> {
    match field.elements() {
        Some(els) => {
            let q = els.len();
            let mut out = vec![];
            for idx in 0..q.pow(deg as u32) {
                let mut cs = Vec::with_capacity(deg + 1);
                let mut t = idx;
                for _ in 0..deg {
                    cs.push(els[t % q].clone());
                    t /= q;
                }
                cs.push(field.one());
                let p = Poly::new(field, cs);
                if matches!(factor_squarefree(&p).as_deref(), Ok([(f, 1)]) if *f == p) {
                    out.push(p);
                }
            }
            out
        }
        None if deg == 1 => crate::ditmod::parameter_grid(field).iter().map(Poly::linear).collect(),
        None => vec![],
    }
}

/// Indecomposables of a minimal ditalgebra whose images have dimension ≤ dmax:
/// simples at trivial points, k[x]/π^a at rational points.
pub fn terminal_indecomposables(d: &Ditalgebra, weights: &[usize], dmax: usize) -> Vec<Module> {
    let field = d.field;
    let mut out = vec![];
    for p in 0..d.points() {
        if weights[p] == 0 || weights[p] > dmax {
            continue;
        }
        let Some(g) = d.base.localizer(p) else {
            out.push(DitModule::simple(d, &field, p));
            continue;
        };
        let cap = dmax / weights[p];
        for deg in 1..=cap {
            for pi in monic_irreducibles(field, deg) {
                if !g.gcd(&pi).is_constant() {
                    continue;
                }
                for a in 1..=cap / deg {
                    let mut dims = vec![0; d.points()];
                    dims[p] = deg * a;
                    let mut m = DitModule::with_dims(d, &field, &dims);
                    m.xs.insert(p, companion(&pi.pow(a)));
                    out.push(m);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Coverage {
    pub total: usize,
    pub covered: usize,
    pub missing: Vec<Module>,
}

/// Checks that every indecomposable input module of dimension ≤ dim_cap and
/// endolength ≤ d is isomorphic to the image of a terminal indecomposable.
pub fn coverage(trace: &ReductionTrace, d: usize, dim_cap: usize, budget: u128) -> Result<Coverage, ReductionError> {
    let input = &trace.input;
    let all = enumerate_indecomposables(input, dim_cap, budget).map_err(|e| ReductionError::HypothesisFailed(e.to_string()))?;
    let targets: Vec<Module> = all.into_iter().filter(|m| endolength(input, m) <= d).collect();
    let images: Vec<Module> = terminal_indecomposables(trace.terminal(), &trace.weights, dim_cap)
        .iter()
        .map(|n| trace.apply_module(n))
        .filter(|m| m.total_dim() <= dim_cap)
        .collect();
    let missing: Vec<Module> = targets.iter().filter(|m| find_iso(input, &images, m).is_none()).cloned().collect();
    Ok(Coverage { total: targets.len(), covered: targets.len() - missing.len(), missing })
}
