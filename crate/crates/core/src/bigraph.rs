//! Elementary bigraphs, their path algebras with derivations, and ditalgebra predicates.

use crate::linalg::{coordinates, span_basis};
use crate::scalars::{Field, Poly, RationalAlgebra, Scalar, ScalarError};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BigraphError {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("ideal membership undecidable: ditalgebra is not directed")]
    UndecidableForCyclic,
    #[error("invalid ditalgebra: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArrowKind {
    Full,
    Dashed,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub kind: ArrowKind,
    pub source: usize,
    pub target: usize,
}

/// Points are 0-based internally and printed 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementaryBigraph {
    pub points: usize,
    pub arrows: Vec<Arrow>,
}

impl ElementaryBigraph {
    pub fn full_arrows(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(|&i| self.arrows[i].kind == ArrowKind::Full)
    }

    pub fn dashed_arrows(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(|&i| self.arrows[i].kind == ArrowKind::Dashed)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    Trivial,
    Rational(RationalAlgebra),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinimalAlgebra {
    pub components: Vec<Component>,
}

impl MinimalAlgebra {
    pub fn trivial(n: usize) -> Self {
        MinimalAlgebra { components: vec![Component::Trivial; n] }
    }

    pub fn is_rational(&self, p: usize) -> bool {
        matches!(self.components[p], Component::Rational(_))
    }

    pub fn localizer(&self, p: usize) -> Option<&Poly> {
        match &self.components[p] {
            Component::Rational(r) => Some(&r.g),
            Component::Trivial => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    Arrow(usize),
    /// the generator x of the rational component at a point
    X(usize),
}

/// A path listed in application order: `syms[0]` acts first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub end: usize,
    pub syms: Vec<Sym>,
}

impl Path {
    pub fn trivial(p: usize) -> Path {
        Path { start: p, end: p, syms: vec![] }
    }

    pub fn arrow(bg: &ElementaryBigraph, a: usize) -> Path {
        let ar = &bg.arrows[a];
        Path { start: ar.source, end: ar.target, syms: vec![Sym::Arrow(a)] }
    }

    pub fn x(p: usize) -> Path {
        Path { start: p, end: p, syms: vec![Sym::X(p)] }
    }

    /// `self * first`: apply `first`, then `self`.
    pub fn after(&self, first: &Path) -> Option<Path> {
        if first.end != self.start {
            return None;
        }
        let mut syms = first.syms.clone();
        syms.extend(self.syms.iter().cloned());
        Some(Path { start: first.start, end: self.end, syms })
    }

    pub fn degree(&self, bg: &ElementaryBigraph) -> usize {
        self.syms.iter().filter(|s| matches!(s, Sym::Arrow(a) if bg.arrows[*a].kind == ArrowKind::Dashed)).count()
    }

    pub fn arrows(&self) -> impl Iterator<Item = usize> + '_ {
        self.syms.iter().filter_map(|s| match s {
            Sym::Arrow(a) => Some(*a),
            Sym::X(_) => None,
        })
    }

    pub fn x_count(&self) -> usize {
        self.syms.iter().filter(|s| matches!(s, Sym::X(_))).count()
    }
}

/// Finite k-linear combination of paths.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathElem {
    pub field: Field,
    pub terms: BTreeMap<Path, Scalar>,
}

impl PathElem {
    pub fn zero(field: Field) -> Self {
        PathElem { field, terms: BTreeMap::new() }
    }

    pub fn from_path(field: Field, p: Path) -> Self {
        Self::monomial(p, field.one())
    }

    pub fn monomial(p: Path, c: Scalar) -> Self {
        let field = c.field();
        let mut e = Self::zero(field);
        e.add_term(p, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, p: Path, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(p.clone()).or_insert_with(|| self.field.zero());
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (p, c) in &o.terms {
            r.add_term(p.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&self.field.int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut r = Self::zero(self.field);
        for (p, a) in &self.terms {
            r.add_term(p.clone(), a.mul(c));
        }
        r
    }

    /// Algebra product `self * first` (apply `first`, then `self`).
    pub fn mul(&self, first: &Self) -> Self {
        let mut r = Self::zero(self.field);
        for (p, a) in &self.terms {
            for (q, b) in &first.terms {
                if let Some(pq) = p.after(q) {
                    r.add_term(pq, a.mul(b));
                }
            }
        }
        r
    }

    /// The set of degrees occurring; empty for zero.
    pub fn degrees(&self, bg: &ElementaryBigraph) -> BTreeSet<usize> {
        self.terms.keys().map(|p| p.degree(bg)).collect()
    }

    pub fn is_homogeneous_of(&self, bg: &ElementaryBigraph, d: usize) -> bool {
        self.terms.keys().all(|p| p.degree(bg) == d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ditalgebra {
    pub field: Field,
    pub bigraph: ElementaryBigraph,
    pub base: MinimalAlgebra,
    /// δ of each arrow, indexed like `bigraph.arrows`
    pub delta: Vec<PathElem>,
    pub ideal: Vec<PathElem>,
    /// full arrows moved into the base layer by absorption
    pub absorbed: BTreeSet<usize>,
    pub filtration: Option<Vec<Vec<usize>>>,
}

impl Ditalgebra {
    pub fn new(field: Field, points: usize) -> Self {
        Ditalgebra {
            field,
            bigraph: ElementaryBigraph { points, arrows: vec![] },
            base: MinimalAlgebra::trivial(points),
            delta: vec![],
            ideal: vec![],
            absorbed: BTreeSet::new(),
            filtration: None,
        }
    }

    pub fn points(&self) -> usize {
        self.bigraph.points
    }

    pub fn add_arrow(&mut self, name: &str, kind: ArrowKind, source: usize, target: usize) -> usize {
        self.bigraph.arrows.push(Arrow { name: name.to_string(), kind, source, target });
        self.delta.push(PathElem::zero(self.field));
        self.bigraph.arrows.len() - 1
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.bigraph.arrows[a]
    }

    pub fn arrow_elem(&self, a: usize) -> PathElem {
        PathElem::from_path(self.field, Path::arrow(&self.bigraph, a))
    }

    pub fn idempotent(&self, p: usize) -> PathElem {
        PathElem::from_path(self.field, Path::trivial(p))
    }

    pub fn full_arrows(&self) -> Vec<usize> {
        self.bigraph.full_arrows().collect()
    }

    pub fn dashed_arrows(&self) -> Vec<usize> {
        self.bigraph.dashed_arrows().collect()
    }

    /// Full arrows not absorbed into the base.
    pub fn free_full_arrows(&self) -> Vec<usize> {
        self.bigraph.full_arrows().filter(|a| !self.absorbed.contains(a)).collect()
    }

    pub fn is_minimal(&self) -> bool {
        self.bigraph.full_arrows().next().is_none()
    }

    pub fn rational_points(&self) -> Vec<usize> {
        (0..self.points()).filter(|&p| self.base.is_rational(p)).collect()
    }

    pub fn path_degree(&self, p: &Path) -> usize {
        p.degree(&self.bigraph)
    }

    /// Graded Leibniz extension of δ: δ(st) = δ(s)t + (-1)^{deg s} s δ(t).
    pub fn apply_derivation(&self, t: &PathElem) -> PathElem {
        let mut out = PathElem::zero(self.field);
        for (p, c) in &t.terms {
            // p = s_n ... s_1 with s_1 applied first
            let n = p.syms.len();
            for k in 0..n {
                let Sym::Arrow(a) = p.syms[k] else { continue };
                let d = &self.delta[a];
                if d.is_zero() {
                    continue;
                }
                let before = Path { start: p.start, end: self.arrow(a).source, syms: p.syms[..k].to_vec() };
                let after_start = self.arrow(a).target;
                let after = Path { start: after_start, end: p.end, syms: p.syms[k + 1..].to_vec() };
                let deg_after = after.degree(&self.bigraph);
                let sign = if deg_after % 2 == 1 { self.field.int(-1) } else { self.field.one() };
                let term = PathElem::from_path(self.field, after).mul(d).mul(&PathElem::from_path(self.field, before));
                out = out.add(&term.scale(&c.mul(&sign)));
            }
        }
        out
    }

    /// Checks endpoints, degrees, and δ² = 0 on generators (strict mode).
    pub fn validate(&self, strict: bool) -> Result<(), BigraphError> {
        let n = self.points();
        if self.base.components.len() != n {
            return Err(BigraphError::Invalid("one base component per point required".into()));
        }
        let mut names = BTreeSet::new();
        for (i, a) in self.bigraph.arrows.iter().enumerate() {
            if a.source >= n || a.target >= n {
                return Err(BigraphError::Invalid(format!("arrow {} has endpoint out of range", a.name)));
            }
            if !names.insert(a.name.clone()) {
                return Err(BigraphError::Invalid(format!("duplicate arrow id {}", a.name)));
            }
            let want = if a.kind == ArrowKind::Full { 1 } else { 2 };
            for p in self.delta[i].terms.keys() {
                if p.start != a.source || p.end != a.target {
                    return Err(BigraphError::Invalid(format!("delta({}) has a term with wrong endpoints", a.name)));
                }
                if p.degree(&self.bigraph) != want {
                    return Err(BigraphError::Invalid(format!("delta({}) must have degree {want}", a.name)));
                }
            }
            if strict && !self.apply_derivation(&self.delta[i]).is_zero() {
                return Err(BigraphError::Invalid(format!("delta^2({}) != 0", a.name)));
            }
        }
        for g in &self.ideal {
            if !g.is_homogeneous_of(&self.bigraph, 0) {
                return Err(BigraphError::Invalid("ideal generators must have degree 0".into()));
            }
        }
        if let Some(f) = &self.filtration {
            if !self.check_filtration(f) {
                return Err(BigraphError::Invalid("triangular filtration witness fails".into()));
            }
        }
        Ok(())
    }

    /// Each stage's δ only involves arrows of strictly earlier stages.
    pub fn check_filtration(&self, stages: &[Vec<usize>]) -> bool {
        let mut seen = BTreeSet::new();
        let listed: BTreeSet<usize> = stages.iter().flatten().cloned().collect();
        if listed.len() != self.bigraph.arrows.len() {
            return false;
        }
        for st in stages {
            for &a in st {
                for p in self.delta[a].terms.keys() {
                    if p.arrows().any(|b| !seen.contains(&b)) {
                        return false;
                    }
                }
            }
            seen.extend(st.iter().cloned());
        }
        true
    }

    pub fn check_directed(&self) -> bool {
        // Kahn's algorithm on the mixed graph; loops are cycles
        let n = self.points();
        let mut indeg = vec![0usize; n];
        for a in &self.bigraph.arrows {
            if a.source == a.target {
                return false;
            }
            indeg[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&p| indeg[p] == 0).collect();
        let mut seen = 0;
        while let Some(p) = stack.pop() {
            seen += 1;
            for a in &self.bigraph.arrows {
                if a.source == p {
                    indeg[a.target] -= 1;
                    if indeg[a.target] == 0 {
                        stack.push(a.target);
                    }
                }
            }
        }
        seen == n
    }

    pub fn check_source(&self, i0: usize) -> bool {
        if i0 >= self.points() || self.base.is_rational(i0) {
            return false;
        }
        if self.bigraph.arrows.iter().any(|a| a.target == i0) {
            return false;
        }
        !self.ideal_membership(&self.idempotent(i0)).unwrap_or(true)
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.points()).filter(|&p| self.check_source(p)).collect()
    }

    pub fn check_stellar(&self) -> Option<usize> {
        (0..self.points()).find(|&c| self.check_source(c) && self.bigraph.full_arrows().all(|a| self.arrow(a).source == c))
    }

    /// Degree-0 paths (full arrows and x's) from `start`, bounded by arrow count and x count.
    pub fn degree0_paths_from(&self, start: usize, max_arrows: usize, max_x: usize) -> Vec<Path> {
        let mut out = vec![];
        let mut frontier = vec![Path::trivial(start)];
        while let Some(p) = frontier.pop() {
            out.push(p.clone());
            let arrows_used = p.arrows().count();
            if p.x_count() < max_x && self.base.is_rational(p.end) {
                let mut q = p.clone();
                q.syms.push(Sym::X(p.end));
                frontier.push(q);
            }
            if arrows_used < max_arrows {
                for a in self.bigraph.full_arrows() {
                    if self.arrow(a).source == p.end {
                        let mut q = p.clone();
                        q.syms.push(Sym::Arrow(a));
                        q.end = self.arrow(a).target;
                        frontier.push(q);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Decides t ∈ A·gens·A by linear algebra over all bounded products.
    pub fn ideal_membership(&self, t: &PathElem) -> Result<bool, BigraphError> {
        if t.is_zero() {
            return Ok(true);
        }
        if self.ideal.is_empty() {
            return Ok(false);
        }
        if !self.check_directed() {
            return Err(BigraphError::UndecidableForCyclic);
        }
        let n = self.points();
        let max_len = self.bigraph.full_arrows().count();
        let max_x = t.terms.keys().map(|p| p.x_count()).max().unwrap_or(0);
        let mut gens_products: Vec<PathElem> = vec![];
        for g in &self.ideal {
            for (s, e) in (0..n).flat_map(|s| (0..n).map(move |e| (s, e))) {
                let ge = self.idempotent(e).mul(g).mul(&self.idempotent(s));
                if ge.is_zero() {
                    continue;
                }
                let before: Vec<Path> = (0..n).flat_map(|o| self.degree0_paths_from(o, max_len, max_x)).filter(|q| q.end == s).collect();
                let after = self.degree0_paths_from(e, max_len, max_x);
                for q in &before {
                    for p in &after {
                        let prod = PathElem::from_path(self.field, p.clone()).mul(&ge).mul(&PathElem::from_path(self.field, q.clone()));
                        if !prod.is_zero() {
                            gens_products.push(prod);
                        }
                    }
                }
            }
        }
        let mut index: BTreeMap<Path, usize> = BTreeMap::new();
        for e in gens_products.iter().chain(std::iter::once(t)) {
            for p in e.terms.keys() {
                let k = index.len();
                index.entry(p.clone()).or_insert(k);
            }
        }
        let dim = index.len();
        let vec_of = |e: &PathElem| {
            let mut v = vec![self.field.zero(); dim];
            for (p, c) in &e.terms {
                v[index[p]] = c.clone();
            }
            v
        };
        let basis = span_basis(&self.field, dim, &gens_products.iter().map(vec_of).collect::<Vec<_>>());
        Ok(coordinates(&self.field, &basis, &vec_of(t)).is_some())
    }

    pub fn canonical_text(&self) -> String {
        crate::format::ditalgebra_to_string(self)
    }

    pub fn hash_hex(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }

    pub fn parse(src: &str) -> Result<Ditalgebra, BigraphError> {
        crate::format::parse_ditalgebra(src)
    }

    pub fn parse_elem(&self, s: &str) -> Result<PathElem, BigraphError> {
        crate::format::parse_path_elem(self, s, 0)
    }

    pub fn elem_to_string(&self, e: &PathElem) -> String {
        crate::format::path_elem_to_string(self, e)
    }
}

impl fmt::Display for Ditalgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_text())
    }
}

impl From<ScalarError> for BigraphError {
    fn from(e: ScalarError) -> Self {
        BigraphError::Parse { line: 0, col: 0, msg: e.to_string() }
    }
}

/// The shared fixtures.
pub mod fixtures {
    use super::*;

    pub fn ss(field: Field) -> Ditalgebra {
        Ditalgebra::new(field, 2)
    }

    pub fn a2(field: Field) -> Ditalgebra {
        let mut d = Ditalgebra::new(field, 2);
        d.add_arrow("a", ArrowKind::Full, 0, 1);
        d
    }

    pub fn reg(field: Field) -> Ditalgebra {
        let mut d = Ditalgebra::new(field, 2);
        let a = d.add_arrow("a", ArrowKind::Full, 0, 1);
        let v = d.add_arrow("v", ArrowKind::Dashed, 0, 1);
        d.delta[a] = d.arrow_elem(v);
        d
    }

    pub fn kron(field: Field) -> Ditalgebra {
        let mut d = Ditalgebra::new(field, 2);
        d.add_arrow("a", ArrowKind::Full, 0, 1);
        d.add_arrow("b", ArrowKind::Full, 0, 1);
        d
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    const Q: Field = Field::Rationals;

    #[test]
    fn projection_rule() {
        let d = a2(Q);
        let a = d.arrow_elem(0);
        assert_eq!(d.idempotent(1).mul(&a).mul(&d.idempotent(0)), a);
        assert!(d.idempotent(0).mul(&a).is_zero());
        assert_eq!(d.path_degree(&Path::arrow(&d.bigraph, 0)), 0);
        let r = reg(Q);
        assert_eq!(r.path_degree(&Path::arrow(&r.bigraph, 1)), 1);
        assert_eq!(r.arrow_elem(0).mul(&r.idempotent(0)), r.arrow_elem(0));
        let k = kron(Q);
        assert!(k.arrow_elem(0).mul(&k.arrow_elem(1)).is_zero());
    }

    #[test]
    fn derivation_examples() {
        let r = reg(Q);
        assert_eq!(r.apply_derivation(&r.arrow_elem(0)), r.arrow_elem(1));
        assert!(r.apply_derivation(&r.arrow_elem(1)).is_zero());
        assert!(a2(Q).apply_derivation(&a2(Q).arrow_elem(0)).is_zero());
        for p in 0..2 {
            assert!(r.apply_derivation(&r.idempotent(p)).is_zero());
        }
        assert!(r.validate(true).is_ok());
    }

    #[test]
    fn directedness() {
        assert!(kron(Q).check_directed());
        let mut l = Ditalgebra::new(Q, 1);
        l.add_arrow("l", ArrowKind::Full, 0, 0);
        assert!(!l.check_directed());
        let mut c = Ditalgebra::new(Q, 2);
        c.add_arrow("a", ArrowKind::Full, 0, 1);
        c.add_arrow("v", ArrowKind::Dashed, 1, 0);
        assert!(!c.check_directed());
    }

    #[test]
    fn sources_and_stars() {
        assert!(a2(Q).check_source(0));
        assert!(!a2(Q).check_source(1));
        assert!(ss(Q).check_source(0));
        assert_eq!(kron(Q).check_stellar(), Some(0));
        assert_eq!(ss(Q).check_stellar(), Some(0));
        let mut two = Ditalgebra::new(Q, 3);
        two.add_arrow("a", ArrowKind::Full, 0, 2);
        two.add_arrow("b", ArrowKind::Full, 1, 2);
        assert_eq!(two.check_stellar(), None);
    }

    #[test]
    fn ideal_examples() {
        let mut d = a2(Q);
        let a = d.arrow_elem(0);
        assert!(!d.ideal_membership(&a).unwrap());
        d.ideal.push(a.clone());
        assert!(d.ideal_membership(&a).unwrap());
        assert!(!d.check_source(1));
        let mut k = kron(Q);
        k.ideal.push(k.arrow_elem(0));
        assert!(!k.ideal_membership(&k.arrow_elem(1)).unwrap());
        assert!(k.ideal_membership(&k.arrow_elem(0).scale(&Q.int(3))).unwrap());
        let mut l = Ditalgebra::new(Q, 1);
        l.add_arrow("l", ArrowKind::Full, 0, 0);
        l.ideal.push(l.arrow_elem(0));
        assert_eq!(l.ideal_membership(&l.arrow_elem(0)), Err(BigraphError::UndecidableForCyclic));
    }
}
