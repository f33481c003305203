//! Finite-dimensional algebras by structure constants: radicals, idempotents, modules.

use crate::linalg::{complement, coordinates, span_basis, Mat};
use crate::scalars::{coprime_split, Field, Poly, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Vector = Vec<Scalar>;

pub fn vadd(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vsub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vscale(a: &[Scalar], c: &Scalar) -> Vector {
    a.iter().map(|x| x.mul(c)).collect()
}

pub fn vzero(field: Field, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn is_zero_vec(a: &[Scalar]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn lincomb(field: Field, n: usize, coefs: &[Scalar], vs: &[Vector]) -> Vector {
    let mut out = vzero(field, n);
    for (c, v) in coefs.iter().zip(vs) {
        if !c.is_zero() {
            out = vadd(&out, &vscale(v, c));
        }
    }
    out
}

/// Number of exhaustive candidates tolerated before switching to seeded random trials.
pub const EXHAUSTIVE_LIMIT: u64 = 4096;
const RANDOM_TRIALS: usize = 256;

/// Coefficient vectors to try: every vector when the space is small, else a seeded sample.
pub fn candidate_coefficients(field: Field, n: usize, seed: u64) -> Box<dyn Iterator<Item = Vector>> {
    if let Field::Prime(p) = field {
        let total = (p as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        if total <= EXHAUSTIVE_LIMIT {
            return Box::new((1..total).map(move |mut idx| {
                let mut v = Vec::with_capacity(n);
                for _ in 0..n {
                    v.push(field.int((idx % p as u64) as i64));
                    idx /= p as u64;
                }
                v
            }));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = if field == Field::Rationals { 40 } else { 1000 };
    Box::new((0..RANDOM_TRIALS).map(move |_| (0..n).map(|_| field.int(rng.gen_range(-range..=range))).collect()))
}

pub fn is_exhaustive(field: Field, n: usize) -> bool {
    match field {
        Field::Prime(p) => (p as u64).checked_pow(n as u32).is_some_and(|t| t <= EXHAUSTIVE_LIMIT),
        Field::Rationals => n == 0,
    }
}

/// Searches the span of `basis` (tuples of square blocks) for a tuple of invertible blocks.
pub fn find_invertible_combination(field: Field, basis: &[Vec<Mat<Scalar>>], seed: u64) -> Option<Vec<Mat<Scalar>>> {
    let Some(first) = basis.first() else { return None };
    let combine = |c: &[Scalar]| -> Vec<Mat<Scalar>> {
        (0..first.len())
            .map(|b| {
                let mut m = Mat::zeros(&field, first[b].rows, first[b].cols);
                for (ci, bm) in c.iter().zip(basis) {
                    if !ci.is_zero() {
                        m = m.add(&bm[b].scale(ci));
                    }
                }
                m
            })
            .collect()
    };
    let ok = |blocks: &[Mat<Scalar>]| blocks.iter().all(|m| m.rows == m.cols && (m.rows == 0 || m.is_invertible()));
    for i in 0..basis.len() {
        if ok(&basis[i]) {
            return Some(basis[i].clone());
        }
    }
    candidate_coefficients(field, basis.len(), seed).map(|c| combine(&c)).find(|b| ok(b))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FdAlgebra {
    pub field: Field,
    pub dim: usize,
    /// `table[i][j]` = coordinates of b_i * b_j
    pub table: Vec<Vec<Vector>>,
    pub one: Vector,
    pub labels: Vec<String>,
}

impl FdAlgebra {
    pub fn from_table(field: Field, table: Vec<Vec<Vector>>, one: Vector) -> Self {
        let dim = table.len();
        let labels = (0..dim).map(|i| format!("b{}", i + 1)).collect();
        FdAlgebra { field, dim, table, one, labels }
    }

    /// Algebra on a subspace (closed under `mul`, containing `one`) of an ambient space.
    pub fn from_basis(field: Field, basis: &[Vector], one: &[Scalar], mul: &dyn Fn(&[Scalar], &[Scalar]) -> Vector) -> Self {
        let coords = |v: &[Scalar]| coordinates(&field, basis, v).expect("subspace not closed under multiplication");
        let table = basis.iter().map(|a| basis.iter().map(|b| coords(&mul(a, b))).collect()).collect();
        Self::from_table(field, table, coords(one))
    }

    pub fn zero(&self) -> Vector {
        vzero(self.field, self.dim)
    }

    pub fn basis_elem(&self, i: usize) -> Vector {
        let mut v = self.zero();
        v[i] = self.field.one();
        v
    }

    pub fn basis(&self) -> Vec<Vector> {
        (0..self.dim).map(|i| self.basis_elem(i)).collect()
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        let mut out = self.zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai.mul(bj);
                for (k, t) in self.table[i][j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] = out[k].add(&t.mul(&c));
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[Scalar], e: u64) -> Vector {
        let mut r = self.one.clone();
        let mut b = a.to_vec();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    /// Matrix of x ↦ a·x in the basis.
    pub fn left_mat(&self, a: &[Scalar]) -> Mat<Scalar> {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul(a, &self.basis_elem(j))).collect();
        Mat::from_cols(&self.field, self.dim, &cols)
    }

    pub fn right_mat(&self, a: &[Scalar]) -> Mat<Scalar> {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul(&self.basis_elem(j), a)).collect();
        Mat::from_cols(&self.field, self.dim, &cols)
    }

    pub fn eval_poly(&self, p: &Poly, a: &[Scalar]) -> Vector {
        let mut acc = self.zero();
        for c in p.coeffs().iter().rev() {
            acc = vadd(&self.mul(&acc, a), &vscale(&self.one, c));
        }
        acc
    }

    pub fn min_poly(&self, a: &[Scalar]) -> Poly {
        let mut powers = vec![self.one.clone()];
        loop {
            let next = self.mul(powers.last().unwrap(), a);
            if let Some(c) = coordinates(&self.field, &powers, &next) {
                let mut cs: Vec<Scalar> = c.iter().map(|x| x.neg()).collect();
                cs.push(self.field.one());
                return Poly::new(self.field, cs);
            }
            powers.push(next);
        }
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.table[i][j] == self.table[j][i]))
    }

    pub fn is_idempotent(&self, e: &[Scalar]) -> bool {
        self.mul(e, e) == e
    }

    /// Basis of span{a b : a ∈ A, b ∈ B}.
    pub fn product_span(&self, a: &[Vector], b: &[Vector]) -> Vec<Vector> {
        let prods: Vec<Vector> = a.iter().flat_map(|x| b.iter().map(move |y| self.mul(x, y))).collect();
        span_basis(&self.field, self.dim, &prods)
    }

    /// Two-sided ideal generated by `gens`.
    pub fn ideal_closure(&self, gens: &[Vector]) -> Vec<Vector> {
        let mut cur = span_basis(&self.field, self.dim, gens);
        loop {
            let mut all = cur.clone();
            for v in &cur {
                for i in 0..self.dim {
                    let b = self.basis_elem(i);
                    all.push(self.mul(&b, v));
                    all.push(self.mul(v, &b));
                }
            }
            let next = span_basis(&self.field, self.dim, &all);
            if next.len() == cur.len() {
                return cur;
            }
            cur = next;
        }
    }

    pub fn is_nilpotent_subspace(&self, s: &[Vector]) -> bool {
        let mut p = span_basis(&self.field, self.dim, s);
        for _ in 0..=self.dim {
            if p.is_empty() {
                return true;
            }
            p = self.product_span(&p, s);
        }
        p.is_empty()
    }

    /// Corner algebra eAe with its basis inside A.
    pub fn corner(&self, e: &[Scalar]) -> (FdAlgebra, Vec<Vector>) {
        let gens: Vec<Vector> = (0..self.dim).map(|i| self.mul(&self.mul(e, &self.basis_elem(i)), e)).collect();
        let basis = span_basis(&self.field, self.dim, &gens);
        let alg = FdAlgebra::from_basis(self.field, &basis, e, &|x, y| self.mul(x, y));
        (alg, basis)
    }

    /// Nilpotent commutator ideal K with E/K commutative, when K is nilpotent.
    fn commutator_ideal(&self) -> Vec<Vector> {
        let mut comms = vec![];
        for i in 0..self.dim {
            for j in 0..i {
                let c = vsub(&self.table[i][j], &self.table[j][i]);
                if !is_zero_vec(&c) {
                    comms.push(c);
                }
            }
        }
        self.ideal_closure(&comms)
    }

    /// Radical of an algebra whose semisimple quotient is commutative; `None` otherwise.
    pub fn radical_if_basic_commutative(&self) -> Option<Vec<Vector>> {
        match self.field {
            Field::Rationals => {
                let j = self.trace_radical();
                let jq: Vec<Vector> = j.clone();
                // E/J commutative iff every commutator lies in J
                for i in 0..self.dim {
                    for k in 0..i {
                        let c = vsub(&self.table[i][k], &self.table[k][i]);
                        if coordinates(&self.field, &jq, &c).is_none() && !is_zero_vec(&c) {
                            return None;
                        }
                    }
                }
                Some(j)
            }
            Field::Prime(p) => {
                let k = self.commutator_ideal();
                if !self.is_nilpotent_subspace(&k) {
                    return None;
                }
                let comp = complement(&self.field, self.dim, &k);
                let mut all = k.clone();
                all.extend(comp.iter().cloned());
                let proj = |v: &[Scalar]| -> Vector { coordinates(&self.field, &all, v).unwrap()[k.len()..].to_vec() };
                // Frobenius is F_p-linear on the commutative quotient
                let frob: Vec<Vector> = comp.iter().map(|c| proj(&self.pow(c, p as u64))).collect();
                let m = comp.len();
                let fm = Mat::from_cols(&self.field, m, &frob);
                let mut s = 1;
                let mut q = p as usize;
                while q < m.max(1) {
                    q *= p as usize;
                    s += 1;
                }
                let ker = fm.pow(s).kernel();
                let mut j = k;
                for v in ker {
                    j.push(lincomb(self.field, self.dim, &v, &comp));
                }
                Some(span_basis(&self.field, self.dim, &j))
            }
        }
    }

    /// Dickson's trace-form radical (valid in characteristic 0).
    pub fn trace_radical(&self) -> Vec<Vector> {
        let n = self.dim;
        let lm: Vec<Mat<Scalar>> = (0..n).map(|i| self.left_mat(&self.basis_elem(i))).collect();
        let trace = |m: &Mat<Scalar>| (0..m.rows).fold(self.field.zero(), |acc, i| acc.add(&m[(i, i)]));
        let mut g = Mat::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = trace(&lm[i].mul(&lm[j]));
            }
        }
        g.kernel()
    }

    /// Quotient basis (complement of `sub`) and the projection onto it.
    fn quotient_coords(&self, sub: &[Vector]) -> (Vec<Vector>, Vec<Vector>) {
        let comp = complement(&self.field, self.dim, sub);
        let mut all = sub.to_vec();
        all.extend(comp.iter().cloned());
        (comp, all)
    }

    /// Whether the algebra is local; exact over F_p, and over Q exact up to the splitting assumption.
    pub fn local_radical(&self) -> Option<Vec<Vector>> {
        if self.dim == 0 {
            return None;
        }
        let j = self.radical_if_basic_commutative()?;
        let (comp, all) = self.quotient_coords(&j);
        let m = comp.len();
        let proj = |v: &[Scalar]| -> Vector { coordinates(&self.field, &all, v).unwrap()[j.len()..].to_vec() };
        let number_of_fields = match self.field {
            Field::Prime(p) => {
                let frob: Vec<Vector> = comp.iter().map(|c| proj(&self.pow(c, p as u64))).collect();
                let fm = Mat::from_cols(&self.field, m, &frob);
                fm.sub(&Mat::identity(&self.field, m)).kernel().len()
            }
            Field::Rationals => {
                if m == 1 || !comp.iter().any(|c| coprime_split(&self.min_poly(c)).is_some()) {
                    1
                } else {
                    2
                }
            }
        };
        (number_of_fields == 1).then_some(j)
    }

    pub fn is_local(&self) -> bool {
        self.local_radical().is_some()
    }

    /// Idempotent from a coprime split of a minimal polynomial (Fitting).
    fn idempotent_from(&self, a: &[Scalar]) -> Option<Vector> {
        let m = self.min_poly(a);
        let (u, v) = coprime_split(&m)?;
        let (g, s, _t) = u.ext_gcd(&v);
        // s u + t v = g, a nonzero constant
        let c = g.lc().inv()?;
        let e = self.eval_poly(&s.mul(&u).scale(&c), a);
        (!is_zero_vec(&e) && e != self.one).then_some(e)
    }

    /// A nontrivial idempotent, if the algebra is not local.
    pub fn find_idempotent(&self, seed: u64) -> Option<Vector> {
        if self.dim <= 1 {
            return None;
        }
        for i in 0..self.dim {
            if let Some(e) = self.idempotent_from(&self.basis_elem(i)) {
                return Some(e);
            }
        }
        for i in 0..self.dim {
            for j in 0..i {
                if let Some(e) = self.idempotent_from(&vadd(&self.basis_elem(i), &self.basis_elem(j))) {
                    return Some(e);
                }
            }
        }
        if self.is_local() {
            return None;
        }
        let found = candidate_coefficients(self.field, self.dim, seed).find_map(|c| self.idempotent_from(&c));
        if found.is_some() || self.field == Field::Rationals {
            return found;
        }
        // non-local over F_p: keep sampling
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
        let Field::Prime(p) = self.field else { unreachable!() };
        loop {
            let c: Vector = (0..self.dim).map(|_| self.field.int(rng.gen_range(0..p as i64))).collect();
            if let Some(e) = self.idempotent_from(&c) {
                return Some(e);
            }
        }
    }

    /// Complete set of primitive orthogonal idempotents summing to 1.
    pub fn primitive_idempotents(&self) -> Vec<Vector> {
        let mut out = vec![];
        let mut stack = vec![self.one.clone()];
        if is_zero_vec(&self.one) {
            return out;
        }
        while let Some(e) = stack.pop() {
            let (c, basis) = self.corner(&e);
            match c.find_idempotent(0x5eed + out.len() as u64) {
                Some(f) => {
                    let f = lincomb(self.field, self.dim, &f, &basis);
                    stack.push(vsub(&e, &f));
                    stack.push(f);
                }
                None => out.push(e),
            }
        }
        out
    }

    /// Full block decomposition data.
    pub fn decompose(&self) -> Decomposition {
        let idems = self.primitive_idempotents();
        let mut local_rads = vec![];
        let mut division_dims = vec![];
        for e in &idems {
            let (c, basis) = self.corner(e);
            let j = c.local_radical().or_else(|| c.radical_if_basic_commutative()).unwrap_or_default();
            division_dims.push(c.dim - j.len());
            local_rads.push(j.iter().map(|v| lincomb(self.field, self.dim, v, &basis)).collect::<Vec<_>>());
        }
        let n = idems.len();
        let mut class = vec![usize::MAX; n];
        let mut reps = vec![];
        for i in 0..n {
            if class[i] != usize::MAX {
                continue;
            }
            class[i] = reps.len();
            for j in i + 1..n {
                if class[j] == usize::MAX && self.idempotents_isomorphic(&idems[i], &idems[j], &local_rads[i]) {
                    class[j] = reps.len();
                }
            }
            reps.push(i);
        }
        Decomposition { idempotents: idems, local_radicals: local_rads, division_dims, class, representatives: reps }
    }

    fn idempotents_isomorphic(&self, ei: &[Scalar], ej: &[Scalar], rad_i: &[Vector]) -> bool {
        let side = |a: &[Scalar], b: &[Scalar]| -> Vec<Vector> {
            let gens: Vec<Vector> = (0..self.dim).map(|k| self.mul(&self.mul(a, &self.basis_elem(k)), b)).collect();
            span_basis(&self.field, self.dim, &gens)
        };
        let x = side(ei, ej);
        let y = side(ej, ei);
        let prods = self.product_span(&x, &y);
        prods.iter().any(|v| coordinates(&self.field, rad_i, v).is_none())
    }

    /// Jacobson radical: corner radicals plus the off-diagonal parts.
    pub fn radical(&self) -> Vec<Vector> {
        if self.field == Field::Rationals {
            return self.trace_radical();
        }
        if let Some(j) = self.radical_if_basic_commutative() {
            return j;
        }
        let dec = self.decompose();
        let n = dec.idempotents.len();
        let mut gens = vec![];
        for i in 0..n {
            for k in 0..n {
                let (ei, ek) = (&dec.idempotents[i], &dec.idempotents[k]);
                let block: Vec<Vector> = span_basis(
                    &self.field,
                    self.dim,
                    &(0..self.dim).map(|t| self.mul(&self.mul(ei, &self.basis_elem(t)), ek)).collect::<Vec<_>>(),
                );
                if block.is_empty() {
                    continue;
                }
                let back: Vec<Vector> = span_basis(
                    &self.field,
                    self.dim,
                    &(0..self.dim).map(|t| self.mul(&self.mul(ek, &self.basis_elem(t)), ei)).collect::<Vec<_>>(),
                );
                // x ∈ e_i J e_k iff x·y ∈ J(e_i E e_i) for all y ∈ e_k E e_i
                let rad = &dec.local_radicals[i];
                let (_, all) = self.quotient_coords(rad);
                let mut rows: Vec<Vec<Scalar>> = vec![];
                for y in &back {
                    let imgs: Vec<Vector> = block.iter().map(|x| coordinates(&self.field, &all, &self.mul(x, y)).unwrap()[rad.len()..].to_vec()).collect();
                    let width = self.dim - rad.len();
                    for r in 0..width {
                        rows.push(imgs.iter().map(|v| v[r].clone()).collect());
                    }
                }
                let sol = if rows.is_empty() {
                    (0..block.len()).map(|t| {
                        let mut v = vzero(self.field, block.len());
                        v[t] = self.field.one();
                        v
                    }).collect()
                } else {
                    Mat::from_rows(&self.field, rows, block.len()).kernel()
                };
                for s in sol {
                    gens.push(lincomb(self.field, self.dim, &s, &block));
                }
            }
        }
        span_basis(&self.field, self.dim, &gens)
    }

    /// Length of a right module M (given by the matrices of right multiplication by idempotents).
    pub fn module_length_from_ranks(&self, dec: &Decomposition, rank_of_idempotent: &dyn Fn(&[Scalar]) -> usize) -> usize {
        dec.representatives.iter().map(|&r| rank_of_idempotent(&dec.idempotents[r]) / dec.division_dims[r].max(1)).sum()
    }

    pub fn opposite(&self) -> FdAlgebra {
        let table = (0..self.dim).map(|i| (0..self.dim).map(|j| self.table[j][i].clone()).collect()).collect();
        FdAlgebra { field: self.field, dim: self.dim, table, one: self.one.clone(), labels: self.labels.clone() }
    }

    /// Left regular module.
    pub fn regular_module(&self) -> FdModule {
        FdModule { field: self.field, dim: self.dim, act: (0..self.dim).map(|i| self.left_mat(&self.basis_elem(i))).collect() }
    }

    pub fn act_of(&self, m: &FdModule, a: &[Scalar]) -> Mat<Scalar> {
        let mut out = Mat::zeros(&self.field, m.dim, m.dim);
        for (c, am) in a.iter().zip(&m.act) {
            if !c.is_zero() {
                out = out.add(&am.scale(c));
            }
        }
        out
    }

    /// Checks associativity and the unit on the basis.
    pub fn validate(&self) -> bool {
        let b = self.basis();
        for x in &b {
            if self.mul(&self.one, x) != *x || self.mul(x, &self.one) != *x {
                return false;
            }
            for y in &b {
                for z in &b {
                    if self.mul(&self.mul(x, y), z) != self.mul(x, &self.mul(y, z)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Algebra of all n×n matrices over k.
    pub fn matrix_algebra(field: Field, n: usize) -> FdAlgebra {
        let idx = |i: usize, j: usize| i * n + j;
        let d = n * n;
        let mut table = vec![vec![vzero(field, d); d]; d];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    table[idx(i, j)][idx(j, l)][idx(i, l)] = field.one();
                }
            }
        }
        let mut one = vzero(field, d);
        for i in 0..n {
            one[idx(i, i)] = field.one();
        }
        let mut a = FdAlgebra::from_table(field, table, one);
        a.labels = (0..n).flat_map(|i| (0..n).map(move |j| format!("E{}{}", i + 1, j + 1))).collect();
        a
    }

    /// k[t]/(t^n) with basis 1, t, ..., t^{n-1}.
    pub fn truncated_polynomials(field: Field, n: usize) -> FdAlgebra {
        let mut table = vec![vec![vzero(field, n); n]; n];
        for i in 0..n {
            for j in 0..n {
                if i + j < n {
                    table[i][j][i + j] = field.one();
                }
            }
        }
        let mut a = FdAlgebra::from_table(field, table, {
            let mut o = vzero(field, n);
            o[0] = field.one();
            o
        });
        a.labels = (0..n).map(|i| if i == 0 { "1".into() } else { format!("t{i}") }).collect();
        a
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub idempotents: Vec<Vector>,
    /// radicals of the local corners e_i E e_i, in ambient coordinates
    pub local_radicals: Vec<Vec<Vector>>,
    pub division_dims: Vec<usize>,
    /// isomorphism class of each idempotent
    pub class: Vec<usize>,
    pub representatives: Vec<usize>,
}

/// Left module over an FdAlgebra: one matrix per basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct FdModule {
    pub field: Field,
    pub dim: usize,
    pub act: Vec<Mat<Scalar>>,
}

impl FdModule {
    pub fn zero(field: Field, alg_dim: usize) -> Self {
        FdModule { field, dim: 0, act: vec![Mat::zeros(&field, 0, 0); alg_dim] }
    }

    pub fn is_module_over(&self, a: &FdAlgebra) -> bool {
        if self.act.len() != a.dim || !a.act_of(self, &a.one).sub(&Mat::identity(&self.field, self.dim)).is_zero() {
            return false;
        }
        for i in 0..a.dim {
            for j in 0..a.dim {
                let lhs = self.act[i].mul(&self.act[j]);
                if lhs != a.act_of(self, &a.table[i][j]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn direct_sum(&self, o: &FdModule) -> FdModule {
        FdModule { field: self.field, dim: self.dim + o.dim, act: self.act.iter().zip(&o.act).map(|(a, b)| a.direct_sum(b)).collect() }
    }

    /// Basis of Hom_A(self, other) as matrices other.dim × self.dim.
    pub fn hom(&self, other: &FdModule) -> Vec<Mat<Scalar>> {
        let (m, n) = (self.dim, other.dim);
        let field = self.field;
        if m == 0 || n == 0 {
            return vec![];
        }
        let var = |i: usize, j: usize| i * m + j;
        let mut rows = vec![];
        for (am, an) in self.act.iter().zip(&other.act) {
            // f am - an f = 0
            for i in 0..n {
                for j in 0..m {
                    let mut row = vzero(field, n * m);
                    for k in 0..m {
                        row[var(i, k)] = row[var(i, k)].add(&am[(k, j)]);
                    }
                    for k in 0..n {
                        row[var(k, j)] = row[var(k, j)].sub(&an[(i, k)]);
                    }
                    if !is_zero_vec(&row) {
                        rows.push(row);
                    }
                }
            }
        }
        let ker = if rows.is_empty() {
            Mat::<Scalar>::identity(&field, n * m).column_space()
        } else {
            Mat::from_rows(&field, rows, n * m).kernel()
        };
        ker.into_iter().map(|v| Mat::from_vec(&field, n, m, v)).collect()
    }

    /// End(M)^op as an algebra; elements are endomorphisms with product f·g = g∘f.
    pub fn end_algebra(&self) -> (FdAlgebra, Vec<Mat<Scalar>>) {
        let basis = self.hom(self);
        let field = self.field;
        let flat: Vec<Vector> = basis.iter().map(|m| m.data().to_vec()).collect();
        let n = self.dim;
        let id = Mat::<Scalar>::identity(&field, n).data().to_vec();
        let alg = FdAlgebra::from_basis(field, &flat, &id, &|x, y| {
            let fx = Mat::from_vec(&field, n, n, x.to_vec());
            let fy = Mat::from_vec(&field, n, n, y.to_vec());
            fy.mul(&fx).data().to_vec()
        });
        (alg, basis)
    }

    pub fn is_indecomposable(&self) -> bool {
        self.dim > 0 && self.end_algebra().0.is_local()
    }

    pub fn is_isomorphic(&self, other: &FdModule) -> Option<Mat<Scalar>> {
        if self.dim != other.dim {
            return None;
        }
        if self.dim == 0 {
            return Some(Mat::zeros(&self.field, 0, 0));
        }
        let basis: Vec<Vec<Mat<Scalar>>> = self.hom(other).into_iter().map(|m| vec![m]).collect();
        if basis.len() != other.hom(self).len() || basis.len() != self.hom(self).len() {
            return None;
        }
        find_invertible_combination(self.field, &basis, 0x150).map(|mut v| v.remove(0))
    }

    /// Smallest submodule containing the given vectors; returns a basis.
    pub fn submodule_span(&self, gens: &[Vector]) -> Vec<Vector> {
        let mut cur = span_basis(&self.field, self.dim, gens);
        loop {
            let mut all = cur.clone();
            for v in &cur {
                for a in &self.act {
                    all.push(a.mul_vec(v));
                }
            }
            let next = span_basis(&self.field, self.dim, &all);
            if next.len() == cur.len() {
                return cur;
            }
            cur = next;
        }
    }

    /// The submodule on an invariant subspace, in the given basis.
    pub fn restrict(&self, basis: &[Vector]) -> FdModule {
        let act = self
            .act
            .iter()
            .map(|a| {
                let cols: Vec<Vector> = basis.iter().map(|v| coordinates(&self.field, basis, &a.mul_vec(v)).expect("subspace not invariant")).collect();
                Mat::from_cols(&self.field, basis.len(), &cols)
            })
            .collect();
        FdModule { field: self.field, dim: basis.len(), act }
    }

    /// Quotient by an invariant subspace, with the complement basis used.
    pub fn quotient(&self, sub: &[Vector]) -> (FdModule, Vec<Vector>) {
        let comp = complement(&self.field, self.dim, sub);
        let mut all = sub.to_vec();
        all.extend(comp.iter().cloned());
        let k = sub.len();
        let act = self
            .act
            .iter()
            .map(|a| {
                let cols: Vec<Vector> = comp.iter().map(|v| coordinates(&self.field, &all, &a.mul_vec(v)).unwrap()[k..].to_vec()).collect();
                Mat::from_cols(&self.field, comp.len(), &cols)
            })
            .collect();
        (FdModule { field: self.field, dim: comp.len(), act }, comp)
    }

    /// J·M for a radical basis J.
    pub fn radical_of(&self, alg: &FdAlgebra, rad: &[Vector]) -> Vec<Vector> {
        let mut gens = vec![];
        for r in rad {
            let m = alg.act_of(self, r);
            gens.extend(m.column_space());
        }
        span_basis(&self.field, self.dim, &gens)
    }
}
