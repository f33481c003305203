use ditalg::bigraph::{fixtures, ArrowKind, Ditalgebra};
use ditalg::ditmod::{are_isomorphic, endolength, enumerate_indecomposables, hom_space, is_indecomposable, Module};
use ditalg::generic::{check_specializations, endolength_kx, generic_census, KxModule};
use ditalg::linalg::Mat;
use ditalg::qhbridge::{check_quasi_hereditary, delta_filtration, enumerate_fd_modules, fd_endolength, path_algebra_an, right_algebra, standard_modules};
use ditalg::reduction::driver::{coverage, edge_reduction};
use ditalg::reduction::{fitting_split, reduce_to_minimal, step_absorb, step_delete, step_detach, step_factor_out, step_regularize, ReductionStep, StepKind};
use ditalg::scalars::{Field, Fld, Poly, RatFunc, Scalar};
use ditalg::fdalg::FdAlgebra;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

const F2: Field = Field::Prime(2);
const Q: Field = Field::Rationals;
const BUDGET: u128 = 1 << 24;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn arrow(d: &Ditalgebra, name: &str) -> usize {
    d.bigraph.arrow_index(name).unwrap()
}

fn a2_with_ideal(field: Field) -> Ditalgebra {
    let mut d = fixtures::a2(field);
    d.ideal = vec![d.arrow_elem(0)];
    d
}

/// Indecomposables of dimension ≤ cap and their pairwise sums within the cap.
fn modules_upto(d: &Ditalgebra, cap: usize) -> Vec<Module> {
    let ind = enumerate_indecomposables(d, cap, BUDGET).unwrap();
    let mut out = ind.clone();
    for (i, m) in ind.iter().enumerate() {
        for n in &ind[i..] {
            if m.total_dim() + n.total_dim() <= cap {
                out.push(m.direct_sum(n));
            }
        }
    }
    out
}

fn elementary_steps() -> Vec<(String, ReductionStep)> {
    let ss = fixtures::ss(F2);
    let a2 = fixtures::a2(F2);
    let reg = fixtures::reg(F2);
    vec![
        ("d on SS".into(), step_delete(&ss, &[0]).unwrap()),
        ("d on A2".into(), step_delete(&a2, &[1]).unwrap()),
        ("d on REG".into(), step_delete(&reg, &[0, 1]).unwrap()),
        ("r on REG".into(), step_regularize(&reg, arrow(&reg, "a"), arrow(&reg, "v")).unwrap()),
        ("q on A2/(a)".into(), step_factor_out(&a2_with_ideal(F2), &[0]).unwrap()),
        ("a on A2".into(), step_absorb(&a2, &[0]).unwrap()),
    ]
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for (name, s) in elementary_steps() {
        for n in modules_upto(s.input(), 4) {
            let im = s.apply_module(&n);
            let (a, b) = (endolength(s.output(), &im), endolength(s.input(), &n));
            ensure(a == b, || format!("{name}: endolength {a} ≠ {b} for dims {:?}", n.dims))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} modules across d, r, q, a"))
}

fn x_steps() -> Vec<(String, ReductionStep)> {
    let mut out = vec![];
    for (fx, d) in [("A2", fixtures::a2(F2)), ("KRON", fixtures::kron(F2))] {
        let t = reduce_to_minimal(&d, 3, 64).unwrap();
        for (i, s) in t.steps.into_iter().enumerate() {
            if s.kind == StepKind::X {
                out.push((format!("{fx} step {}", i + 1), s));
            }
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let (mut strict, mut tight, mut checked) = (0, 0, 0);
    let steps = x_steps();
    for (name, s) in &steps {
        for n in enumerate_indecomposables(&s.target, 3, BUDGET).unwrap() {
            let lhs = endolength(&s.source, &s.apply_module(&n));
            let rhs = s.factor * endolength(&s.target, &n);
            ensure(lhs <= rhs, || format!("{name}: {lhs} > {rhs}"))?;
            if lhs < rhs {
                strict += 1;
            } else {
                tight += 1;
            }
            checked += 1;
        }
    }
    ensure(strict > 0 && tight > 0, || format!("strict {strict}, tight {tight}"))?;
    Ok(format!("{} X-steps, {checked} modules, {strict} strict, {tight} tight", steps.len()))
}

fn criterion_3() -> Outcome {
    let mut steps = elementary_steps();
    for d in [fixtures::a2(F2), fixtures::kron(F2)] {
        steps.push(("X".into(), edge_reduction(&d, 0).unwrap()));
    }
    let mut pairs = 0;
    for (name, s) in &steps {
        let mods = enumerate_indecomposables(s.input(), 3, BUDGET).unwrap();
        let imgs: Vec<Module> = mods.iter().map(|m| s.apply_module(m)).collect();
        for (i, m) in mods.iter().enumerate() {
            ensure(is_indecomposable(s.output(), &imgs[i]).unwrap(), || format!("{name}: image of {:?} decomposes", m.dims))?;
            for (j, n) in mods.iter().enumerate() {
                let (h, hi) = (hom_space(s.input(), m, n).len(), hom_space(s.output(), &imgs[i], &imgs[j]).len());
                ensure(h == hi, || format!("{name}: Hom dims {h} ≠ {hi}"))?;
                if i != j {
                    ensure(are_isomorphic(s.output(), &imgs[i], &imgs[j]).is_none(), || format!("{name}: images of non-isomorphic modules are isomorphic"))?;
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{} steps, {pairs} pairs", steps.len()))
}

fn criterion_4() -> Outcome {
    let mut parts = vec![];
    for (name, d) in [("A2", fixtures::a2(F2)), ("KRON", fixtures::kron(F2))] {
        let t = reduce_to_minimal(&d, 3, 64).map_err(|e| e.to_string())?;
        let c = coverage(&t, 3, 4, BUDGET).map_err(|e| e.to_string())?;
        ensure(c.missing.is_empty() && c.total > 0, || format!("{name}: {}/{}", c.covered, c.total))?;
        parts.push(format!("{name} {}/{}", c.covered, c.total));
    }
    Ok(parts.join(", "))
}

fn detach_fixture(reg: bool, ideal: bool) -> Ditalgebra {
    let mut d = Ditalgebra::new(F2, 3);
    d.add_arrow("c", ArrowKind::Full, 0, 1);
    let a = d.add_arrow("a", ArrowKind::Full, 1, 2);
    let v = d.add_arrow("v", ArrowKind::Dashed, 1, 2);
    if reg {
        d.delta[a] = d.arrow_elem(v);
    }
    if ideal {
        d.ideal = vec![d.arrow_elem(a)];
    }
    d
}

fn criterion_5() -> Outcome {
    type Z = Box<dyn Fn(&Ditalgebra) -> ReductionStep>;
    let cases: Vec<(&str, Ditalgebra, Z)> = vec![
        ("d", detach_fixture(false, false), Box::new(|d| step_delete(d, &[0, 1]).unwrap())),
        ("r", detach_fixture(true, false), Box::new(|d| step_regularize(d, arrow(d, "a"), arrow(d, "v")).unwrap())),
        ("q", detach_fixture(false, true), Box::new(|d| step_factor_out(d, &[arrow(d, "a")]).unwrap())),
        ("a", detach_fixture(false, false), Box::new(|d| step_absorb(d, &[arrow(d, "a")]).unwrap())),
        ("X", detach_fixture(false, false), Box::new(|d| edge_reduction(d, arrow(d, "a")).unwrap())),
    ];
    let mut checked = 0;
    for (z, d, step) in &cases {
        let s = step(d);
        let res = step_detach(d, 0).unwrap();
        let res_z = step_detach(&s.target, 0).unwrap();
        let s_det = step(&res.target);
        ensure(s_det.target.hash_hex() == res_z.target.hash_hex(), || format!("{z}: detached targets differ"))?;
        for n in enumerate_indecomposables(&s.target, 3, BUDGET).unwrap() {
            let lhs = res.apply_module(&s.apply_module(&n));
            let rhs = s_det.apply_module(&res_z.apply_module(&n));
            ensure(are_isomorphic(&res.target, &lhs, &rhs).is_some(), || format!("{z}: square fails on dims {:?}", n.dims))?;
            checked += 1;
        }
    }
    Ok(format!("d, r, q, a, X squares on {checked} modules"))
}

fn criterion_6() -> Outcome {
    let d = fixtures::a2(F2);
    let ra = right_algebra(&d).map_err(|e| e.to_string())?;
    ensure(ra.gamma.dim == 3 && ra.equals_abar(), || format!("dim Γ = {}", ra.gamma.dim))?;
    let (mut gtotal, mut filtered, mut unfiltered) = (0, 0, 0);
    for (name, dd, cap) in [("A2", d.clone(), 4), ("REG", fixtures::reg(F2), 4), ("KRON", fixtures::kron(F2), 3)] {
        let r = right_algebra(&dd).map_err(|e| e.to_string())?;
        let dp = r.standard_like();
        let induced: Vec<_> = enumerate_indecomposables(&dd, cap, BUDGET).unwrap().iter().map(|m| r.induce(m)).collect();
        let gmods = enumerate_fd_modules(&r.gamma, cap, BUDGET).map_err(|e| e.to_string())?;
        for x in &gmods {
            let is_induced = induced.iter().any(|i| i.is_isomorphic(x).is_some());
            let w = delta_filtration(&dp, x).map_err(|e| e.to_string())?;
            match &w {
                Some(w) => {
                    ensure(w.verify(&dp, x), || format!("{name}: filtration witness does not verify"))?;
                    filtered += 1;
                }
                None => unfiltered += 1,
            }
            ensure(is_induced == w.is_some(), || format!("{name}: Γ-module of dim {}: induced {is_induced}, filtered {}", x.dim, w.is_some()))?;
        }
        gtotal += gmods.len();
    }
    let mut endo = 0;
    for (name, dd) in [("A2", d.clone()), ("KRON", fixtures::kron(F2)), ("REG", fixtures::reg(F2))] {
        let r = right_algebra(&dd).map_err(|e| e.to_string())?;
        for n in enumerate_indecomposables(&dd, 4, BUDGET).unwrap() {
            let (e, eh) = (endolength(&dd, &n), fd_endolength(&r.functor_h(&n)));
            ensure(e <= eh && eh <= r.gamma.dim * e, || format!("{name}: Endol {e}, Endol H {eh}, dim Γ {}", r.gamma.dim))?;
            endo += 1;
        }
    }
    Ok(format!("dim Γ = 3 = Ā; {gtotal} Γ-indecomposables: {filtered} induced and filtered, {unfiltered} neither; endolength bounds on {endo} modules"))
}

fn criterion_7() -> Outcome {
    let lam = path_algebra_an(Q, 2);
    let delta = standard_modules(&lam, &lam.decompose().idempotents);
    let pass = check_quasi_hereditary(&lam, &delta).map_err(|e| e.to_string())?;
    ensure(pass.passed(), || format!("kA2 conditions {:?}", pass.conditions))?;
    let t = FdAlgebra::truncated_polynomials(Q, 2);
    let dt = standard_modules(&t, &t.decompose().idempotents);
    let fail = check_quasi_hereditary(&t, &dt).map_err(|e| e.to_string())?;
    ensure(!fail.passed(), || "k[t]/(t²) passed".into())?;
    Ok(format!("kA2 {:?}, k[t]/(t²) {:?}", pass.conditions, fail.conditions))
}

fn criterion_8() -> Outcome {
    let d = fixtures::kron(Q);
    let census = generic_census(&d, 2, 64).map_err(|e| e.to_string())?;
    ensure(census.entries.len() == 1, || format!("{} realizations", census.entries.len()))?;
    let e = &census.entries[0];
    let g = &e.realization.z;
    let kx_dim = g.total_dim();
    ensure(e.realization.rank == 2 && kx_dim == 2 && e.endolength.length == 2, || format!("rank {}, dim {kx_dim}, endolength {}", e.realization.rank, e.endolength.length))?;
    let split = endolength_kx(&d, g).map_err(|e| e.to_string())?;
    ensure(split.end_dim == 1, || format!("dim End = {}", split.end_dim))?;
    let x = RatFunc::x(Q);
    let mut classical = KxModule::with_dims(&d, &Q, &[1, 1]);
    classical.arrows.insert(0, Mat::identity(&Q, 1));
    classical.arrows.insert(1, Mat::scalar(&Q, 1, &x));
    let iso = hom_space(&d, g, &classical).iter().any(|f| f.f0.iter().all(|m| m.rows == 1 && !m[(0, 0)].is_zero()));
    ensure(iso, || "realized G is not the classical generic Kronecker module".into())?;
    let mods = check_specializations(&d, &e.realization, 5)?;
    ensure(mods.iter().all(|m| m.total_dim() == 2), || "specialization of wrong dimension".into())?;
    Ok("one realization, rank 2 = dim G = Endol G, End = k(x), 5 specializations".into())
}

fn criterion_9() -> Outcome {
    let mut rows = vec![];
    for (name, d) in [("SS", fixtures::ss(F2)), ("A2", fixtures::a2(F2)), ("REG", fixtures::reg(F2)), ("KRON/F2", fixtures::kron(F2)), ("KRON/Q", fixtures::kron(Q))] {
        for k in 1..=3 {
            let c = generic_census(&d, k, 64).map_err(|e| format!("{name} d={k}: {e}"))?;
            ensure(c.entries.len() <= c.rational_points, || format!("{name} d={k}: {} > {}", c.entries.len(), c.rational_points))?;
            rows.push(format!("{name}@{k}:{}/{}", c.entries.len(), c.rational_points));
        }
    }
    Ok(rows.join(" "))
}

fn random_int(rng: &mut ChaCha8Rng) -> Scalar {
    Q.int(rng.gen_range(-3..=3))
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Mat<Scalar> {
    loop {
        let m = Mat::from_vec(&Q, n, n, (0..n * n).map(|_| random_int(rng)).collect());
        if m.rank() == n {
            return m;
        }
    }
}

fn eval_poly(h: &Poly, m: &Mat<Scalar>) -> Mat<Scalar> {
    ditalg::ditmod::poly_at_matrix(&Q, h, m)
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let hs = [("x", vec![0]), ("x-1", vec![1]), ("x(x-1)", vec![0, 1])];
    for trial in 0..50 {
        let (hname, roots) = &hs[trial % 3];
        let h = roots.iter().fold(Poly::one(Q), |acc, r| acc.mul(&Poly::linear(&Q.int(*r))));
        let dd = 1 + trial % 2;
        let n = rng.gen_range(1..=6);
        let nil = rng.gen_range(0..=n);
        // blocks r·I + J with J nilpotent of index ≤ dd at roots of h
        let mut j = Mat::zeros(&Q, nil, nil);
        let mut i = 0;
        while i < nil {
            let size = rng.gen_range(1..=dd).min(nil - i);
            let r = Q.int(roots[rng.gen_range(0..roots.len())]);
            for k in 0..size {
                j[(i + k, i + k)] = r.clone();
                if k + 1 < size {
                    j[(i + k, i + k + 1)] = Q.one();
                }
            }
            i += size;
        }
        let inv = loop {
            let a = Mat::from_vec(&Q, n - nil, n - nil, (0..(n - nil) * (n - nil)).map(|_| random_int(&mut rng)).collect());
            if eval_poly(&h, &a).rank() == n - nil {
                break a;
            }
        };
        let p = random_invertible(&mut rng, n);
        let m = p.mul(&inv.direct_sum(&j)).mul(&p.inverse().unwrap());
        let (ps, pn) = fitting_split(&m, &h, dd);
        let id = Mat::identity(&Q, n);
        let ctx = || format!("trial {trial}: h = {hname}, n = {n}, d = {dd}");
        ensure(ps.add(&pn) == id, || format!("{}: projections do not sum to 1", ctx()))?;
        ensure(ps.mul(&ps) == ps && pn.mul(&pn) == pn && ps.mul(&pn).is_zero(), || format!("{}: not orthogonal idempotents", ctx()))?;
        ensure(ps.mul(&m) == m.mul(&ps), || format!("{}: summands not invariant", ctx()))?;
        ensure(ps.rank() == n - nil, || format!("{}: invertible part has rank {}", ctx(), ps.rank()))?;
        let hm = eval_poly(&h, &m);
        ensure(hm.mul(&ps).rank() == ps.rank(), || format!("{}: h not invertible on the first summand", ctx()))?;
        ensure(hm.pow(dd).mul(&pn).is_zero(), || format!("{}: h^d does not kill the second summand", ctx()))?;
    }
    Ok("50 random matrices".into())
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("endolength preservation", criterion_1),
        ("μ(X) bound", criterion_2),
        ("full, faithful, iso and indecomposability preserving", criterion_3),
        ("reduction-to-minimal coverage", criterion_4),
        ("source-commutation squares", criterion_5),
        ("right-algebra bridge", criterion_6),
        ("quasi-heredity", criterion_7),
        ("generic realization", criterion_8),
        ("census finiteness", criterion_9),
        ("Fitting split", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
