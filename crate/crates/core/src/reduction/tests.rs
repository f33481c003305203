use super::driver::{coverage, edge_reduction};
use super::*;
use crate::bigraph::fixtures;
use crate::ditmod::{compose, endolength, enumerate_indecomposables, find_iso, hom_space, Module};
use crate::linalg::Mat;
use crate::scalars::Field;

const F2: Field = Field::Prime(2);
const Q: Field = Field::Rationals;

fn delta_squared_zero(d: &Ditalgebra) {
    for a in 0..d.bigraph.arrows.len() {
        let dd = d.apply_derivation(&d.delta[a]);
        assert!(dd.is_zero(), "δ² ≠ 0 on {}: {}", d.arrow(a).name, d.elem_to_string(&dd));
    }
}

/// Functor checks on modules of the step's input: valid images, Hom dims, composition.
fn check_functor(step: &ReductionStep, mods: &[Module], faithful: bool) {
    let (inp, out) = (step.input(), step.output());
    let imgs: Vec<Module> = mods.iter().map(|m| step.apply_module(m)).collect();
    for im in &imgs {
        im.validate(out).unwrap();
    }
    for (i, m) in mods.iter().enumerate() {
        for (j, n) in mods.iter().enumerate() {
            let h = hom_space(inp, m, n);
            if faithful {
                assert_eq!(h.len(), hom_space(out, &imgs[i], &imgs[j]).len());
            }
            for f in &h {
                let ff = step.apply_morphism(m, n, f);
                assert!(ff.is_morphism(out, &imgs[i], &imgs[j]));
                for g in hom_space(inp, n, m) {
                    let gf = compose(inp, m, n, m, &g, f);
                    let lhs = step.apply_morphism(m, m, &gf);
                    let rhs = compose(out, &imgs[i], &imgs[j], &imgs[i], &step.apply_morphism(n, m, &g), &ff);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn deletion_examples() {
    let ss = fixtures::ss(F2);
    let s = step_delete(&ss, &[0]).unwrap();
    assert_eq!(s.target.points(), 1);
    let img = s.apply_module(&Module::simple(&s.target, &F2, 0));
    assert_eq!(img.dims, vec![1, 0]);
    let a2 = fixtures::a2(F2);
    let s = step_delete(&a2, &[1]).unwrap();
    assert!(s.target.bigraph.arrows.is_empty());
    let all = step_delete(&a2, &[0, 1]).unwrap();
    assert_eq!(all.target.hash_hex(), a2.hash_hex());
    assert!(step_delete(&a2, &[5]).is_err());
    check_functor(&s, &enumerate_indecomposables(&s.target, 2, 1 << 20).unwrap(), true);
}

#[test]
fn regularization_examples() {
    let reg = fixtures::reg(Q);
    let s = step_regularize(&reg, 0, 1).unwrap();
    assert_eq!(s.target.hash_hex(), fixtures::ss(Q).hash_hex());
    assert!(s.equivalence);
    let mods = enumerate_indecomposables(&s.target, 2, 1 << 20).unwrap();
    check_functor(&s, &mods, true);
    let a2 = fixtures::a2(Q);
    assert!(matches!(step_regularize(&a2, 0, 0), Err(ReductionError::DecompositionInvalid(_))));
}

#[test]
fn factor_out_and_absorb() {
    let mut a2 = fixtures::a2(F2);
    assert!(matches!(step_factor_out(&a2, &[0]), Err(ReductionError::HypothesisFailed(_))));
    a2.ideal = vec![a2.arrow_elem(0)];
    let s = step_factor_out(&a2, &[0]).unwrap();
    assert_eq!(s.target.hash_hex(), fixtures::ss(F2).hash_hex());
    let a = step_absorb(&fixtures::a2(F2), &[0]).unwrap();
    assert_eq!(a.target.absorbed.len(), 1);
    check_functor(&a, &enumerate_indecomposables(&a.target, 2, 1 << 20).unwrap(), true);
    assert!(step_absorb(&fixtures::reg(F2), &[0]).is_err());
}

#[test]
fn loop_becomes_rational_point() {
    let mut d = Ditalgebra::new(Q, 1);
    d.add_arrow("l", ArrowKind::Full, 0, 0);
    let s = step_absorb(&d, &[0]).unwrap();
    assert!(s.target.is_minimal());
    assert!(s.target.base.is_rational(0));
    let mut n = Module::with_dims(&s.target, &Q, &[2]);
    n.xs.insert(0, Mat::from_vec(&Q, 2, 2, vec![Q.int(1), Q.int(1), Q.int(0), Q.int(1)]));
    let m = s.apply_module(&n);
    assert_eq!(m.arrows[&0], n.xs[&0]);
}

#[test]
fn x_reduction_on_a2() {
    let a2 = fixtures::a2(F2);
    let s = edge_reduction(&a2, 0).unwrap();
    assert_eq!(s.target.points(), 3);
    assert!(s.target.bigraph.full_arrows().next().is_none());
    delta_squared_zero(&s.target);
    let srcs = enumerate_indecomposables(&a2, 2, 1 << 20).unwrap();
    let simples: Vec<Module> = (0..3).map(|p| Module::simple(&s.target, &F2, p)).collect();
    let imgs: Vec<Module> = simples.iter().map(|n| s.apply_module(n)).collect();
    for m in &srcs {
        assert!(find_iso(&a2, &imgs, m).is_some());
    }
    check_functor(&s, &simples, true);
    assert_eq!(s.factor, 2);
}

#[test]
fn x_reduction_on_kronecker() {
    let k = fixtures::kron(F2);
    let s = edge_reduction(&k, 0).unwrap();
    assert_eq!(s.target.points(), 3);
    delta_squared_zero(&s.target);
    let mods = enumerate_indecomposables(&s.target, 2, 1 << 22).unwrap();
    check_functor(&s, &mods, true);
    for m in &mods {
        let im = s.apply_module(m);
        assert!(endolength(&k, &im) <= s.factor * endolength(&s.target, m));
    }
}

#[test]
fn fitting_examples() {
    let x = Poly::x(Q);
    let (ps, pn) = fitting_split(&Mat::from_vec(&Q, 1, 1, vec![Q.int(0)]), &x, 1);
    assert!(ps.is_zero() && pn == Mat::identity(&Q, 1));
    let (ps, _) = fitting_split(&Mat::from_vec(&Q, 1, 1, vec![Q.int(2)]), &x, 1);
    assert_eq!(ps, Mat::identity(&Q, 1));
    let (ps, pn) = fitting_split(&Mat::from_vec(&Q, 2, 2, vec![Q.int(0), Q.int(0), Q.int(0), Q.int(2)]), &x, 1);
    assert_eq!((ps.rank(), pn.rank()), (1, 1));
}

#[test]
fn unravelling_counts() {
    let mut d = Ditalgebra::new(Q, 1);
    d.add_arrow("l", ArrowKind::Full, 0, 0);
    let r = step_absorb(&d, &[0]).unwrap().target;
    let s = step_unravel(&r, &[(0, Poly::x(Q))], 1).unwrap();
    assert_eq!(s.target.points(), 2);
    let h = Poly::x(Q).mul(&Poly::linear(&Q.int(1)));
    assert_eq!(step_unravel(&r, &[(0, h)], 2).unwrap().target.points(), 5);
    assert_eq!(step_unravel(&r, &[(0, Poly::one(Q))], 2).unwrap().target.points(), 1);
    let s = step_unravel(&r, &[(0, Poly::x(Q))], 2).unwrap();
    delta_squared_zero(&s.target);
    let mods = enumerate_indecomposables(&s.target, 2, 1 << 20).unwrap();
    check_functor(&s, &mods, true);
}

#[test]
fn driver_on_fixtures() {
    assert!(reduce_to_minimal(&fixtures::ss(F2), 3, 50).unwrap().steps.is_empty());
    let t = reduce_to_minimal(&fixtures::reg(F2), 3, 50).unwrap();
    assert_eq!(t.steps.len(), 1);
    assert_eq!(t.steps[0].kind, StepKind::Regularize);
    let t = reduce_to_minimal(&fixtures::a2(F2), 2, 50).unwrap();
    assert_eq!(t.terminal().points(), 3);
    assert!(t.terminal().is_minimal());
    let c = coverage(&t, 2, 2, 1 << 20).unwrap();
    assert_eq!(c.covered, c.total);
    let back = ReductionTrace::from_json(&t.input, &t.to_json()).unwrap();
    assert_eq!(back.terminal().hash_hex(), t.terminal().hash_hex());
}

#[test]
fn driver_on_kronecker() {
    let k = fixtures::kron(F2);
    let t = reduce_to_minimal(&k, 3, 200).unwrap();
    assert!(t.terminal().is_minimal());
    let c = coverage(&t, 3, 4, 1 << 24).unwrap();
    assert_eq!(c.covered, c.total, "missing {:?}", c.missing.iter().map(|m| m.dims.clone()).collect::<Vec<_>>());
}

/// c: 1 → 2, a: 2 → 3 full; v: 2 → 3 dashed.
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

/// Res ∘ F^z ≅ F^{⊝z} ∘ Res on the indecomposables of the target of z.
fn square_commutes(d: &Ditalgebra, z: &dyn Fn(&Ditalgebra) -> ReductionStep) {
    let step = z(d);
    let res = step_detach(d, 0).unwrap();
    let res_z = step_detach(&step.target, 0).unwrap();
    let step_det = z(&res.target);
    assert_eq!(step_det.target.hash_hex(), res_z.target.hash_hex());
    for n in enumerate_indecomposables(&step.target, 2, 1 << 20).unwrap() {
        let lhs = res.apply_module(&step.apply_module(&n));
        let rhs = step_det.apply_module(&res_z.apply_module(&n));
        assert!(crate::ditmod::are_isomorphic(&res.target, &lhs, &rhs).is_some());
    }
}

#[test]
fn detach_squares() {
    let plain = detach_fixture(false, false);
    assert!(matches!(step_detach(&plain, 1), Err(ReductionError::NotASource(1))));
    let det = step_detach(&plain, 0).unwrap();
    let dd = step_delete(&det.target, &[1, 2]).unwrap();
    assert_eq!(dd.target.hash_hex(), step_delete(&plain, &[1, 2]).unwrap().target.hash_hex());
    square_commutes(&plain, &|d| step_delete(d, &[0, 1]).unwrap());
    square_commutes(&plain, &|d| step_absorb(d, &[d.bigraph.arrow_index("a").unwrap()]).unwrap());
    square_commutes(&plain, &|d| edge_reduction(d, d.bigraph.arrow_index("a").unwrap()).unwrap());
    square_commutes(&detach_fixture(true, false), &|d| {
        step_regularize(d, d.bigraph.arrow_index("a").unwrap(), d.bigraph.arrow_index("v").unwrap()).unwrap()
    });
    square_commutes(&detach_fixture(false, true), &|d| step_factor_out(d, &[d.bigraph.arrow_index("a").unwrap()]).unwrap());
}

#[test]
fn detach_examples() {
    let a2 = fixtures::a2(F2);
    let s = step_detach(&a2, 0).unwrap();
    let mut p = Module::with_dims(&a2, &F2, &[1, 1]);
    p.arrows.insert(0, Mat::identity(&F2, 1));
    let r = s.apply_module(&p);
    assert!(crate::ditmod::are_isomorphic(&s.target, &r, &Module::simple(&s.target, &F2, 1)).is_some());
    let ss = fixtures::ss(F2);
    let r = step_detach(&ss, 0).unwrap().apply_module(&Module::simple(&ss, &F2, 0));
    assert_eq!(r.total_dim(), 0);
    let k = fixtures::kron(F2);
    let mut m = Module::with_dims(&k, &F2, &[1, 1]);
    m.arrows.insert(0, Mat::identity(&F2, 1));
    assert_eq!(step_detach(&k, 0).unwrap().apply_module(&m).total_dim(), 1);
}
