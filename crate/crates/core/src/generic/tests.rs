use super::*;
use crate::bigraph::{fixtures, Component};
use crate::reduction::driver::terminal_indecomposables;

const F2: Field = Field::Prime(2);
const Q: Field = Field::Rationals;

fn with_rational(field: Field, n: usize, p: usize, g: Poly) -> Ditalgebra {
    let mut d = Ditalgebra::new(field, n);
    d.base.components[p] = Component::Rational(RationalAlgebra::new(g));
    d
}

fn x() -> RatFunc {
    RatFunc::x(Q)
}

fn kron_generic(d: &Ditalgebra) -> KxModule {
    let mut g = KxModule::with_dims(d, &Q, &[1, 1]);
    g.arrows.insert(0, Mat::identity(&Q, 1));
    g.arrows.insert(1, Mat::scalar(&Q, 1, &x()));
    g
}

#[test]
fn q_modules() {
    let b = with_rational(Q, 2, 1, Poly::one(Q));
    let q = q_module(&b, 1).unwrap();
    assert_eq!(endolength_kx(&b, &q).unwrap(), KxEndolength { length: 1, end_dim: 1 });
    assert_eq!(q_module(&b, 0), Err(GenericError::NotRationalPoint(0)));
    let loc = with_rational(Q, 1, 0, Poly::from_ints(Q, &[-1, 1]));
    let q = q_module(&loc, 0).unwrap();
    assert_eq!(q.xs[&0][(0, 0)], x());
}

#[test]
fn kronecker_generic_endolength() {
    let d = fixtures::kron(Q);
    let g = kron_generic(&d);
    g.validate(&d).unwrap();
    assert_eq!(endolength_kx(&d, &g).unwrap(), KxEndolength { length: 2, end_dim: 1 });
    assert_eq!(endolength_kx(&d, &g.direct_sum(&g)), Err(GenericError::NotSplitLocal));
}

fn pmul(a: &PolyMat, b: &PolyMat, field: Field) -> PolyMat {
    let inner = b.len();
    let cols = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter().map(|r| (0..cols).map(|j| (0..inner).fold(Poly::zero(field), |acc, k| acc.add(&r[k].mul(&b[k][j])))).collect()).collect()
}

#[test]
fn smith_form() {
    let p = |cs: &[i64]| Poly::from_ints(Q, cs);
    let r = vec![vec![p(&[0, 0, 1]), p(&[0, 1])], vec![p(&[0, 1]), p(&[1, 1])]];
    let s = smith_normal_form(Q, &r, 2);
    assert_eq!(pmul(&s.p, &s.p_inv, Q), poly_identity(Q, 2));
    let prod = s.diag.iter().fold(Poly::one(Q), |a, d| a.mul(d));
    assert_eq!(prod, p(&[0, 0, 0, 1]));
    // P·R has the same column module as the diagonal form, so row k is divisible by d_k
    let pr = pmul(&s.p, &r, Q);
    for (k, d) in s.diag.iter().enumerate() {
        assert!(pr[k].iter().all(|e| d.divides(e)));
    }
    let z = smith_normal_form(Q, &[vec![], vec![]], 2);
    assert!(z.diag.is_empty());
}

#[test]
fn torsion_is_localized_away() {
    let b = with_rational(Q, 1, 0, Poly::one(Q));
    let mut gen = KxModule::with_dims(&b, &Q, &[2]);
    gen.xs.insert(0, Mat::scalar(&Q, 2, &x()));
    let relations = vec![vec![vec![Poly::zero(Q)], vec![Poly::x(Q)]]];
    let pt = PointTransfer { generators: gen, relations, g0: Poly::one(Q) };
    let t = TransferBimodule { source: b.clone(), target: b.clone(), finite: BTreeMap::new(), rational: [(0, pt)].into_iter().collect() };
    let r = realize_generic(&t, 0).unwrap();
    assert_eq!(r.g, Poly::x(Q));
    assert_eq!(r.rank, 1);
    assert!(matches!(r.specialize(&Q.zero()), Err(GenericError::NotInSpectrum(_))));
    assert_eq!(r.specialize(&Q.int(3)).unwrap().total_dim(), 1);
    let plain = TransferBimodule { rational: [(0, PointTransfer { generators: q_module(&b, 0).unwrap(), relations: vec![vec![vec![]]], g0: Poly::one(Q) })].into_iter().collect(), ..t };
    let r = realize_generic(&plain, 0).unwrap();
    assert_eq!((r.g.clone(), r.rank), (Poly::one(Q), 1));
    assert_eq!(realize_generic(&plain, 5), Err(GenericError::NotRationalPoint(5)));
}

#[test]
fn kronecker_pipeline() {
    let d = fixtures::kron(Q);
    let census = generic_census(&d, 2, 64).unwrap();
    assert_eq!(census.entries.len(), 1);
    let e = &census.entries[0];
    assert_eq!(e.realization.rank, 2);
    assert_eq!(e.endolength.length, 2);
    assert_eq!(e.endolength.end_dim, 1);
    let mods = check_specializations(&d, &e.realization, 5).unwrap();
    assert!(mods.iter().all(|m| m.dims == vec![1, 1]));
    let back = GenericRealization::from_json(&d, &e.realization.to_json(&d)).unwrap();
    assert_eq!(back, e.realization);
    let same_seq = generic_census_with(&d, 2, 64, Exec::Sequential).unwrap();
    assert_eq!(same_seq.entries[0].realization, e.realization);
}

#[test]
fn transfer_naturality() {
    for d in [fixtures::kron(F2), fixtures::a2(F2), fixtures::reg(F2), fixtures::kron(Q)] {
        let trace = reduce_to_minimal(&d, 3, 64).unwrap();
        let t = transfer_bimodule(&trace);
        for n in terminal_indecomposables(trace.terminal(), &trace.weights, 3) {
            let lhs = t.tensor(&n);
            let rhs = trace.apply_module(&n);
            assert_eq!(lhs.dims, rhs.dims);
            assert!(are_isomorphic(&d, &lhs, &rhs).is_some());
        }
    }
}

#[test]
fn finite_type_censuses_are_empty() {
    for d in [fixtures::ss(F2), fixtures::a2(F2), fixtures::reg(Q)] {
        for k in 1..=3 {
            let c = generic_census(&d, k, 64).unwrap();
            assert!(c.entries.is_empty());
            assert_eq!(c.rational_points, 0);
        }
    }
}
