use super::*;
use crate::bigraph::fixtures;
use crate::ditmod::enumerate_indecomposables;

const F2: Field = Field::Prime(2);
const F3: Field = Field::Prime(3);
const Q: Field = Field::Rationals;

fn kan_idems(lam: &FdAlgebra, n: usize) -> Vec<Vector> {
    (0..n).map(|i| lam.basis_elem(i)).collect()
}

#[test]
fn path_algebra_dims() {
    assert_eq!(PathAlgebra::new(&fixtures::ss(F2)).unwrap().alg.dim, 2);
    assert_eq!(PathAlgebra::new(&fixtures::a2(F2)).unwrap().alg.dim, 3);
    assert_eq!(PathAlgebra::new(&fixtures::kron(Q)).unwrap().alg.dim, 4);
    let a3 = path_algebra_an(Q, 3);
    assert_eq!(a3.dim, 6);
    assert!(a3.validate());
    let mut d = fixtures::a2(F2);
    d.add_arrow("b", ArrowKind::Full, 1, 0);
    assert!(matches!(PathAlgebra::new(&d), Err(QhError::NotSpecial(_))));
}

#[test]
fn path_algebra_with_relation() {
    let mut d = Ditalgebra::new(Q, 3);
    let a = d.add_arrow("a", ArrowKind::Full, 0, 1);
    let b = d.add_arrow("b", ArrowKind::Full, 1, 2);
    d.ideal.push(d.arrow_elem(b).mul(&d.arrow_elem(a)));
    let pa = PathAlgebra::new(&d).unwrap();
    assert_eq!(pa.alg.dim, 5);
    assert!(pa.alg.validate());
}

#[test]
fn gamma_for_a2() {
    let d = fixtures::a2(F2);
    let ra = right_algebra(&d).unwrap();
    assert_eq!(ra.gamma.dim, 3);
    assert!(ra.equals_abar());
    assert!(ra.gamma.validate());
    for m in enumerate_indecomposables(&d, 3, 1 << 20).unwrap() {
        let h = ra.functor_h(&m);
        assert!(h.is_module_over(&ra.gamma));
        assert!(ra.induce(&m).is_isomorphic(&h).is_some());
    }
}

#[test]
fn gamma_for_reg_and_kron() {
    for d in [fixtures::reg(F2), fixtures::kron(F3), fixtures::ss(Q)] {
        let ra = right_algebra(&d).unwrap();
        assert!(ra.gamma.validate());
        let reg = ra.abar.regular_module(&d);
        let ind = ra.induce(&reg);
        assert!(ind.is_module_over(&ra.gamma));
        assert!(ind.is_isomorphic(&ra.gamma.regular_module()).is_some());
        for dj in ra.standard_like() {
            assert!(dj.is_module_over(&ra.gamma));
            assert!(dj.dim > 0);
        }
    }
}

#[test]
fn ext_on_a2() {
    let lam = path_algebra_an(F2, 2);
    let st = standard_modules(&lam, &kan_idems(&lam, 2));
    assert_eq!(st.iter().map(|m| m.dim).collect::<Vec<_>>(), vec![1, 1]);
    assert_eq!(ext1_dim(&lam, &st[0], &st[1]), 1);
    assert_eq!(ext1_dim(&lam, &st[1], &st[0]), 0);
    let reg = lam.regular_module();
    assert_eq!(ext1_dim(&lam, &reg, &st[0]), 0);
}

#[test]
fn quasi_hereditary_examples() {
    for field in [F2, Q] {
        let lam = path_algebra_an(field, 2);
        let st = standard_modules(&lam, &kan_idems(&lam, 2));
        let cert = check_quasi_hereditary(&lam, &st).unwrap();
        assert!(cert.passed(), "{:?}", cert.conditions);
        let w = cert.filtration.unwrap();
        assert!(w.verify(&st, &lam.regular_module()));
        let rev = standard_modules(&lam, &[lam.basis_elem(1), lam.basis_elem(0)]);
        assert!(check_quasi_hereditary(&lam, &rev).unwrap().passed());
    }
    let t = FdAlgebra::truncated_polynomials(F2, 2);
    let st = standard_modules(&t, &[t.one.clone()]);
    let cert = check_quasi_hereditary(&t, &st).unwrap();
    assert!(!cert.conditions[0]);
    assert!(!cert.passed());
}

#[test]
fn filtration_search() {
    let lam = path_algebra_an(F3, 3);
    let st = standard_modules(&lam, &kan_idems(&lam, 3));
    let reg = lam.regular_module();
    let w = delta_filtration(&st, &reg).unwrap().unwrap();
    assert_eq!(w.layers.len(), 6);
    assert!(w.verify(&st, &reg));
    let mods = enumerate_fd_modules(&lam, 3, 1 << 20).unwrap();
    let filtered = mods.iter().filter(|m| delta_filtration(&st, m).unwrap().is_some()).count();
    assert_eq!(filtered, 6);
    let bad = FdModule { field: F3, dim: 0, act: vec![] };
    assert!(delta_filtration(&st, &bad).unwrap().unwrap().layers.is_empty());
}

#[test]
fn morita_matrix_algebra() {
    let lam = FdAlgebra::matrix_algebra(F2, 2);
    let b = basic_algebra(&lam);
    assert_eq!(b.basic.dim, 1);
    let reg = lam.regular_module();
    let om = b.omega(&lam, &reg);
    assert_eq!(om.dim, 2);
    let back = b.omega_inverse(&lam, &om);
    assert!(back.is_module_over(&lam));
    assert!(back.is_isomorphic(&reg).is_some());
    let kan = path_algebra_an(Q, 2);
    assert_eq!(basic_algebra(&kan).basic.dim, 3);
}

#[test]
fn module_enumeration() {
    let lam = path_algebra_an(F2, 2);
    let mods = enumerate_fd_modules(&lam, 3, 1 << 20).unwrap();
    assert_eq!(mods.len(), 3);
    let a3 = path_algebra_an(F2, 3);
    assert_eq!(enumerate_fd_modules(&a3, 3, 1 << 20).unwrap().len(), 6);
    let m2 = FdAlgebra::matrix_algebra(F2, 2);
    assert!(matches!(presentation(&m2), Err(QhError::NotBasic)));
    let col = enumerate_fd_modules(&m2, 4, 1 << 20).unwrap();
    assert_eq!(col.len(), 1);
    assert_eq!(col[0].dim, 2);
    assert!(col[0].is_module_over(&m2));
    for m in &mods {
        assert_eq!(fd_endolength(m), m.dim);
    }
}
