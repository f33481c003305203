use ditalg::format::{mat_to_string, parse_mat};
use ditalg::generic::smith_normal_form;
use ditalg::linalg::Mat;
use ditalg::reduction::fitting_split;
use ditalg::scalars::{Field, Poly, Scalar};
use proptest::prelude::*;

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rationals), Just(Field::Prime(2)), Just(Field::Prime(3)), Just(Field::Prime(7))]
}

fn scalar(f: Field) -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(move |(n, d)| if f == Field::Rationals { f.frac(n, d) } else { f.int(n) })
}

fn poly(f: Field, deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-3i64..=3, 0..=deg + 1).prop_map(move |cs| Poly::from_ints(f, &cs))
}

fn mat(f: Field, r: usize, c: usize) -> impl Strategy<Value = Mat<Scalar>> {
    prop::collection::vec(scalar(f), r * c).prop_map(move |v| Mat::from_vec(&f, r, c, v))
}

fn pmul(f: Field, a: &[Vec<Poly>], b: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let cols = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter().map(|r| (0..cols).map(|j| (0..b.len()).fold(Poly::zero(f), |acc, k| acc.add(&r[k].mul(&b[k][j])))).collect()).collect()
}

fn eval_poly(h: &Poly, m: &Mat<Scalar>) -> Mat<Scalar> {
    let f = h.lc().field();
    h.coeffs().iter().rev().fold(Mat::zeros(&f, m.rows, m.cols), |acc, c| acc.mul(m).add(&Mat::identity(&f, m.rows).scale(c)))
}

proptest! {
    #[test]
    fn field_axioms((a, b, c) in field().prop_flat_map(|f| (scalar(f), scalar(f), scalar(f)))) {
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        match a.inv() {
            Some(i) => prop_assert!(a.mul(&i).is_one()),
            None => prop_assert!(a.is_zero()),
        }
    }

    #[test]
    fn division_and_bezout((a, b) in field().prop_flat_map(|f| (poly(f, 4), poly(f, 3)))) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b);
        prop_assert_eq!(q.mul(&b).add(&r), a.clone());
        prop_assert!(r.is_zero() || r.degree() < b.degree());
        let (g, s, t) = a.ext_gcd(&b);
        prop_assert_eq!(s.mul(&a).add(&t.mul(&b)), g.clone());
        prop_assert!(g.divides(&a) && g.divides(&b));
    }

    #[test]
    fn rank_nullity(m in field().prop_flat_map(|f| (1usize..=4, 1usize..=4).prop_flat_map(move |(r, c)| mat(f, r, c)))) {
        let ker = m.kernel();
        prop_assert_eq!(m.rank() + ker.len(), m.cols);
        for v in &ker {
            let col = Mat::from_vec(&m.ctx, m.cols, 1, v.clone());
            prop_assert!(m.mul(&col).is_zero());
        }
        if let Some(inv) = m.inverse() {
            prop_assert_eq!(m.mul(&inv), Mat::identity(&m.ctx, m.rows));
        }
    }

    #[test]
    fn matrix_text_round_trip(m in field().prop_flat_map(|f| (1usize..=3, 1usize..=3).prop_flat_map(move |(r, c)| mat(f, r, c)))) {
        let back = parse_mat(m.ctx, m.rows, m.cols, &mat_to_string(&m)).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn smith_transform_is_invertible(rel in prop::collection::vec(prop::collection::vec(-2i64..=2, 1..=3), 6)) {
        let f = Field::Rationals;
        let r: Vec<Vec<Poly>> = rel.chunks(2).map(|row| row.iter().map(|cs| Poly::from_ints(f, cs)).collect()).collect();
        let s = smith_normal_form(f, &r, 3);
        let id: Vec<Vec<Poly>> = (0..3).map(|i| (0..3).map(|j| if i == j { Poly::one(f) } else { Poly::zero(f) }).collect()).collect();
        prop_assert_eq!(pmul(f, &s.p, &s.p_inv), id.clone());
        prop_assert_eq!(pmul(f, &s.p_inv, &s.p), id);
        let pr = pmul(f, &s.p, &r);
        for (k, d) in s.diag.iter().enumerate() {
            prop_assert!(pr[k].iter().all(|e| d.divides(e)));
        }
    }

    #[test]
    fn fitting_projections(m in (1usize..=4).prop_flat_map(|n| mat(Field::Rationals, n, n)), root in -1i64..=1) {
        let f = Field::Rationals;
        let n = m.rows;
        let h = Poly::linear(&f.int(root));
        let (ps, pn) = fitting_split(&m, &h, n);
        prop_assert_eq!(ps.add(&pn), Mat::identity(&f, n));
        prop_assert_eq!(ps.mul(&ps), ps.clone());
        prop_assert_eq!(ps.mul(&m), m.mul(&ps));
        let hm = eval_poly(&h, &m);
        prop_assert!(hm.pow(n).mul(&pn).is_zero());
        prop_assert_eq!(hm.mul(&ps).rank(), ps.rank());
    }
}
