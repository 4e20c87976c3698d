use num_traits::{One, Zero};
use proptest::prelude::*;
use s2t_core::exactlin::{
    format_rational, general_position, int, parse_rational, proj_distance_sq, projector, rat, scalar_from_eigenvectors,
    Matrix, ProjectivePoint, Rational,
};

fn small() -> impl Strategy<Value = Rational> {
    (-10i64..=10, 1i64..=10).prop_map(|(p, q)| rat(p, q))
}

fn vector(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small(), n).prop_filter("nonzero", |v| v.iter().any(|x| !x.is_zero()))
}

fn invertible(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(small(), n * n)
        .prop_map(move |e| Matrix::from_entries(n, &e).unwrap())
        .prop_filter("invertible", |m| !m.det().is_zero())
}

/// `B = P·D·P⁻¹` with the first `n` vectors as the columns of `P`, so they are
/// eigenvectors; `D` is scalar about half the time.
fn eigen_case(n: usize) -> impl Strategy<Value = (Matrix, Vec<Vec<Rational>>)> {
    let vectors = prop::collection::vec(prop::collection::vec(-6i64..=6, n), n + 1)
        .prop_map(|vs| vs.into_iter().map(|v| v.into_iter().map(int).collect::<Vec<_>>()).collect::<Vec<_>>());
    let diag = prop::collection::vec(1i64..=4, n);
    (vectors.prop_filter("general position", |vs| general_position(vs).unwrap()), diag, any::<bool>()).prop_map(
        move |(vs, d, scalar)| {
            let d: Vec<Rational> = if scalar { vec![int(d[0]); n] } else { d.into_iter().map(int).collect() };
            let p = Matrix::from_columns(&vs[..n]).unwrap();
            let b = p.mul(&Matrix::diagonal(&d)).mul(&p.inverse().unwrap());
            (b, vs)
        },
    )
}

/// Brute force: every off-diagonal entry zero and every diagonal entry equal.
fn brute_scalar(b: &Matrix) -> Option<Rational> {
    let rows = b.to_rows();
    let c = rows[0][0].clone();
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if (i == j && *x != c) || (i != j && !x.is_zero()) {
                return None;
            }
        }
    }
    Some(c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn rationals_round_trip(p in -1000i64..1000, q in 1i64..1000, k in 1i64..50) {
        let r = rat(p * k, q * k);
        prop_assert_eq!(&r, &rat(p, q));
        let text = format_rational(&r);
        prop_assert_eq!(parse_rational(&text).unwrap(), r.clone());
        prop_assert_eq!(format_rational(&parse_rational(&text).unwrap()), text);
        prop_assert!(r.denom() > &num_bigint::BigInt::zero());
    }

    #[test]
    fn projective_points_canonicalize(v in vector(4), l in small().prop_filter("nonzero", |x| !x.is_zero())) {
        let p = ProjectivePoint::new(&v).unwrap();
        prop_assert_eq!(&ProjectivePoint::new(p.coords()).unwrap(), &p);
        let scaled: Vec<Rational> = v.iter().map(|x| x * &l).collect();
        prop_assert_eq!(ProjectivePoint::new(&scaled).unwrap(), p);
    }

    #[test]
    fn metric_axioms(a in vector(3), b in vector(3)) {
        let (x, y) = (ProjectivePoint::new(&a).unwrap(), ProjectivePoint::new(&b).unwrap());
        let d = proj_distance_sq(&x, &y);
        prop_assert_eq!(&d, &proj_distance_sq(&y, &x));
        prop_assert!(d >= Rational::zero() && d <= Rational::one());
        prop_assert_eq!(d.is_zero(), x == y);
        prop_assert!(proj_distance_sq(&x, &x).is_zero());
    }

    #[test]
    fn projector_identities(p in invertible(5), r in prop::sample::select(vec![1usize, 3])) {
        // an even number of −1 entries keeps det(t) = 1
        let d: Vec<Rational> = (0..5).map(|i| if i < r { int(1) } else { int(-1) }).collect();
        let t = p.mul(&Matrix::diagonal(&d)).mul(&p.inverse().unwrap());
        let pr = projector(&t).unwrap();
        let id = Matrix::identity(5);
        prop_assert_eq!(pr.mul(&pr), pr.clone());
        prop_assert_eq!(t.mul(&pr), pr.clone());
        let half = rat(1, 2);
        let complement = id.sub(&t).scale(&half);
        prop_assert_eq!(pr.add(&complement), id);
        prop_assert_eq!(pr.rank(), r);
    }

    #[test]
    fn matrices_act_bijectively(m in invertible(3), a in vector(3), b in vector(3)) {
        let (x, y) = (ProjectivePoint::new(&a).unwrap(), ProjectivePoint::new(&b).unwrap());
        prop_assert_eq!(x.image(&m).unwrap() == y.image(&m).unwrap(), x == y);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn eigenvector_scalar_oracle_4((b, vs) in eigen_case(4)) {
        prop_assert_eq!(scalar_from_eigenvectors(&b, &vs).unwrap(), brute_scalar(&b));
    }

    #[test]
    fn eigenvector_scalar_oracle_6((b, vs) in eigen_case(6)) {
        prop_assert_eq!(scalar_from_eigenvectors(&b, &vs).unwrap(), brute_scalar(&b));
    }

    #[test]
    fn eigenvector_scalar_oracle_unstructured(e in prop::collection::vec(small(), 16), vs in prop::collection::vec(vector(4), 5)) {
        prop_assume!(general_position(&vs).unwrap());
        let b = Matrix::from_entries(4, &e).unwrap();
        prop_assert_eq!(scalar_from_eigenvectors(&b, &vs).unwrap(), brute_scalar(&b));
        let c = Matrix::scalar(4, &e[0]);
        prop_assert_eq!(scalar_from_eigenvectors(&c, &vs).unwrap(), Some(e[0].clone()));
    }
}
