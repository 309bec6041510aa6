use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use sl3::counting::*;
use sl3::hecke::*;
use sl3::lie::*;
use sl3::spherical::*;

fn quick() -> QuadratureConfig {
    QuadratureConfig { nodes: 20, tolerance: 1e-7, radius: 20.0 }
}

fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn mul3(a: &[[i64; 3]; 3], b: &[[i64; 3]; 3]) -> [[i64; 3]; 3] {
    let mut c = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn matrix() -> impl Strategy<Value = [[i64; 3]; 3]> {
    proptest::array::uniform3(proptest::array::uniform3(-4i64..=4)).prop_filter("positive determinant", |m| det3(m) > 0)
}

fn unimodular() -> impl Strategy<Value = [[i64; 3]; 3]> {
    // products of elementary matrices
    proptest::collection::vec((0usize..3, 0usize..3, -2i64..=2), 1..6).prop_map(|ops| {
        let mut m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        for (i, j, c) in ops {
            if i != j {
                let mut e = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
                e[i][j] = c;
                m = mul3(&m, &e);
            }
        }
        m
    })
}

fn small_triple() -> impl Strategy<Value = DivisorTriple> {
    prop_oneof![
        Just((1, 1, 2)),
        Just((1, 2, 2)),
        Just((1, 1, 3)),
        Just((1, 3, 3)),
        Just((1, 1, 4)),
        Just((1, 2, 4)),
    ]
    .prop_map(|(a, b, c)| DivisorTriple::from_diagonal(a, b, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn divisors_are_double_coset_invariants(m in matrix(), u in unimodular(), v in unimodular()) {
        let a = determinantal_divisors(&IntegerMatrix3::from_i64(m)).unwrap();
        let b = determinantal_divisors(&IntegerMatrix3::from_i64(mul3(&mul3(&u, &m), &v))).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(a.det() as i64, det3(&m));
    }

    #[test]
    fn hecke_products_commute(a in small_triple(), b in small_triple()) {
        let alg = HeckeAlgebra::new();
        prop_assert_eq!(alg.multiply(a, b).unwrap(), alg.multiply(b, a).unwrap());
    }

    #[test]
    fn hecke_product_preserves_degree(a in small_triple(), b in small_triple()) {
        // deg(T_a T_b) = deg T_a deg T_b, counting each term with its coset number
        let alg = HeckeAlgebra::new();
        let prod = alg.multiply(a, b).unwrap();
        let mut total = BigRational::from_integer(BigInt::from(0));
        for (t, c) in prod.terms() {
            total += c * BigRational::from_integer(BigInt::from(coset_count(*t).unwrap()));
        }
        let expect = coset_count(a).unwrap() * coset_count(b).unwrap();
        prop_assert_eq!(total, BigRational::from_integer(BigInt::from(expect)));
    }

    #[test]
    fn dual_is_an_involution(a in small_triple()) {
        prop_assert_eq!(a.dual().dual().primitive(), a.primitive());
        prop_assert_eq!(coset_count(a.dual()).unwrap(), coset_count(a).unwrap());
    }

    #[test]
    fn roots_invariant_under_automorphs(m in matrix(), p in 0usize..6, signs in 0u8..4) {
        let perms = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
        let mut k = [[0i64; 3]; 3];
        for (i, &j) in perms[p].iter().enumerate() {
            k[i][j] = 1;
        }
        // random row signs; the last row then restores determinant +1
        let flip = [signs & 1 == 1, signs & 2 == 2];
        for (row, f) in k.iter_mut().zip(flip) {
            if f {
                row.iter_mut().for_each(|x| *x = -*x);
            }
        }
        if det3(&k) < 0 {
            k[2].iter_mut().for_each(|x| *x = -*x);
        }
        let base = cartan_roots_of_conjugate(&BasePoint::Identity, &m).unwrap();
        for other in [mul3(&k, &m), mul3(&m, &k)] {
            let r = cartan_roots_of_conjugate(&BasePoint::Identity, &other).unwrap();
            prop_assert!((r.0 - base.0).abs() < 1e-9 * base.0 && (r.1 - base.1).abs() < 1e-9 * base.1);
        }
        let mut t = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                t[i][j] = m[j][i];
            }
        }
        let r = cartan_roots_of_conjugate(&BasePoint::Identity, &t).unwrap();
        prop_assert!((r.0 - base.0).abs() < 1e-9 * base.0);
    }

    #[test]
    fn optimizer_is_optimal(ts in proptest::collection::vec((-4i64..6, 1i64..4, -5i64..20), 2..5), x in 0i64..40) {
        let terms: Vec<ExponentTerm> = ts
            .iter()
            .map(|&(a, d, b)| ExponentTerm::new(rational(a, d), rational(b, 1)))
            .collect();
        prop_assume!(terms.iter().any(|t| t.l_exp > rational(0, 1)));
        let (xs, v) = optimize_amplifier_exponent(&terms).unwrap();
        prop_assert!(xs >= rational(0, 1));
        let probe = rational(x, 10);
        let at = terms.iter().map(|t| &t.t_exp + &t.l_exp * &probe).max().unwrap();
        prop_assert!(v <= at);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn spherical_is_weyl_invariant_and_bounded(t1 in 0.1f64..3.0, t2 in 0.1f64..3.0, a1 in 1.0f64..2.5, a2 in 1.0f64..2.5, w in 0usize..6) {
        let s = SpectralParameter::imaginary(t1, t2);
        let a = DiagonalElement::from_alphas(a1, a2);
        let v = spherical_direct_diag(&s, &a, &quick()).unwrap().value;
        let vw = spherical_direct_diag(&s.weyl(WeylElement::ALL[w]), &a, &quick()).unwrap().value;
        prop_assert!((v - vw).norm() < 1e-6, "{} vs {}", v, vw);
        prop_assert!(v.norm() <= 1.0 + 1e-9);
        let vc = spherical_direct_diag(&SpectralParameter::imaginary(-t1, -t2), &a, &quick()).unwrap().value;
        prop_assert!((vc - v.conj()).norm() < 1e-9);
    }

    #[test]
    fn real_parameters_give_positive_values(r1 in -2.0f64..2.0, r2 in -2.0f64..2.0, a1 in 1.0f64..2.5, a2 in 1.0f64..2.5) {
        // the integrand is a positive exponential
        let s = SpectralParameter::real(r1, r2);
        let v = spherical_direct_diag(&s, &DiagonalElement::from_alphas(a1, a2), &quick()).unwrap().value;
        prop_assert!(v.im.abs() < 1e-12 && v.re > 0.0);
    }

    #[test]
    fn counts_grow_with_the_box(d1 in 0.0f64..0.6, d2 in 0.0f64..0.6, e in 0.0f64..0.3) {
        let cfg = CountConfig::default();
        let small = count_matrices(&CountQuery::new(1, 3, [d1, d2], BasePoint::Identity).unwrap(), &cfg).unwrap().count;
        let large = count_matrices(&CountQuery::new(1, 3, [d1 + e, d2 + e], BasePoint::Identity).unwrap(), &cfg).unwrap().count;
        prop_assert!(small <= large);
    }
}

#[test]
fn leading_term_improves_deeper_in_the_chamber() {
    let s = SpectralParameter::imaginary(1.0, 2.0);
    let q = QuadratureConfig::default();
    let dev = |x: f64| {
        let a = DiagonalElement::from_alphas(x, x);
        let lead = gangolli_leading(&s, &a, 4).unwrap();
        let exact = spherical_third(&s, &a, &q).unwrap().value;
        (lead / exact - Complex64::new(1.0, 0.0)).norm()
    };
    assert!(dev(8.0) < dev(3.0));
}
