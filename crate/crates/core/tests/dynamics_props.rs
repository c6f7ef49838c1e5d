use num::{One, Signed, Zero};
use proptest::prelude::*;
use threefold_core::blowup::blow_up_point;
use threefold_core::dynamics::{
    characteristic_polynomial, dynamical_degrees, raw_dynamical_degrees, rationality_obstruction,
    to_rational, validate_action, DominantKind, IntMatrix, RationalityCheck,
};
use threefold_core::linalg;
use threefold_core::rational::q;
use threefold_core::ring::{make_base, BaseSpec};

/// Products of elementary row operations and a signed permutation are unimodular.
fn unimodular() -> impl Strategy<Value = IntMatrix> {
    (2usize..=4).prop_flat_map(|n| {
        let ops = prop::collection::vec((0..n, 0..n, -2i64..=2), 1..8);
        (Just(n), ops, Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
    })
    .prop_map(|(n, ops, perm)| {
        let mut a = vec![vec![0i64; n]; n];
        for (i, &p) in perm.iter().enumerate() {
            a[i][p] = 1;
        }
        for (i, j, c) in ops {
            if i != j {
                let row = a[j].clone();
                for (x, y) in a[i].iter_mut().zip(row) {
                    *x += c * y;
                }
            }
        }
        a
    })
}

fn inverse(a: &IntMatrix) -> IntMatrix {
    let inv = linalg::inverse(&to_rational(a)).unwrap();
    inv.iter()
        .map(|row| row.iter().map(|v| i64::try_from(v.to_integer()).unwrap()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn char_poly_matches_determinants(a in unimodular()) {
        let p = characteristic_polynomial(&to_rational(&a));
        prop_assert_eq!(p.degree(), a.len());
        for x in -3i64..=3 {
            let mut m = to_rational(&a);
            for (i, row) in m.iter_mut().enumerate() {
                for v in row.iter_mut() { *v = -v.clone(); }
                row[i] += q(x);
            }
            prop_assert_eq!(p.eval(&q(x)), linalg::determinant(&m));
        }
    }

    #[test]
    fn rational_roots_are_units(a in unimodular()) {
        let p = characteristic_polynomial(&to_rational(&a));
        prop_assert!(
            matches!(rationality_obstruction(&p).unwrap(), RationalityCheck::Consistent { .. }),
            "unimodular char poly must pass"
        );
    }

    #[test]
    fn lambda2_is_lambda1_of_inverse(a in unimodular()) {
        let r = raw_dynamical_degrees(&a).unwrap();
        let s = raw_dynamical_degrees(&inverse(&a)).unwrap();
        prop_assert!(r.lambda1.lower <= r.lambda1.upper);
        prop_assert!(r.lambda1.lower >= q(1) || r.lambda1.kind != DominantKind::Real);
        prop_assert!((r.lambda2.approx() - s.lambda1.approx()).abs() < 1e-9);
        prop_assert!((s.lambda2.approx() - r.lambda1.approx()).abs() < 1e-9);
        if r.lambda1.kind == DominantKind::Real && r.lambda1.lower > q(1) {
            // radius one comes from roots of unity; above one the isolating interval brackets a sign change of the char poly at +-lambda
            let p = &r.divisor_char_poly;
            let (lo, hi) = (&r.lambda1.lower, &r.lambda1.upper);
            let brackets = |s: i64| {
                let (a, b) = (p.eval(&(lo * q(s))), p.eval(&(hi * q(s))));
                a.is_zero() || b.is_zero() || a.is_positive() != b.is_positive()
            };
            prop_assert!(brackets(1) || brackets(-1));
        }
    }

    #[test]
    fn minimal_polynomial_divides(a in unimodular()) {
        let r = raw_dynamical_degrees(&a).unwrap();
        if let Some(m) = &r.lambda1.minimal_polynomial {
            prop_assert!(m.leading().is_one());
            prop_assert!(r.lambda1.multiplicity >= 1 || m.degree() == 1);
        }
    }
}

#[test]
fn permuting_points_is_a_valid_action() {
    let x = (0..3).fold(make_base(&BaseSpec::P3).unwrap(), |m, _| blow_up_point(&m));
    let cycle = vec![vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 1, 0, 0], vec![0, 0, 1, 0]];
    assert!(validate_action(&x, &cycle).unwrap().is_empty());
    let r = dynamical_degrees(&x, &cycle).unwrap();
    assert_eq!((r.lambda1.lower.clone(), r.lambda1.upper.clone()), (q(1), q(1)));
    assert_eq!(r.entropy, 0.0);
}

#[test]
fn invalid_action_is_rejected() {
    let x = blow_up_point(&make_base(&BaseSpec::P3).unwrap());
    let a = vec![vec![1, 1], vec![0, 1]];
    assert!(!validate_action(&x, &a).unwrap().is_empty());
    assert!(dynamical_degrees(&x, &a).is_err());
}
