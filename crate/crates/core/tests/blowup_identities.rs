use proptest::prelude::*;
use threefold_core::blowup::{blow_up_curve, blow_up_point, gamma, pushforward_curve};
use threefold_core::ring::{make_base, BaseSpec};
use threefold_core::{CurveCenterSpec, CurveClass, DivisorClass, ThreefoldModel, Q};

fn rational() -> impl Strategy<Value = Q> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn base() -> impl Strategy<Value = ThreefoldModel> {
    (0usize..3, 0usize..3).prop_map(|(b, points)| {
        let spec = [BaseSpec::P3, BaseSpec::P2xP1, BaseSpec::P1Cubed][b].clone();
        (0..points).fold(make_base(&spec).unwrap(), |m, _| blow_up_point(&m))
    })
}

fn divisor(model: &ThreefoldModel) -> impl Strategy<Value = DivisorClass> {
    prop::collection::vec(rational(), model.picard()).prop_map(DivisorClass::new)
}

fn triple_model() -> impl Strategy<Value = (ThreefoldModel, DivisorClass, DivisorClass, DivisorClass)> {
    base().prop_flat_map(|m| {
        (divisor(&m), divisor(&m), divisor(&m)).prop_map(move |(a, b, c)| (m.clone(), a, b, c))
    })
}

/// `(Y, xi, alpha, center)` with a nonzero integral center class.
fn instance() -> impl Strategy<Value = (ThreefoldModel, DivisorClass, Q, CurveCenterSpec)> {
    base().prop_flat_map(|m| {
        let n = m.picard();
        let class = prop::collection::vec(-3i64..=3, n)
            .prop_filter("nonzero center", |v| v.iter().any(|&x| x != 0))
            .prop_map(|v| CurveClass::from_ints(&v));
        (Just(m.clone()), divisor(&m), rational(), class, 0u32..4)
            .prop_map(|(m, xi, alpha, class, g)| (m, xi, alpha, CurveCenterSpec::new(class, g)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn curve_blowup_identities((y, xi, alpha, center) in instance()) {
        let x = blow_up_curve(&y, &center).unwrap();
        let n = y.picard();
        let f = x.divisor_unit(n);
        let g = y.pair(y.c1(), &center.class).unwrap() + Q::from_integer((2 * i64::from(center.genus) - 2).into());
        prop_assert_eq!(&gamma(&y, &center).unwrap(), &g);

        let d = xi.extended(n + 1).add_scaled(&-alpha.clone(), &f).unwrap();
        let xi_c = y.pair(&xi, &center.class).unwrap();
        let lhs = x.triple(&d, &d, &f).unwrap();
        let two = Q::from_integer(2.into());
        prop_assert_eq!(lhs, &two * &alpha * &xi_c - &alpha * &alpha * &g);

        let ff = x.multiply_divisors(&f, &f).unwrap();
        prop_assert_eq!(pushforward_curve(&y, &x, &ff).unwrap(), -&center.class);
        prop_assert_eq!(x.triple(&f, &f, &f).unwrap(), -g);
        prop_assert!(x.invariant_violations().is_empty());
        prop_assert_eq!(x.euler(), y.euler() + 2 - 2 * i64::from(center.genus));
    }

    #[test]
    fn triple_is_symmetric((m, a, b, c) in triple_model()) {
        let t = m.triple(&a, &b, &c).unwrap();
        for (p, q, r) in [(&a, &c, &b), (&b, &a, &c), (&b, &c, &a), (&c, &a, &b), (&c, &b, &a)] {
            prop_assert_eq!(&m.triple(p, q, r).unwrap(), &t);
        }
        prop_assert_eq!(m.pair(&c, &m.multiply_divisors(&a, &b).unwrap()).unwrap(), t);
    }

    #[test]
    fn products_are_bilinear((m, a, b, c) in triple_model(), s in rational()) {
        let lhs = m.multiply_divisors(&a.add_scaled(&s, &b).unwrap(), &c).unwrap();
        let rhs = m
            .multiply_divisors(&a, &c)
            .unwrap()
            .add_scaled(&s, &m.multiply_divisors(&b, &c).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn point_blowup_rules() {
    let x = blow_up_point(&make_base(&BaseSpec::P3).unwrap());
    let e = x.divisor("E1").unwrap();
    assert_eq!(x.multiply_divisors(&e, &e).unwrap(), -&x.curve("L1").unwrap());
    assert_eq!(x.triple(&e, &e, &e).unwrap(), Q::from_integer(1.into()));
    assert_eq!(x.euler(), 6);
}

#[test]
fn line_in_p3() {
    let y = make_base(&BaseSpec::P3).unwrap();
    let x = blow_up_curve(&y, &CurveCenterSpec::new(CurveClass::from_ints(&[1]), 0)).unwrap();
    let f = x.divisor("F1").unwrap();
    assert_eq!(x.triple(&f, &f, &f).unwrap(), Q::from_integer((-2).into()));
    assert_eq!(x.pair(&f, &x.curve("M1").unwrap()).unwrap(), Q::from_integer((-1).into()));
}

#[test]
fn product_tables() {
    let m = make_base(&BaseSpec::P2xP1).unwrap();
    let (a, b) = (m.divisor("A").unwrap(), m.divisor("B").unwrap());
    let (f1, f2) = (m.curve("f1").unwrap(), m.curve("f2").unwrap());
    let zero = CurveClass::zero(2);
    assert_eq!(m.multiply_divisors(&a, &a).unwrap(), zero);
    assert_eq!(m.multiply_divisors(&a, &b).unwrap(), f1);
    assert_eq!(m.multiply_divisors(&b, &a).unwrap(), f1);
    assert_eq!(m.multiply_divisors(&b, &b).unwrap(), f2);
    let p = |d: &DivisorClass, c: &CurveClass| m.pair(d, c).unwrap();
    let q = |v: i64| Q::from_integer(v.into());
    assert_eq!([p(&a, &f1), p(&a, &f2), p(&b, &f1), p(&b, &f2)], [q(0), q(1), q(1), q(0)]);
    assert_eq!(m.c1(), &DivisorClass::from_ints(&[2, 3]));
    assert_eq!(m.c2(), &CurveClass::from_ints(&[6, 3]));
    // c1^3 = 54 on a product of P2 and P1: 3 * (9 * 2) from (3H + 2P)^3
    assert_eq!(m.triple(m.c1(), m.c1(), m.c1()).unwrap(), q(54));
}
