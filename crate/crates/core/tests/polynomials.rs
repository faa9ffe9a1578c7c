use cyclic_potts::{Assignment, Monomial, MultiPoly, RationalFunction, Var};
use num_rational::BigRational;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u32..4, 0u32..4, 0u32..3), coeff()), 0..6).prop_map(|terms| {
        let mut p = MultiPoly::zero();
        for ((q, v, q0), c) in terms {
            p.add_term(Monomial::new(q, v, q0), c);
        }
        p
    })
}

fn point() -> impl Strategy<Value = Assignment> {
    (coeff(), coeff(), coeff()).prop_map(|(q, v, q0)| {
        Assignment::new()
            .with(Var::Q, q)
            .with(Var::V, v)
            .with(Var::Q0, q0)
    })
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &MultiPoly::one(), a.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly(), x in point()) {
        let (ea, eb) = (a.eval(&x).unwrap(), b.eval(&x).unwrap());
        prop_assert_eq!((&a + &b).eval(&x).unwrap(), &ea + &eb);
        prop_assert_eq!((&a * &b).eval(&x).unwrap(), &ea * &eb);
    }

    #[test]
    fn specialize_then_eval(a in poly(), x in point()) {
        let q = x.get(Var::Q).unwrap().clone();
        prop_assert_eq!(a.specialize(Var::Q, &q).eval(&x).unwrap(), a.eval(&x).unwrap());
    }

    #[test]
    fn substituting_a_variable_for_itself(a in poly()) {
        let same: RationalFunction = MultiPoly::v().into();
        prop_assert_eq!(a.substitute(Var::V, &same), a.clone().into());
    }

    #[test]
    fn dual_temperature_is_an_involution(a in poly()) {
        let dual = RationalFunction::new(MultiPoly::q(), MultiPoly::v()).unwrap();
        let once = a.substitute(Var::V, &dual);
        let twice = once.substitute(Var::V, &dual).unwrap();
        prop_assert_eq!(twice, a.into());
    }

    #[test]
    fn json_round_trip(a in poly()) {
        prop_assert_eq!(MultiPoly::from_json(&a.to_json()).unwrap(), a.clone());
        let r = RationalFunction::new(a.clone(), &MultiPoly::v() + &MultiPoly::one()).unwrap();
        prop_assert_eq!(RationalFunction::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn rational_arithmetic_matches_evaluation(a in poly(), b in poly(), x in point()) {
        let den = &(&MultiPoly::v() * &MultiPoly::v()) + &MultiPoly::one();
        let ra = RationalFunction::new(a.clone(), den.clone()).unwrap();
        let rb = RationalFunction::from_poly(b.clone());
        let sum = (&ra + &rb).eval(&x).unwrap();
        prop_assert_eq!(sum, ra.eval(&x).unwrap() + rb.eval(&x).unwrap());
        let prod = (&ra * &rb).eval(&x).unwrap();
        prop_assert_eq!(prod, ra.eval(&x).unwrap() * rb.eval(&x).unwrap());
    }
}
