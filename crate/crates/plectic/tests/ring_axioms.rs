//! Property tests for the exact function ring: ring axioms, derivation
//! identities, and evaluation as a ring homomorphism.

use proptest::prelude::*;

use plectic::manifold::{Coordinate, ModelManifold, Point, QuarterTurn};
use plectic::scalar::{rat, ScalarFn};

fn scalar_strategy() -> impl Strategy<Value = ScalarFn> {
    let m = ModelManifold::new(2, 1);
    prop::collection::vec(
        (
            prop::collection::vec(-3i64..=3, 2),
            0u32..=3,
            (-4i64..=4, 1i64..=3),
            any::<bool>(),
        ),
        0..=3,
    )
    .prop_map(move |terms| {
        let mut out = ScalarFn::zero(&m);
        for (freq, zexp, (num, den), is_sin) in terms {
            let trig = if is_sin {
                ScalarFn::sin(&m, &freq)
            } else {
                ScalarFn::cos(&m, &freq)
            };
            let mono = ScalarFn::z(&m, 0).pow(zexp);
            let term = ScalarFn::constant(&m, rat(num, den));
            out = &out + &(&(&term * &trig) * &mono);
        }
        out
    })
}

fn point_strategy() -> impl Strategy<Value = Point> {
    let m = ModelManifold::new(2, 1);
    (0i64..4, 0i64..4, -6i64..=6, 1i64..=4).prop_map(move |(q1, q2, num, den)| {
        Point::new(
            &m,
            vec![QuarterTurn::new(q1), QuarterTurn::new(q2)],
            vec![rat(num, den)],
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn addition_commutes_and_associates(
        f in scalar_strategy(),
        g in scalar_strategy(),
        h in scalar_strategy(),
    ) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
    }

    #[test]
    fn multiplication_commutes_and_associates(
        f in scalar_strategy(),
        g in scalar_strategy(),
        h in scalar_strategy(),
    ) {
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
    }

    #[test]
    fn multiplication_distributes(
        f in scalar_strategy(),
        g in scalar_strategy(),
        h in scalar_strategy(),
    ) {
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
    }

    #[test]
    fn partial_derivatives_commute(f in scalar_strategy()) {
        for i in 0..2 {
            let a = f.partial(Coordinate::Theta(i)).partial(Coordinate::Z(0));
            let b = f.partial(Coordinate::Z(0)).partial(Coordinate::Theta(i));
            prop_assert_eq!(a, b);
        }
        let a = f.partial(Coordinate::Theta(0)).partial(Coordinate::Theta(1));
        let b = f.partial(Coordinate::Theta(1)).partial(Coordinate::Theta(0));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn product_rule_holds(f in scalar_strategy(), g in scalar_strategy()) {
        for c in [Coordinate::Theta(0), Coordinate::Theta(1), Coordinate::Z(0)] {
            let lhs = (&f * &g).partial(c);
            let rhs = &(&f.partial(c) * &g) + &(&f * &g.partial(c));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        f in scalar_strategy(),
        g in scalar_strategy(),
        p in point_strategy(),
    ) {
        let sum = (&f + &g).eval(&p).unwrap();
        prop_assert_eq!(sum, f.eval(&p).unwrap() + g.eval(&p).unwrap());
        let prod = (&f * &g).eval(&p).unwrap();
        prop_assert_eq!(prod, f.eval(&p).unwrap() * g.eval(&p).unwrap());
    }

    #[test]
    fn theta_derivative_averages_to_zero(f in scalar_strategy()) {
        for i in 0..2 {
            prop_assert!(f.partial(Coordinate::Theta(i)).theta_average(i).is_zero());
        }
    }
}
