//! Exact jets against finite differences on random smooth expressions.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use warpcheck::fuzz::{jet_fd_gap, random_expression};
use warpcheck::Expression;

const COORDS: [&str; 3] = ["x", "y", "z"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn jet_matches_finite_differences(
        seed in any::<u64>(),
        x in -1.0f64..1.0,
        y in -1.0f64..1.0,
        z in -1.0f64..1.0,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = random_expression(&mut rng, &COORDS, 4);
        let e = Expression::parse(&src, &COORDS).unwrap();
        let gap = jet_fd_gap(&e, &[x, y, z]).unwrap();
        prop_assert!(gap < 1e-6, "{} at ({}, {}, {}): gap {}", src, x, y, z, gap);
    }

    #[test]
    fn display_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = random_expression(&mut rng, &COORDS, 4);
        let e = Expression::parse(&src, &COORDS).unwrap();
        let again = Expression::parse(&e.to_string(), &COORDS).unwrap();
        prop_assert_eq!(e.root(), again.root());
    }
}

#[test]
fn hessian_is_bitwise_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let src = random_expression(&mut rng, &COORDS, 4);
        let jet = Expression::parse(&src, &COORDS)
            .unwrap()
            .eval_jet2(&[0.2, 0.5, -0.9])
            .unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(jet.hess(i, j).to_bits(), jet.hess(j, i).to_bits());
            }
        }
    }
}
