mod common;

use gme_dynamics::negativity::{concurrence_xstate, negativity, negativity_xstate};
use gme_dynamics::state::{Bipartition, DensityMatrix, XState};
use gme_dynamics::linalg::{hermitian_eigenvalues, max_abs_diff};
use proptest::prelude::*;

fn xstate() -> impl Strategy<Value = XState> {
    any::<u64>().prop_map(|seed| common::random_xstate(&mut common::rng(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn closed_form_matches_eigen(s in xstate()) {
        let cut = Bipartition::new(&[0], 2).unwrap();
        let eig = negativity(&s.to_density(), &cut).unwrap().value;
        prop_assert!((negativity_xstate(&s).value - eig).abs() < 1e-10);
    }

    #[test]
    fn npt_iff_entangled(s in xstate()) {
        prop_assert_eq!(negativity_xstate(&s).value > 0.0, s.is_entangled());
        prop_assert_eq!(concurrence_xstate(&s).value > 0.0, s.is_entangled());
    }

    #[test]
    fn measure_ranges(s in xstate()) {
        let n = negativity_xstate(&s).value;
        let c = concurrence_xstate(&s).value;
        prop_assert!((0.0..=0.5).contains(&n));
        prop_assert!((0.0..=1.0).contains(&c));
    }

    #[test]
    fn xstate_round_trip(s in xstate()) {
        let back = XState::from_density(&s.to_density(), 1e-12).unwrap();
        for (a, b) in s.params().iter().zip(back.params()) {
            prop_assert!((a - b).abs() < 1e-15);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transpose_of_either_side_has_one_spectrum(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = common::rng(seed);
        let rho = common::random_state(&mut rng, &vec![2; n]);
        for cut in gme_dynamics::gme::enumerate_bipartitions(n).unwrap() {
            let a = hermitian_eigenvalues(&rho.partial_transpose(&cut).unwrap());
            let b = hermitian_eigenvalues(&rho.partial_transpose(&cut.complement()).unwrap());
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn partial_trace_of_product(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let a = common::random_state(&mut rng, &[2]);
        let b = common::random_state(&mut rng, &[2, 2]);
        let ab: DensityMatrix = a.tensor(&b);
        prop_assert!(max_abs_diff(ab.partial_trace(&[0]).unwrap().matrix(), a.matrix()) < 1e-12);
        prop_assert!(max_abs_diff(ab.partial_trace(&[1, 2]).unwrap().matrix(), b.matrix()) < 1e-12);
    }
}
