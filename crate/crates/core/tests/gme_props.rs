mod common;

use gme_dynamics::amplitude::AmplitudeModel;
use gme_dynamics::evolution::evolve_four;
use gme_dynamics::gme::{
    genuine_negativity, negativity_via_gme, solve_gme, verify_witness, FieldMode, GmeOptions, GmeProblem, SdpDump,
};
use gme_dynamics::linalg::{kron, trace_product};
use gme_dynamics::negativity::{negativity, negativity_xstate};
use gme_dynamics::state::{biseparable_bell_mixture, ghz, kay_state, Bipartition, XState};
use num_complex::Complex64;

fn opts() -> GmeOptions {
    GmeOptions::default()
}

#[test]
fn werner_and_bell_reduce_to_negativity() {
    let w = XState::werner(0.45).unwrap();
    assert!((negativity_via_gme(&w.to_density()).unwrap() - 0.0875).abs() < 1e-6);
    let sep = XState::werner(0.2).unwrap();
    assert!(negativity_via_gme(&sep.to_density()).unwrap() < 1e-7);
    assert!(negativity_via_gme(&ghz(3)).is_err());
}

#[test]
fn bipartite_reduction_on_random_states() {
    let mut rng = common::rng(1);
    let cut = Bipartition::new(&[0], 2).unwrap();
    for _ in 0..100 {
        let rho = common::random_state(&mut rng, &[2, 2]);
        let a = negativity_via_gme(&rho).unwrap();
        let b = negativity(&rho, &cut).unwrap().value;
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn local_unitary_invariance() {
    let mut rng = common::rng(2);
    for _ in 0..5 {
        let u = kron(
            &kron(&common::random_unitary(&mut rng, 2), &common::random_unitary(&mut rng, 2)),
            &common::random_unitary(&mut rng, 2),
        );
        let e = genuine_negativity(&ghz(3).conjugate_by(&u).unwrap(), opts()).unwrap();
        assert!((e - 0.5).abs() < 1e-6, "{e}");
    }
}

#[test]
fn convexity() {
    let mut rng = common::rng(3);
    for k in 0..6 {
        let a = if k % 2 == 0 { ghz(3) } else { common::random_state(&mut rng, &[2, 2, 2]) };
        let b = common::random_state(&mut rng, &[2, 2, 2]).mix(&ghz(3), 0.3).unwrap();
        let lambda = 0.25 + 0.1 * k as f64;
        let mixed = a.mix(&b, lambda).unwrap();
        let lhs = genuine_negativity(&mixed, opts()).unwrap();
        let rhs = lambda * genuine_negativity(&a, opts()).unwrap()
            + (1.0 - lambda) * genuine_negativity(&b, opts()).unwrap();
        assert!(lhs <= rhs + 1e-6, "{lhs} > {rhs}");
    }
}

#[test]
fn ppt_mixtures_give_zero() {
    assert!(genuine_negativity(&kay_state(2.5).unwrap(), opts()).unwrap() < 1e-6);
    assert!(genuine_negativity(&biseparable_bell_mixture(), opts()).unwrap() < 1e-6);
    let mut rng = common::rng(4);
    for _ in 0..5 {
        let bs = common::random_biseparable(&mut rng, 3, 4);
        assert!(genuine_negativity(&bs, opts()).unwrap() < 1e-6);
    }
}

#[test]
fn witness_is_sound_on_biseparable_samples() {
    let mut rng = common::rng(5);
    let problem = GmeProblem::new(ghz(3).mix(&common::random_state(&mut rng, &[2, 2, 2]), 0.8).unwrap()).unwrap();
    let sol = solve_gme(&problem).unwrap();
    assert!(sol.genuine_negativity > 0.0);
    assert!(verify_witness(&sol, &problem).passed());
    let limit = -10.0 * problem.options.tolerance;
    for _ in 0..1000 {
        let bs = common::random_biseparable(&mut rng, 3, 3);
        let v = trace_product(&sol.witness, bs.matrix()).re;
        assert!(v >= limit, "{v}");
    }
}

#[test]
fn real_and_complex_paths_agree() {
    let mut rng = common::rng(6);
    let mut states = vec![ghz(3), kay_state(3.0).unwrap()];
    let psi = common::random_state(&mut rng, &[2, 2, 2]);
    states.push(ghz(3).mix(&psi, 0.7).unwrap());
    for rho in states {
        let real = genuine_negativity(&rho, opts()).unwrap();
        let complex = genuine_negativity(&rho, GmeOptions { field: FieldMode::Complex, ..opts() }).unwrap();
        assert!((real - complex).abs() < 1e-6, "{real} vs {complex}");
    }
}

#[test]
fn symmetry_reduction_preserves_the_optimum() {
    let mut rng = common::rng(7);
    let ghz_phase = {
        let mut m = ghz(3).into_matrix();
        m[(0, 7)] *= Complex64::from_polar(1.0, 0.7);
        m[(7, 0)] = m[(0, 7)].conj();
        gme_dynamics::state::DensityMatrix::new(m, vec![2; 3]).unwrap()
    };
    let noisy = ghz(3).mix(&common::random_state(&mut rng, &[2, 2, 2]), 0.9).unwrap();
    for rho in [ghz(3), ghz_phase, noisy, kay_state(2.5).unwrap()] {
        let full = GmeOptions { symmetry_reduction: false, ..opts() };
        let a = genuine_negativity(&rho, opts()).unwrap();
        let b = genuine_negativity(&rho, full).unwrap();
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn evolved_state_reduced_and_full_agree() {
    let a = (1.0f64 / 26.0).sqrt();
    let s = XState::pure_alpha_beta(a, 5.0 * a).unwrap();
    let rho = evolve_four(&s, &AmplitudeModel::with_ratio(5.0).unwrap(), 0.3).unwrap();
    let red = genuine_negativity(&rho, opts()).unwrap();
    let full = genuine_negativity(&rho, GmeOptions { symmetry_reduction: false, ..opts() }).unwrap();
    assert!((red - full).abs() < 1e-6, "{red} vs {full}");
    // Bounded by the negativity across each single cut of the pure state.
    let n = negativity(&rho, &Bipartition::new(&[0, 2], 4).unwrap()).unwrap().value;
    assert!(red <= n + 1e-6);
}

#[test]
fn frozen_level_for_the_markov_case() {
    let a = (1.0f64 / 26.0).sqrt();
    let s = XState::pure_alpha_beta(a, 5.0 * a).unwrap();
    let rho = evolve_four(&s, &AmplitudeModel::with_ratio(5.0).unwrap(), 1.0).unwrap();
    let e = genuine_negativity(&rho, opts()).unwrap();
    assert!((e - 5.0 / 26.0).abs() < 1e-6, "{e}");
    assert!(negativity_xstate(&s).value > 0.0);
}

#[test]
fn sdp_dump_is_consistent() {
    let problem = GmeProblem::new(ghz(3)).unwrap();
    let dump = SdpDump::new(&problem).unwrap();
    assert_eq!(dump.b.len(), dump.variables.len());
    assert_eq!(dump.a.len(), dump.variables.len());
    assert_eq!(dump.c.len(), dump.block_sizes.len());
    assert_eq!(dump.cuts.len(), 3);
    for entries in &dump.a {
        for &(block, r, c, _) in entries {
            assert!(block < dump.block_sizes.len() && r <= c && c < dump.block_sizes[block]);
        }
    }
    let text = serde_json::to_string(&dump).unwrap();
    let back: SdpDump = serde_json::from_str(&text).unwrap();
    assert_eq!(back.block_sizes, dump.block_sizes);
}
