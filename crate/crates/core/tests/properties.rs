//! Invariants checked on randomly drawn inputs.

use proptest::prelude::*;

use spinmus::families::{gibbs_params, gibbs_state, gibbs_weights};
use spinmus::numerics::{psd_sqrt, Complex};
use spinmus::random::{ginibre_state, random_operator, random_unitary, seeded};
use spinmus::recurrence::solve_recurrence;
use spinmus::spin::{build_ops, coherent_state, TwoJ};
use spinmus::uncertainty::{
    classical_uncertainty, condition_residuals, quantum_uncertainty, report, skew_information, variance,
};
use spinmus::wick::{matrix_of, su2_compose_residual, symbol_inner_product, symbol_of};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refined_relation_holds(two_j in 1u32..=8, seed in any::<u64>()) {
        let ops = build_ops(two_j).unwrap();
        let st = ginibre_state(ops.j, &mut seeded(seed));
        let r = report(&st, &ops).unwrap();
        prop_assert!(r.gap >= -1e-9);
        // the refined product never exceeds the Robertson product
        prop_assert!(r.lhs_refined <= r.lhs_heisenberg + 1e-9);
    }

    #[test]
    fn functional_ordering(two_j in 1u32..=6, seed in any::<u64>()) {
        let ops = build_ops(two_j).unwrap();
        let st = ginibre_state(ops.j, &mut seeded(seed));
        let v = variance(&st, &ops.jx).unwrap();
        let i = skew_information(&st, &ops.jx).unwrap();
        let c = classical_uncertainty(&st, &ops.jx).unwrap();
        let u = quantum_uncertainty(&st, &ops.jx).unwrap();
        prop_assert!(i >= -1e-12 && i <= v + 1e-12);
        prop_assert!(u <= v + 1e-12);
        // U² = (V − C)(V + C)
        prop_assert!((u * u - (v * v - c * c)).abs() <= 1e-9 * v.max(1.0).powi(2));
    }

    #[test]
    fn coherent_states_are_pure_and_normalized(two_j in 1u32..=20, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let st = coherent_state(TwoJ::new(two_j).unwrap(), Complex::new(re, im)).unwrap();
        let norm: f64 = st.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gibbs_weights_are_geometric(two_j in 1u32..=12, sp in 0.05f64..4.0) {
        let w = gibbs_weights(TwoJ::new(two_j).unwrap(), sp);
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for pair in w.windows(2) {
            prop_assert!((pair[0] / pair[1] - sp * sp).abs() <= 1e-9 * (sp * sp));
        }
    }

    #[test]
    fn gibbs_states_satisfy_the_first_condition(two_j in 1u32..=6, sp in 0.05f64..0.95) {
        let ops = build_ops(two_j).unwrap();
        let st = gibbs_state(ops.j, sp);
        let rep = condition_residuals(&st, &ops, &gibbs_params(sp)).unwrap();
        prop_assert!(rep.residual_a <= 1e-8 * ops.dim() as f64);
        prop_assert!(rep.residual_b <= 1e-8 * ops.dim() as f64);
        let out = solve_recurrence(ops.j, &gibbs_params(sp)).unwrap();
        prop_assert!(out.consistent);
        prop_assert!((out.rho.unwrap() - st.rho()).max_abs() < 1e-10);
    }

    #[test]
    fn unitary_conjugation_preserves_spectrum(two_j in 1u32..=5, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let j = TwoJ::new(two_j).unwrap();
        let st = ginibre_state(j, &mut rng);
        let u = random_unitary(j.dim(), &mut rng);
        let moved = st.conjugate_by(&u).unwrap();
        prop_assert!((moved.purity() - st.purity()).abs() < 1e-12);
        let s1 = psd_sqrt(st.rho()).unwrap();
        let s2 = psd_sqrt(moved.rho()).unwrap();
        prop_assert!(((&u * &s1 * u.adjoint()) - s2).max_abs() < 1e-9);
    }

    #[test]
    fn symbols_round_trip_and_pair(two_j in 0u32..=8, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let j = TwoJ::new(two_j).unwrap();
        let a = random_operator(j.dim(), &mut rng);
        let b = random_operator(j.dim(), &mut rng);
        let pa = symbol_of(&a, j).unwrap();
        prop_assert!((matrix_of(&pa) - &a).max_abs() < 1e-12);
        let pb = symbol_of(&b, j).unwrap();
        prop_assert!((symbol_inner_product(&pa, &pb).unwrap() - a.hs_inner(&b)).norm() < 1e-9);
    }

    #[test]
    fn su2_composition_law(re in -5.0f64..5.0, im in -5.0f64..5.0) {
        prop_assume!((Complex::new(1.0, 0.0) - Complex::new(re, im)).norm() > 1e-3);
        prop_assert!(su2_compose_residual(Complex::new(re, im)).unwrap() < 1e-12);
    }
}
