//! Property tests for the algebraic invariants: normalization, reshape
//! norms, rank symmetry, local-unitary invariance, rank-drop bounds, and
//! agreement between the rank classifier and an independent purity-based
//! factor search.

use num_complex::Complex64;
use proptest::prelude::*;

use entrank::sample::{random_coeff, random_product_state, random_state, random_unitary, rng_from_seed};
use entrank::schmidt::singular_values;
use entrank::{
    certify, classify, enumerate_unordered, gme_gap, r2_min, rank_profile, schmidt_rank,
    PureState, StateClass, DEFAULT_TOL,
};
use rand::Rng;

fn arb_dims() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(2usize..=3, 2..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn superpositions_are_normalized(seed in any::<u64>(), dims in arb_dims(), k in 0usize..=3) {
        let mut rng = rng_from_seed(seed);
        let base = random_state(&dims, &mut rng);
        let terms: Vec<_> = (0..k)
            .map(|_| (random_coeff(&mut rng), random_product_state(&dims, &mut rng)))
            .collect();
        let lead = random_coeff(&mut rng);
        if let Ok(s) = base.superpose(lead, &terms) {
            prop_assert!((s.amps().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bipartition_matrix_preserves_norm(seed in any::<u64>(), dims in arb_dims()) {
        let mut rng = rng_from_seed(seed);
        let state = random_state(&dims, &mut rng);
        for part in enumerate_unordered(dims.len()).unwrap() {
            let m = state.bipartition_matrix(&part).unwrap();
            prop_assert!((m.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn product_states_have_rank_one_everywhere(seed in any::<u64>(), dims in arb_dims()) {
        let mut rng = rng_from_seed(seed);
        let p = random_product_state(&dims, &mut rng).to_pure();
        for part in enumerate_unordered(dims.len()).unwrap() {
            let sv = singular_values(&p, &part).unwrap();
            prop_assert!((sv[0] - 1.0).abs() < 1e-10);
            prop_assert!(sv[1] < 1e-10);
        }
    }

    #[test]
    fn rank_is_symmetric_under_side_swap(seed in any::<u64>(), dims in arb_dims()) {
        let mut rng = rng_from_seed(seed);
        let state = random_state(&dims, &mut rng);
        for part in enumerate_unordered(dims.len()).unwrap() {
            let a = schmidt_rank(&state, &part, DEFAULT_TOL).unwrap();
            let b = schmidt_rank(&state, &part.swapped(), DEFAULT_TOL).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn singular_values_invariant_under_local_unitaries(seed in any::<u64>(), dims in arb_dims()) {
        let mut rng = rng_from_seed(seed);
        let state = random_state(&dims, &mut rng);
        let mut rotated = state.clone();
        for (party, &d) in dims.iter().enumerate() {
            let u = random_unitary(d, &mut rng);
            rotated = rotated.apply_local(party, &u).unwrap();
        }
        for part in enumerate_unordered(dims.len()).unwrap() {
            let a = singular_values(&state, &part).unwrap();
            let b = singular_values(&rotated, &part).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn superposing_k_products_drops_rank_by_at_most_k(
        seed in any::<u64>(),
        n in 2usize..=3,
        d in 2usize..=4,
        k in 1usize..=3,
    ) {
        let dims = vec![d; n];
        let mut rng = rng_from_seed(seed);
        let base = random_state(&dims, &mut rng);
        let terms: Vec<_> = (0..k)
            .map(|_| (random_coeff(&mut rng), random_product_state(&dims, &mut rng)))
            .collect();
        let Ok(s) = base.superpose(random_coeff(&mut rng), &terms) else {
            return Ok(());
        };
        for part in enumerate_unordered(n).unwrap() {
            let before = schmidt_rank(&base, &part, DEFAULT_TOL).unwrap();
            let after = schmidt_rank(&s, &part, DEFAULT_TOL).unwrap();
            prop_assert!(
                after + k >= before,
                "rank fell from {} to {} with k = {}",
                before,
                after,
                k
            );
        }
    }

    #[test]
    fn second_order_rank_dominates_first(seed in any::<u64>(), d in 2usize..=3) {
        let dims = vec![d; 3];
        let mut rng = rng_from_seed(seed);
        let state = random_state(&dims, &mut rng);
        let profile = rank_profile(&state, DEFAULT_TOL).unwrap();
        let r2 = r2_min(&state, DEFAULT_TOL).unwrap();
        prop_assert!(r2 >= profile.r1_min);
    }

    #[test]
    fn budgets_ordered_and_unitary_invariant(seed in any::<u64>(), d in 2usize..=3) {
        let dims = vec![d; 3];
        let mut rng = rng_from_seed(seed);
        let state = random_state(&dims, &mut rng);
        let cert = certify(&state, DEFAULT_TOL).unwrap();
        prop_assert!(cert.gme_budget <= cert.triple_budget);

        let mut rotated = state.clone();
        for party in 0..3 {
            let u = random_unitary(d, &mut rng);
            rotated = rotated.apply_local(party, &u).unwrap();
        }
        let cert2 = certify(&rotated, DEFAULT_TOL).unwrap();
        prop_assert_eq!(cert.gme_budget, cert2.gme_budget);
        prop_assert_eq!(cert.insep_budget, cert2.insep_budget);
        prop_assert_eq!(cert.triple_budget, cert2.triple_budget);
    }
}

/// Independent separability oracle: a cut is product exactly when the
/// purity trace((M M^H)^2) of the unit-Frobenius reshape equals 1. No SVD
/// involved.
fn purity_class(state: &PureState) -> StateClass {
    let n = state.n_parties();
    let mut product_cuts = 0usize;
    let mut total = 0usize;
    for part in enumerate_unordered(n).unwrap() {
        total += 1;
        let m = state.bipartition_matrix(&part).unwrap();
        let g = &m * m.adjoint();
        let g2 = &g * &g;
        let purity: f64 = (0..g2.nrows()).map(|i| g2[(i, i)].re).sum();
        if purity > 1.0 - 1e-8 {
            product_cuts += 1;
        }
    }
    if n == 2 {
        return if product_cuts == 1 {
            StateClass::Separable
        } else {
            StateClass::Entangled
        };
    }
    if product_cuts == total {
        StateClass::FullySeparableProduct
    } else if product_cuts == 0 {
        StateClass::Gme
    } else {
        StateClass::BiseparableNotGme
    }
}

/// Mixes fully random states, full products, and partial products so every
/// classification branch is exercised.
fn mixed_sample(dims: &[usize], which: usize, rng: &mut impl Rng) -> PureState {
    match which % 3 {
        0 => random_state(dims, rng),
        1 => random_product_state(dims, rng).to_pure(),
        _ => {
            // product of a random state on a leading block and product rest
            let split = 1 + rng.gen_range(0..dims.len() - 1);
            let block = random_state(&dims[..split], rng);
            let rest = random_product_state(&dims[split..], rng).to_pure();
            let mut amps = Vec::with_capacity(block.total_dim() * rest.total_dim());
            for a in block.amps().iter() {
                for b in rest.amps().iter() {
                    amps.push(a * b);
                }
            }
            PureState::new(dims.to_vec(), amps).unwrap()
        }
    }
}

#[test]
fn classifier_agrees_with_purity_oracle() {
    let mut rng = rng_from_seed(0xC1A5);
    let shapes: [&[usize]; 5] = [&[2, 2], &[3, 3], &[2, 2, 2], &[2, 3, 2], &[2, 2, 2, 2]];
    for trial in 0..500 {
        let dims = shapes[trial % shapes.len()];
        let state = mixed_sample(dims, trial / shapes.len(), &mut rng);
        let ours = classify(&state, DEFAULT_TOL).unwrap().class;
        let oracle = purity_class(&state);
        assert_eq!(ours, oracle, "trial {trial} dims {dims:?}");
    }
}

#[test]
fn gme_gap_positive_iff_gme() {
    let mut rng = rng_from_seed(0x6A9);
    let shapes: [&[usize]; 3] = [&[2, 2, 2], &[2, 3, 2], &[3, 3, 3]];
    for trial in 0..500 {
        let dims = shapes[trial % shapes.len()];
        let state = mixed_sample(dims, trial / shapes.len(), &mut rng);
        let gap = gme_gap(&state, DEFAULT_TOL).unwrap();
        let is_gme = classify(&state, DEFAULT_TOL).unwrap().class == StateClass::Gme;
        // matched tolerance: the surrogate is "zero" below tol, positive above
        if is_gme {
            assert!(gap > DEFAULT_TOL, "trial {trial}: GME but gap {gap:e}");
        } else {
            assert!(gap < DEFAULT_TOL, "trial {trial}: not GME but gap {gap:e}");
        }
    }
}

#[test]
fn witness_bipartitions_justify_labels() {
    let mut rng = rng_from_seed(0xBEEF);
    for trial in 0..50 {
        let state = mixed_sample(&[2, 2, 2], trial, &mut rng);
        let c = classify(&state, DEFAULT_TOL).unwrap();
        match c.class {
            StateClass::FullySeparableProduct => assert!(c.witness.is_empty()),
            StateClass::BiseparableNotGme => {
                assert!(!c.witness.is_empty());
                for cut in &c.witness {
                    assert_eq!(schmidt_rank(&state, cut, DEFAULT_TOL).unwrap(), 1);
                }
            }
            StateClass::Gme => {
                assert!(!c.witness.is_empty());
                for cut in &c.witness {
                    assert!(schmidt_rank(&state, cut, DEFAULT_TOL).unwrap() >= 2);
                }
            }
            _ => unreachable!("tripartite input"),
        }
    }
}

#[test]
fn marginal_flag_fires_near_the_threshold() {
    // A two-qubit state with second Schmidt coefficient right at the rank
    // threshold relative to the first.
    let eps = 3e-11;
    let amps = vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(eps, 0.0),
    ];
    let s = PureState::new(vec![2, 2], amps).unwrap();
    let profile = rank_profile(&s, DEFAULT_TOL).unwrap();
    assert!(profile.marginal);

    let clean = PureState::ghz(2, 2).unwrap();
    assert!(!rank_profile(&clean, DEFAULT_TOL).unwrap().marginal);
}
