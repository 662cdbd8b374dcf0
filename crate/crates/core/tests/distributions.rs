use finetti::classical::{
    all_tuples, expected_freq_distance, frequency_of, subsequence_bound_rhs, variational_distance, Distribution,
    FrequencyDistribution, HypergeometricParams, TupleDistribution,
};
use finetti::random::rng;
use proptest::prelude::*;

fn dist(w: &[f64]) -> Distribution<f64> {
    Distribution::new(w.to_vec()).unwrap()
}

#[test]
fn variational_distance_examples() {
    let p = dist(&[0.2, 0.3, 0.5]);
    assert_eq!(variational_distance(&p, &p).unwrap(), 0.0);
    assert_eq!(variational_distance(&dist(&[1.0, 0.0]), &dist(&[0.5, 0.5])).unwrap(), 0.5);
}

#[test]
fn frequencies_count_symbols() {
    let f = frequency_of(&[0, 1, 0, 0], 2).unwrap();
    assert_eq!(f.counts(), &[3, 1]);
    assert_eq!(f.distribution::<f64>().weights(), &[0.75, 0.25]);
    assert_eq!(frequency_of(&[0, 0], 2).unwrap().distribution::<f64>().weights(), &[1.0, 0.0]);
}

#[test]
fn expected_frequency_distance_examples() {
    let point = TupleDistribution::new(2, 2, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
    let delta_a = Distribution::point_mass(2, 0);
    assert_eq!(expected_freq_distance(&point, &delta_a).unwrap(), 0.0);
    let diagonal = TupleDistribution::<f64>::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
    assert!((expected_freq_distance(&diagonal, &delta_a).unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn symmetry_of_tuple_distributions() {
    let p = dist(&[0.3, 0.7]);
    assert!(TupleDistribution::product(&p, 3).unwrap().is_symmetric());
    let ab = TupleDistribution::new(2, 2, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
    assert!(!ab.is_symmetric());
    assert!(ab.symmetrized().is_symmetric());
}

#[test]
fn subsequence_bound_is_tight_on_single_symbols() {
    let lhs = frequency_of(&[0], 2).unwrap().distance(&frequency_of(&[1], 2).unwrap()).unwrap();
    assert_eq!(lhs, 1.0);
    assert!((subsequence_bound_rhs(&[0], &[1], 2).unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(subsequence_bound_rhs(&[0, 1], &[0, 1], 2).unwrap(), 0.0);
}

#[test]
fn hypergeometric_examples() {
    let h = HypergeometricParams::new(4, 2, 2).unwrap();
    let pmf = h.pmf::<f64>().unwrap();
    for (w, e) in pmf.weights().iter().zip([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]) {
        assert!((w - e).abs() < 1e-15);
    }
    let tail = h.lower_tail(h.mean() - 1.0).unwrap();
    assert!((tail - 1.0 / 6.0).abs() < 1e-15);
    assert!((h.hoeffding_tail_bound(1.0) - (-0.5f64).exp()).abs() < 1e-15);
    assert_eq!(h.hoeffding_tail_bound(0.0), 1.0);
    assert_eq!(HypergeometricParams::new(5, 5, 3).unwrap().pmf::<f64>().unwrap().weights(), &[0.0, 0.0, 0.0, 1.0]);
    assert_eq!(HypergeometricParams::new(5, 0, 3).unwrap().pmf::<f64>().unwrap().weights(), &[1.0, 0.0, 0.0, 0.0]);
}

#[test]
fn conditioning_a_product_on_a_point_mass_frequency() {
    let p = TupleDistribution::product(&dist(&[0.4, 0.6]), 3).unwrap();
    let c = p.condition_on_frequency(&FrequencyDistribution::from_counts(vec![3, 0]).unwrap()).unwrap();
    assert_eq!(c.weight(&[0, 0, 0]), 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn concatenation_identity(z in prop::collection::vec(0usize..3, 1..6), zbar in prop::collection::vec(0usize..3, 1..6)) {
        let joined: Vec<usize> = z.iter().chain(&zbar).copied().collect();
        let all = frequency_of(&joined, 3).unwrap();
        let (fz, fzbar) = (frequency_of(&z, 3).unwrap(), frequency_of(&zbar, 3).unwrap());
        for s in 0..3 {
            prop_assert_eq!(all.counts()[s], fz.counts()[s] + fzbar.counts()[s]);
        }
    }

    #[test]
    fn subsequence_inequality(z in prop::collection::vec(0usize..3, 1..5), zbar in prop::collection::vec(0usize..3, 1..5)) {
        let lhs = frequency_of(&z, 3).unwrap().distance(&frequency_of(&zbar, 3).unwrap()).unwrap();
        prop_assert!(lhs <= subsequence_bound_rhs(&z, &zbar, 3).unwrap() + 1e-12);
    }

    #[test]
    fn conditioning_on_a_frequency_gives_that_frequency_as_marginal(seed in any::<u64>()) {
        let p = TupleDistribution::<f64>::random_symmetric(2, 4, &mut rng(seed)).unwrap();
        for counts in [vec![4, 0], vec![3, 1], vec![2, 2], vec![1, 3]] {
            let freq = FrequencyDistribution::from_counts(counts).unwrap();
            let Ok(c) = p.condition_on_frequency(&freq) else { continue };
            for i in 0..4 {
                let marginal = c.single_marginal(i).unwrap();
                prop_assert!(variational_distance(&marginal, &freq.distribution()).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn conditioning_a_symmetric_distribution_keeps_the_rest_symmetric(seed in any::<u64>()) {
        let p = TupleDistribution::<f64>::random_symmetric(3, 3, &mut rng(seed)).unwrap();
        let rest = p.condition_on_coordinates(&[(0, 1)]).unwrap();
        prop_assert_eq!(rest.arity(), 2);
        prop_assert!(rest.is_symmetric());
    }

    #[test]
    fn hoeffding_bound_dominates_exact_tail(n in 1u64..25, m_frac in 0.0f64..=1.0, k_frac in 0.0f64..=1.0, ell_steps in 0u32..20) {
        let m = (m_frac * n as f64).round() as u64;
        let k = (k_frac * n as f64).round() as u64;
        let h = HypergeometricParams::new(n, m, k).unwrap();
        let ell = 0.5 * ell_steps as f64;
        prop_assert!(h.lower_tail(h.mean() - ell).unwrap() <= h.hoeffding_tail_bound(ell) + 1e-12);
    }
}

#[test]
fn tuple_enumeration_order() {
    let tuples: Vec<Vec<usize>> = all_tuples(2, 2).collect();
    assert_eq!(tuples, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
}
