use finetti::classical::Distribution;
use finetti::definetti::{
    definetti_experiment, definetti_mixture_distance, dependence_bound_check, product_structure_bound, split_off_bound,
    tail_bound, tail_experiment, ExperimentConfig, MixtureComponent, ModeConfig, NamedState, PovmChoice, StateConfig,
    TailConfig,
};
use finetti::opalg::{tensor_product, DensityOperator, HermitianOperator, SymmetricLayout};
use finetti::povm::{sic_povm, Povm};
use finetti::random::{random_density, rng};
use finetti::symstate::{build_symmetric, SymmetricSpec};
use finetti::C;
use nalgebra::DVector;
use proptest::prelude::*;

fn bell() -> DensityOperator<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = C::new(0.0, 0.0);
    DensityOperator::pure(&DVector::from_vec(vec![C::new(s, 0.0), z, z, C::new(s, 0.0)])).unwrap()
}

fn config(n: usize, k: usize, state: StateConfig) -> ExperimentConfig {
    ExperimentConfig {
        version: 1,
        name: Some("integration".into()),
        d: 2,
        d_a: 1,
        n,
        k,
        seed: 5,
        dim_cap: 4096,
        povm: PovmChoice::Sic,
        state,
        mode: ModeConfig::Exact,
        tail: TailConfig::default(),
    }
}

#[test]
fn classically_correlated_pair() {
    let rho = DensityOperator::new(HermitianOperator::diag(&[0.5, 0.0, 0.0, 0.5])).unwrap();
    let report =
        dependence_bound_check(&rho, 2, &Povm::computational(2), &Distribution::uniform(2), &mut rng(1)).unwrap();
    assert!(report.holds);
    for r in &report.records {
        assert!((r.probability - 0.5).abs() < 1e-15);
        assert!((r.lhs - 0.5).abs() < 1e-15);
        assert!((r.pair_value - 0.5).abs() < 1e-12);
        assert!(r.rhs >= 0.5);
    }
}

#[test]
fn product_pairs_have_no_dependence() {
    let mut r = rng(2);
    let rho = DensityOperator::new(tensor_product(
        random_density::<f64>(2, &mut r).operator(),
        random_density::<f64>(2, &mut r).operator(),
    ))
    .unwrap();
    let sic = sic_povm::<f64>(2).unwrap();
    let q = Distribution::uniform(4);
    let dep = dependence_bound_check(&rho, 2, &sic, &q, &mut r).unwrap();
    assert!(dep.records.iter().all(|x| x.lhs < 1e-12));
    let prod = product_structure_bound(&rho, 2, &sic, &q, &mut r).unwrap();
    assert!(prod.lhs < 1e-12 && prod.holds);
}

#[test]
fn bell_state_product_structure() {
    let sic = sic_povm::<f64>(2).unwrap();
    let report = product_structure_bound(&bell(), 2, &sic, &Distribution::uniform(4), &mut rng(3)).unwrap();
    assert!((report.lhs - 0.75).abs() < 1e-12);
    assert!((report.c1.unwrap() - 24.0).abs() < 1e-9);
    assert!(report.holds);
}

#[test]
fn split_off_on_the_symmetrized_basis_pair() {
    let layout = SymmetricLayout::new(1, 2, 2).unwrap();
    let state = build_symmetric(SymmetricSpec::Symmetrize { state: DensityOperator::<f64>::basis_state(4, 1), layout })
        .unwrap();
    let report = split_off_bound(&state).unwrap();
    assert!((report.lhs - 0.5).abs() < 1e-12);
    assert!((report.single - 0.5).abs() < 1e-12);
    assert!((report.rhs - 1.0).abs() < 1e-12);
    assert!(report.holds);

    let iid = build_symmetric(SymmetricSpec::Mixture {
        terms: vec![(1.0, DensityOperator::maximally_mixed(1), random_density(2, &mut rng(4)))],
        copies: 3,
    })
    .unwrap();
    let r = split_off_bound(&iid).unwrap();
    assert!(r.lhs < 1e-12 && r.rhs < 1e-12);
}

#[test]
fn maximally_mixed_experiment_is_trivial() {
    let cfg = config(2, 2, StateConfig::Product { ancilla: None, factor: NamedState::Mixed });
    let report = definetti_experiment(&cfg).unwrap();
    assert!(report.passed);
    assert!(report.records.iter().all(|r| r.quantum_distance < 1e-12));
    let tail = tail_experiment(&cfg, &[0.5, 1.0, 2.0]).unwrap();
    assert!(tail.quantum_exceedance.iter().all(|&x| x == 0.0));
}

#[test]
fn mixture_tail_is_monotone_and_bounded() {
    let state = StateConfig::Mixture {
        components: vec![
            MixtureComponent { weight: 0.5, ancilla: None, factor: NamedState::Basis { index: 0 } },
            MixtureComponent { weight: 0.5, ancilla: None, factor: NamedState::Superposition },
        ],
    };
    let cfg = config(1, 2, state);
    let grid: Vec<f64> = (1..=8).map(|i| 0.5 * i as f64).collect();
    let tail = tail_experiment(&cfg, &grid).unwrap();
    assert!(tail.holds);
    for w in tail.classical_exceedance.windows(2) {
        assert!(w[1] <= w[0]);
    }
    assert!(tail_bound(2, 0.0) >= 1.0);
    let m = definetti_mixture_distance(&cfg).unwrap();
    assert!(m.distance <= m.convexity_bound + 1e-9);
    assert!(m.mixing_residual < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dependence_bound_on_random_pairs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = random_density::<f64>(4, &mut r);
        let sic = sic_povm::<f64>(2).unwrap();
        let report = dependence_bound_check(&rho, 2, &sic, &Distribution::uniform(4), &mut r).unwrap();
        prop_assert!(report.holds);
        prop_assert!(report.records.iter().all(|x| x.pair_holds));
        prop_assert!(product_structure_bound(&rho, 2, &sic, &Distribution::uniform(4), &mut r).unwrap().holds);
    }

    #[test]
    fn split_off_on_random_symmetric_states(seed in any::<u64>()) {
        let layout = SymmetricLayout::new(1, 2, 3).unwrap();
        let rho = random_density::<f64>(8, &mut rng(seed));
        let state = build_symmetric(SymmetricSpec::Symmetrize { state: rho, layout }).unwrap();
        prop_assert!(split_off_bound(&state).unwrap().holds);
    }
}
