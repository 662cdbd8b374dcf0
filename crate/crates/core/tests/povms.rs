use finetti::classical::variational_distance;
use finetti::opalg::{eig_hermitian, trace_distance, DensityOperator, HermitianOperator};
use finetti::povm::{
    compute_dual, helstrom_povm, measure, povm_constants, povm_from_text, povm_to_text, sic_overlap, sic_povm,
    validate_povm, wh_fiducial_state, wh_povm, PhaseConvention, Povm,
};
use finetti::random::{random_density, random_hermitian, rng};
use finetti::{Error, Mat, PovmViolation, C};
use proptest::prelude::*;

#[test]
fn validation_examples() {
    let id = |s: f64| Mat::<f64>::identity(2, 2) * C::new(s, 0.0);
    assert!(validate_povm(vec!["id".into()], vec![id(1.0)]).is_ok());
    match validate_povm(vec!["a".into(), "b".into()], vec![id(0.5), id(0.75)]) {
        Err(Error::InvalidPovm(v)) => {
            assert!(matches!(v[..], [PovmViolation::IdentityResidual { residual }] if (residual - 0.25).abs() < 1e-15));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn informational_completeness() {
    assert!(!Povm::<f64>::computational(2).is_informationally_complete());
    assert_eq!(povm_constants(&Povm::<f64>::computational(2)).unwrap().c1, None);
    assert!(sic_povm::<f64>(2).unwrap().is_informationally_complete());
    assert!(wh_povm::<f64>(3, PhaseConvention::PairSymmetric).unwrap().povm.is_informationally_complete());
}

#[test]
fn qubit_sic_dual_closed_form() {
    let sic = sic_povm::<f64>(2).unwrap();
    assert!((sic_overlap(2) - 1.0 / 12.0).abs() < 1e-15);
    let dual = compute_dual(&sic).unwrap();
    for z in 0..4 {
        let mut expected = sic.element(z).scale(5.0);
        for w in (0..4).filter(|&w| w != z) {
            expected = &expected - sic.element(w);
        }
        assert!(dual.element(z).max_abs_diff(&expected) < 1e-12);
        let e = eig_hermitian(dual.element(z)).unwrap();
        assert!((e.max() - 2.0).abs() < 1e-12 && (e.min() + 1.0).abs() < 1e-12);
        let f = eig_hermitian(sic.element(z)).unwrap();
        assert!((f.max() - 0.5).abs() < 1e-15 && f.min().abs() < 1e-15);
    }
    let total = sic.elements().iter().fold(HermitianOperator::zeros(2), |acc, f| &acc + f);
    assert!(total.max_abs_diff(&HermitianOperator::identity(2)) < 1e-15);
}

#[test]
fn qutrit_fiducial_is_a_state() {
    let wh = wh_povm::<f64>(3, PhaseConvention::PairSymmetric).unwrap();
    let rho = wh_fiducial_state(&wh.displacements).unwrap();
    assert!((rho.operator().trace() - 1.0).abs() < 1e-15);
    assert!(eig_hermitian(rho.operator()).unwrap().min() >= -1e-10);
    let total = wh.povm.elements().iter().fold(HermitianOperator::zeros(3), |acc, f| &acc + f);
    assert!(total.max_abs_diff(&HermitianOperator::identity(3)) < 1e-10);
}

#[test]
fn measuring_simple_states() {
    let sic = sic_povm::<f64>(2).unwrap();
    let mixed = measure(&DensityOperator::maximally_mixed(2), &sic).unwrap();
    assert!(mixed.weights().iter().all(|w| (w - 0.25).abs() < 1e-15));
    let zero = measure(&DensityOperator::<f64>::basis_state(2, 0), &Povm::computational(2)).unwrap();
    assert_eq!(zero.weights(), &[1.0, 0.0]);
    let wh = wh_povm::<f64>(2, PhaseConvention::PairSymmetric).unwrap();
    let p = measure(&wh.fiducial, &sic).unwrap();
    assert!((p.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn helstrom_on_orthogonal_states() {
    let zero = DensityOperator::<f64>::basis_state(2, 0);
    let one = DensityOperator::<f64>::basis_state(2, 1);
    let h = helstrom_povm(zero.operator(), one.operator()).unwrap();
    assert!(h.element(0).max_abs_diff(zero.operator()) < 1e-15);
    let d = variational_distance(&measure(&zero, &h).unwrap(), &measure(&one, &h).unwrap()).unwrap();
    assert!((d - 1.0).abs() < 1e-15);
}

#[test]
fn text_round_trip() {
    let wh = wh_povm::<f64>(3, PhaseConvention::PairSymmetric).unwrap();
    let back = povm_from_text::<f64>(&povm_to_text(&wh.povm)).unwrap();
    assert_eq!(back.labels(), wh.povm.labels());
    for (a, b) in back.elements().iter().zip(wh.povm.elements()) {
        assert!(a.max_abs_diff(b) < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn helstrom_attains_trace_distance(seed in any::<u64>(), d in 2usize..5) {
        let mut r = rng(seed);
        let (a, b) = (random_density::<f64>(d, &mut r), random_density(d, &mut r));
        let h = helstrom_povm(a.operator(), b.operator()).unwrap();
        let classical = variational_distance(&measure(&a, &h).unwrap(), &measure(&b, &h).unwrap()).unwrap();
        prop_assert!((classical - trace_distance(a.operator(), b.operator()).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn measurement_never_increases_distance(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (random_density::<f64>(3, &mut r), random_density(3, &mut r));
        let wh = wh_povm::<f64>(3, PhaseConvention::PairSymmetric).unwrap();
        let classical = variational_distance(&measure(&a, &wh.povm).unwrap(), &measure(&b, &wh.povm).unwrap()).unwrap();
        prop_assert!(classical <= trace_distance(a.operator(), b.operator()).unwrap() + 1e-10);
    }

    #[test]
    fn duals_reconstruct_hermitian_operators(seed in any::<u64>(), d in 2usize..5) {
        let wh = wh_povm::<f64>(d, PhaseConvention::PairSymmetric).unwrap();
        let u = random_hermitian::<f64>(d, &mut rng(seed));
        prop_assert!(wh.dual.reconstruct(&wh.povm, &u).max_abs_diff(&u) < 1e-9);
    }
}
