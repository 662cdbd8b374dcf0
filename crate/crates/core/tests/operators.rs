use finetti::opalg::{
    conjugate_by_permutation, eig_hermitian, partial_trace, permutation_operator, symmetrize, tensor_power,
    tensor_product, trace_distance, trace_norm, DensityOperator, HermitianOperator, Permutation, SubsystemLayout,
    SymmetricLayout,
};
use finetti::random::{random_density, random_hermitian, rng};
use finetti::{Mat, C};
use nalgebra::DVector;
use proptest::prelude::*;

fn op(rows: &[[(f64, f64); 2]; 2]) -> HermitianOperator<f64> {
    let m = Mat::from_fn(2, 2, |i, j| C::new(rows[i][j].0, rows[i][j].1));
    HermitianOperator::new(m).unwrap()
}

fn bell() -> DensityOperator<f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DensityOperator::pure(&DVector::from_vec(vec![C::new(s, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(s, 0.0)]))
        .unwrap()
}

#[test]
fn kronecker_blocks() {
    let z = op(&[[(1.0, 0.0), (0.0, 0.0)], [(0.0, 0.0), (-1.0, 0.0)]]);
    let x = op(&[[(0.0, 0.0), (1.0, 0.0)], [(1.0, 0.0), (0.0, 0.0)]]);
    let zx = tensor_product(&z, &x);
    let m = zx.matrix();
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(m[(i, j)], x.matrix()[(i, j)]);
            assert_eq!(m[(i + 2, j + 2)], -x.matrix()[(i, j)]);
            assert_eq!(m[(i, j + 2)], C::new(0.0, 0.0));
        }
    }
    let id = HermitianOperator::<f64>::identity(2);
    assert_eq!(tensor_product(&id, &id), HermitianOperator::identity(4));
}

#[test]
fn bell_reduction_is_maximally_mixed() {
    let layout = SubsystemLayout::new(vec![2, 2]).unwrap();
    let reduced = partial_trace(bell().operator(), &layout, &[1]).unwrap();
    assert!(reduced.max_abs_diff(DensityOperator::maximally_mixed(2).operator()) < 1e-15);
}

#[test]
fn partial_traces_commute() {
    let mut r = rng(1);
    let w = random_density::<f64>(12, &mut r);
    let layout = SubsystemLayout::new(vec![2, 3, 2]).unwrap();
    let at_once = partial_trace(w.operator(), &layout, &[1, 2]).unwrap();
    let c_first = partial_trace(w.operator(), &layout, &[2]).unwrap();
    let then_b = partial_trace(&c_first, &SubsystemLayout::new(vec![2, 3]).unwrap(), &[1]).unwrap();
    let b_first = partial_trace(w.operator(), &layout, &[1]).unwrap();
    let then_c = partial_trace(&b_first, &SubsystemLayout::new(vec![2, 2]).unwrap(), &[1]).unwrap();
    assert!(at_once.max_abs_diff(&then_b) < 1e-14);
    assert!(at_once.max_abs_diff(&then_c) < 1e-14);
}

#[test]
fn spectra_and_norms() {
    let e = eig_hermitian(&HermitianOperator::<f64>::diag(&[1.0, 3.0])).unwrap();
    assert_eq!(e.values, vec![3.0, 1.0]);
    let x = op(&[[(0.0, 0.0), (1.0, 0.0)], [(1.0, 0.0), (0.0, 0.0)]]);
    let e = eig_hermitian(&x).unwrap();
    assert!((e.max() - 1.0).abs() < 1e-15 && (e.min() + 1.0).abs() < 1e-15);
    assert_eq!(trace_norm(&HermitianOperator::<f64>::identity(5)).unwrap(), 5.0);
    assert!((trace_norm(&HermitianOperator::<f64>::diag(&[2.0, -1.0, -1.0])).unwrap() - 4.0).abs() < 1e-15);
}

#[test]
fn distances_between_qubit_states() {
    let zero = DensityOperator::<f64>::basis_state(2, 0);
    let one = DensityOperator::<f64>::basis_state(2, 1);
    let mixed = DensityOperator::<f64>::maximally_mixed(2);
    assert_eq!(trace_distance(zero.operator(), zero.operator()).unwrap(), 0.0);
    assert!((trace_distance(zero.operator(), one.operator()).unwrap() - 1.0).abs() < 1e-15);
    assert!((trace_distance(zero.operator(), mixed.operator()).unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn swap_exchanges_qubits() {
    let swap = Permutation::new(vec![1, 0]).unwrap();
    let p = permutation_operator::<f64>(&swap, 2).unwrap();
    let ket01 = DVector::from_fn(4, |i, _| C::new(if i == 1 { 1.0 } else { 0.0 }, 0.0));
    let image = &p * ket01;
    assert_eq!(image[2], C::new(1.0, 0.0));
    assert_eq!(image.iter().filter(|z| z.norm() > 0.0).count(), 1);
    assert_eq!(permutation_operator::<f64>(&Permutation::identity(3), 2).unwrap(), Mat::identity(8, 8));
}

#[test]
fn symmetrized_product_basis_state() {
    let layout = SymmetricLayout::new(1, 2, 2).unwrap();
    let ket01 = HermitianOperator::<f64>::basis_projector(4, 1);
    let sym = symmetrize(&ket01, layout).unwrap();
    let expected = HermitianOperator::diag(&[0.0, 0.5, 0.5, 0.0]);
    assert!(sym.max_abs_diff(&expected) < 1e-15);
    assert!(symmetrize(&sym, layout).unwrap().max_abs_diff(&sym) < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tensor_products_preserve_trace_distance_to_a_common_factor(seed in any::<u64>(), d in 2usize..4) {
        let mut r = rng(seed);
        let (a, b, c) = (random_density::<f64>(d, &mut r), random_density(d, &mut r), random_density(2, &mut r));
        let base = trace_distance(a.operator(), b.operator()).unwrap();
        let extended = trace_distance(&tensor_product(a.operator(), c.operator()), &tensor_product(b.operator(), c.operator())).unwrap();
        prop_assert!((base - extended).abs() < 1e-10);
    }

    #[test]
    fn trace_distance_is_a_metric_on_states(seed in any::<u64>(), d in 2usize..5) {
        let mut r = rng(seed);
        let (a, b, c) = (random_density::<f64>(d, &mut r), random_density(d, &mut r), random_density(d, &mut r));
        let ab = trace_distance(a.operator(), b.operator()).unwrap();
        let bc = trace_distance(b.operator(), c.operator()).unwrap();
        let ac = trace_distance(a.operator(), c.operator()).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!((ab - trace_distance(b.operator(), a.operator()).unwrap()).abs() < 1e-12);
        prop_assert!(ac <= ab + bc + 1e-12);
    }

    #[test]
    fn partial_trace_never_increases_distance(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (random_density::<f64>(6, &mut r), random_density(6, &mut r));
        let layout = SubsystemLayout::new(vec![2, 3]).unwrap();
        let full = trace_distance(a.operator(), b.operator()).unwrap();
        for traced in [0, 1] {
            let pa = partial_trace(a.operator(), &layout, &[traced]).unwrap();
            let pb = partial_trace(b.operator(), &layout, &[traced]).unwrap();
            prop_assert!(trace_distance(&pa, &pb).unwrap() <= full + 1e-10);
        }
    }

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), d in 1usize..7) {
        let h = random_hermitian::<f64>(d, &mut rng(seed));
        let e = eig_hermitian(&h).unwrap();
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let back = HermitianOperator::new(e.reconstruct()).unwrap();
        prop_assert!(back.max_abs_diff(&h) < 1e-10);
    }

    #[test]
    fn symmetrization_fixes_products_and_commutes_with_permutations(seed in any::<u64>(), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let mut r = rng(seed);
        let layout = SymmetricLayout::new(2, 2, 3).unwrap();
        let tau = random_density::<f64>(2, &mut r);
        let sigma = random_density::<f64>(2, &mut r);
        let product = tensor_product(sigma.operator(), &tensor_power(tau.operator(), 3));
        prop_assert!(symmetrize(&product, layout).unwrap().max_abs_diff(&product) < 1e-14);

        let w = random_density::<f64>(16, &mut r);
        let sym = symmetrize(w.operator(), layout).unwrap();
        let p = Permutation::new(perm).unwrap();
        prop_assert!(conjugate_by_permutation(&sym, layout, &p).unwrap().max_abs_diff(&sym) < 1e-14);
    }
}
