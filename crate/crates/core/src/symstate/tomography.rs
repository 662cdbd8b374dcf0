use crate::classical::Distribution;
use crate::error::{Error, Result};
use crate::opalg::{apply_and_trace, tensor_product, HermitianOperator, SubsystemLayout};
use crate::povm::{linear_combination, DualFamily, Povm};
use crate::scalar::Real;

/// `Σ_z P(z) F*_z`.
pub fn tomographic_reconstruct<R: Real>(stats: &Distribution<R>, dual: &DualFamily<R>) -> Result<HermitianOperator<R>> {
    if stats.len() != dual.elements().len() {
        return Err(Error::LabelMismatch(format!(
            "{} probabilities for {} dual elements",
            stats.len(),
            dual.elements().len()
        )));
    }
    Ok(linear_combination(dual.elements(), stats.weights()))
}

/// `Σ_z |P(z) − P̃(z)| tr|F*_z|`, the bound on the reconstruction error
/// caused by replacing `P` with `P̃`.
pub fn reconstruction_error_bound<R: Real>(
    p: &Distribution<R>,
    perturbed: &Distribution<R>,
    dual: &DualFamily<R>,
) -> Result<R> {
    if p.len() != perturbed.len() {
        return Err(Error::AlphabetMismatch(p.len(), perturbed.len()));
    }
    let norms = dual.trace_norms()?;
    Ok(p.weights()
        .iter()
        .zip(perturbed.weights())
        .zip(norms)
        .fold(R::zero(), |acc, ((&a, &b), n)| acc + (a - b).abs() * n))
}

/// `Σ_z W_z ⊗ F*_z` with `W_z = tr_B((id ⊗ F_z) W)`, which equals `W` for
/// any hermitian `W` on `H_A ⊗ H_B`. For a state this is
/// `E_z[ρ^A_{|z} ⊗ F*_z]`.
pub fn bipartite_reconstruct<R: Real>(
    w: &HermitianOperator<R>,
    ancilla_dim: usize,
    povm: &Povm<R>,
    dual: &DualFamily<R>,
) -> Result<HermitianOperator<R>> {
    let layout = SubsystemLayout::new(vec![ancilla_dim, povm.dim()])?;
    let mut acc = HermitianOperator::zeros(w.dim());
    for (f, g) in povm.elements().iter().zip(dual.elements()) {
        let wz = HermitianOperator::from_hermitian_part(apply_and_trace(w.matrix(), &layout, &[(1, f.matrix())], &[])?);
        acc = &acc + &tensor_product(&wz, g);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::{trace_distance, DensityOperator};
    use crate::povm::{compute_dual, measure, sic_povm, wh_povm, PhaseConvention};
    use crate::random::{random_density, random_hermitian, rng};
    use crate::scalar::C;
    use nalgebra::DVector;

    #[test]
    fn exact_statistics_recover_the_state() {
        let mut r = rng(6);
        let sic = sic_povm::<f64>(2).unwrap();
        let dual = compute_dual(&sic).unwrap();
        let rho = random_density::<f64>(2, &mut r);
        let back = tomographic_reconstruct(&measure(&rho, &sic).unwrap(), &dual).unwrap();
        assert!(back.max_abs_diff(rho.operator()) < 1e-9);
        let mixed = DensityOperator::<f64>::maximally_mixed(2);
        let back = tomographic_reconstruct(&measure(&mixed, &sic).unwrap(), &dual).unwrap();
        assert!(back.max_abs_diff(mixed.operator()) < 1e-12);
    }

    #[test]
    fn perturbation_bound() {
        let mut r = rng(7);
        let sic = sic_povm::<f64>(2).unwrap();
        let dual = compute_dual(&sic).unwrap();
        let rho = random_density::<f64>(2, &mut r);
        let p = measure(&rho, &sic).unwrap();
        let q = Distribution::from_unnormalized(p.weights().iter().map(|w| w + 0.05 * w * w).collect()).unwrap();
        let back = tomographic_reconstruct(&q, &dual).unwrap();
        let err = trace_distance(rho.operator(), &back).unwrap();
        assert!(err <= reconstruction_error_bound(&p, &q, &dual).unwrap() + 1e-12);
    }

    #[test]
    fn bipartite_reconstruction() {
        let mut r = rng(8);
        let sic = sic_povm::<f64>(2).unwrap();
        let dual = compute_dual(&sic).unwrap();
        let s = 0.5f64.sqrt();
        let z = C::new(0.0, 0.0);
        let bell = DensityOperator::pure(&DVector::from_vec(vec![C::new(s, 0.0), z, z, C::new(s, 0.0)])).unwrap();
        let back = bipartite_reconstruct(bell.operator(), 2, &sic, &dual).unwrap();
        assert!(back.max_abs_diff(bell.operator()) < 1e-9);

        let wh = wh_povm::<f64>(2, PhaseConvention::PairSymmetric).unwrap();
        let rho = random_density::<f64>(4, &mut r);
        let back = bipartite_reconstruct(rho.operator(), 2, &wh.povm, &wh.dual).unwrap();
        assert!(back.max_abs_diff(rho.operator()) < 1e-9);

        let w = random_hermitian::<f64>(6, &mut r);
        let back = bipartite_reconstruct(&w, 3, &sic, &dual).unwrap();
        assert!(back.max_abs_diff(&w) < 1e-9);
    }
}
