//! Seeded generators for test operators, states, POVMs and distributions.
//!
//! All randomness uses `ChaCha8Rng` seeded through `seed_from_u64`, so a
//! given seed reproduces the same stream on every platform.

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::opalg::{apply_spectral, eig_hermitian, DensityOperator, HermitianOperator};
use crate::scalar::{Mat, Real, C};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Real>(rng: &mut impl Rng) -> C<R> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C::new(R::lit(re), R::lit(im))
}

/// Ginibre matrix with standard complex normal entries.
pub fn ginibre<R: Real>(rows: usize, cols: usize, rng: &mut impl Rng) -> Mat<R> {
    Mat::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Hermitian operator with entries of order one.
pub fn random_hermitian<R: Real>(dim: usize, rng: &mut impl Rng) -> HermitianOperator<R> {
    HermitianOperator::from_hermitian_part(ginibre(dim, dim, rng))
}

/// Full-rank mixed state `G G† / tr(G G†)`.
pub fn random_density<R: Real>(dim: usize, rng: &mut impl Rng) -> DensityOperator<R> {
    let g = ginibre::<R>(dim, dim, rng);
    let h = HermitianOperator::from_hermitian_part(&g * g.adjoint());
    let t = h.trace();
    DensityOperator::from_trusted(h.scale(R::one() / t))
}

pub fn random_pure<R: Real>(dim: usize, rng: &mut impl Rng) -> DensityOperator<R> {
    let v = DVector::from_fn(dim, |_, _| gaussian::<R>(rng));
    DensityOperator::pure(&v).expect("gaussian vector is nonzero almost surely")
}

/// `outcomes` positive operators `S^{-1/2} A_i S^{-1/2}` with `S = Σ A_i`.
/// Ranks are random but add up to at least `dim`, so `S` is invertible.
pub fn random_povm_elements<R: Real>(dim: usize, outcomes: usize, rng: &mut impl Rng) -> Vec<HermitianOperator<R>> {
    let mut ranks: Vec<usize> = (0..outcomes).map(|_| 1 + rng.gen_range(0..dim)).collect();
    let others: usize = ranks[..outcomes.saturating_sub(1)].iter().sum();
    if let Some(last) = ranks.last_mut() {
        *last = (*last).max(dim.saturating_sub(others)).min(dim);
    }
    let raw: Vec<HermitianOperator<R>> = ranks
        .into_iter()
        .map(|rank| {
            let g = ginibre::<R>(dim, rank, rng);
            HermitianOperator::from_hermitian_part(&g * g.adjoint())
        })
        .collect();
    let total = raw.iter().fold(HermitianOperator::zeros(dim), |acc, a| &acc + a);
    let eig = eig_hermitian(&total).expect("positive definite sum");
    let inv_sqrt = apply_spectral(&eig, |x| R::one() / x.sqrt());
    raw.iter().map(|a| a.conjugate(inv_sqrt.matrix())).collect()
}

/// Uniform weights on `len` outcomes, renormalized.
pub fn random_weights(len: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.gen::<f64>()).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}
