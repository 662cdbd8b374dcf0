//! Hermitian eigendecomposition and the trace-norm family built on it.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::opalg::operator::HermitianOperator;
use crate::scalar::{c, max_abs, Mat, Real};

const MAX_SWEEPS: usize = 100_000;

/// Eigenvalues sorted in descending order with matching orthonormal
/// eigenvector columns.
#[derive(Clone, Debug)]
pub struct Eigen<R: Real> {
    pub values: Vec<R>,
    pub vectors: Mat<R>,
}

impl<R: Real> Eigen<R> {
    pub fn min(&self) -> R {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn max(&self) -> R {
        self.values[0]
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> Mat<R> {
        let diag = DVector::from_iterator(self.values.len(), self.values.iter().map(|&x| c(x)));
        &self.vectors * Mat::from_diagonal(&diag) * self.vectors.adjoint()
    }
}

pub fn eig_hermitian<R: Real>(h: &HermitianOperator<R>) -> Result<Eigen<R>> {
    let dim = h.dim();
    let eig = SymmetricEigen::try_new(h.matrix().clone(), R::default_epsilon(), MAX_SWEEPS)
        .ok_or_else(|| Error::EigenNonConvergence { dim, max_entry: max_abs(h.matrix()).as_f64() })?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Mat::from_fn(dim, dim, |r, col| eig.eigenvectors[(r, order[col])]);
    Ok(Eigen { values, vectors })
}

/// `V f(Λ) V†` for a real function of the spectrum.
pub fn apply_spectral<R: Real>(eig: &Eigen<R>, f: impl Fn(R) -> R) -> HermitianOperator<R> {
    let mapped = Eigen { values: eig.values.iter().map(|&x| f(x)).collect(), vectors: eig.vectors.clone() };
    HermitianOperator::from_hermitian_part(mapped.reconstruct())
}

/// `tr|h|`, the sum of absolute eigenvalues.
pub fn trace_norm<R: Real>(h: &HermitianOperator<R>) -> Result<R> {
    let eig = eig_hermitian(h)?;
    Ok(eig.values.iter().fold(R::zero(), |acc, &x| acc + x.abs()))
}

/// `½ tr|u − v|`.
pub fn trace_distance<R: Real>(u: &HermitianOperator<R>, v: &HermitianOperator<R>) -> Result<R> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(u.dim(), v.dim()));
    }
    Ok(trace_norm(&(u - v))? * R::lit(0.5))
}

/// Projector onto the eigenspace of eigenvalues `>= 0`.
pub fn nonnegative_projector<R: Real>(h: &HermitianOperator<R>) -> Result<HermitianOperator<R>> {
    let eig = eig_hermitian(h)?;
    Ok(apply_spectral(&eig, |x| if x >= R::zero() { R::one() } else { R::zero() }))
}
