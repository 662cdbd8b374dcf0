use nalgebra::SymmetricEigen;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::opalg::{trace_norm, HermitianOperator};
use crate::povm::family::Povm;
use crate::scalar::{c, Mat, Real};

/// Residual allowed in the reconstruction identity `U = Σ tr(F_z U) F*_z`.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;
/// Largest Gram condition number accepted by [`compute_dual`].
pub const MAX_CONDITION: f64 = 1e12;

/// Hermitian operators `{F*_z}` aligned with the outcomes of a POVM.
#[derive(Clone, Debug, PartialEq)]
pub struct DualFamily<R: Real> {
    labels: Vec<String>,
    elements: Vec<HermitianOperator<R>>,
}

/// Hermitian basis of `Herm(C^d)`: diagonal units, then symmetric and
/// antisymmetric off-diagonal pairs.
pub fn hermitian_basis<R: Real>(d: usize) -> Vec<HermitianOperator<R>> {
    let mut basis = Vec::with_capacity(d * d);
    for j in 0..d {
        basis.push(HermitianOperator::basis_projector(d, j));
    }
    for j in 0..d {
        for k in j + 1..d {
            let mut s = Mat::zeros(d, d);
            s[(j, k)] = c(R::one());
            s[(k, j)] = c(R::one());
            let mut a = Mat::zeros(d, d);
            a[(j, k)] = crate::scalar::C::new(R::zero(), -R::one());
            a[(k, j)] = crate::scalar::C::new(R::zero(), R::one());
            basis.push(HermitianOperator::from_hermitian_part(s));
            basis.push(HermitianOperator::from_hermitian_part(a));
        }
    }
    basis
}

pub(crate) fn linear_combination<R: Real>(ops: &[HermitianOperator<R>], coefficients: &[R]) -> HermitianOperator<R> {
    let dim = ops[0].dim();
    let mut acc = Mat::zeros(dim, dim);
    for (f, &w) in ops.iter().zip(coefficients) {
        acc += f.matrix() * c(w);
    }
    HermitianOperator::from_hermitian_part(acc)
}

impl<R: Real> DualFamily<R> {
    /// Accepts a candidate dual after checking the reconstruction identity
    /// on a hermitian basis.
    pub fn new(povm: &Povm<R>, elements: Vec<HermitianOperator<R>>) -> Result<Self> {
        if elements.len() != povm.len() {
            return Err(Error::LabelMismatch(format!("{} dual elements for {} outcomes", elements.len(), povm.len())));
        }
        if let Some(bad) = elements.iter().find(|e| e.dim() != povm.dim()) {
            return Err(Error::DimensionMismatch(bad.dim(), povm.dim()));
        }
        let dual = Self { labels: povm.labels().to_vec(), elements };
        let residual = dual.basis_residual(povm);
        if residual > R::tol(RECONSTRUCTION_TOL) {
            return Err(Error::Construction { identity: "dual reconstruction", deviation: residual.as_f64() });
        }
        Ok(dual)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn elements(&self) -> &[HermitianOperator<R>] {
        &self.elements
    }

    pub fn element(&self, z: usize) -> &HermitianOperator<R> {
        &self.elements[z]
    }

    /// `Σ_z c_z F*_z`.
    pub fn combine(&self, coefficients: &[R]) -> HermitianOperator<R> {
        linear_combination(&self.elements, coefficients)
    }

    /// `Σ_z tr(F_z U) F*_z`.
    pub fn reconstruct(&self, povm: &Povm<R>, u: &HermitianOperator<R>) -> HermitianOperator<R> {
        let coeffs: Vec<R> = povm.elements().iter().map(|f| f.inner(u)).collect();
        self.combine(&coeffs)
    }

    /// Largest reconstruction residual over a hermitian basis.
    pub fn basis_residual(&self, povm: &Povm<R>) -> R {
        hermitian_basis::<R>(povm.dim())
            .iter()
            .map(|u| self.reconstruct(povm, u).max_abs_diff(u))
            .fold(R::zero(), |a, b| a.max(b))
    }

    pub fn trace_norms(&self) -> Result<Vec<R>> {
        self.elements.iter().map(trace_norm).collect()
    }
}

/// Unique dual of a basis POVM (`|Z| = d²`) by inverting the Gram matrix.
pub fn compute_dual<R: Real>(povm: &Povm<R>) -> Result<DualFamily<R>> {
    let basis = povm.dim() * povm.dim();
    if povm.len() > basis {
        return Err(Error::Overcomplete { outcomes: povm.len(), basis });
    }
    let rank = povm.span_dimension();
    if rank < basis {
        return Err(Error::NotInformationallyComplete { rank, required: basis });
    }
    let eig = SymmetricEigen::new(povm.gram());
    let max = eig.eigenvalues.iter().fold(R::zero(), |a, &x| a.max(x.abs()));
    let min = eig.eigenvalues.iter().fold(max, |a, &x| a.min(x));
    let cond = if min > R::zero() { (max / min).as_f64() } else { f64::INFINITY };
    if cond > MAX_CONDITION {
        return Err(Error::IllConditioned(cond));
    }
    let inv = &eig.eigenvectors
        * nalgebra::DMatrix::from_diagonal(&eig.eigenvalues.map(|x| R::one() / x))
        * eig.eigenvectors.transpose();
    let dual: Vec<HermitianOperator<R>> = (0..povm.len())
        .map(|z| {
            let coeffs: Vec<R> = (0..povm.len()).map(|w| inv[(z, w)]).collect();
            linear_combination(povm.elements(), &coeffs)
        })
        .collect();
    DualFamily::new(povm, dual)
}

/// `C₁ = 2 Σ_z tr|F*_z|` and `C₂ = √|Z| C₁`; `None` stands for infinity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PovmConstants {
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub trace_norms: Vec<f64>,
}

impl PovmConstants {
    pub fn infinite() -> Self {
        Self { c1: None, c2: None, trace_norms: vec![] }
    }

    pub fn from_dual<R: Real>(dual: &DualFamily<R>) -> Result<Self> {
        let trace_norms: Vec<f64> = dual.trace_norms()?.into_iter().map(Real::as_f64).collect();
        let c1 = 2.0 * trace_norms.iter().sum::<f64>();
        let c2 = (trace_norms.len() as f64).sqrt() * c1;
        Ok(Self { c1: Some(c1), c2: Some(c2), trace_norms })
    }

    pub fn is_finite(&self) -> bool {
        self.c1.is_some()
    }
}

/// Constants of a POVM. A basis POVM has a unique dual so the minimum over
/// duals is its value; a POVM that is not informationally complete has
/// infinite constants. Overcomplete POVMs are rejected.
pub fn povm_constants<R: Real>(povm: &Povm<R>) -> Result<PovmConstants> {
    match compute_dual(povm) {
        Ok(dual) => PovmConstants::from_dual(&dual),
        Err(Error::NotInformationallyComplete { .. }) => Ok(PovmConstants::infinite()),
        Err(e) => Err(e),
    }
}

/// `2d²(2d−1)`, the value of `C₁` for a SIC-POVM.
pub fn sic_c1(d: usize) -> f64 {
    let d = d as f64;
    2.0 * d * d * (2.0 * d - 1.0)
}

/// `2d³(2d−1)`.
pub fn sic_c2(d: usize) -> f64 {
    sic_c1(d) * d as f64
}

/// `2√2 d⁵`, the ceiling on `C₁` for the Weyl–Heisenberg POVM.
pub fn general_c1_ceiling(d: usize) -> f64 {
    2.0 * 2f64.sqrt() * (d as f64).powi(5)
}

/// `2√2 d⁶`.
pub fn general_c2_ceiling(d: usize) -> f64 {
    general_c1_ceiling(d) * d as f64
}
