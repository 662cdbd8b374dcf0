use nalgebra::{DMatrix, SymmetricEigen};

use crate::classical::Distribution;
use crate::error::{Error, PovmViolation, Result};
use crate::opalg::{eig_hermitian, nonnegative_projector, DensityOperator, HermitianOperator, HERMITIAN_TOL};
use crate::scalar::{max_abs, Mat, Real};

/// Positivity and resolution-of-identity tolerance for POVM elements.
pub const POVM_TOL: f64 = 1e-10;
/// Relative eigenvalue cutoff for the rank of a Gram matrix.
pub const RANK_TOL: f64 = 1e-10;

/// A validated POVM `{F_z}` with one label per outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm<R: Real> {
    dim: usize,
    labels: Vec<String>,
    elements: Vec<HermitianOperator<R>>,
}

/// Checks hermiticity, positivity and `Σ F_z = id`, reporting every
/// violation found rather than the first.
pub fn validate_povm<R: Real>(labels: Vec<String>, elements: Vec<Mat<R>>) -> Result<Povm<R>> {
    if labels.len() != elements.len() {
        return Err(Error::LabelMismatch(format!("{} labels for {} elements", labels.len(), elements.len())));
    }
    if elements.is_empty() {
        return Err(Error::InvalidPovm(vec![PovmViolation::IdentityResidual { residual: 1.0 }]));
    }
    if let Some(dup) = labels.iter().enumerate().find(|(i, l)| labels[..*i].contains(l)) {
        return Err(Error::LabelMismatch(format!("duplicate label {}", dup.1)));
    }
    let dim = elements[0].nrows();
    let mut violations = Vec::new();
    let mut hermitian = Vec::with_capacity(elements.len());
    for (label, m) in labels.iter().zip(elements) {
        if m.nrows() != dim || m.ncols() != dim {
            violations.push(PovmViolation::DimensionMismatch {
                label: label.clone(),
                dim: m.nrows().max(m.ncols()),
                expected: dim,
            });
            continue;
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let dev = max_abs(&(&m - m.adjoint()));
        if dev > R::tol(HERMITIAN_TOL) {
            violations.push(PovmViolation::NonHermitian { label: label.clone(), deviation: dev.as_f64() });
            continue;
        }
        let h = HermitianOperator::from_hermitian_part(m);
        let min = eig_hermitian(&h)?.min();
        if min < -R::tol(POVM_TOL) {
            violations.push(PovmViolation::NegativeEigenvalue { label: label.clone(), min_eigenvalue: min.as_f64() });
        }
        hermitian.push(h);
    }
    if violations
        .iter()
        .all(|v| !matches!(v, PovmViolation::DimensionMismatch { .. } | PovmViolation::NonHermitian { .. }))
    {
        let sum = hermitian.iter().fold(HermitianOperator::zeros(dim), |acc, f| &acc + f);
        let residual = sum.max_abs_diff(&HermitianOperator::identity(dim));
        if residual > R::tol(POVM_TOL) {
            violations.push(PovmViolation::IdentityResidual { residual: residual.as_f64() });
        }
    }
    if !violations.is_empty() {
        return Err(Error::InvalidPovm(violations));
    }
    Ok(Povm { dim, labels, elements: hermitian })
}

impl<R: Real> Povm<R> {
    pub fn new(labels: Vec<String>, elements: Vec<HermitianOperator<R>>) -> Result<Self> {
        validate_povm(labels, elements.into_iter().map(HermitianOperator::into_matrix).collect())
    }

    /// Labels `0, 1, …`.
    pub fn with_index_labels(elements: Vec<HermitianOperator<R>>) -> Result<Self> {
        let labels = (0..elements.len()).map(|i| i.to_string()).collect();
        Self::new(labels, elements)
    }

    /// Projective measurement in the computational basis.
    pub fn computational(dim: usize) -> Self {
        let elements = (0..dim).map(|i| HermitianOperator::basis_projector(dim, i)).collect();
        Self::with_index_labels(elements).expect("basis projectors form a POVM")
    }

    pub(crate) fn from_trusted(labels: Vec<String>, elements: Vec<HermitianOperator<R>>) -> Self {
        Self { dim: elements[0].dim(), labels, elements }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
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

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Real Gram matrix `tr(F_z F_{z'})`.
    pub fn gram(&self) -> DMatrix<R> {
        let n = self.len();
        let mut g = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.elements[i].inner(&self.elements[j]);
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        g
    }

    /// Dimension of the real span of the elements.
    pub fn span_dimension(&self) -> usize {
        let eig = SymmetricEigen::new(self.gram());
        let top = eig.eigenvalues.iter().fold(R::zero(), |a, &x| a.max(x.abs()));
        let cut = top * R::tol(RANK_TOL);
        eig.eigenvalues.iter().filter(|&&x| x > cut).count()
    }

    /// True iff the elements span `Herm(H)`.
    pub fn is_informationally_complete(&self) -> bool {
        self.span_dimension() == self.dim * self.dim
    }
}

/// Outcome distribution `tr(F_z ρ)`. Values in `[-1e-10, 0)` are clipped
/// and the result renormalized, absorbing the POVM tolerance.
pub fn measure<R: Real>(state: &DensityOperator<R>, povm: &Povm<R>) -> Result<Distribution<R>> {
    if state.dim() != povm.dim() {
        return Err(Error::DimensionMismatch(state.dim(), povm.dim()));
    }
    measure_operator(state.operator(), povm)
}

pub(crate) fn measure_operator<R: Real>(h: &HermitianOperator<R>, povm: &Povm<R>) -> Result<Distribution<R>> {
    let tol = R::tol(POVM_TOL);
    let mut weights = Vec::with_capacity(povm.len());
    for f in povm.elements() {
        let p = f.inner(h);
        if p < -tol {
            return Err(Error::InvalidDistribution(format!("outcome probability {p}")));
        }
        weights.push(p.max(R::zero()));
    }
    Distribution::from_unnormalized(weights)
}

/// Two-outcome projective measurement `{P₊, id − P₊}` with `P₊` the
/// projector onto the nonnegative eigenspace of `ρ − σ`; labels `+`, `-`.
pub fn helstrom_povm<R: Real>(rho: &HermitianOperator<R>, sigma: &HermitianOperator<R>) -> Result<Povm<R>> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let plus = nonnegative_projector(&(rho - sigma))?;
    let minus = &HermitianOperator::identity(rho.dim()) - &plus;
    Ok(Povm::from_trusted(vec!["+".into(), "-".into()], vec![plus, minus]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::trace_distance;
    use crate::random::{random_density, rng};
    use crate::scalar::c;

    #[test]
    fn computational_projectors_are_valid_but_not_complete() {
        let p = Povm::<f64>::computational(2);
        assert_eq!(p.len(), 2);
        assert!(!p.is_informationally_complete());
        assert_eq!(p.span_dimension(), 2);
    }

    #[test]
    fn trivial_povm() {
        assert!(Povm::<f64>::with_index_labels(vec![HermitianOperator::identity(3)]).is_ok());
    }

    #[test]
    fn identity_residual_is_reported() {
        let id = Mat::<f64>::identity(2, 2);
        let err = validate_povm(vec!["a".into(), "b".into()], vec![&id * c(0.5), &id * c(0.75)]).unwrap_err();
        match err {
            Error::InvalidPovm(v) => {
                assert_eq!(v.len(), 1);
                let PovmViolation::IdentityResidual { residual } = v[0] else { panic!("{v:?}") };
                assert!((residual - 0.25).abs() < 1e-15);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn negative_and_nonhermitian_elements() {
        let mut a = Mat::<f64>::identity(2, 2);
        a[(0, 0)] = c(2.0);
        let mut b = Mat::<f64>::zeros(2, 2);
        b[(0, 0)] = c(-1.0);
        let err = validate_povm(vec!["a".into(), "b".into()], vec![a, b]).unwrap_err();
        assert!(matches!(err, Error::InvalidPovm(ref v) if matches!(v[0], PovmViolation::NegativeEigenvalue { .. })));
        let mut n = Mat::<f64>::identity(2, 2);
        n[(0, 1)] = c(0.1);
        let err = validate_povm(vec!["n".into()], vec![n]).unwrap_err();
        assert!(matches!(err, Error::InvalidPovm(ref v) if matches!(v[0], PovmViolation::NonHermitian { .. })));
    }

    #[test]
    fn measuring_basis_states() {
        let p = Povm::<f64>::computational(2);
        let d = measure(&DensityOperator::basis_state(2, 0), &p).unwrap();
        assert_eq!(d.weights(), &[1.0, 0.0]);
        let mixed = measure(&DensityOperator::maximally_mixed(2), &p).unwrap();
        assert!((mixed.get(0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn helstrom_achieves_trace_distance() {
        let mut r = rng(4);
        for d in 2..=4 {
            let a = random_density::<f64>(d, &mut r);
            let b = random_density::<f64>(d, &mut r);
            let h = helstrom_povm(a.operator(), b.operator()).unwrap();
            let pa = measure(&a, &h).unwrap();
            let pb = measure(&b, &h).unwrap();
            let achieved = crate::classical::variational_distance(&pa, &pb).unwrap();
            let td = trace_distance(a.operator(), b.operator()).unwrap();
            assert!((achieved - td).abs() < 1e-10);
        }
    }

    #[test]
    fn helstrom_on_orthogonal_states() {
        let a = DensityOperator::<f64>::basis_state(2, 0);
        let b = DensityOperator::<f64>::basis_state(2, 1);
        let h = helstrom_povm(a.operator(), b.operator()).unwrap();
        assert!(h.element(0).max_abs_diff(a.operator()) < 1e-12);
    }
}
