use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::opalg::spectral::{apply_spectral, eig_hermitian};
use crate::scalar::{c, max_abs, Mat, Real, C};

/// Tolerance (max-entry norm) for accepting a matrix as hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on the trace and the smallest eigenvalue of a density operator.
pub const DENSITY_TOL: f64 = 1e-10;

/// Dense hermitian operator on a finite-dimensional Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator<R: Real> {
    m: Mat<R>,
}

impl<R: Real> HermitianOperator<R> {
    /// Validates squareness, finiteness and hermiticity.
    pub fn new(m: Mat<R>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare(m.nrows(), m.ncols()));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let dev = max_abs(&(&m - m.adjoint()));
        if dev > R::tol(HERMITIAN_TOL) {
            return Err(Error::NotHermitian(dev.as_f64()));
        }
        Ok(Self::from_hermitian_part(m))
    }

    /// Keeps the hermitian part `(m + m†)/2`; for results that are hermitian
    /// up to rounding.
    pub(crate) fn from_hermitian_part(m: Mat<R>) -> Self {
        let adj = m.adjoint();
        Self { m: (m + adj) * c(R::lit(0.5)) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: Mat::identity(dim, dim) }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { m: Mat::zeros(dim, dim) }
    }

    pub fn diag(values: &[R]) -> Self {
        let v = DVector::from_iterator(values.len(), values.iter().map(|&x| c(x)));
        Self { m: Mat::from_diagonal(&v) }
    }

    /// `|i⟩⟨i|` in dimension `dim`.
    pub fn basis_projector(dim: usize, i: usize) -> Self {
        let mut m = Mat::zeros(dim, dim);
        m[(i, i)] = C::new(R::one(), R::zero());
        Self { m }
    }

    /// `|v⟩⟨v|` (no normalization).
    pub fn outer(v: &DVector<C<R>>) -> Self {
        Self::from_hermitian_part(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &Mat<R> {
        &self.m
    }

    pub fn into_matrix(self) -> Mat<R> {
        self.m
    }

    pub fn trace(&self) -> R {
        self.m.trace().re
    }

    /// Hilbert–Schmidt inner product `tr(self · other)` (real for hermitian arguments).
    pub fn inner(&self, other: &Self) -> R {
        // tr(AB) = Σ_ij A_ij B_ji
        self.m.iter().zip(other.m.transpose().iter()).fold(R::zero(), |acc, (a, b)| acc + (a * b).re)
    }

    pub fn scale(&self, s: R) -> Self {
        Self { m: &self.m * c(s) }
    }

    /// Conjugation `u · self · u†` by an arbitrary square matrix.
    pub fn conjugate(&self, u: &Mat<R>) -> Self {
        Self::from_hermitian_part(u * &self.m * u.adjoint())
    }

    pub fn max_abs_diff(&self, other: &Self) -> R {
        max_abs(&(&self.m - &other.m))
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<R: Real> Add for &HermitianOperator<R> {
    type Output = HermitianOperator<R>;
    fn add(self, rhs: Self) -> HermitianOperator<R> {
        HermitianOperator { m: &self.m + &rhs.m }
    }
}

impl<R: Real> Sub for &HermitianOperator<R> {
    type Output = HermitianOperator<R>;
    fn sub(self, rhs: Self) -> HermitianOperator<R> {
        HermitianOperator { m: &self.m - &rhs.m }
    }
}

impl<R: Real> Neg for &HermitianOperator<R> {
    type Output = HermitianOperator<R>;
    fn neg(self) -> HermitianOperator<R> {
        HermitianOperator { m: -&self.m }
    }
}

impl<R: Real> Mul<R> for &HermitianOperator<R> {
    type Output = HermitianOperator<R>;
    fn mul(self, rhs: R) -> HermitianOperator<R> {
        self.scale(rhs)
    }
}

/// Unit-trace, positive semidefinite hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator<R: Real> {
    h: HermitianOperator<R>,
}

impl<R: Real> DensityOperator<R> {
    pub fn new(h: HermitianOperator<R>) -> Result<Self> {
        let trace = h.trace();
        let min = eig_hermitian(&h)?.min();
        if (trace - R::one()).abs() > R::tol(DENSITY_TOL) || min < -R::tol(DENSITY_TOL) {
            return Err(Error::NotDensity { trace: trace.as_f64(), min_eigenvalue: min.as_f64() });
        }
        Ok(Self { h })
    }

    pub fn from_matrix(m: Mat<R>) -> Result<Self> {
        Self::new(HermitianOperator::new(m)?)
    }

    /// Normalizes by the trace, clips eigenvalues in `[-1e-10, 0)` to zero and
    /// renormalizes. Fails if the trace is not positive or a larger negative
    /// eigenvalue remains.
    pub fn from_unnormalized(h: HermitianOperator<R>) -> Result<Self> {
        let trace = h.trace();
        if trace <= R::zero() {
            return Err(Error::ZeroProbability);
        }
        let h = h.scale(R::one() / trace);
        let eig = eig_hermitian(&h)?;
        let min = eig.min();
        if min < -R::tol(DENSITY_TOL) {
            return Err(Error::NotDensity { trace: R::one().as_f64(), min_eigenvalue: min.as_f64() });
        }
        if min >= R::zero() {
            return Ok(Self { h });
        }
        let clipped = apply_spectral(&eig, |x| if x < R::zero() { R::zero() } else { x });
        let t = clipped.trace();
        Ok(Self { h: clipped.scale(R::one() / t) })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { h: HermitianOperator::identity(dim).scale(R::one() / R::count(dim)) }
    }

    pub fn basis_state(dim: usize, i: usize) -> Self {
        Self { h: HermitianOperator::basis_projector(dim, i) }
    }

    /// Pure state `|v⟩⟨v|/⟨v|v⟩`.
    pub fn pure(v: &DVector<C<R>>) -> Result<Self> {
        let norm2 = v.norm_squared();
        if norm2 <= R::zero() {
            return Err(Error::InvalidDistribution("zero state vector".into()));
        }
        Ok(Self { h: HermitianOperator::outer(v).scale(R::one() / norm2) })
    }

    pub fn operator(&self) -> &HermitianOperator<R> {
        &self.h
    }

    pub fn into_operator(self) -> HermitianOperator<R> {
        self.h
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn matrix(&self) -> &Mat<R> {
        self.h.matrix()
    }

    pub(crate) fn from_trusted(h: HermitianOperator<R>) -> Self {
        Self { h }
    }
}

impl<R: Real> AsRef<HermitianOperator<R>> for DensityOperator<R> {
    fn as_ref(&self) -> &HermitianOperator<R> {
        &self.h
    }
}

impl<R: Real> AsRef<HermitianOperator<R>> for HermitianOperator<R> {
    fn as_ref(&self) -> &HermitianOperator<R> {
        self
    }
}
