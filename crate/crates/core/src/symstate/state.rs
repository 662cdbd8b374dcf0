use rand::Rng;

use crate::error::{Error, Result};
use crate::opalg::{
    partial_trace, symmetrize, symmetry_deviation, tensor_power, tensor_product, DensityOperator, HermitianOperator,
    Permutation, SymmetricLayout,
};
use crate::random::rng;
use crate::scalar::Real;

/// Tolerance on the permutation-invariance identity.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Up to this many copies symmetry is checked against every permutation.
pub const EXHAUSTIVE_SYMMETRY_COPIES: usize = 4;
/// Number of random transpositions checked for more copies.
pub const RANDOM_TRANSPOSITIONS: usize = 10;
const TRANSPOSITION_SEED: u64 = 0x5eed;

/// A state on `H_A ⊗ H^{⊗n}` together with its layout. The symmetry flag is
/// only set after the permutation identity has been checked numerically.
#[derive(Clone, Debug)]
pub struct MultipartiteState<R: Real> {
    rho: DensityOperator<R>,
    layout: SymmetricLayout,
    symmetric: bool,
}

/// Permutations used to test symmetry on `copies` factors.
pub fn symmetry_test_permutations(copies: usize) -> Vec<Permutation> {
    if copies <= EXHAUSTIVE_SYMMETRY_COPIES {
        return Permutation::all(copies).collect();
    }
    let mut r = rng(TRANSPOSITION_SEED);
    (0..RANDOM_TRANSPOSITIONS)
        .map(|_| {
            let i = r.gen_range(0..copies);
            let j = (i + r.gen_range(1..copies)) % copies;
            Permutation::transposition(copies, i, j).expect("distinct indices in range")
        })
        .collect()
}

impl<R: Real> MultipartiteState<R> {
    /// Wraps a state without checking symmetry.
    pub fn new(rho: DensityOperator<R>, layout: SymmetricLayout) -> Result<Self> {
        layout.layout().check_operator(rho.dim())?;
        Ok(Self { rho, layout, symmetric: false })
    }

    /// Wraps a state and requires it to be symmetric relative to the ancilla.
    pub fn symmetric(rho: DensityOperator<R>, layout: SymmetricLayout) -> Result<Self> {
        let mut s = Self::new(rho, layout)?;
        let dev = s.symmetry_deviation()?;
        if dev > R::tol(SYMMETRY_TOL) {
            return Err(Error::NotSymmetric(dev.as_f64()));
        }
        s.symmetric = true;
        Ok(s)
    }

    /// Runs the symmetry check and records the result in the flag.
    pub fn verify_symmetry(mut self) -> Result<Self> {
        self.symmetric = self.symmetry_deviation()? <= R::tol(SYMMETRY_TOL);
        Ok(self)
    }

    /// Worst deviation over [`symmetry_test_permutations`].
    pub fn symmetry_deviation(&self) -> Result<R> {
        if self.layout.copies < 2 {
            return Ok(R::zero());
        }
        symmetry_deviation(self.rho.operator(), self.layout, &symmetry_test_permutations(self.layout.copies))
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn state(&self) -> &DensityOperator<R> {
        &self.rho
    }

    pub fn operator(&self) -> &HermitianOperator<R> {
        self.rho.operator()
    }

    pub fn layout(&self) -> SymmetricLayout {
        self.layout
    }

    pub fn copies(&self) -> usize {
        self.layout.copies
    }

    pub fn factor_dim(&self) -> usize {
        self.layout.factor
    }

    pub fn ancilla_dim(&self) -> usize {
        self.layout.ancilla
    }

    /// Traces out the trailing copies, keeping the ancilla and `copies` factors.
    pub fn reduce_copies(&self, copies: usize) -> Result<Self> {
        if copies > self.layout.copies {
            return Err(Error::Layout(format!("cannot keep {copies} of {} copies", self.layout.copies)));
        }
        let traced: Vec<usize> = (copies + 1..=self.layout.copies).collect();
        let reduced = partial_trace(self.operator(), &self.layout.layout(), &traced)?;
        // partial traces of symmetric states stay symmetric
        Ok(Self {
            rho: DensityOperator::from_trusted(reduced),
            layout: self.layout.with_copies(copies),
            symmetric: self.symmetric,
        })
    }

    /// `ρ^A`, the ancilla marginal.
    pub fn ancilla_marginal(&self) -> Result<DensityOperator<R>> {
        let traced: Vec<usize> = (1..=self.layout.copies).collect();
        let h = partial_trace(self.operator(), &self.layout.layout(), &traced)?;
        Ok(DensityOperator::from_trusted(h))
    }

    /// Reduced state of one copy.
    pub fn single_copy_marginal(&self, copy: usize) -> Result<DensityOperator<R>> {
        if copy >= self.layout.copies {
            return Err(Error::Layout(format!("copy {copy} out of range")));
        }
        let traced: Vec<usize> = (0..=self.layout.copies).filter(|&f| f != copy + 1).collect();
        let h = partial_trace(self.operator(), &self.layout.layout(), &traced)?;
        Ok(DensityOperator::from_trusted(h))
    }

    /// Views the ancilla together with the first `absorbed` copies as the
    /// new ancilla; the matrix is unchanged.
    pub fn absorb(&self, absorbed: usize) -> Result<Self> {
        if absorbed > self.layout.copies {
            return Err(Error::Layout(format!("cannot absorb {absorbed} of {} copies", self.layout.copies)));
        }
        Ok(Self { rho: self.rho.clone(), layout: self.layout.absorb(absorbed), symmetric: self.symmetric })
    }

    /// Drops the ancilla by tracing it out.
    pub fn without_ancilla(&self) -> Result<Self> {
        let h = partial_trace(self.operator(), &self.layout.layout(), &[0])?;
        let layout = SymmetricLayout::new(1, self.layout.factor, self.layout.copies)?;
        Ok(Self { rho: DensityOperator::from_trusted(h), layout, symmetric: self.symmetric })
    }
}

/// Recipe for a state that is symmetric relative to its ancilla.
#[derive(Clone, Debug)]
pub enum SymmetricSpec<R: Real> {
    /// `Σ_i p_i σ_i^A ⊗ τ_i^{⊗copies}`; `σ_i` of dimension 1 means no ancilla.
    Mixture { terms: Vec<(R, DensityOperator<R>, DensityOperator<R>)>, copies: usize },
    /// Average over all permutations of the copies.
    Symmetrize { state: DensityOperator<R>, layout: SymmetricLayout },
    /// Taken as given, then verified.
    Direct { state: DensityOperator<R>, layout: SymmetricLayout },
}

/// Builds the state described by `spec` and verifies its symmetry.
pub fn build_symmetric<R: Real>(spec: SymmetricSpec<R>) -> Result<MultipartiteState<R>> {
    match spec {
        SymmetricSpec::Mixture { terms, copies } => {
            let Some((_, a0, t0)) = terms.first() else {
                return Err(Error::InvalidDistribution("empty mixture".into()));
            };
            let layout = SymmetricLayout::new(a0.dim(), t0.dim(), copies)?;
            let mut total = R::zero();
            let mut acc = HermitianOperator::zeros(layout.total_dim());
            for (p, sigma, tau) in &terms {
                if sigma.dim() != layout.ancilla || tau.dim() != layout.factor {
                    return Err(Error::DimensionMismatch(sigma.dim() * tau.dim(), layout.ancilla * layout.factor));
                }
                if *p < R::zero() {
                    return Err(Error::InvalidDistribution(format!("mixture weight {p}")));
                }
                total += *p;
                let term = tensor_product(sigma.operator(), &tensor_power(tau.operator(), copies));
                acc = &acc + &term.scale(*p);
            }
            if (total - R::one()).abs() > R::tol(crate::classical::NORMALIZATION_TOL) {
                return Err(Error::InvalidDistribution(format!("mixture weights sum to {total}")));
            }
            MultipartiteState::symmetric(DensityOperator::from_trusted(acc), layout)
        }
        SymmetricSpec::Symmetrize { state, layout } => {
            let h = symmetrize(state.operator(), layout)?;
            MultipartiteState::symmetric(DensityOperator::from_trusted(h), layout)
        }
        SymmetricSpec::Direct { state, layout } => MultipartiteState::symmetric(state, layout),
    }
}
