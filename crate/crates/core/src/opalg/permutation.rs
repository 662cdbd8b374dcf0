//! Permutations of tensor factors and the symmetrization map.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::opalg::layout::SymmetricLayout;
use crate::opalg::operator::HermitianOperator;
use crate::scalar::{Mat, Real, C};

/// Largest `n` for which `n!` enumeration is attempted.
pub const MAX_SYMMETRIZE_COPIES: usize = 8;

/// Permutation of `{0, …, n-1}` stored as its image list, `π(i) = images[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i >= n || j >= n {
            return Err(Error::InvalidPermutation(vec![i, j]));
        }
        let mut p: Vec<usize> = (0..n).collect();
        p.swap(i, j);
        Ok(Self(p))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        Self(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        Self(inv)
    }

    /// All `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n).permutations(n).map(Permutation)
    }
}

/// For every basis index of `ancilla ⊗ factor^{⊗n}`, the index of its image
/// under `id_A ⊗ π_H`, where `π_H |i_1 … i_n⟩ = |i_{π(1)} … i_{π(n)}⟩`.
fn basis_map(perm: &Permutation, layout: SymmetricLayout) -> Vec<usize> {
    let n = layout.copies;
    let d = layout.factor;
    let block = d.pow(n as u32);
    let mut digits = vec![0usize; n];
    let mut map = Vec::with_capacity(layout.total_dim());
    for a in 0..layout.ancilla {
        for idx in 0..block {
            let mut rest = idx;
            for p in (0..n).rev() {
                digits[p] = rest % d;
                rest /= d;
            }
            let out = (0..n).fold(0, |acc, p| acc * d + digits[perm.apply(p)]);
            map.push(a * block + out);
        }
    }
    map
}

/// Unitary `π_H` on `(C^d)^{⊗n}`. With this action,
/// `op(π) · op(σ) = op(σ ∘ π)`.
pub fn permutation_operator<R: Real>(perm: &Permutation, d: usize) -> Result<Mat<R>> {
    if perm.is_empty() {
        return Err(Error::InvalidPermutation(vec![]));
    }
    let layout = SymmetricLayout::new(1, d, perm.len())?;
    let map = basis_map(perm, layout);
    let dim = map.len();
    let mut m = Mat::zeros(dim, dim);
    for (i, &j) in map.iter().enumerate() {
        m[(j, i)] = C::new(R::one(), R::zero());
    }
    Ok(m)
}

/// `(id_A ⊗ π_H) w (id_A ⊗ π_H†)` computed by index relabelling.
pub fn conjugate_by_permutation<R: Real>(
    w: &HermitianOperator<R>,
    layout: SymmetricLayout,
    perm: &Permutation,
) -> Result<HermitianOperator<R>> {
    check(w, layout, perm.len())?;
    let map = basis_map(perm, layout);
    let src = w.matrix();
    let dim = map.len();
    let mut out = Mat::zeros(dim, dim);
    for (i, &pi) in map.iter().enumerate() {
        for (j, &pj) in map.iter().enumerate() {
            out[(pi, pj)] = src[(i, j)];
        }
    }
    Ok(HermitianOperator::from_hermitian_part(out))
}

fn check<R: Real>(w: &HermitianOperator<R>, layout: SymmetricLayout, n: usize) -> Result<()> {
    if layout.copies != n {
        return Err(Error::Layout(format!("permutation of {n} factors on a layout with {} copies", layout.copies)));
    }
    layout.layout().check_operator(w.dim())
}

/// `(1/n!) Σ_π (id_A ⊗ π_H) w (id_A ⊗ π_H†)`.
pub fn symmetrize<R: Real>(w: &HermitianOperator<R>, layout: SymmetricLayout) -> Result<HermitianOperator<R>> {
    if layout.copies > MAX_SYMMETRIZE_COPIES {
        return Err(Error::CostGuard {
            what: "permutations",
            size: (1..=layout.copies as u128).product(),
            cap: (1..=MAX_SYMMETRIZE_COPIES as u128).product(),
        });
    }
    layout.layout().check_operator(w.dim())?;
    let src = w.matrix();
    let dim = src.nrows();
    let mut acc = Mat::<R>::zeros(dim, dim);
    let mut count = 0usize;
    for perm in Permutation::all(layout.copies) {
        let map = basis_map(&perm, layout);
        for (i, &pi) in map.iter().enumerate() {
            for (j, &pj) in map.iter().enumerate() {
                acc[(pi, pj)] += src[(i, j)];
            }
        }
        count += 1;
    }
    Ok(HermitianOperator::from_hermitian_part(acc).scale(R::one() / R::count(count)))
}

/// Largest max-entry deviation `‖(id⊗π) w (id⊗π)† − w‖` over the given
/// permutations.
pub fn symmetry_deviation<'a, R: Real>(
    w: &HermitianOperator<R>,
    layout: SymmetricLayout,
    perms: impl IntoIterator<Item = &'a Permutation>,
) -> Result<R> {
    let mut worst = R::zero();
    for perm in perms {
        let moved = conjugate_by_permutation(w, layout, perm)?;
        worst = worst.max(moved.max_abs_diff(w));
    }
    Ok(worst)
}
