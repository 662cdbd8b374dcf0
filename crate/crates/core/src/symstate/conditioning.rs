use rayon::prelude::*;

use crate::classical::TupleDistribution;
use crate::error::{Error, Result};
use crate::opalg::{apply_and_trace, contract_factor, DensityOperator, HermitianOperator, SymmetricLayout};
use crate::povm::{Povm, POVM_TOL};
use crate::scalar::{Mat, Real};
use crate::symstate::state::MultipartiteState;

/// Branch probabilities at or below this value are treated as zero.
pub const ZERO_PROBABILITY_TOL: f64 = 1e-14;
/// Largest number of outcome tuples enumerated exactly.
pub const MAX_EXACT_BRANCHES: u128 = 100_000;

/// Outcome of measuring `k` copies: the tuple `z̄`, its probability and the
/// normalized post-measurement state of the remaining systems.
#[derive(Clone, Debug)]
pub struct ConditionalBranch<R: Real> {
    pub outcome: Vec<usize>,
    pub labels: Vec<String>,
    pub probability: R,
    pub state: MultipartiteState<R>,
}

fn check_measured<R: Real>(state: &MultipartiteState<R>, povm: &Povm<R>, measured: &[usize]) -> Result<()> {
    if povm.dim() != state.factor_dim() {
        return Err(Error::DimensionMismatch(povm.dim(), state.factor_dim()));
    }
    for (i, &c) in measured.iter().enumerate() {
        if c >= state.copies() || measured[..i].contains(&c) {
            return Err(Error::Layout(format!("invalid measured copies {measured:?} of {}", state.copies())));
        }
    }
    Ok(())
}

fn branch_count(t: usize, k: usize) -> Result<usize> {
    let size = (t as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if size > MAX_EXACT_BRANCHES {
        return Err(Error::CostGuard { what: "outcome tuples", size, cap: MAX_EXACT_BRANCHES });
    }
    Ok(size as usize)
}

/// `tr_measured((id ⊗ F_{z₁} ⊗ … ⊗ F_{z_k}) m)` for every `z̄`, in tuple index
/// order (the first measured factor is the most significant digit).
/// `factors` are indices into `dims`.
pub(crate) fn outcome_operators<R: Real>(m: &Mat<R>, dims: &[usize], factors: &[usize], povm: &Povm<R>) -> Vec<Mat<R>> {
    let t = povm.len();
    let k = factors.len();
    let mut order: Vec<(usize, usize)> = factors.iter().enumerate().map(|(pos, &f)| (f, pos)).collect();
    // contracting higher factors first keeps lower indices valid
    order.sort_by_key(|o| std::cmp::Reverse(o.0));
    let weights: Vec<usize> = (0..k).map(|pos| t.pow((k - 1 - pos) as u32)).collect();

    fn expand<R: Real>(
        m: Mat<R>,
        dims: Vec<usize>,
        order: &[(usize, usize)],
        weights: &[usize],
        povm: &Povm<R>,
        base: usize,
        out: &mut Vec<(usize, Mat<R>)>,
    ) {
        let Some(&(f, pos)) = order.first() else {
            out.push((base, m));
            return;
        };
        let mut rest_dims = dims.clone();
        rest_dims.remove(f);
        for (z, fz) in povm.elements().iter().enumerate() {
            let next = contract_factor(&m, &dims, f, Some(fz.matrix()));
            expand(next, rest_dims.clone(), &order[1..], weights, povm, base + z * weights[pos], out);
        }
    }

    let mut leaves: Vec<(usize, Mat<R>)> = match order.first() {
        None => vec![(0, m.clone())],
        Some(&(f, pos)) => {
            let mut rest_dims = dims.to_vec();
            rest_dims.remove(f);
            povm.elements()
                .par_iter()
                .enumerate()
                .flat_map_iter(|(z, fz)| {
                    let next = contract_factor(m, dims, f, Some(fz.matrix()));
                    let mut out = Vec::new();
                    expand(next, rest_dims.clone(), &order[1..], &weights, povm, z * weights[pos], &mut out);
                    out
                })
                .collect()
        }
    };
    leaves.sort_by_key(|(i, _)| *i);
    leaves.into_iter().map(|(_, m)| m).collect()
}

fn remaining_layout<R: Real>(state: &MultipartiteState<R>, measured: &[usize]) -> Result<SymmetricLayout> {
    let l = state.layout();
    SymmetricLayout::new(l.ancilla, l.factor, l.copies - measured.len())
}

fn make_branch<R: Real>(
    state: &MultipartiteState<R>,
    povm: &Povm<R>,
    measured: &[usize],
    outcome: Vec<usize>,
    unnormalized: Mat<R>,
) -> Result<ConditionalBranch<R>> {
    let h = HermitianOperator::from_hermitian_part(unnormalized);
    let probability = h.trace();
    if probability <= R::tol(ZERO_PROBABILITY_TOL) {
        return Err(Error::ZeroProbability);
    }
    let rho = DensityOperator::from_unnormalized(h)?;
    let mut branch_state = MultipartiteState::new(rho, remaining_layout(state, measured)?)?;
    if state.is_symmetric() {
        branch_state = branch_state.verify_symmetry()?;
    }
    let labels = outcome.iter().map(|&z| povm.labels()[z].clone()).collect();
    Ok(ConditionalBranch { outcome, labels, probability, state: branch_state })
}

/// Measures copies `measured` (0-based among the copies) with `povm` and
/// conditions on outcome `z̄`. If the input is flagged symmetric the branch
/// state's symmetry is re-verified.
pub fn condition_on_outcomes<R: Real>(
    state: &MultipartiteState<R>,
    povm: &Povm<R>,
    measured: &[usize],
    zbar: &[usize],
) -> Result<ConditionalBranch<R>> {
    check_measured(state, povm, measured)?;
    if zbar.len() != measured.len() || zbar.iter().any(|&z| z >= povm.len()) {
        return Err(Error::LabelMismatch(format!("outcome {zbar:?} for {} measured copies", measured.len())));
    }
    let applied: Vec<(usize, &Mat<R>)> =
        measured.iter().zip(zbar).map(|(&c, &z)| (c + 1, povm.element(z).matrix())).collect();
    let m = apply_and_trace(state.operator().matrix(), &state.layout().layout(), &applied, &[])?;
    make_branch(state, povm, measured, zbar.to_vec(), m)
}

/// Like [`condition_on_outcomes`] but takes outcome labels.
pub fn condition_on_labels<R: Real>(
    state: &MultipartiteState<R>,
    povm: &Povm<R>,
    measured: &[usize],
    labels: &[&str],
) -> Result<ConditionalBranch<R>> {
    let zbar = labels
        .iter()
        .map(|l| povm.index_of(l).ok_or_else(|| Error::LabelMismatch(format!("unknown outcome label {l}"))))
        .collect::<Result<Vec<_>>>()?;
    condition_on_outcomes(state, povm, measured, &zbar)
}

/// Every positive-probability branch, in tuple index order.
pub fn all_branches<R: Real>(
    state: &MultipartiteState<R>,
    povm: &Povm<R>,
    measured: &[usize],
) -> Result<Vec<ConditionalBranch<R>>> {
    check_measured(state, povm, measured)?;
    branch_count(povm.len(), measured.len())?;
    let factors: Vec<usize> = measured.iter().map(|c| c + 1).collect();
    let ops = outcome_operators(state.operator().matrix(), state.layout().layout().dims(), &factors, povm);
    let t = povm.len();
    let k = measured.len();
    ops.into_par_iter()
        .enumerate()
        .filter_map(|(i, m)| {
            let outcome: Vec<usize> = (0..k).map(|p| (i / t.pow((k - 1 - p) as u32)) % t).collect();
            match make_branch(state, povm, measured, outcome, m) {
                Err(Error::ZeroProbability) => None,
                other => Some(other),
            }
        })
        .collect()
}

/// `p_{z̄} = tr((id ⊗ F_{z̄}) ρ)` for the listed copies, as a distribution
/// over `Z^k` ordered like `copies`.
pub fn measurement_statistics<R: Real>(
    state: &MultipartiteState<R>,
    povm: &Povm<R>,
    copies: &[usize],
) -> Result<TupleDistribution<R>> {
    check_measured(state, povm, copies)?;
    branch_count(povm.len(), copies.len())?;
    let layout = state.layout().layout();
    let traced: Vec<usize> = (0..layout.num_factors()).filter(|f| *f == 0 || !copies.contains(&(f - 1))).collect();
    let reduced = apply_and_trace(state.operator().matrix(), &layout, &[], &traced)?;
    // remaining factors are the measured copies in increasing order
    let mut sorted = copies.to_vec();
    sorted.sort_unstable();
    let factors: Vec<usize> = copies.iter().map(|c| sorted.binary_search(c).expect("present")).collect();
    let dims = vec![state.factor_dim(); copies.len()];
    let tol = R::tol(POVM_TOL);
    let mut weights = Vec::new();
    for m in outcome_operators(&reduced, &dims, &factors, povm) {
        let p = m[(0, 0)].re;
        if p < -tol {
            return Err(Error::InvalidDistribution(format!("outcome probability {p}")));
        }
        weights.push(p.max(R::zero()));
    }
    TupleDistribution::normalized(povm.len(), copies.len(), weights)
}
