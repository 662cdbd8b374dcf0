use rand::Rng;
use serde::Serialize;

use crate::classical::{variational_distance, Distribution};
use crate::error::{Error, Result};
use crate::opalg::{
    apply_and_trace, partial_trace, tensor_power, tensor_product, trace_distance, DensityOperator, HermitianOperator,
    SubsystemLayout,
};
use crate::povm::{helstrom_povm, povm_constants, Povm};
use crate::random::random_povm_elements;
use crate::symstate::{MultipartiteState, ZERO_PROBABILITY_TOL};

/// Slack allowed when comparing the two sides of an inequality.
pub const CHECK_TOL: f64 = 1e-9;
/// Random POVMs added to the Helstrom measurements when estimating
/// `max_Y Δ(ρ_YZ, ρ_Y × q)`.
pub const RANDOM_Y_POVMS: usize = 50;

/// `ρ^{AB}` split into `ρ^A` and the unnormalized conditionals
/// `tr_B((id ⊗ F_z) ρ^{AB})`.
struct Split {
    rho_a: HermitianOperator<f64>,
    rho_b: DensityOperator<f64>,
    conditionals: Vec<HermitianOperator<f64>>,
    pz: Vec<f64>,
}

fn split(rho: &DensityOperator<f64>, d_a: usize, povm: &Povm<f64>) -> Result<Split> {
    let d_b = povm.dim();
    if d_a == 0 || rho.dim() != d_a * d_b {
        return Err(Error::DimensionMismatch(rho.dim(), d_a * d_b));
    }
    let layout = SubsystemLayout::new(vec![d_a, d_b])?;
    let rho_a = partial_trace(rho.operator(), &layout, &[1])?;
    let rho_b = DensityOperator::from_unnormalized(partial_trace(rho.operator(), &layout, &[0])?)?;
    let conditionals = povm
        .elements()
        .iter()
        .map(|f| {
            Ok(HermitianOperator::from_hermitian_part(apply_and_trace(rho.matrix(), &layout, &[(1, f.matrix())], &[])?))
        })
        .collect::<Result<Vec<_>>>()?;
    let pz = conditionals.iter().map(|c| c.trace()).collect();
    Ok(Split { rho_a, rho_b, conditionals, pz })
}

/// `Δ(ρ_YZ, ρ_Y × q)` with `p(y, z) = tr(E_y ρ^A_z)`.
fn joint_gap(split: &Split, y: &Povm<f64>, q: &Distribution<f64>) -> f64 {
    let mut total = 0.0;
    for e in y.elements() {
        let row: Vec<f64> = split.conditionals.iter().map(|c| e.inner(c)).collect();
        let py: f64 = row.iter().sum();
        total += row.iter().zip(q.weights()).map(|(p, qz)| (p - py * qz).abs()).sum::<f64>();
    }
    total / 2.0
}

fn battery(split: &Split, d_a: usize, rng: &mut impl Rng) -> Result<Vec<Povm<f64>>> {
    let mut ys = Vec::new();
    for (c, &p) in split.conditionals.iter().zip(&split.pz) {
        if p > ZERO_PROBABILITY_TOL {
            ys.push(helstrom_povm(&c.scale(1.0 / p), &split.rho_a)?);
        }
    }
    for _ in 0..RANDOM_Y_POVMS {
        let outcomes = rng.gen_range(2..=4);
        ys.push(Povm::with_index_labels(random_povm_elements(d_a, outcomes, rng))?);
    }
    Ok(ys)
}

/// Per-outcome record of [`dependence_bound_check`].
#[derive(Clone, Debug, Serialize)]
pub struct DependenceRecord {
    pub outcome: String,
    pub probability: f64,
    /// `δ(ρ^A_{|z}, ρ^A)`.
    pub lhs: f64,
    /// `(2/p_z) · M` with `M` the battery maximum.
    pub rhs: f64,
    /// `Δ(ρ_YZ, ρ_Y × q)` for the Helstrom measurement of this pair.
    pub pair_value: f64,
    pub holds: bool,
    /// `δ ≤ (2/p_z) · pair_value`.
    pub pair_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DependenceReport {
    pub records: Vec<DependenceRecord>,
    pub battery_max: f64,
    pub battery_size: usize,
    /// Outcomes of probability zero, which impose no constraint.
    pub skipped: Vec<String>,
    pub holds: bool,
}

/// For every outcome `z` of `povm` on `B` with `p_z > 0`, compares
/// `δ(ρ^A_{|z}, ρ^A)` with `(2/p_z) max_Y Δ(ρ_YZ, ρ_Y × q)`. The maximum runs
/// over the Helstrom measurements of the pairs `(ρ^A_{|z}, ρ^A)` and
/// [`RANDOM_Y_POVMS`] random POVMs on `A`.
pub fn dependence_bound_check(
    rho: &DensityOperator<f64>,
    d_a: usize,
    povm: &Povm<f64>,
    q: &Distribution<f64>,
    rng: &mut impl Rng,
) -> Result<DependenceReport> {
    if q.len() != povm.len() {
        return Err(Error::AlphabetMismatch(q.len(), povm.len()));
    }
    let s = split(rho, d_a, povm)?;
    let ys = battery(&s, d_a, rng)?;
    let values: Vec<f64> = ys.iter().map(|y| joint_gap(&s, y, q)).collect();
    let battery_max = values.iter().copied().fold(0.0, f64::max);
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    let mut helstrom = values.iter();
    for (z, (c, &p)) in s.conditionals.iter().zip(&s.pz).enumerate() {
        let label = povm.labels()[z].clone();
        if p <= ZERO_PROBABILITY_TOL {
            skipped.push(label);
            continue;
        }
        let lhs = trace_distance(&c.scale(1.0 / p), &s.rho_a)?;
        let pair_value = *helstrom.next().expect("one Helstrom POVM per positive outcome");
        let rhs = 2.0 * battery_max / p;
        records.push(DependenceRecord {
            outcome: label,
            probability: p,
            lhs,
            rhs,
            pair_value,
            holds: lhs <= rhs + CHECK_TOL,
            pair_holds: lhs <= 2.0 * pair_value / p + CHECK_TOL,
        });
    }
    let holds = records.iter().all(|r| r.holds && r.pair_holds);
    Ok(DependenceReport { records, battery_max, battery_size: ys.len(), skipped, holds })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductStructureReport {
    /// `δ(ρ^{AB}, ρ^A ⊗ ρ^B)`.
    pub lhs: f64,
    pub c1: Option<f64>,
    pub battery_max: f64,
    /// `C₁ · M`; absent when `C₁` is infinite and the bound is vacuous.
    pub rhs: Option<f64>,
    pub holds: bool,
}

/// Compares `δ(ρ^{AB}, ρ^A ⊗ ρ^B)` with `C₁(Z) · max_Y Δ(ρ_YZ, ρ_Y × q)`,
/// using the same measurement battery as [`dependence_bound_check`].
pub fn product_structure_bound(
    rho: &DensityOperator<f64>,
    d_a: usize,
    povm: &Povm<f64>,
    q: &Distribution<f64>,
    rng: &mut impl Rng,
) -> Result<ProductStructureReport> {
    if q.len() != povm.len() {
        return Err(Error::AlphabetMismatch(q.len(), povm.len()));
    }
    let constants = povm_constants(povm)?;
    let s = split(rho, d_a, povm)?;
    let lhs = trace_distance(rho.operator(), &tensor_product(&s.rho_a, s.rho_b.operator()))?;
    let battery_max = battery(&s, d_a, rng)?.iter().map(|y| joint_gap(&s, y, q)).fold(0.0, f64::max);
    let rhs = constants.c1.map(|c1| c1 * battery_max);
    let holds = rhs.is_none_or(|r| lhs <= r + CHECK_TOL);
    Ok(ProductStructureReport { lhs, c1: constants.c1, battery_max, rhs, holds })
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitOffReport {
    pub copies: usize,
    /// `δ(ρ^{A⊗n}, ρ^A ⊗ (ρ¹)^{⊗n})`.
    pub lhs: f64,
    /// `δ(ρ^{A⊗n}, ρ^{A⊗(n−1)} ⊗ ρ¹)`.
    pub single: f64,
    /// `n · single`.
    pub rhs: f64,
    pub holds: bool,
}

/// `δ(ρ^{A⊗n}, ρ^A ⊗ (ρ¹)^{⊗n})` for a state on `A ⊗ n` copies.
pub fn product_distance(state: &MultipartiteState<f64>) -> Result<f64> {
    let rho_a = state.ancilla_marginal()?;
    let rho_1 = state.single_copy_marginal(0)?;
    let product = tensor_product(rho_a.operator(), &tensor_power(rho_1.operator(), state.copies()));
    trace_distance(state.operator(), &product)
}

/// `δ(ρ^{A⊗n}, ρ^{A⊗(n−1)} ⊗ ρ¹)`.
pub fn last_copy_distance(state: &MultipartiteState<f64>) -> Result<f64> {
    let n = state.copies();
    if n == 0 {
        return Err(Error::Layout("no copies".into()));
    }
    let rest = state.absorb(n - 1)?.ancilla_marginal()?;
    let rho_1 = state.single_copy_marginal(n - 1)?;
    trace_distance(state.operator(), &tensor_product(rest.operator(), rho_1.operator()))
}

/// Compares the distance to the product of marginals with `n` times the
/// cost of splitting off one copy. The state must be verified symmetric.
pub fn split_off_bound(state: &MultipartiteState<f64>) -> Result<SplitOffReport> {
    if !state.is_symmetric() {
        return Err(Error::NotSymmetric(state.symmetry_deviation()?));
    }
    let n = state.copies();
    let lhs = product_distance(state)?;
    let single = last_copy_distance(state)?;
    let rhs = n as f64 * single;
    Ok(SplitOffReport { copies: n, lhs, single, rhs, holds: lhs <= rhs + CHECK_TOL })
}

/// Classical part of the single-copy bound: `Δ(ρ¹ measured, q)`.
pub(crate) fn measured_gap(rho_1: &DensityOperator<f64>, povm: &Povm<f64>, q: &Distribution<f64>) -> Result<f64> {
    variational_distance(&crate::povm::measure(rho_1, povm)?, q)
}
