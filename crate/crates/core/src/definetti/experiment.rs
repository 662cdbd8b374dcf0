use std::collections::BTreeMap;

use rand::distributions::{Distribution as _, WeightedIndex};
use rayon::prelude::*;
use serde::Serialize;

use crate::classical::{expected_freq_distance, frequency_of, Distribution};
use crate::definetti::bipartite::{last_copy_distance, measured_gap, product_distance, CHECK_TOL};
use crate::definetti::config::{seeded, stream, ExperimentConfig, ModeConfig, PreparedState};
use crate::error::{Error, Result};
use crate::opalg::{
    apply_and_trace, contract_factor, tensor_power, trace_distance, DensityOperator, HermitianOperator, SubsystemLayout,
};
use crate::povm::{povm_constants, Povm, PovmConstants};
use crate::scalar::Mat;
use crate::symstate::{condition_on_outcomes, measurement_statistics, MultipartiteState, ZERO_PROBABILITY_TOL};

/// One outcome tuple `z̄` of the `k` measured copies.
#[derive(Clone, Debug, Serialize)]
pub struct BranchRecord {
    /// Index of `z̄` in `Z^k`, first measured copy most significant.
    pub index: usize,
    pub outcome: Vec<String>,
    pub probability: f64,
    /// Weight in the expectations: the probability in exact mode, the
    /// sample fraction in sampled mode.
    pub weight: f64,
    /// `δ(ρ_z̄^{A⊗n}, ρ_z̄^A ⊗ (ρ_z̄¹)^{⊗n})`.
    pub quantum_distance: f64,
    /// `Δ(ρ_z̄¹ measured, freq z̄)`.
    pub classical_distance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainRecord>,
}

/// Intermediate quantities for one branch of the extension.
#[derive(Clone, Debug, Serialize)]
pub struct ChainRecord {
    /// `DExp` of the conditioned statistics on `k` further copies against `freq z̄`.
    pub dexp: f64,
    /// `δ(ρ_z̄^{A⊗n}, ρ_z̄^{A⊗(n−1)} ⊗ ρ_z̄¹)`.
    pub single_copy_distance: f64,
    /// Whether the conditioned extension passed the symmetry check.
    pub symmetric: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Expectations {
    pub quantum: f64,
    pub classical: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dexp: Option<f64>,
    /// Standard errors, sampled mode only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub standard_errors: Option<StandardErrors>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StandardErrors {
    pub quantum: f64,
    pub classical: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dexp: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Bounds {
    /// `C₂ · n/√k`; absent when `C₂` is infinite.
    pub quantum: Option<f64>,
    /// `√(t/k)`, also the bound on the expected `DExp`.
    pub classical: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Ratios {
    pub quantum: Option<f64>,
    pub classical: f64,
}

/// An inequality `lhs ≤ rhs` (up to [`CHECK_TOL`]). For per-branch or
/// per-ε families, the entry with the largest `lhs − rhs` is shown and
/// `at` names it.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    /// Absent for a vacuous bound.
    pub rhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
    pub holds: bool,
}

impl Check {
    fn new(name: &str, lhs: f64, rhs: Option<f64>, at: Option<String>) -> Self {
        let holds = rhs.is_none_or(|r| lhs <= r + CHECK_TOL);
        Self { name: name.into(), lhs, rhs, at, holds }
    }

    fn worst(name: &str, items: impl IntoIterator<Item = (f64, Option<f64>, String)>) -> Option<Self> {
        let mut best: Option<(f64, Check)> = None;
        for (lhs, rhs, at) in items {
            let gap = rhs.map_or(f64::NEG_INFINITY, |r| lhs - r);
            if best.as_ref().is_none_or(|(g, _)| gap > *g) {
                best = Some((gap, Check::new(name, lhs, rhs, Some(at))));
            }
        }
        best.map(|(_, c)| c)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TailReport {
    pub eps: Vec<f64>,
    /// Thresholds are `ε` times these scales.
    pub quantum_scale: Option<f64>,
    pub classical_scale: f64,
    pub quantum_exceedance: Vec<f64>,
    pub classical_exceedance: Vec<f64>,
    /// `min(1, k·e^{1−ε²/2})`.
    pub bound: Vec<f64>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MixtureReport {
    /// `δ(ρ^{⊗n}, Σ_z̄ p_z̄ (ρ_z̄¹)^{⊗n})`.
    pub distance: f64,
    /// `Σ_z̄ p_z̄ δ(ρ_z̄^{⊗n}, (ρ_z̄¹)^{⊗n})`.
    pub convexity_bound: f64,
    /// `√2 · C₂ · n/√(2k)`.
    pub bound: Option<f64>,
    /// Max-entry deviation of `Σ_z̄ p_z̄ ρ_z̄^{⊗n}` from `ρ^{⊗n}`.
    pub mixing_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PovmSummary {
    pub dim: usize,
    pub outcomes: usize,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeFinettiReport {
    pub config: ExperimentConfig,
    pub povm: PovmSummary,
    pub constants: PovmConstants,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub records: Vec<BranchRecord>,
    pub expectations: Expectations,
    pub bounds: Bounds,
    pub ratios: Ratios,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixture: Option<MixtureReport>,
    pub tail: TailReport,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    pub passed: bool,
}

impl DeFinettiReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// `min(1, k·e^{1−ε²/2})`.
pub fn tail_bound(k: usize, eps: f64) -> f64 {
    (k as f64 * (1.0 - eps * eps / 2.0).exp()).min(1.0)
}

struct Ctx<'a> {
    n: usize,
    k: usize,
    povm: &'a Povm<f64>,
    has_extension: bool,
    collect_mixture: bool,
}

struct Leaf {
    record: BranchRecord,
    /// `p · ρ_z̄^{A⊗n}`, exact mode only.
    weighted_state: Option<HermitianOperator<f64>>,
    /// `p · (ρ_z̄¹)^{⊗n}` and `δ(ρ_z̄^{⊗n}, (ρ_z̄¹)^{⊗n})`, without ancilla.
    mixture: Option<(HermitianOperator<f64>, f64)>,
}

fn tuple_index(outcome: &[usize], t: usize) -> usize {
    outcome.iter().fold(0, |acc, &z| acc * t + z)
}

/// Everything computed from the conditioned state `x` on `A ⊗ (n + m)` copies.
fn leaf(
    ctx: &Ctx,
    outcome: Vec<usize>,
    probability: f64,
    weight: f64,
    x: &MultipartiteState<f64>,
    exact: bool,
) -> Result<Leaf> {
    let t = ctx.povm.len();
    let q: Distribution<f64> = frequency_of(&outcome, t)?.distribution();
    let rho_n = x.reduce_copies(ctx.n)?;
    let rho_1 = rho_n.single_copy_marginal(0)?;
    let quantum_distance = product_distance(&rho_n)?;
    let classical_distance = measured_gap(&rho_1, ctx.povm, &q)?;
    let chain = if ctx.has_extension {
        // A' = A ⊗ H^{⊗(n−1)}; the remaining m + 1 = k copies carry the statistics
        let y = x.absorb(ctx.n - 1)?;
        let copies: Vec<usize> = (0..y.copies()).collect();
        let dexp = expected_freq_distance(&measurement_statistics(&y, ctx.povm, &copies)?, &q)?;
        Some(ChainRecord { dexp, single_copy_distance: last_copy_distance(&rho_n)?, symmetric: x.is_symmetric() })
    } else {
        None
    };
    let mixture = if ctx.collect_mixture {
        let product = tensor_power(rho_1.operator(), ctx.n);
        let d = trace_distance(rho_n.operator(), &product)?;
        Some((product.scale(probability), d))
    } else {
        None
    };
    let weighted_state = exact.then(|| rho_n.operator().scale(probability));
    let labels = outcome.iter().map(|&z| ctx.povm.labels()[z].clone()).collect();
    let record = BranchRecord {
        index: tuple_index(&outcome, t),
        outcome: labels,
        probability,
        weight,
        quantum_distance,
        classical_distance,
        chain,
    };
    Ok(Leaf { record, weighted_state, mixture })
}

/// Depth-first over outcome tuples, always measuring factor `n + 1` (the
/// first measured copy) and keeping the unnormalized conditioned operator.
fn descend(
    ctx: &Ctx,
    base: &MultipartiteState<f64>,
    m: Mat<f64>,
    dims: Vec<usize>,
    prefix: Vec<usize>,
    out: &mut Vec<Result<Leaf>>,
) {
    let h = HermitianOperator::from_hermitian_part(m);
    let p = h.trace();
    if p <= ZERO_PROBABILITY_TOL {
        return;
    }
    if prefix.len() == ctx.k {
        out.push(finish(ctx, base, prefix, h));
        return;
    }
    let f = ctx.n + 1;
    let mut rest = dims.clone();
    rest.remove(f);
    for (z, fz) in ctx.povm.elements().iter().enumerate() {
        let next = contract_factor(h.matrix(), &dims, f, Some(fz.matrix()));
        let mut pre = prefix.clone();
        pre.push(z);
        descend(ctx, base, next, rest.clone(), pre, out);
    }
}

fn finish(ctx: &Ctx, base: &MultipartiteState<f64>, outcome: Vec<usize>, h: HermitianOperator<f64>) -> Result<Leaf> {
    let probability = h.trace();
    let rho = DensityOperator::from_unnormalized(h)?;
    let mut x = MultipartiteState::new(rho, base.layout().with_copies(base.copies() - ctx.k))?;
    if base.is_symmetric() {
        x = x.verify_symmetry()?;
    }
    leaf(ctx, outcome, probability, probability, &x, true)
}

fn exact_leaves(ctx: &Ctx, base: &MultipartiteState<f64>) -> Result<Vec<Leaf>> {
    let dims = base.layout().layout().dims().to_vec();
    let f = ctx.n + 1;
    let mut rest = dims.clone();
    rest.remove(f);
    let per_first: Vec<Vec<Result<Leaf>>> = ctx
        .povm
        .elements()
        .par_iter()
        .enumerate()
        .map(|(z, fz)| {
            let m = contract_factor(base.operator().matrix(), &dims, f, Some(fz.matrix()));
            let mut out = Vec::new();
            descend(ctx, base, m, rest.clone(), vec![z], &mut out);
            out
        })
        .collect();
    per_first.into_iter().flatten().collect()
}

/// Draws `samples` outcome tuples by measuring the copies one at a time.
/// Only the reduced state of the measured copies is needed for this.
fn sample_outcomes(
    ctx: &Ctx,
    base: &MultipartiteState<f64>,
    samples: usize,
    rng: &mut impl rand::Rng,
) -> Result<BTreeMap<Vec<usize>, usize>> {
    let layout = base.layout().layout();
    let measured = ctx.n + 1..=ctx.n + ctx.k;
    let traced: Vec<usize> = (0..layout.num_factors()).filter(|f| !measured.contains(f)).collect();
    let reduced = apply_and_trace(base.operator().matrix(), &layout, &[], &traced)?;
    let d = base.factor_dim();
    let mut counts = BTreeMap::new();
    for _ in 0..samples {
        let mut cur = reduced.clone();
        let mut outcome = Vec::with_capacity(ctx.k);
        for step in 0..ctx.k {
            let dims = vec![d; ctx.k - step];
            let others: Vec<usize> = (1..dims.len()).collect();
            let single = HermitianOperator::from_hermitian_part(apply_and_trace(
                &cur,
                &SubsystemLayout::new(dims.clone())?,
                &[],
                &others,
            )?);
            let weights: Vec<f64> = ctx.povm.elements().iter().map(|f| f.inner(&single).max(0.0)).collect();
            let z = WeightedIndex::new(&weights).map_err(|_| Error::ZeroProbability)?.sample(rng);
            cur = contract_factor(&cur, &dims, 0, Some(ctx.povm.element(z).matrix()));
            outcome.push(z);
        }
        *counts.entry(outcome).or_insert(0) += 1;
    }
    Ok(counts)
}

fn sampled_leaves(ctx: &Ctx, base: &MultipartiteState<f64>, samples: usize, seed: u64) -> Result<Vec<(Leaf, usize)>> {
    let counts = sample_outcomes(ctx, base, samples, &mut seeded(seed, stream::SAMPLING))?;
    let measured: Vec<usize> = (ctx.n..ctx.n + ctx.k).collect();
    let keys: Vec<(Vec<usize>, usize)> = counts.into_iter().collect();
    keys.into_par_iter()
        .map(|(outcome, count)| {
            let b = condition_on_outcomes(base, ctx.povm, &measured, &outcome)?;
            let l = leaf(ctx, outcome, b.probability, count as f64 / samples as f64, &b.state, false)?;
            Ok((l, count))
        })
        .collect()
}

struct Run {
    leaves: Vec<Leaf>,
    /// Multiplicities in sampled mode.
    counts: Option<Vec<usize>>,
    base: MultipartiteState<f64>,
}

fn run(
    cfg: &ExperimentConfig,
    prepared: &PreparedState,
    povm: &Povm<f64>,
    exact: bool,
    collect_mixture: bool,
) -> Result<Run> {
    let state = &prepared.state;
    if state.copies() < cfg.n + cfg.k || povm.dim() != state.factor_dim() {
        return Err(Error::Config("state does not match the configuration".into()));
    }
    let ctx = Ctx { n: cfg.n, k: cfg.k, povm, has_extension: prepared.has_extension, collect_mixture };
    match (&cfg.mode, exact) {
        (ModeConfig::Sampled { samples }, false) => {
            let pairs = sampled_leaves(&ctx, state, *samples, cfg.seed)?;
            let (leaves, counts) = pairs.into_iter().unzip();
            Ok(Run { leaves, counts: Some(counts), base: state.clone() })
        }
        _ => Ok(Run { leaves: exact_leaves(&ctx, state)?, counts: None, base: state.clone() }),
    }
}

fn weighted_mean(records: &[BranchRecord], value: impl Fn(&BranchRecord) -> f64) -> f64 {
    records.iter().map(|r| r.weight * value(r)).sum()
}

fn standard_error(records: &[BranchRecord], counts: &[usize], value: impl Fn(&BranchRecord) -> f64) -> f64 {
    let s: usize = counts.iter().sum();
    if s < 2 {
        return 0.0;
    }
    let mean = weighted_mean(records, &value);
    let ss: f64 = records.iter().zip(counts).map(|(r, &c)| c as f64 * (value(r) - mean).powi(2)).sum();
    (ss / (s as f64 - 1.0) / s as f64).sqrt()
}

fn quantum_bound(constants: &PovmConstants, n: usize, k: usize) -> Option<f64> {
    constants.c2.map(|c2| c2 * n as f64 / (k as f64).sqrt())
}

fn tail_from_records(records: &[BranchRecord], eps: &[f64], qscale: Option<f64>, cscale: f64, k: usize) -> TailReport {
    let mut eps = eps.to_vec();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    let slack = crate::classical::EXCEEDANCE_SLACK;
    let exceed = |threshold: f64, value: &dyn Fn(&BranchRecord) -> f64| -> f64 {
        records.iter().filter(|r| value(r) >= threshold - slack).fold(0.0, |acc, r| acc + r.weight).min(1.0)
    };
    let quantum_exceedance: Vec<f64> =
        eps.iter().map(|e| qscale.map_or(0.0, |s| exceed(s * e, &|r: &BranchRecord| r.quantum_distance))).collect();
    let classical_exceedance: Vec<f64> =
        eps.iter().map(|e| exceed(cscale * e, &|r: &BranchRecord| r.classical_distance)).collect();
    let bound: Vec<f64> = eps.iter().map(|&e| tail_bound(k, e)).collect();
    let holds = quantum_exceedance
        .iter()
        .chain(&classical_exceedance)
        .zip(bound.iter().chain(&bound))
        .all(|(x, b)| *x <= b + CHECK_TOL);
    TailReport {
        eps,
        quantum_scale: qscale,
        classical_scale: cscale,
        quantum_exceedance,
        classical_exceedance,
        bound,
        holds,
    }
}

fn tail_checks(tail: &TailReport) -> Vec<Check> {
    let fam = |name: &str, xs: &[f64]| {
        Check::worst(
            name,
            xs.iter().zip(&tail.bound).zip(&tail.eps).map(|((x, b), e)| (*x, Some(*b), format!("eps={e}"))),
        )
    };
    [fam("tail_quantum", &tail.quantum_exceedance), fam("tail_classical", &tail.classical_exceedance)]
        .into_iter()
        .flatten()
        .collect()
}

fn mixture_from_run(r: &Run, cfg: &ExperimentConfig, constants: &PovmConstants) -> Result<MixtureReport> {
    let target = r.base.reduce_copies(cfg.n)?;
    let dim = target.operator().dim();
    let mut mix = HermitianOperator::zeros(dim);
    let mut states = HermitianOperator::zeros(dim);
    let mut convexity_bound = 0.0;
    for l in &r.leaves {
        let (p_prod, d) = l.mixture.as_ref().expect("mixture data collected");
        mix = &mix + p_prod;
        states = &states + l.weighted_state.as_ref().expect("exact mode");
        convexity_bound += l.record.probability * d;
    }
    let distance = trace_distance(target.operator(), &mix)?;
    let bound = constants.c2.map(|c2| 2f64.sqrt() * c2 * cfg.n as f64 / (2.0 * cfg.k as f64).sqrt());
    Ok(MixtureReport { distance, convexity_bound, bound, mixing_residual: states.max_abs_diff(target.operator()) })
}

fn mixture_checks(m: &MixtureReport) -> Vec<Check> {
    vec![
        Check::new("mixture_convexity", m.distance, Some(m.convexity_bound), None),
        Check::new("mixture_bound", m.distance, m.bound, None),
        Check::new("mixing_consistency", m.mixing_residual, Some(0.0), None),
    ]
}

fn prepare(cfg: &ExperimentConfig) -> Result<(PreparedState, Povm<f64>, PovmConstants)> {
    cfg.validate()?;
    let povm = cfg.build_povm()?;
    let constants = povm_constants(&povm)?;
    Ok((cfg.build_state()?, povm, constants))
}

/// Runs the full experiment: branches, both distances, the expectations
/// against `C₂·n/√k` and `√(t/k)`, the per-branch chain of intermediate
/// inequalities, the tail probabilities and, without ancilla in exact mode,
/// the mixture distance.
pub fn definetti_experiment(cfg: &ExperimentConfig) -> Result<DeFinettiReport> {
    let (prepared, povm, constants) = prepare(cfg)?;
    let exact = matches!(cfg.mode, ModeConfig::Exact);
    let with_mixture = exact && cfg.d_a == 1;
    let r = run(cfg, &prepared, &povm, exact, with_mixture)?;
    let records: Vec<BranchRecord> = r.leaves.iter().map(|l| l.record.clone()).collect();
    let (n, k, t) = (cfg.n, cfg.k, povm.len());
    let nf = n as f64;

    let has_chain = prepared.has_extension;
    let dexp_of = |r: &BranchRecord| r.chain.as_ref().map_or(0.0, |c| c.dexp);
    let expectations = Expectations {
        quantum: weighted_mean(&records, |r| r.quantum_distance),
        classical: weighted_mean(&records, |r| r.classical_distance),
        dexp: has_chain.then(|| weighted_mean(&records, dexp_of)),
        standard_errors: r.counts.as_ref().map(|c| StandardErrors {
            quantum: standard_error(&records, c, |r| r.quantum_distance),
            classical: standard_error(&records, c, |r| r.classical_distance),
            dexp: has_chain.then(|| standard_error(&records, c, dexp_of)),
        }),
    };
    let bounds = Bounds { quantum: quantum_bound(&constants, n, k), classical: (t as f64 / k as f64).sqrt() };
    let ratios = Ratios {
        quantum: bounds.quantum.map(|b| expectations.quantum / b),
        classical: expectations.classical / bounds.classical,
    };

    let mut checks = vec![
        Check::new("quantum_expectation", expectations.quantum, bounds.quantum, None),
        Check::new("classical_expectation", expectations.classical, Some(bounds.classical), None),
    ];
    if let Some(dexp) = expectations.dexp {
        checks.push(Check::new("conditional_dexp_expectation", dexp, Some(bounds.classical), None));
    }
    if exact {
        let total: f64 = records.iter().map(|r| r.probability).sum();
        checks.push(Check::new("probability_total", (total - 1.0).abs(), Some(0.0), None));
    }
    if has_chain {
        let c1 = constants.c1;
        let at = |r: &BranchRecord| r.outcome.join(";");
        let chained: Vec<(&BranchRecord, &ChainRecord)> =
            records.iter().filter_map(|r| r.chain.as_ref().map(|c| (r, c))).collect();
        let families = [
            Check::worst(
                "single_copy_quantum",
                chained.iter().map(|(r, c)| (c.single_copy_distance, c1.map(|x| x * c.dexp), at(r))),
            ),
            Check::worst(
                "single_copy_classical",
                chained.iter().map(|(r, c)| (r.classical_distance, Some(c.dexp), at(r))),
            ),
            Check::worst(
                "split_off",
                chained.iter().map(|(r, c)| (r.quantum_distance, Some(nf * c.single_copy_distance), at(r))),
            ),
            Check::worst(
                "n_copy_quantum",
                chained.iter().map(|(r, c)| (r.quantum_distance, c1.map(|x| nf * x * c.dexp), at(r))),
            ),
        ];
        checks.extend(families.into_iter().flatten());
        if prepared.state.is_symmetric() {
            let asym = chained.iter().filter(|(_, c)| !c.symmetric).count();
            checks.push(Check::new("branch_symmetry", asym as f64, Some(0.0), None));
        }
    }
    let tail = tail_from_records(&records, &cfg.tail.grid(), bounds.quantum, bounds.classical, k);
    checks.extend(tail_checks(&tail));
    let mixture = if with_mixture {
        let m = mixture_from_run(&r, cfg, &constants)?;
        checks.extend(mixture_checks(&m));
        Some(m)
    } else {
        None
    };
    let passed = checks.iter().all(|c| c.holds);
    let (mode, samples) = match cfg.mode {
        ModeConfig::Exact => ("exact".to_string(), None),
        ModeConfig::Sampled { samples } => ("sampled".to_string(), Some(samples)),
    };
    Ok(DeFinettiReport {
        config: cfg.clone(),
        povm: PovmSummary { dim: povm.dim(), outcomes: t, labels: povm.labels().to_vec() },
        constants,
        mode,
        samples,
        records,
        expectations,
        bounds,
        ratios,
        mixture,
        tail,
        checks,
        warnings: prepared.warnings,
        passed,
    })
}

/// The mixture distance `δ(ρ^{⊗n}, E_z̄[(ρ_z̄¹)^{⊗n}])` with its convexity and
/// closed-form bounds. Always enumerates exactly; requires `d_A = 1`.
pub fn definetti_mixture_distance(cfg: &ExperimentConfig) -> Result<MixtureReport> {
    if cfg.d_a != 1 {
        return Err(Error::Config("the mixture distance needs a configuration without ancilla (d_a = 1)".into()));
    }
    let (prepared, povm, constants) = prepare(cfg)?;
    let r = run(cfg, &prepared, &povm, true, true)?;
    mixture_from_run(&r, cfg, &constants)
}

/// Exceedance probabilities of both distances over `eps`.
pub fn tail_experiment(cfg: &ExperimentConfig, eps: &[f64]) -> Result<TailReport> {
    let (prepared, povm, constants) = prepare(cfg)?;
    let exact = matches!(cfg.mode, ModeConfig::Exact);
    let r = run(cfg, &prepared, &povm, exact, false)?;
    let records: Vec<BranchRecord> = r.leaves.into_iter().map(|l| l.record).collect();
    let cscale = (povm.len() as f64 / cfg.k as f64).sqrt();
    Ok(tail_from_records(&records, eps, quantum_bound(&constants, cfg.n, cfg.k), cscale, cfg.k))
}
