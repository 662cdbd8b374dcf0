//! The acceptance suite: ten numbered criteria, each reduced to a single
//! pass/fail result with a one-line summary of the worst case observed.

mod battery;
mod oracle;

use std::path::PathBuf;

use rand::Rng;
use serde::Serialize;

use crate::classical::{
    all_tuples, conditional_dexp_bound, conditional_dexp_expectation, conditional_dexp_tail,
    conditional_dexp_tail_bound, expected_freq_distance, frequency_gap_bound, frequency_gap_expectation,
    frequency_gap_tail, frequency_gap_tail_bound, frequency_of, subsequence_bound_rhs, variational_distance,
    Distribution, HypergeometricParams, SymmetricChannel, TupleDistribution,
};
use crate::definetti::{
    definetti_experiment, report_to_csv, report_to_json, tail_to_csv, ExperimentConfig, ModeConfig, NamedState,
    PovmChoice, StateConfig, TailConfig,
};
use crate::error::Result;
use crate::opalg::{
    eig_hermitian, partial_trace, tensor_product, trace_distance, trace_norm, DensityOperator, HermitianOperator,
    SubsystemLayout,
};
use crate::povm::{
    compute_dual, general_c1_ceiling, helstrom_povm, measure, povm_constants, read_povm, sic_c1, sic_c2, sic_overlap,
    sic_povm, theta_trace_norm_ceiling, wh_fiducial_state, wh_povm, DisplacementSet, PhaseConvention, Povm,
};
use crate::random::{random_density, random_hermitian, random_weights, rng};
use crate::symstate::bipartite_reconstruct;

pub use battery::{battery_configs, BatteryRun};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    fn new(id: u8, name: &str, passed: bool, detail: String) -> Self {
        Self { id, name: name.into(), passed, detail }
    }

    fn from_result(id: u8, name: &str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(id, name, passed, detail),
            Err(e) => Self::new(id, name, false, format!("error: {e}")),
        }
    }

    pub fn line(&self) -> String {
        format!("[{}] {:>2} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }
}

/// Knobs for fault injection.
#[derive(Clone, Debug, Default)]
pub struct AcceptanceOptions {
    /// Replaces the built-in qubit SIC-POVM wherever the suite uses it.
    pub sic_file: Option<PathBuf>,
}

impl AcceptanceOptions {
    fn sic(&self) -> Result<Povm<f64>> {
        match &self.sic_file {
            Some(p) => read_povm(p),
            None => sic_povm(2),
        }
    }

    fn sic_choice(&self) -> PovmChoice {
        match &self.sic_file {
            Some(path) => PovmChoice::File { path: path.clone() },
            None => PovmChoice::Sic,
        }
    }
}

/// Largest value seen and how many checks exceeded their limit.
struct Tally {
    worst: f64,
    checked: usize,
    failed: usize,
}

impl Default for Tally {
    fn default() -> Self {
        Self { worst: f64::NEG_INFINITY, checked: 0, failed: 0 }
    }
}

impl Tally {
    /// Records `value ≤ limit`; `worst` tracks `value`.
    fn le(&mut self, value: f64, limit: f64) {
        self.checked += 1;
        if !(value <= limit) {
            self.failed += 1;
        }
        self.worst = self.worst.max(value);
    }

    /// Records `lhs ≤ rhs + tol`; `worst` tracks `lhs − rhs`.
    fn gap(&mut self, lhs: f64, rhs: f64, tol: f64) {
        self.checked += 1;
        if !(lhs <= rhs + tol) {
            self.failed += 1;
        }
        self.worst = self.worst.max(lhs - rhs);
    }

    fn ok(&self) -> bool {
        self.failed == 0
    }

    fn summary(&self, what: &str) -> String {
        format!("{what} {}/{} ok, worst {:.3e}", self.checked - self.failed, self.checked, self.worst)
    }
}

pub fn criterion_1(opts: &AcceptanceOptions) -> CriterionResult {
    CriterionResult::from_result(
        1,
        "dual/tomography exactness",
        (|| {
            let mut r = rng(101);
            let mut single = Tally::default();
            let mut sic_res = Tally::default();
            let mut bip = Tally::default();
            let sic = opts.sic()?;
            let sic_dual = compute_dual(&sic)?;
            for d in 2..=5 {
                let wh = wh_povm::<f64>(d, PhaseConvention::default())?;
                let gram_dual = compute_dual(&wh.povm)?;
                for _ in 0..20 {
                    let u = random_hermitian::<f64>(d, &mut r);
                    single.le(wh.dual.reconstruct(&wh.povm, &u).max_abs_diff(&u), 1e-9);
                    single.le(gram_dual.reconstruct(&wh.povm, &u).max_abs_diff(&u), 1e-9);
                    if d == 2 {
                        sic_res.le(sic_dual.reconstruct(&sic, &u).max_abs_diff(&u), 1e-9);
                    }
                }
            }
            for d_a in [2, 3] {
                for d_b in [2, 3] {
                    let wh = wh_povm::<f64>(d_b, PhaseConvention::default())?;
                    for _ in 0..20 {
                        let w = random_hermitian::<f64>(d_a * d_b, &mut r);
                        bip.le(bipartite_reconstruct(&w, d_a, &wh.povm, &wh.dual)?.max_abs_diff(&w), 1e-9);
                        if d_b == 2 {
                            bip.le(bipartite_reconstruct(&w, d_a, &sic, &sic_dual)?.max_abs_diff(&w), 1e-9);
                        }
                    }
                }
            }
            Ok((
                single.ok() && sic_res.ok() && bip.ok(),
                format!("{}; {}; {}", single.summary("WH"), sic_res.summary("SIC"), bip.summary("bipartite")),
            ))
        })(),
    )
}

pub fn criterion_2(opts: &AcceptanceOptions) -> CriterionResult {
    CriterionResult::from_result(
        2,
        "qubit SIC-POVM",
        (|| {
            let sic = opts.sic()?;
            let theta = sic_overlap(2);
            let mut overlap = Tally::default();
            let els = sic.elements();
            for i in 0..els.len() {
                for j in 0..els.len() {
                    if i != j {
                        overlap.le((els[i].inner(&els[j]) - theta).abs(), 1e-12);
                    }
                }
            }
            let dual = compute_dual(&sic)?;
            let mut spectrum = Tally::default();
            for f in dual.elements() {
                let mut ev = eig_hermitian(f)?.values;
                ev.sort_by(f64::total_cmp);
                spectrum.le((ev[0] + 1.0).abs().max((ev[1] - 2.0).abs()), 1e-10);
            }
            let c = povm_constants(&sic)?;
            let (c1, c2) = (c.c1.unwrap_or(f64::INFINITY), c.c2.unwrap_or(f64::INFINITY));
            let consts = (c1 - sic_c1(2)).abs() <= 1e-9 && (c2 - sic_c2(2)).abs() <= 1e-9;
            let passed = overlap.ok() && spectrum.ok() && consts && sic.len() == 4;
            let detail = format!(
                "overlap deviation {:.3e}; dual spectrum deviation {:.3e}; C1 = {c1:.9}, C2 = {c2:.9}",
                overlap.worst, spectrum.worst
            );
            Ok((passed, if overlap.ok() { detail } else { format!("pairwise overlap check failed: {detail}") }))
        })(),
    )
}

pub fn criterion_3() -> CriterionResult {
    CriterionResult::from_result(
        3,
        "Weyl-Heisenberg construction",
        (|| {
            let mut r = rng(103);
            let mut weyl = Tally::default();
            let mut fid = Tally::default();
            let mut cov = Tally::default();
            let mut lam = Tally::default();
            let mut theta = Tally::default();
            let mut c1s = Tally::default();
            for d in 2..=5 {
                let set = DisplacementSet::<f64>::unchecked(d, PhaseConvention::default())?;
                let rho = random_density::<f64>(d, &mut r);
                for dev in [
                    set.unitarity_deviation(),
                    set.twirl_deviation(rho.operator()),
                    set.commutation_deviation(),
                    set.orthogonality_deviation(),
                    set.conjugation_deviation(true),
                ] {
                    weyl.le(dev, 1e-10);
                }
                let f = wh_fiducial_state(&set)?;
                fid.le((f.operator().trace() - 1.0).abs(), 1e-12);
                fid.le(-eig_hermitian(f.operator())?.min(), 1e-10);
                let wh = wh_povm::<f64>(d, PhaseConvention::default())?;
                let df = d as f64;
                for (a, delta) in set.points().zip(wh.povm.elements()) {
                    let direct = f.operator().conjugate(set.op(a)).scale(1.0 / df);
                    cov.le(delta.max_abs_diff(&direct), 1e-10);
                }
                for (i, la) in wh.lambdas.iter().enumerate() {
                    lam.le((la.trace() - 1.0).abs(), 1e-10);
                    for (j, lb) in wh.lambdas.iter().enumerate() {
                        let expected = if i == j { df } else { 0.0 };
                        lam.le((la.inner(lb) - expected).abs(), 1e-10);
                    }
                }
                for t in wh.dual.elements() {
                    theta.gap(trace_norm(t)?, theta_trace_norm_ceiling(d), 1e-9);
                }
                c1s.gap(wh.constants.c1.unwrap_or(f64::INFINITY), general_c1_ceiling(d), 1e-6);
            }
            let all = [&weyl, &fid, &cov, &lam, &theta, &c1s];
            Ok((
                all.iter().all(|t| t.ok()),
                format!(
                    "{}; {}; {}; {}; tr|Θ| margin {:.3e}; C1 margin {:.3e}",
                    weyl.summary("displacement identities"),
                    fid.summary("fiducial"),
                    cov.summary("covariance"),
                    lam.summary("Λ traces"),
                    theta.worst,
                    c1s.worst
                ),
            ))
        })(),
    )
}

pub fn criterion_4() -> CriterionResult {
    CriterionResult::from_result(
        4,
        "distance layer",
        (|| {
            let mut r = rng(104);
            let mut helstrom = Tally::default();
            let mut product = Tally::default();
            let mut mono = Tally::default();
            let mut convex = Tally::default();
            for i in 0..50 {
                let d = 2 + i % 3;
                let rho = random_density::<f64>(d, &mut r);
                let sigma = random_density::<f64>(d, &mut r);
                let td = trace_distance(rho.operator(), sigma.operator())?;
                let y = helstrom_povm(rho.operator(), sigma.operator())?;
                let cd = variational_distance(&measure(&rho, &y)?, &measure(&sigma, &y)?)?;
                helstrom.le((cd - td).abs(), 1e-10);

                let tau = random_density::<f64>(2 + i % 2, &mut r);
                let lhs = trace_distance(
                    &tensor_product(rho.operator(), tau.operator()),
                    &tensor_product(sigma.operator(), tau.operator()),
                )?;
                product.le((lhs - td).abs(), 1e-10);

                let d_b = 2;
                let a = random_density::<f64>(d * d_b, &mut r);
                let b = random_density::<f64>(d * d_b, &mut r);
                let layout = SubsystemLayout::new(vec![d, d_b])?;
                let full = trace_distance(a.operator(), b.operator())?;
                let reduced = trace_distance(
                    &partial_trace(a.operator(), &layout, &[1])?,
                    &partial_trace(b.operator(), &layout, &[1])?,
                )?;
                mono.gap(reduced, full, 1e-10);
                let z = Povm::with_index_labels(crate::random::random_povm_elements(d * d_b, 3, &mut r))?;
                let measured = variational_distance(&measure(&a, &z)?, &measure(&b, &z)?)?;
                mono.gap(measured, full, 1e-10);

                let terms = 3;
                let p = Distribution::new(random_weights(terms, &mut r))?;
                let q = Distribution::new(random_weights(terms, &mut r))?;
                let rhos: Vec<DensityOperator<f64>> = (0..terms).map(|_| random_density(d, &mut r)).collect();
                let sigmas: Vec<DensityOperator<f64>> = (0..terms).map(|_| random_density(d, &mut r)).collect();
                let mix = |w: &[f64], s: &[DensityOperator<f64>]| {
                    s.iter().zip(w).fold(HermitianOperator::zeros(d), |acc, (x, &wi)| &acc + &x.operator().scale(wi))
                };
                let lhs = trace_distance(&mix(p.weights(), &rhos), &mix(q.weights(), &sigmas))?;
                let mut rhs = variational_distance(&p, &q)?;
                for i in 0..terms {
                    rhs += p.get(i) * trace_distance(rhos[i].operator(), sigmas[i].operator())?;
                }
                convex.gap(lhs, rhs, 1e-10);
            }
            Ok((
                helstrom.ok() && product.ok() && mono.ok() && convex.ok(),
                format!(
                    "{}; {}; {}; {}",
                    helstrom.summary("Helstrom"),
                    product.summary("product"),
                    mono.summary("monotonicity"),
                    convex.summary("strong convexity")
                ),
            ))
        })(),
    )
}

/// Count vectors of the type classes of `Z^len` with `|Z| = t`. The uniform
/// distributions on these classes are the extreme points of the symmetric
/// distributions.
fn type_classes(t: usize, len: usize) -> Vec<Vec<usize>> {
    all_tuples(len + 1, t).filter(|c| c.iter().sum::<usize>() == len).collect()
}

pub fn criterion_5() -> CriterionResult {
    CriterionResult::from_result(
        5,
        "classical lemmas",
        (|| {
            let mut r = rng(105);
            let mut subseq = Tally::default();
            for t in 1..=3 {
                for n in 1..=4 {
                    for k in 1..=4 {
                        for z in all_tuples(t, n) {
                            for zbar in all_tuples(t, k) {
                                let lhs = frequency_of(&z, t)?.distance(&frequency_of(&zbar, t)?)?;
                                subseq.gap(lhs, subsequence_bound_rhs(&z, &zbar, t)?, 1e-12);
                            }
                        }
                    }
                }
            }

            let mut gap = Tally::default();
            let mut dexp = Tally::default();
            let mut dexp_outside = 0usize;
            for n in 1..=4 {
                for k in 1..=3 {
                    for _ in 0..100 {
                        let p = TupleDistribution::<f64>::random_symmetric(2, n + k, &mut r)?;
                        gap.gap(frequency_gap_expectation(&p, k)?, frequency_gap_bound(2, k), 1e-12);
                        let e = conditional_dexp_expectation(&p, k)?;
                        if k <= n {
                            dexp.gap(e, conditional_dexp_bound(2, k), 1e-12);
                        } else if e > conditional_dexp_bound(2, k) + 1e-12 {
                            dexp_outside += 1;
                        }
                    }
                }
            }

            let mut channel = Tally::default();
            for _ in 0..100 {
                let (y, t, rr) = (r.gen_range(2..=4), r.gen_range(2..=3), r.gen_range(2..=4));
                let ch = SymmetricChannel::<f64>::random(y, t, rr, &mut r)?;
                let q = Distribution::new(random_weights(t, &mut r))?;
                let rhs = expected_freq_distance(&ch.marginal(), &q)?;
                for i in 0..rr {
                    channel.gap(variational_distance(&ch.joint_with_coordinate(i)?, &ch.product_with(&q))?, rhs, 1e-12);
                }
            }

            let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
            let mut gap_tail = Tally::default();
            let mut dexp_tail = Tally::default();
            let mut tail_outside = 0usize;
            for total in 2..=7 {
                for k in 1..total {
                    let n = total - k;
                    let mut dists: Vec<TupleDistribution<f64>> = Vec::new();
                    for counts in type_classes(2, total) {
                        dists.push(TupleDistribution::uniform_type_class(&counts)?);
                    }
                    for _ in 0..10 {
                        dists.push(TupleDistribution::random_symmetric(2, total, &mut r)?);
                    }
                    for p in &dists {
                        for &eps in &grid {
                            gap_tail.gap(frequency_gap_tail(p, k, eps)?, frequency_gap_tail_bound(2, k, eps), 1e-12);
                            let v = conditional_dexp_tail(p, k, eps)?;
                            let b = conditional_dexp_tail_bound(2, k, eps);
                            if k <= n {
                                dexp_tail.gap(v, b, 1e-12);
                            } else if v > b + 1e-12 {
                                tail_outside += 1;
                            }
                        }
                    }
                }
            }
            let all = [&subseq, &gap, &dexp, &channel, &gap_tail, &dexp_tail];
            Ok((
            all.iter().all(|t| t.ok()),
            format!(
                "{}; {}; {}; {}; {}; {}; k > n cases outside the hypothesis exceeding: {dexp_outside} expectation, {tail_outside} tail",
                subseq.summary("subsequence"),
                gap.summary("sample gap"),
                dexp.summary("conditional DExp"),
                channel.summary("channel"),
                gap_tail.summary("gap tail"),
                dexp_tail.summary("DExp tail")
            ),
        ))
        })(),
    )
}

pub fn criterion_6() -> CriterionResult {
    CriterionResult::from_result(
        6,
        "Hoeffding tail",
        (|| {
            let mut tally = Tally::default();
            for n in 1..=30u64 {
                for m in 0..=n {
                    for k in 0..=n {
                        let h = HypergeometricParams::new(n, m, k)?;
                        let pmf = h.pmf::<f64>()?;
                        for step in 0..=2 * k {
                            let ell = step as f64 / 2.0;
                            let x = h.mean() - ell;
                            let tail: f64 = pmf
                                .weights()
                                .iter()
                                .enumerate()
                                .filter(|(s, _)| *s as f64 <= x + 1e-12)
                                .map(|(_, w)| w)
                                .sum();
                            tally.gap(tail, h.hoeffding_tail_bound(ell), 1e-12);
                        }
                    }
                }
            }
            Ok((tally.ok(), tally.summary("tail ≤ bound")))
        })(),
    )
}

pub fn criterion_7(runs: &[BatteryRun]) -> CriterionResult {
    battery::theorem_criterion(runs)
}

pub fn criterion_8(opts: &AcceptanceOptions) -> CriterionResult {
    CriterionResult::from_result(8, "oracle anchor", oracle::check(opts.sic_choice()))
}

pub fn criterion_9(runs: &[BatteryRun]) -> CriterionResult {
    battery::chain_criterion(runs)
}

/// A sampled configuration, run twice.
pub fn reproducibility_config() -> ExperimentConfig {
    ExperimentConfig {
        version: 1,
        name: Some("reproducibility".into()),
        d: 2,
        d_a: 2,
        n: 2,
        k: 2,
        seed: 2024,
        dim_cap: 4096,
        povm: PovmChoice::Wh { convention: PhaseConvention::default() },
        state: StateConfig::Mixture {
            components: vec![
                crate::definetti::MixtureComponent {
                    weight: 0.3,
                    ancilla: Some(NamedState::Random),
                    factor: NamedState::Random,
                },
                crate::definetti::MixtureComponent { weight: 0.7, ancilla: None, factor: NamedState::Random },
            ],
        },
        mode: ModeConfig::Sampled { samples: 500 },
        tail: TailConfig::default(),
    }
}

pub fn criterion_10() -> CriterionResult {
    CriterionResult::from_result(
        10,
        "reproducibility",
        (|| {
            let mut sampled = reproducibility_config();
            let render = |c: &ExperimentConfig| -> Result<(String, String, String)> {
                let rep = definetti_experiment(c)?;
                Ok((report_to_json(&rep), report_to_csv(&rep), tail_to_csv(c, &rep.tail)))
            };
            let a = render(&sampled)?;
            let b = render(&sampled)?;
            sampled.mode = ModeConfig::Exact;
            let c = render(&sampled)?;
            let d = render(&sampled)?;
            let same = a == b && c == d;
            Ok((
                same,
                format!("sampled and exact runs byte-identical: {same} ({} + {} JSON bytes)", a.0.len(), c.0.len()),
            ))
        })(),
    )
}

/// Runs every criterion in order.
pub fn run_all(opts: &AcceptanceOptions) -> Vec<CriterionResult> {
    let runs = battery::run_battery(opts);
    vec![
        criterion_1(opts),
        criterion_2(opts),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(&runs),
        criterion_8(opts),
        criterion_9(&runs),
        criterion_10(),
    ]
}
