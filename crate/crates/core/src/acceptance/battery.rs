use rand::Rng;

use crate::acceptance::{AcceptanceOptions, CriterionResult};
use crate::definetti::{
    definetti_experiment, DeFinettiReport, ExperimentConfig, MixtureComponent, ModeConfig, NamedState, PovmChoice,
    StateConfig, TailConfig,
};
use crate::povm::PhaseConvention;
use crate::random::rng;

/// One battery configuration and its outcome.
#[derive(Clone, Debug)]
pub struct BatteryRun {
    pub label: String,
    pub config: ExperimentConfig,
    pub pure_product: bool,
    pub report: std::result::Result<DeFinettiReport, String>,
}

const NK: [(usize, usize); 4] = [(1, 1), (1, 2), (2, 1), (2, 2)];

fn random_mixture(components: usize, d_a: usize, r: &mut impl Rng) -> StateConfig {
    let raw: Vec<f64> = (0..components).map(|_| r.gen_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let head: f64 = weights[..components - 1].iter().sum();
    weights[components - 1] = 1.0 - head;
    StateConfig::Mixture {
        components: weights
            .into_iter()
            .map(|weight| MixtureComponent {
                weight,
                ancilla: (d_a > 1).then_some(NamedState::Random),
                factor: NamedState::Random,
            })
            .collect(),
    }
}

/// States on `d = 2` with and without a qubit ancilla: pure and mixed
/// products, symmetrized basis states, mixtures of two to four i.i.d.
/// components and symmetrized random states.
fn states(copies: usize, r: &mut impl Rng) -> Vec<(&'static str, usize, StateConfig, bool)> {
    let alternating: Vec<usize> = (0..copies).map(|i| i % 2).collect();
    let mut single_one = vec![0; copies];
    single_one[0] = 1;
    vec![
        ("product-pure", 1, StateConfig::Product { ancilla: None, factor: NamedState::Basis { index: 0 } }, true),
        (
            "product-pure-ancilla",
            2,
            StateConfig::Product {
                ancilla: Some(NamedState::Basis { index: 1 }),
                factor: NamedState::Bloch { vector: [0.6, 0.0, 0.8] },
            },
            true,
        ),
        (
            "product-mixed",
            2,
            StateConfig::Product { ancilla: Some(NamedState::Random), factor: NamedState::Random },
            false,
        ),
        ("symmetrized-basis", 1, StateConfig::SymmetrizedBasis { ancilla_index: 0, pattern: alternating }, false),
        (
            "symmetrized-basis-ancilla",
            2,
            StateConfig::SymmetrizedBasis { ancilla_index: 1, pattern: single_one },
            false,
        ),
        ("mixture-2", 1, random_mixture(2, 1, r), false),
        ("mixture-3-ancilla", 2, random_mixture(3, 2, r), false),
        ("mixture-4", 1, random_mixture(4, 1, r), false),
        ("symmetrized-random", 1, StateConfig::SymmetrizedRandom, false),
        ("symmetrized-random-ancilla", 2, StateConfig::SymmetrizedRandom, false),
    ]
}

/// Every configuration of the end-to-end battery.
pub fn battery_configs(opts: &AcceptanceOptions) -> Vec<(String, ExperimentConfig, bool)> {
    let mut r = rng(107);
    let mut out = Vec::new();
    for (n, k) in NK {
        for (pname, povm) in
            [("sic", opts.sic_choice()), ("wh", PovmChoice::Wh { convention: PhaseConvention::default() })]
        {
            for (i, (sname, d_a, state, pure)) in states(n + 2 * k - 1, &mut r).into_iter().enumerate() {
                let label = format!("{sname}/{pname}/n={n},k={k}");
                let config = ExperimentConfig {
                    version: 1,
                    name: Some(label.clone()),
                    d: 2,
                    d_a,
                    n,
                    k,
                    seed: 7000 + i as u64,
                    dim_cap: 4096,
                    povm: povm.clone(),
                    state,
                    mode: ModeConfig::Exact,
                    tail: TailConfig::default(),
                };
                out.push((label, config, pure));
            }
        }
    }
    out
}

pub(crate) fn run_battery(opts: &AcceptanceOptions) -> Vec<BatteryRun> {
    use rayon::prelude::*;
    battery_configs(opts)
        .into_par_iter()
        .map(|(label, config, pure_product)| {
            let report = definetti_experiment(&config).map_err(|e| e.to_string());
            BatteryRun { label, config, pure_product, report }
        })
        .collect()
}

struct Margin {
    name: &'static str,
    worst: f64,
    at: String,
    failed: usize,
}

fn margins(runs: &[BatteryRun], names: &[&'static str]) -> (Vec<Margin>, Vec<String>) {
    let mut out: Vec<Margin> =
        names.iter().map(|&name| Margin { name, worst: f64::NEG_INFINITY, at: String::new(), failed: 0 }).collect();
    let mut errors = Vec::new();
    for run in runs {
        let rep = match &run.report {
            Ok(r) => r,
            Err(e) => {
                errors.push(format!("{}: {e}", run.label));
                continue;
            }
        };
        for m in out.iter_mut() {
            for c in rep.checks.iter().filter(|c| c.name == m.name) {
                if !c.holds {
                    m.failed += 1;
                }
                if let Some(rhs) = c.rhs {
                    if c.lhs - rhs > m.worst {
                        m.worst = c.lhs - rhs;
                        m.at = run.label.clone();
                    }
                }
            }
        }
    }
    (out, errors)
}

fn summarize(
    id: u8,
    name: &str,
    runs: &[BatteryRun],
    names: &[&'static str],
    extra: Option<(bool, String)>,
) -> CriterionResult {
    let (ms, errors) = margins(runs, names);
    let mut passed = errors.is_empty() && ms.iter().all(|m| m.failed == 0);
    let mut parts: Vec<String> =
        ms.iter().map(|m| format!("{} {} failures, max lhs−rhs {:.3e}", m.name, m.failed, m.worst)).collect();
    if let Some((ok, text)) = extra {
        passed &= ok;
        parts.push(text);
    }
    if let Some(e) = errors.first() {
        parts.insert(0, format!("{} runs errored, first: {e}", errors.len()));
    }
    CriterionResult::new(id, name, passed, format!("{} runs; {}", runs.len(), parts.join("; ")))
}

pub(crate) fn theorem_criterion(runs: &[BatteryRun]) -> CriterionResult {
    let mut worst_pure: f64 = 0.0;
    for run in runs.iter().filter(|r| r.pure_product) {
        if let Ok(rep) = &run.report {
            for rec in &rep.records {
                worst_pure = worst_pure.max(rec.quantum_distance);
            }
        }
    }
    let pure = (worst_pure <= 1e-9, format!("pure-product branch distance max {worst_pure:.3e}"));
    summarize(
        7,
        "end-to-end expectation and tail bounds",
        runs,
        &[
            "quantum_expectation",
            "classical_expectation",
            "tail_quantum",
            "tail_classical",
            "branch_symmetry",
            "probability_total",
        ],
        Some(pure),
    )
}

pub(crate) fn chain_criterion(runs: &[BatteryRun]) -> CriterionResult {
    summarize(
        9,
        "intermediate product-structure chain",
        runs,
        &[
            "single_copy_quantum",
            "single_copy_classical",
            "split_off",
            "n_copy_quantum",
            "conditional_dexp_expectation",
            "mixture_convexity",
            "mixing_consistency",
            "mixture_bound",
        ],
        None,
    )
}
