use serde::Deserialize;

use crate::definetti::{
    definetti_experiment, ExperimentConfig, MixtureComponent, ModeConfig, NamedState, PovmChoice, StateConfig,
    TailConfig,
};
use crate::error::{Error, Result};
use crate::symstate::condition_on_outcomes;

const FIXTURE: &str = include_str!("../../tests/fixtures/oracle_mixture.json");
const TOL: f64 = 1e-9;

#[derive(Deserialize)]
struct Fixture {
    cases: Vec<Case>,
}

#[derive(Deserialize)]
struct Case {
    n: usize,
    k: usize,
    branches: Vec<Branch>,
    expectations: Pair,
    mixture_distance: f64,
}

#[derive(Deserialize)]
struct Branch {
    outcome: Vec<String>,
    probability: f64,
    state: Vec<Vec<[f64; 2]>>,
    quantum_distance: f64,
    classical_distance: f64,
}

#[derive(Deserialize)]
struct Pair {
    quantum: f64,
    classical: f64,
}

/// `½ |0⟩⟨0|^{⊗N} + ½ |+⟩⟨+|^{⊗N}` without ancilla.
pub fn oracle_config(n: usize, k: usize, povm: PovmChoice) -> ExperimentConfig {
    ExperimentConfig {
        version: 1,
        name: Some("two-product-mixture".into()),
        d: 2,
        d_a: 1,
        n,
        k,
        seed: 0,
        dim_cap: 4096,
        povm,
        state: StateConfig::Mixture {
            components: vec![
                MixtureComponent { weight: 0.5, ancilla: None, factor: NamedState::Basis { index: 0 } },
                MixtureComponent { weight: 0.5, ancilla: None, factor: NamedState::Superposition },
            ],
        },
        mode: ModeConfig::Exact,
        tail: TailConfig::default(),
    }
}

fn fixture() -> Result<Fixture> {
    serde_json::from_str(FIXTURE).map_err(|e| Error::Config(format!("oracle fixture: {e}")))
}

pub(crate) fn check(povm: PovmChoice) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    let mut summary = Vec::new();
    for case in fixture()?.cases {
        let cfg = oracle_config(case.n, case.k, povm.clone());
        let rep = definetti_experiment(&cfg)?;
        let prepared = cfg.build_state()?;
        let sic = cfg.build_povm()?;
        let measured: Vec<usize> = (case.n..case.n + case.k).collect();
        if rep.records.len() != case.branches.len() {
            return Ok((
                false,
                format!("n={}: {} branches, oracle has {}", case.n, rep.records.len(), case.branches.len()),
            ));
        }
        for (rec, b) in rep.records.iter().zip(&case.branches) {
            if rec.outcome != b.outcome {
                return Ok((false, format!("branch order differs: {:?} vs {:?}", rec.outcome, b.outcome)));
            }
            worst = worst
                .max((rec.probability - b.probability).abs())
                .max((rec.quantum_distance - b.quantum_distance).abs())
                .max((rec.classical_distance - b.classical_distance).abs());
            let labels: Vec<&str> = b.outcome.iter().map(String::as_str).collect();
            let zbar: Vec<usize> = labels.iter().map(|l| sic.index_of(l).expect("label from the same POVM")).collect();
            let branch = condition_on_outcomes(&prepared.state, &sic, &measured, &zbar)?;
            let state = branch.state.reduce_copies(case.n)?;
            let m = state.operator().matrix();
            for (i, row) in b.state.iter().enumerate() {
                for (j, [re, im]) in row.iter().enumerate() {
                    worst = worst.max((m[(i, j)].re - re).abs()).max((m[(i, j)].im - im).abs());
                }
            }
        }
        worst = worst
            .max((rep.expectations.quantum - case.expectations.quantum).abs())
            .max((rep.expectations.classical - case.expectations.classical).abs());
        let mix = rep.mixture.as_ref().map_or(f64::INFINITY, |m| m.distance);
        worst = worst.max((mix - case.mixture_distance).abs());
        summary.push(format!(
            "n={}: E[quantum] = {:.12}, E[classical] = {:.12}",
            case.n, rep.expectations.quantum, rep.expectations.classical
        ));
    }
    Ok((worst <= TOL, format!("max deviation from oracle {worst:.3e}; {}", summary.join("; "))))
}
