use std::fmt::Write;

use crate::definetti::config::{ExperimentConfig, ModeConfig, PovmChoice};
use crate::definetti::experiment::{DeFinettiReport, TailReport};

pub fn report_to_json(report: &DeFinettiReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn header(cfg: &ExperimentConfig) -> String {
    let povm = match &cfg.povm {
        PovmChoice::Sic => "sic".to_string(),
        PovmChoice::Wh { .. } => "wh".to_string(),
        PovmChoice::File { path } => format!("file:{}", path.display()),
    };
    let mode = match cfg.mode {
        ModeConfig::Exact => "exact".to_string(),
        ModeConfig::Sampled { samples } => format!("sampled:{samples}"),
    };
    format!(
        "# config={} d={} d_a={} n={} k={} povm={povm} mode={mode} seed={}",
        cfg.name.as_deref().unwrap_or("unnamed"),
        cfg.d,
        cfg.d_a,
        cfg.n,
        cfg.k,
        cfg.seed
    )
}

/// One row per branch, preceded by a comment line naming the config.
pub fn report_to_csv(report: &DeFinettiReport) -> String {
    let mut s = header(&report.config);
    s.push_str("\nbranch_index,zbar,probability,quantum_distance,classical_distance\n");
    for r in &report.records {
        writeln!(
            s,
            "{},{},{},{},{}",
            r.index,
            r.outcome.join(";"),
            r.probability,
            r.quantum_distance,
            r.classical_distance
        )
        .expect("writing to a string");
    }
    s
}

pub fn tail_to_csv(cfg: &ExperimentConfig, tail: &TailReport) -> String {
    let mut s = header(cfg);
    s.push_str("\neps,quantum_exceedance,classical_exceedance,bound\n");
    for i in 0..tail.eps.len() {
        writeln!(
            s,
            "{},{},{},{}",
            tail.eps[i], tail.quantum_exceedance[i], tail.classical_exceedance[i], tail.bound[i]
        )
        .expect("writing to a string");
    }
    s
}
