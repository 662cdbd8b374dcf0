use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, ValueEnum};
use finetti::definetti::{
    definetti_experiment, report_to_csv, report_to_json, tail_to_csv, DeFinettiReport, ExperimentConfig, PovmChoice,
    StateConfig,
};

use crate::output::{emit, opt, summary};
use crate::Violations;

#[derive(Args, Debug)]
pub struct DefinettiArgs {
    /// Experiment config (TOML).
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tail table destination (csv format only).
    #[arg(long)]
    tail_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Parses a config file. The name defaults to the file stem and relative
/// paths inside it are taken relative to the file.
pub fn load_config(path: &Path) -> anyhow::Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut cfg: ExperimentConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if cfg.name.is_none() {
        cfg.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    }
    let base = path.parent().unwrap_or(Path::new(""));
    let resolve = |p: &mut PathBuf| {
        if p.is_relative() {
            *p = base.join(&*p);
        }
    };
    if let PovmChoice::File { path } = &mut cfg.povm {
        resolve(path);
    }
    if let StateConfig::External { path, .. } = &mut cfg.state {
        resolve(path);
    }
    Ok(cfg)
}

fn describe(r: &DeFinettiReport) -> Vec<String> {
    let c = &r.config;
    let e = &r.expectations;
    let mut lines = vec![
        format!(
            "experiment: {} d={} d_a={} n={} k={} outcomes={} mode={}",
            c.name.as_deref().unwrap_or("unnamed"),
            c.d,
            c.d_a,
            c.n,
            c.k,
            r.povm.outcomes,
            r.mode
        ),
        format!("branches: {}", r.records.len()),
        format!("E[quantum distance]: {:.12} (bound {})", e.quantum, opt(r.bounds.quantum)),
        format!("E[classical distance]: {:.12} (bound {:.12})", e.classical, r.bounds.classical),
    ];
    if let Some(m) = &r.mixture {
        lines.push(format!(
            "mixture distance: {:.12} (convexity bound {:.12}, bound {})",
            m.distance,
            m.convexity_bound,
            opt(m.bound)
        ));
    }
    for w in &r.warnings {
        lines.push(format!("warning: {w}"));
    }
    let failed = r.failed_checks().count();
    lines.push(format!("checks: {} passed, {failed} failed", r.checks.len() - failed));
    lines
}

pub fn run(args: DefinettiArgs) -> anyhow::Result<Violations> {
    let cfg = load_config(&args.config)?;
    let report = definetti_experiment(&cfg)?;
    match args.format {
        Format::Json => emit(args.out.as_deref(), &report_to_json(&report))?,
        Format::Csv => {
            emit(args.out.as_deref(), &report_to_csv(&report))?;
            if let Some(p) = &args.tail_out {
                emit(Some(p), &tail_to_csv(&cfg, &report.tail))?;
            }
        }
    }
    summary(&describe(&report), args.out.is_none());
    Ok(report
        .failed_checks()
        .map(|c| {
            let at = c.at.as_deref().map(|a| format!(" at {a}")).unwrap_or_default();
            format!("{}: lhs {:.12} > rhs {}{at}", c.name, c.lhs, opt(c.rhs))
        })
        .collect())
}
