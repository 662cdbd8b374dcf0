use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use finetti::classical::Distribution;
use finetti::opalg::trace_distance;
use finetti::povm::{compute_dual, measure, read_povm, RECONSTRUCTION_TOL};
use finetti::random::rng;
use finetti::symstate::{bipartite_reconstruct, read_state, reconstruction_error_bound, tomographic_reconstruct};
use rand::Rng;

use crate::output::summary;
use crate::Violations;

#[derive(Args, Debug)]
pub struct TomographyArgs {
    /// State file with a single copy (and optionally an ancilla).
    #[arg(long)]
    state: PathBuf,
    /// POVM file; must be informationally complete with d^2 outcomes.
    #[arg(long)]
    povm: PathBuf,
    /// Perturb each probability by up to this amount before reconstructing.
    #[arg(long)]
    perturb: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn run(args: TomographyArgs) -> anyhow::Result<Violations> {
    let state = read_state::<f64>(&args.state).with_context(|| format!("reading {}", args.state.display()))?;
    let povm = read_povm::<f64>(&args.povm).with_context(|| format!("reading {}", args.povm.display()))?;
    if state.copies() != 1 {
        bail!("tomography takes a single-copy state, found {} copies", state.copies());
    }
    if state.factor_dim() != povm.dim() {
        bail!("state dimension {} does not match POVM dimension {}", state.factor_dim(), povm.dim());
    }
    let dual = compute_dual(&povm)?;
    let mut lines = vec![
        format!("state: d={} d_a={}", state.factor_dim(), state.ancilla_dim()),
        format!("povm: {} outcomes", povm.len()),
    ];
    let mut violated = Vec::new();

    if state.ancilla_dim() > 1 {
        if args.perturb.is_some() {
            bail!("--perturb needs a state without ancilla");
        }
        let back = bipartite_reconstruct(state.operator(), state.ancilla_dim(), &povm, &dual)?;
        let residual = back.max_abs_diff(state.operator());
        lines.push(format!("reconstruction residual: {residual:.3e}"));
        if residual > RECONSTRUCTION_TOL {
            violated.push(format!("reconstruction residual: lhs {residual:.3e} > rhs {RECONSTRUCTION_TOL:e}"));
        }
        summary(&lines, false);
        return Ok(violated);
    }

    let rho = state.state();
    let p = measure(rho, &povm)?;
    let back = tomographic_reconstruct(&p, &dual)?;
    let residual = back.max_abs_diff(rho.operator());
    lines.push(format!("reconstruction residual: {residual:.3e}"));
    if residual > RECONSTRUCTION_TOL {
        violated.push(format!("reconstruction residual: lhs {residual:.3e} > rhs {RECONSTRUCTION_TOL:e}"));
    }

    if let Some(level) = args.perturb {
        if !(level >= 0.0 && level.is_finite()) {
            bail!("--perturb must be a nonnegative number, got {level}");
        }
        let mut r = rng(args.seed);
        let noisy: Vec<f64> = p.weights().iter().map(|&w| (w + level * r.gen_range(-1.0..=1.0)).max(0.0)).collect();
        let q = Distribution::from_unnormalized(noisy)?;
        let estimate = tomographic_reconstruct(&q, &dual)?;
        let observed = trace_distance(rho.operator(), &estimate)?;
        let bound = reconstruction_error_bound(&p, &q, &dual)?;
        lines.push(format!("perturbation: {level:e} (seed {})", args.seed));
        lines.push(format!("observed error: {observed:.12}"));
        lines.push(format!("error bound: {bound:.12}"));
        if observed > bound + 1e-12 {
            violated.push(format!("tomography error bound: lhs {observed:.12} > rhs {bound:.12}"));
        }
    }
    summary(&lines, false);
    Ok(violated)
}
