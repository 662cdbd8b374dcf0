use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use finetti::povm::{
    general_c1_ceiling, general_c2_ceiling, povm_constants, povm_to_text, sic_c1, sic_c2, sic_povm,
    theta_trace_norm_ceiling, wh_povm, PhaseConvention, Povm, PovmConstants,
};

use crate::output::{emit, opt, summary};
use crate::Violations;

#[derive(Args, Debug)]
pub struct PovmArgs {
    #[command(subcommand)]
    action: Action,
}

#[derive(Subcommand, Debug)]
enum Action {
    /// Write the POVM file and print its constants.
    Build {
        #[command(flatten)]
        spec: Spec,
        /// Destination file; the POVM goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print C1, C2, the dual trace norms and the closed-form ceilings.
    Constants {
        #[command(flatten)]
        spec: Spec,
    },
}

#[derive(Args, Debug)]
struct Spec {
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Phase convention of the displacement operators (wh only).
    #[arg(long, value_enum, default_value_t = Convention::PairSymmetric)]
    convention: Convention,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Sic,
    Wh,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Convention {
    PairSymmetric,
    HalfInteger,
    NegatedRoot,
}

impl From<Convention> for PhaseConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::PairSymmetric => Self::PairSymmetric,
            Convention::HalfInteger => Self::HalfInteger,
            Convention::NegatedRoot => Self::NegatedRoot,
        }
    }
}

fn build(spec: &Spec) -> anyhow::Result<(Povm<f64>, PovmConstants)> {
    Ok(match spec.kind {
        Kind::Sic => {
            let povm = sic_povm(spec.d)?;
            let constants = povm_constants(&povm)?;
            (povm, constants)
        }
        Kind::Wh => {
            let wh = wh_povm(spec.d, spec.convention.into())?;
            (wh.povm, wh.constants)
        }
    })
}

/// Summary lines and the violated ceilings.
fn report(spec: &Spec, povm: &Povm<f64>, k: &PovmConstants) -> (Vec<String>, Violations) {
    let d = spec.d;
    let kind = match spec.kind {
        Kind::Sic => "sic",
        Kind::Wh => "wh",
    };
    let mut lines = vec![
        format!("povm: {kind} d={d} outcomes={}", povm.len()),
        format!("C1: {}", opt(k.c1)),
        format!("C2: {}", opt(k.c2)),
    ];
    for (label, n) in povm.labels().iter().zip(&k.trace_norms) {
        lines.push(format!("tr|F*_{label}|: {n:.12}"));
    }
    lines.push(format!("SIC value 2d^2(2d-1): {}", sic_c1(d)));
    lines.push(format!("SIC C2 value 2d^3(2d-1): {}", sic_c2(d)));
    lines.push(format!("general C1 ceiling 2*sqrt(2)*d^5: {:.12}", general_c1_ceiling(d)));
    lines.push(format!("general C2 ceiling 2*sqrt(2)*d^6: {:.12}", general_c2_ceiling(d)));

    let mut violated = Vec::new();
    let c1 = k.c1.unwrap_or(f64::INFINITY);
    match spec.kind {
        Kind::Sic => {
            if (c1 - sic_c1(d)).abs() > 1e-9 * sic_c1(d) {
                violated.push(format!("C1 = 2d^2(2d-1): lhs {c1:.12} != rhs {}", sic_c1(d)));
            }
        }
        Kind::Wh => {
            let ceiling = theta_trace_norm_ceiling(d);
            lines.push(format!("tr|F*_z| ceiling d*sqrt(d^4+d^2-1): {ceiling:.12}"));
            if c1 > general_c1_ceiling(d) {
                violated.push(format!("C1 <= 2*sqrt(2)*d^5: lhs {c1:.12} > rhs {:.12}", general_c1_ceiling(d)));
            }
            if let Some(n) = k.trace_norms.iter().copied().find(|&n| n > ceiling + 1e-9) {
                violated.push(format!("tr|F*_z| <= d*sqrt(d^4+d^2-1): lhs {n:.12} > rhs {ceiling:.12}"));
            }
        }
    }
    (lines, violated)
}

pub fn run(args: PovmArgs) -> anyhow::Result<Violations> {
    match args.action {
        Action::Build { spec, out } => {
            let (povm, constants) = build(&spec)?;
            emit(out.as_deref(), &povm_to_text(&povm))?;
            let (lines, violated) = report(&spec, &povm, &constants);
            summary(&lines, out.is_none());
            Ok(violated)
        }
        Action::Constants { spec } => {
            let (povm, constants) = build(&spec)?;
            let (lines, violated) = report(&spec, &povm, &constants);
            summary(&lines, false);
            Ok(violated)
        }
    }
}
