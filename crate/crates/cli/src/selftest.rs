use std::path::PathBuf;

use clap::{Args, ValueEnum};
use finetti::acceptance::{run_all, AcceptanceOptions};
use serde_json::json;

use crate::Violations;

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Use this file in place of the built-in qubit SIC-POVM.
    #[arg(long)]
    sic_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

pub fn run(args: SelftestArgs) -> anyhow::Result<Violations> {
    let results = run_all(&AcceptanceOptions { sic_file: args.sic_file });
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
    match args.format {
        Format::Text => {
            for r in &results {
                println!("{}", r.line());
            }
            println!("selftest: {} passed, {} failed", results.len() - failed.len(), failed.len());
        }
        Format::Json => {
            let doc = json!({
                "passed": failed.is_empty(),
                "total": results.len(),
                "failed": failed.iter().map(|r| r.id).collect::<Vec<_>>(),
                "criteria": results,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
    }
    Ok(failed.iter().map(|r| format!("criterion {} {}", r.id, r.name)).collect())
}
