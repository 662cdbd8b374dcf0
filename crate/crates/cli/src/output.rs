use std::io::Write;
use std::path::Path;

use anyhow::Context;

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

/// Prints summary lines to stdout, or to stderr when stdout carries data.
pub fn summary(lines: &[String], stdout_is_data: bool) {
    for l in lines {
        if stdout_is_data {
            eprintln!("{l}");
        } else {
            println!("{l}");
        }
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "inf".to_string(), |v| format!("{v:.12}"))
}
