use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::povm::family::{validate_povm, Povm};
use crate::scalar::Real;
use crate::textio::{write_matrix, Lines};

/// Serializes a POVM:
///
/// ```text
/// povm
/// dim 2
/// outcomes 4
/// element 0
/// 0.5,0 0,0
/// 0,0 0,0
/// element 1
/// …
/// ```
pub fn povm_to_text<R: Real>(povm: &Povm<R>) -> String {
    let mut out = String::new();
    writeln!(out, "povm\ndim {}\noutcomes {}", povm.dim(), povm.len()).unwrap();
    for (label, f) in povm.labels().iter().zip(povm.elements()) {
        writeln!(out, "element {label}").unwrap();
        write_matrix(&mut out, f.matrix());
    }
    out
}

/// Parses and validates a POVM written by [`povm_to_text`].
pub fn povm_from_text<R: Real>(text: &str) -> Result<Povm<R>> {
    let mut lines = Lines::new(text);
    let head = lines.expect("`povm` header")?;
    if head != "povm" {
        return Err(lines.error(format!("expected `povm`, found `{head}`")));
    }
    let dim = lines.keyed_usize("dim")?;
    let outcomes = lines.keyed_usize("outcomes")?;
    let mut labels = Vec::with_capacity(outcomes);
    let mut elements = Vec::with_capacity(outcomes);
    for _ in 0..outcomes {
        let label = lines.keyed("element")?;
        if label.contains(char::is_whitespace) {
            return Err(lines.error("labels may not contain whitespace"));
        }
        labels.push(label.to_string());
        elements.push(lines.matrix(dim)?);
    }
    if lines.next_content().is_some() {
        return Err(lines.error("trailing content"));
    }
    validate_povm(labels, elements)
}

pub fn read_povm<R: Real>(path: &Path) -> Result<Povm<R>> {
    povm_from_text(&std::fs::read_to_string(path)?)
}

pub fn write_povm<R: Real>(path: &Path, povm: &Povm<R>) -> Result<()> {
    Ok(std::fs::write(path, povm_to_text(povm))?)
}
