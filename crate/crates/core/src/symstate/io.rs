use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::opalg::{DensityOperator, SymmetricLayout};
use crate::scalar::Real;
use crate::symstate::state::MultipartiteState;
use crate::textio::{write_matrix, Lines};

/// Serializes a state with its layout:
///
/// ```text
/// state
/// ancilla 1
/// factor 2
/// copies 2
/// <4 rows of `re,im` entries>
/// ```
pub fn state_to_text<R: Real>(state: &MultipartiteState<R>) -> String {
    let l = state.layout();
    let mut out = String::new();
    writeln!(out, "state\nancilla {}\nfactor {}\ncopies {}", l.ancilla, l.factor, l.copies).unwrap();
    write_matrix(&mut out, state.operator().matrix());
    out
}

/// Parses a state and validates it as a density operator. Symmetry is
/// checked and recorded in the flag but not required.
pub fn state_from_text<R: Real>(text: &str) -> Result<MultipartiteState<R>> {
    let mut lines = Lines::new(text);
    let head = lines.expect("`state` header")?;
    if head != "state" {
        return Err(lines.error(format!("expected `state`, found `{head}`")));
    }
    let ancilla = lines.keyed_usize("ancilla")?;
    let factor = lines.keyed_usize("factor")?;
    let copies = lines.keyed_usize("copies")?;
    let layout = SymmetricLayout::new(ancilla, factor, copies)?;
    let m = lines.matrix(layout.total_dim())?;
    if lines.next_content().is_some() {
        return Err(lines.error("trailing content"));
    }
    MultipartiteState::new(DensityOperator::from_matrix(m)?, layout)?.verify_symmetry()
}

pub fn read_state<R: Real>(path: &Path) -> Result<MultipartiteState<R>> {
    state_from_text(&std::fs::read_to_string(path)?)
}

pub fn write_state<R: Real>(path: &Path, state: &MultipartiteState<R>) -> Result<()> {
    Ok(std::fs::write(path, state_to_text(state))?)
}
