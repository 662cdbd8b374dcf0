//! POVMs, dual families and the two informationally complete constructions
//! (the qubit SIC-POVM and the Weyl–Heisenberg covariant POVM).

mod dual;
mod family;
mod io;
mod sic;
mod weyl;

pub(crate) use dual::linear_combination;
pub use dual::{
    compute_dual, general_c1_ceiling, general_c2_ceiling, hermitian_basis, povm_constants, sic_c1, sic_c2, DualFamily,
    PovmConstants, MAX_CONDITION, RECONSTRUCTION_TOL,
};
pub use family::{helstrom_povm, measure, validate_povm, Povm, POVM_TOL, RANK_TOL};
pub use io::{povm_from_text, povm_to_text, read_povm, write_povm};
pub use sic::{bloch_projector, sic_overlap, sic_povm, tetrahedron};
pub use weyl::{
    symplectic, theta_trace_norm_ceiling, wh_fiducial_state, wh_povm, DisplacementSet, PhaseConvention, Point, WhPovm,
    WEYL_TOL,
};
