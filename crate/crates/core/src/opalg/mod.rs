//! Dense complex operator algebra: hermitian and density operators, tensor
//! structure, spectra and the trace distance.

mod layout;
mod operator;
mod permutation;
mod spectral;

pub(crate) use layout::{apply_and_trace, contract_factor};
pub use layout::{partial_trace, tensor_all, tensor_power, tensor_product, SubsystemLayout, SymmetricLayout};
pub use operator::{DensityOperator, HermitianOperator, DENSITY_TOL, HERMITIAN_TOL};
pub use permutation::{
    conjugate_by_permutation, permutation_operator, symmetrize, symmetry_deviation, Permutation, MAX_SYMMETRIZE_COPIES,
};
pub use spectral::{apply_spectral, eig_hermitian, nonnegative_projector, trace_distance, trace_norm, Eigen};
