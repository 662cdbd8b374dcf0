//! Multipartite states that are symmetric relative to an ancilla,
//! conditioning on measurement outcomes and tomographic reconstruction.

mod conditioning;
mod io;
mod state;
mod tomography;

pub use conditioning::{
    all_branches, condition_on_labels, condition_on_outcomes, measurement_statistics, ConditionalBranch,
    MAX_EXACT_BRANCHES, ZERO_PROBABILITY_TOL,
};
pub use io::{read_state, state_from_text, state_to_text, write_state};
pub use state::{
    build_symmetric, symmetry_test_permutations, MultipartiteState, SymmetricSpec, EXHAUSTIVE_SYMMETRY_COPIES,
    RANDOM_TRANSPOSITIONS, SYMMETRY_TOL,
};
pub use tomography::{bipartite_reconstruct, reconstruction_error_bound, tomographic_reconstruct};
