//! Finite distributions, frequency statistics and the sampling estimates
//! built on them.

mod bounds;
mod distribution;
mod hypergeom;
mod tuple;

pub use bounds::{
    conditional_dexp, conditional_dexp_bound, conditional_dexp_expectation, conditional_dexp_tail,
    conditional_dexp_tail_bound, expected_freq_distance, frequency_gap_bound, frequency_gap_expectation,
    frequency_gap_tail, frequency_gap_tail_bound, SampleRecord, SymmetricChannel, EXCEEDANCE_SLACK,
};
pub use distribution::{
    frequency_of, subsequence_bound_rhs, variational_distance, Distribution, FrequencyDistribution, NORMALIZATION_TOL,
};
pub use hypergeom::{binomial, HypergeometricParams};
pub use tuple::{all_tuples, TupleDistribution, DEFAULT_ENUMERATION_CAP};
