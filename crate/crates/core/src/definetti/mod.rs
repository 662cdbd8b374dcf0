//! Product-structure bounds for bipartite and symmetric states, and the
//! finite de Finetti experiments built on them.

mod bipartite;
mod config;
mod experiment;
mod report;

pub use bipartite::{
    dependence_bound_check, last_copy_distance, product_distance, product_structure_bound, split_off_bound,
    DependenceRecord, DependenceReport, ProductStructureReport, SplitOffReport, CHECK_TOL, RANDOM_Y_POVMS,
};
pub use config::{
    default_eps_grid, ExperimentConfig, MixtureComponent, ModeConfig, NamedState, PovmChoice, PreparedState,
    StateConfig, TailConfig, CONFIG_VERSION, DEFAULT_DIM_CAP,
};
pub use experiment::{
    definetti_experiment, definetti_mixture_distance, tail_bound, tail_experiment, Bounds, BranchRecord, ChainRecord,
    Check, DeFinettiReport, Expectations, MixtureReport, PovmSummary, Ratios, StandardErrors, TailReport,
};
pub use report::{report_to_csv, report_to_json, tail_to_csv};
