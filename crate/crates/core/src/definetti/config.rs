use std::path::PathBuf;

use nalgebra::DVector;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opalg::{tensor_product, DensityOperator, SymmetricLayout, MAX_SYMMETRIZE_COPIES};
use crate::povm::{read_povm, sic_povm, wh_povm, PhaseConvention, Povm};
use crate::random::{random_density, Rng64};
use crate::scalar::C;
use crate::symstate::{build_symmetric, read_state, MultipartiteState, SymmetricSpec, MAX_EXACT_BRANCHES};

pub const CONFIG_VERSION: u32 = 1;
/// Default cap on `d_A · d^{n+2k−1}`.
pub const DEFAULT_DIM_CAP: usize = 4096;

fn one() -> usize {
    1
}

fn default_cap() -> usize {
    DEFAULT_DIM_CAP
}

/// One de Finetti experiment: a state on `H_A ⊗ H^{⊗(n+2k−1)}`, symmetric
/// relative to `H_A`, whose first `n + k` copies are examined by measuring
/// `k` of them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub d: usize,
    #[serde(default = "one")]
    pub d_a: usize,
    pub n: usize,
    pub k: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_cap")]
    pub dim_cap: usize,
    pub povm: PovmChoice,
    pub state: StateConfig,
    #[serde(default)]
    pub mode: ModeConfig,
    #[serde(default)]
    pub tail: TailConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PovmChoice {
    Sic,
    Wh {
        #[serde(default)]
        convention: PhaseConvention,
    },
    File {
        path: PathBuf,
    },
}

/// A single-system state named in a config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NamedState {
    Basis {
        index: usize,
    },
    Mixed,
    /// `Σ_i |i⟩ / √d`.
    Superposition,
    /// Drawn from the config seed.
    Random,
    /// Qubit state `(id + r·σ)/2`.
    Bloch {
        vector: [f64; 3],
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureComponent {
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ancilla: Option<NamedState>,
    pub factor: NamedState,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StateConfig {
    /// `σ_A ⊗ τ^{⊗(n+2k−1)}`; a missing ancilla is maximally mixed.
    Product {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ancilla: Option<NamedState>,
        factor: NamedState,
    },
    /// `Σ_i p_i σ_i ⊗ τ_i^{⊗(n+2k−1)}`.
    Mixture { components: Vec<MixtureComponent> },
    /// Symmetrization of `|a⟩⟨a| ⊗ |pattern⟩⟨pattern|`; the pattern lists one
    /// basis index per copy.
    SymmetrizedBasis {
        #[serde(default)]
        ancilla_index: usize,
        pattern: Vec<usize>,
    },
    /// Symmetrization of a random full-rank state.
    SymmetrizedRandom,
    /// A state file. With `n+2k−1` copies it is the extension and its
    /// symmetry is verified; with `n+k` copies the caller must attest that
    /// it is `(n+2k−1)`-exchangeable, which cannot be checked.
    External {
        path: PathBuf,
        #[serde(default)]
        attest_exchangeable: bool,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModeConfig {
    #[default]
    Exact,
    /// Sequential conditional sampling of `samples` outcome tuples.
    Sampled { samples: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Vec<f64>>,
}

/// `{0, 0.25, …, 4}`.
pub fn default_eps_grid() -> Vec<f64> {
    (0..=16).map(|i| i as f64 * 0.25).collect()
}

impl TailConfig {
    pub fn grid(&self) -> Vec<f64> {
        self.eps.clone().unwrap_or_else(default_eps_grid)
    }
}

/// Random streams derived from the config seed.
pub(crate) mod stream {
    pub const STATE: u64 = 0;
    pub const SAMPLING: u64 = 1;
}

pub(crate) fn seeded(seed: u64, stream: u64) -> Rng64 {
    let mut r = crate::random::rng(seed);
    r.set_stream(stream);
    r
}

impl ExperimentConfig {
    /// Size of the extension, `n + 2k − 1`.
    pub fn extension_copies(&self) -> usize {
        self.n + 2 * self.k - 1
    }

    pub fn extension_dim(&self) -> u128 {
        (self.d_a as u128).saturating_mul((self.d as u128).saturating_pow(self.extension_copies() as u32))
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(Error::Config(format!("unsupported version {} (expected {CONFIG_VERSION})", self.version)));
        }
        if self.d < 2 || self.d_a < 1 || self.n < 1 || self.k < 1 {
            return Err(Error::Config("need d ≥ 2, d_a ≥ 1, n ≥ 1, k ≥ 1".into()));
        }
        if self.extension_dim() > self.dim_cap as u128 {
            return Err(Error::CostGuard {
                what: "extension dimension",
                size: self.extension_dim(),
                cap: self.dim_cap as u128,
            });
        }
        if let ModeConfig::Sampled { samples } = self.mode {
            if samples == 0 {
                return Err(Error::Config("sampled mode needs at least one sample".into()));
            }
        }
        if let Some(eps) = &self.tail.eps {
            if eps.iter().any(|e| !e.is_finite() || *e < 0.0) {
                return Err(Error::Config("eps values must be finite and nonnegative".into()));
            }
        }
        let check_named = |s: &NamedState, dim: usize| -> Result<()> {
            match s {
                NamedState::Basis { index } if *index >= dim => {
                    Err(Error::Config(format!("basis index {index} out of range for dimension {dim}")))
                }
                NamedState::Bloch { vector } if dim != 2 || vector.iter().map(|x| x * x).sum::<f64>() > 1.0 + 1e-12 => {
                    Err(Error::Config("bloch states need dimension 2 and |r| ≤ 1".into()))
                }
                _ => Ok(()),
            }
        };
        let symmetrized = matches!(self.state, StateConfig::SymmetrizedBasis { .. } | StateConfig::SymmetrizedRandom);
        if symmetrized && self.extension_copies() > MAX_SYMMETRIZE_COPIES {
            return Err(Error::CostGuard {
                what: "permutations",
                size: (1..=self.extension_copies() as u128).product(),
                cap: (1..=MAX_SYMMETRIZE_COPIES as u128).product(),
            });
        }
        match &self.state {
            StateConfig::Product { ancilla, factor } => {
                check_named(factor, self.d)?;
                ancilla.as_ref().map_or(Ok(()), |a| check_named(a, self.d_a))?;
            }
            StateConfig::Mixture { components } => {
                if components.is_empty() {
                    return Err(Error::Config("mixture needs at least one component".into()));
                }
                for c in components {
                    if !(c.weight >= 0.0) {
                        return Err(Error::Config(format!("invalid mixture weight {}", c.weight)));
                    }
                    check_named(&c.factor, self.d)?;
                    c.ancilla.as_ref().map_or(Ok(()), |a| check_named(a, self.d_a))?;
                }
                let total: f64 = components.iter().map(|c| c.weight).sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::Config(format!("mixture weights sum to {total}")));
                }
            }
            StateConfig::SymmetrizedBasis { ancilla_index, pattern } => {
                if pattern.len() != self.extension_copies() {
                    return Err(Error::Config(format!(
                        "pattern has {} entries, expected n+2k−1 = {}",
                        pattern.len(),
                        self.extension_copies()
                    )));
                }
                if pattern.iter().any(|&i| i >= self.d) || *ancilla_index >= self.d_a {
                    return Err(Error::Config("pattern index out of range".into()));
                }
            }
            StateConfig::SymmetrizedRandom | StateConfig::External { .. } => {}
        }
        Ok(())
    }

    pub fn build_povm(&self) -> Result<Povm<f64>> {
        let povm = match &self.povm {
            PovmChoice::Sic => sic_povm(self.d)?,
            PovmChoice::Wh { convention } => wh_povm(self.d, *convention)?.povm,
            PovmChoice::File { path } => read_povm(path)?,
        };
        if povm.dim() != self.d {
            return Err(Error::Config(format!("POVM dimension {} does not match d = {}", povm.dim(), self.d)));
        }
        let tuples = (povm.len() as u128).saturating_pow(self.k as u32);
        if matches!(self.mode, ModeConfig::Exact) && tuples > MAX_EXACT_BRANCHES {
            return Err(Error::Config(format!("{tuples} outcome tuples exceed the exact-mode cap; use sampled mode")));
        }
        Ok(povm)
    }

    /// Builds the test state. See [`PreparedState`].
    pub fn build_state(&self) -> Result<PreparedState> {
        self.validate()?;
        let copies = self.extension_copies();
        let mut r = seeded(self.seed, stream::STATE);
        let layout = SymmetricLayout::new(self.d_a, self.d, copies)?;
        let extension = match &self.state {
            StateConfig::Product { ancilla, factor } => {
                let a = named(ancilla.as_ref(), self.d_a, &mut r);
                let f = named(Some(factor), self.d, &mut r);
                build_symmetric(SymmetricSpec::Mixture { terms: vec![(1.0, a, f)], copies })?
            }
            StateConfig::Mixture { components } => {
                let terms = components
                    .iter()
                    .map(|c| {
                        (c.weight, named(c.ancilla.as_ref(), self.d_a, &mut r), named(Some(&c.factor), self.d, &mut r))
                    })
                    .collect();
                build_symmetric(SymmetricSpec::Mixture { terms, copies })?
            }
            StateConfig::SymmetrizedBasis { ancilla_index, pattern } => {
                let idx = pattern.iter().fold(0, |acc, &i| acc * self.d + i);
                let a = DensityOperator::basis_state(self.d_a, *ancilla_index);
                let rest = DensityOperator::basis_state(self.d.pow(copies as u32), idx);
                let state = DensityOperator::new(tensor_product(a.operator(), rest.operator()))?;
                build_symmetric(SymmetricSpec::Symmetrize { state, layout })?
            }
            StateConfig::SymmetrizedRandom => build_symmetric(SymmetricSpec::Symmetrize {
                state: random_density(layout.total_dim(), &mut r),
                layout,
            })?,
            StateConfig::External { path, attest_exchangeable } => {
                let s: MultipartiteState<f64> = read_state(path)?;
                let l = s.layout();
                if l.ancilla != self.d_a || l.factor != self.d {
                    return Err(Error::Config(format!(
                        "state layout {l:?} does not match d_a = {}, d = {}",
                        self.d_a, self.d
                    )));
                }
                if !s.is_symmetric() {
                    return Err(Error::NotSymmetric(s.symmetry_deviation()?));
                }
                if l.copies == copies {
                    return Ok(PreparedState { state: s, has_extension: true, warnings: vec![] });
                }
                if l.copies != self.n + self.k {
                    return Err(Error::Config(format!(
                        "state has {} copies; expected n+k = {} or n+2k−1 = {copies}",
                        l.copies,
                        self.n + self.k
                    )));
                }
                if !attest_exchangeable {
                    return Err(Error::Config(
                        "an external state on n+k copies requires attest_exchangeable = true: its (n+2k−1)-exchangeability cannot be verified".into(),
                    ));
                }
                let has_extension = self.k == 1;
                let mut warnings = vec!["exchangeability of the external state is attested, not verified".to_string()];
                if !has_extension {
                    warnings.push("no symmetric extension available; per-branch chain checks are skipped".into());
                }
                return Ok(PreparedState { state: s, has_extension, warnings });
            }
        };
        Ok(PreparedState { state: extension, has_extension: true, warnings: vec![] })
    }
}

/// The state an experiment runs on. When `has_extension` holds, `state`
/// has `n+2k−1` copies (or `n+k` with `k = 1`, where the two coincide);
/// otherwise it is an attested state on `n+k` copies.
#[derive(Clone, Debug)]
pub struct PreparedState {
    pub state: MultipartiteState<f64>,
    pub has_extension: bool,
    pub warnings: Vec<String>,
}

fn named(s: Option<&NamedState>, dim: usize, r: &mut impl Rng) -> DensityOperator<f64> {
    match s {
        None | Some(NamedState::Mixed) => DensityOperator::maximally_mixed(dim),
        Some(NamedState::Basis { index }) => DensityOperator::basis_state(dim, *index),
        Some(NamedState::Superposition) => {
            DensityOperator::pure(&DVector::from_element(dim, C::new(1.0, 0.0))).expect("nonzero vector")
        }
        Some(NamedState::Random) => random_density(dim, r),
        Some(NamedState::Bloch { vector }) => {
            DensityOperator::new(crate::povm::bloch_projector(*vector)).expect("validated Bloch vector")
        }
    }
}
