use itertools::Itertools;
use rand::Rng;

use crate::classical::distribution::{Distribution, FrequencyDistribution, NORMALIZATION_TOL};
use crate::error::{Error, Result};
use crate::opalg::Permutation;
use crate::scalar::Real;

/// Default bound on `t^n` for dense tables.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

/// Dense distribution over `Z^n` with `|Z| = t`. Tuples are indexed in
/// mixed radix with the first coordinate most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct TupleDistribution<R: Real> {
    t: usize,
    n: usize,
    weights: Vec<R>,
}

pub(crate) fn table_size(t: usize, n: usize, cap: u128) -> Result<usize> {
    let size = (t as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::CostGuard { what: "tuple table", size, cap });
    }
    Ok(size as usize)
}

/// Iterates over all `t^n` tuples in index order.
pub fn all_tuples(t: usize, n: usize) -> Box<dyn Iterator<Item = Vec<usize>>> {
    if n == 0 {
        return Box::new(std::iter::once(Vec::new()));
    }
    Box::new((0..n).map(|_| 0..t).multi_cartesian_product())
}

impl<R: Real> TupleDistribution<R> {
    pub fn new(t: usize, n: usize, weights: Vec<R>) -> Result<Self> {
        Self::with_cap(t, n, weights, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(t: usize, n: usize, weights: Vec<R>, cap: u128) -> Result<Self> {
        let size = table_size(t, n, cap)?;
        if weights.len() != size {
            return Err(Error::InvalidDistribution(format!("{} weights for {size} tuples", weights.len())));
        }
        // reuse the single-alphabet validation
        let d = Distribution::new(weights)?;
        Ok(Self { t, n, weights: d.weights().to_vec() })
    }

    pub(crate) fn normalized(t: usize, n: usize, weights: Vec<R>) -> Result<Self> {
        let d = Distribution::from_unnormalized(weights)?;
        Self::new(t, n, d.weights().to_vec())
    }

    /// `p^{×n}`.
    pub fn product(p: &Distribution<R>, n: usize) -> Result<Self> {
        let t = p.len();
        table_size(t, n, DEFAULT_ENUMERATION_CAP)?;
        let weights = all_tuples(t, n).map(|z| z.iter().fold(R::one(), |acc, &s| acc * p.get(s))).collect();
        Ok(Self { t, n, weights })
    }

    /// Uniform distribution over all tuples with the given symbol counts;
    /// these are the extreme points of the symmetric distributions.
    pub fn uniform_type_class(counts: &[usize]) -> Result<Self> {
        let t = counts.len();
        let n: usize = counts.iter().sum();
        let size = table_size(t, n, DEFAULT_ENUMERATION_CAP)?;
        let mut weights = vec![R::zero(); size];
        let mut members = 0usize;
        for (i, z) in all_tuples(t, n).enumerate() {
            let mut c = vec![0usize; t];
            z.iter().for_each(|&s| c[s] += 1);
            if c == counts {
                weights[i] = R::one();
                members += 1;
            }
        }
        let inv = R::one() / R::count(members);
        weights.iter_mut().for_each(|w| *w *= inv);
        Self::new(t, n, weights)
    }

    /// I.i.d. uniform weights, renormalized (not symmetric in general).
    pub fn random(t: usize, n: usize, rng: &mut impl Rng) -> Result<Self> {
        let size = table_size(t, n, DEFAULT_ENUMERATION_CAP)?;
        let weights = (0..size).map(|_| R::lit(rng.gen::<f64>())).collect();
        Self::normalized(t, n, weights)
    }

    /// Random symmetric distribution: i.i.d. uniform weights averaged over
    /// all coordinate permutations, then renormalized.
    pub fn random_symmetric(t: usize, n: usize, rng: &mut impl Rng) -> Result<Self> {
        Ok(Self::random(t, n, rng)?.symmetrized())
    }

    pub fn alphabet_size(&self) -> usize {
        self.t
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[R] {
        &self.weights
    }

    pub fn weight(&self, tuple: &[usize]) -> R {
        self.weights[self.index_of(tuple)]
    }

    pub fn index_of(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &s| acc * self.t + s)
    }

    pub fn tuple_at(&self, mut index: usize) -> Vec<usize> {
        let mut z = vec![0; self.n];
        for p in (0..self.n).rev() {
            z[p] = index % self.t;
            index /= self.t;
        }
        z
    }

    /// `(tuple, weight)` pairs in index order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, R)> + '_ {
        self.weights.iter().enumerate().map(move |(i, &w)| (self.tuple_at(i), w))
    }

    pub fn to_distribution(&self) -> Distribution<R> {
        Distribution::new(self.weights.clone()).expect("normalized table")
    }

    /// `(1/n!) Σ_π p ∘ π_Z`.
    pub fn symmetrized(&self) -> Self {
        let mut acc = vec![R::zero(); self.weights.len()];
        let mut count = 0usize;
        for perm in Permutation::all(self.n) {
            for (i, &w) in self.weights.iter().enumerate() {
                let z = self.tuple_at(i);
                let moved: Vec<usize> = (0..self.n).map(|p| z[perm.apply(p)]).collect();
                acc[self.index_of(&moved)] += w;
            }
            count += 1;
        }
        let inv = R::one() / R::count(count);
        let weights: Vec<R> = acc.into_iter().map(|w| w * inv).collect();
        Self::normalized(self.t, self.n, weights).expect("symmetrization preserves normalization")
    }

    /// True iff the weights are invariant under every coordinate
    /// permutation within `1e-12`; equivalently each weight equals the
    /// weight of its sorted tuple.
    pub fn is_symmetric(&self) -> bool {
        let tol = R::tol(NORMALIZATION_TOL);
        self.iter().all(|(mut z, w)| {
            z.sort_unstable();
            (self.weight(&z) - w).abs() <= tol
        })
    }

    /// Marginal on the listed coordinates, in the listed order.
    pub fn marginal(&self, coords: &[usize]) -> Result<Self> {
        if coords.iter().any(|&c| c >= self.n) || coords.iter().duplicates().next().is_some() {
            return Err(Error::Layout(format!("invalid coordinates {coords:?} for arity {}", self.n)));
        }
        let size = table_size(self.t, coords.len(), DEFAULT_ENUMERATION_CAP)?;
        let mut weights = vec![R::zero(); size];
        for (z, w) in self.iter() {
            let idx = coords.iter().fold(0, |acc, &c| acc * self.t + z[c]);
            weights[idx] += w;
        }
        Ok(Self { t: self.t, n: coords.len(), weights })
    }

    pub fn single_marginal(&self, coord: usize) -> Result<Distribution<R>> {
        Ok(self.marginal(&[coord])?.to_distribution())
    }

    /// Conditional distribution given an event on the full tuple, same arity.
    pub fn condition_on_event(&self, event: impl Fn(&[usize]) -> bool) -> Result<Self> {
        let weights: Vec<R> = self.iter().map(|(z, w)| if event(&z) { w } else { R::zero() }).collect();
        let total = weights.iter().fold(R::zero(), |a, &w| a + w);
        if total <= R::zero() {
            return Err(Error::ZeroProbability);
        }
        Self::normalized(self.t, self.n, weights)
    }

    /// `P_{Z | freq(Z) = q}`.
    pub fn condition_on_frequency(&self, freq: &FrequencyDistribution) -> Result<Self> {
        if freq.sample_size() != self.n || freq.alphabet_size() != self.t {
            return Err(Error::AlphabetMismatch(freq.alphabet_size(), self.t));
        }
        let target = freq.counts().to_vec();
        self.condition_on_event(|z| {
            let mut c = vec![0usize; target.len()];
            z.iter().for_each(|&s| c[s] += 1);
            c == target
        })
    }

    /// Distribution of the remaining coordinates given fixed values of
    /// `fixed` coordinates.
    pub fn condition_on_coordinates(&self, fixed: &[(usize, usize)]) -> Result<Self> {
        let coords: Vec<usize> = fixed.iter().map(|&(c, _)| c).collect();
        if coords.iter().any(|&c| c >= self.n) || coords.iter().duplicates().next().is_some() {
            return Err(Error::Layout(format!("invalid coordinates {coords:?} for arity {}", self.n)));
        }
        let cond = self.condition_on_event(|z| fixed.iter().all(|&(c, v)| z[c] == v))?;
        let rest: Vec<usize> = (0..self.n).filter(|c| !coords.contains(c)).collect();
        cond.marginal(&rest)
    }
}
