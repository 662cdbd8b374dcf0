//! The expected-distance functional `DExp(P_Z, q) = E_z[Δ(freq z, q)]` and
//! the estimates relating the frequencies of a sample `z̄` to those of the
//! remaining tuple `z`.
//!
//! Throughout, a tuple distribution over `Z^{n+k}` is read as `z‖z̄` with
//! `z̄` the last `k` coordinates.

use rand::Rng;

use crate::classical::distribution::{Distribution, FrequencyDistribution};
use crate::classical::tuple::TupleDistribution;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Slack below a threshold at which a value still counts as exceeding it.
pub const EXCEEDANCE_SLACK: f64 = 1e-12;

fn counts_of(tuple: &[usize], t: usize) -> Vec<usize> {
    let mut c = vec![0usize; t];
    tuple.iter().for_each(|&s| c[s] += 1);
    c
}

fn freq(tuple: &[usize], t: usize) -> FrequencyDistribution {
    FrequencyDistribution::from_counts(counts_of(tuple, t)).expect("nonempty tuple")
}

fn check_split<R: Real>(p: &TupleDistribution<R>, k: usize) -> Result<()> {
    if k == 0 || k >= p.arity() {
        return Err(Error::Layout(format!("cannot split {} coordinates into n ≥ 1 and k = {k}", p.arity())));
    }
    Ok(())
}

/// `DExp(P_Z, q)` by exact enumeration.
pub fn expected_freq_distance<R: Real>(p: &TupleDistribution<R>, q: &Distribution<R>) -> Result<R> {
    if q.len() != p.alphabet_size() {
        return Err(Error::AlphabetMismatch(q.len(), p.alphabet_size()));
    }
    if p.arity() == 0 {
        return Err(Error::EmptyTuple);
    }
    let mut acc = R::zero();
    for (z, w) in p.iter() {
        if w > R::zero() {
            acc += w * freq(&z, p.alphabet_size()).distance_to(q)?;
        }
    }
    Ok(acc)
}

/// `Δ(freq z̄, freq z‖z̄)` for every tuple in index order.
fn gaps<R: Real>(p: &TupleDistribution<R>, k: usize) -> Result<impl Iterator<Item = (R, f64)> + '_> {
    check_split(p, k)?;
    let t = p.alphabet_size();
    let split = p.arity() - k;
    Ok(p.iter().map(move |(z, w)| {
        let gap = freq(&z[split..], t).distance(&freq(&z, t)).expect("same alphabet");
        (w, gap)
    }))
}

/// `E[Δ(freq z̄, freq z‖z̄)]`.
pub fn frequency_gap_expectation<R: Real>(p: &TupleDistribution<R>, k: usize) -> Result<R> {
    Ok(gaps(p, k)?.fold(R::zero(), |acc, (w, g)| acc + w * R::lit(g)))
}

/// `Pr[Δ(freq z̄, freq z‖z̄) ≥ ε]`.
pub fn frequency_gap_tail<R: Real>(p: &TupleDistribution<R>, k: usize, eps: f64) -> Result<R> {
    Ok(gaps(p, k)?.filter(|&(_, g)| g >= eps - EXCEEDANCE_SLACK).fold(R::zero(), |acc, (w, _)| acc + w))
}

/// Per-sample record of [`conditional_dexp`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRecord<R: Real> {
    pub sample: Vec<usize>,
    pub probability: R,
    /// `DExp(P_{Z|Z̄=z̄}, freq z̄)`.
    pub dexp: R,
}

/// `DExp(P_{Z|Z̄=z̄}, freq z̄)` for every `z̄` of positive probability.
pub fn conditional_dexp<R: Real>(p: &TupleDistribution<R>, k: usize) -> Result<Vec<SampleRecord<R>>> {
    check_split(p, k)?;
    let t = p.alphabet_size();
    let split = p.arity() - k;
    let tail_size = t.pow(k as u32);
    let mut mass = vec![R::zero(); tail_size];
    let mut weighted = vec![R::zero(); tail_size];
    let sample_freqs: Vec<FrequencyDistribution> = (0..tail_size)
        .map(|j| {
            let zbar: Vec<usize> = p.tuple_at(j)[p.arity() - k..].to_vec();
            freq(&zbar, t)
        })
        .collect();
    for (i, &w) in p.weights().iter().enumerate() {
        if w <= R::zero() {
            continue;
        }
        let j = i % tail_size;
        let z = p.tuple_at(i);
        mass[j] += w;
        weighted[j] += w * R::lit(freq(&z[..split], t).distance(&sample_freqs[j])?);
    }
    Ok((0..tail_size)
        .filter(|&j| mass[j] > R::zero())
        .map(|j| SampleRecord {
            sample: p.tuple_at(j)[split..].to_vec(),
            probability: mass[j],
            dexp: weighted[j] / mass[j],
        })
        .collect())
}

/// `E_z̄[DExp(P_{Z|Z̄=z̄}, freq z̄)]`.
pub fn conditional_dexp_expectation<R: Real>(p: &TupleDistribution<R>, k: usize) -> Result<R> {
    Ok(conditional_dexp(p, k)?.iter().fold(R::zero(), |acc, r| acc + r.probability * r.dexp))
}

/// `Pr_z̄[DExp(P_{Z|Z̄=z̄}, freq z̄) ≥ ε]`.
pub fn conditional_dexp_tail<R: Real>(p: &TupleDistribution<R>, k: usize, eps: f64) -> Result<R> {
    Ok(conditional_dexp(p, k)?
        .iter()
        .filter(|r| r.dexp.as_f64() >= eps - EXCEEDANCE_SLACK)
        .fold(R::zero(), |acc, r| acc + r.probability))
}

/// `½ √(t/k)`.
pub fn frequency_gap_bound(t: usize, k: usize) -> f64 {
    0.5 * (t as f64 / k as f64).sqrt()
}

/// `√(t/k)`.
pub fn conditional_dexp_bound(t: usize, k: usize) -> f64 {
    (t as f64 / k as f64).sqrt()
}

/// `t e^{-k ε² / (2t)}`.
pub fn frequency_gap_tail_bound(t: usize, k: usize, eps: f64) -> f64 {
    t as f64 * (-(k as f64) * eps * eps / (2.0 * t as f64)).exp()
}

/// `k e^{-k ε² / (2t) + 1}`.
pub fn conditional_dexp_tail_bound(t: usize, k: usize, eps: f64) -> f64 {
    k as f64 * (-(k as f64) * eps * eps / (2.0 * t as f64) + 1.0).exp()
}

/// A random variable `Y` together with conditionals `P_{Z|Y=y}` over `Z^r`,
/// each of them symmetric.
#[derive(Clone, Debug)]
pub struct SymmetricChannel<R: Real> {
    py: Distribution<R>,
    conditionals: Vec<TupleDistribution<R>>,
}

impl<R: Real> SymmetricChannel<R> {
    pub fn new(py: Distribution<R>, conditionals: Vec<TupleDistribution<R>>) -> Result<Self> {
        if conditionals.len() != py.len() || conditionals.is_empty() {
            return Err(Error::AlphabetMismatch(conditionals.len(), py.len()));
        }
        let (t, r) = (conditionals[0].alphabet_size(), conditionals[0].arity());
        if conditionals.iter().any(|c| c.alphabet_size() != t || c.arity() != r) {
            return Err(Error::InvalidDistribution("conditionals differ in shape".into()));
        }
        if let Some(bad) = conditionals.iter().position(|c| !c.is_symmetric()) {
            return Err(Error::InvalidDistribution(format!("conditional for y = {bad} is not symmetric")));
        }
        Ok(Self { py, conditionals })
    }

    pub fn random(outcomes: usize, t: usize, r: usize, rng: &mut impl Rng) -> Result<Self> {
        let py = Distribution::from_unnormalized((0..outcomes).map(|_| R::lit(rng.gen::<f64>())).collect())?;
        let conditionals =
            (0..outcomes).map(|_| TupleDistribution::random_symmetric(t, r, rng)).collect::<Result<Vec<_>>>()?;
        Self::new(py, conditionals)
    }

    pub fn py(&self) -> &Distribution<R> {
        &self.py
    }

    /// `P_Z = Σ_y P_Y(y) P_{Z|Y=y}`.
    pub fn marginal(&self) -> TupleDistribution<R> {
        let first = &self.conditionals[0];
        let mut weights = vec![R::zero(); first.weights().len()];
        for (y, c) in self.conditionals.iter().enumerate() {
            let py = self.py.get(y);
            weights.iter_mut().zip(c.weights()).for_each(|(a, &w)| *a += py * w);
        }
        TupleDistribution::normalized(first.alphabet_size(), first.arity(), weights).expect("mixture of distributions")
    }

    /// `P_{Y Z_i}` indexed by `y t + z`.
    pub fn joint_with_coordinate(&self, i: usize) -> Result<Distribution<R>> {
        let mut weights = Vec::new();
        for (y, c) in self.conditionals.iter().enumerate() {
            let m = c.single_marginal(i)?;
            weights.extend(m.weights().iter().map(|&w| self.py.get(y) * w));
        }
        Distribution::from_unnormalized(weights)
    }

    /// `P_Y × q`, indexed like [`Self::joint_with_coordinate`].
    pub fn product_with(&self, q: &Distribution<R>) -> Distribution<R> {
        self.py.product(q)
    }
}
