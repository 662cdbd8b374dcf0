use crate::error::{Error, Result};
use crate::scalar::Real;

/// Normalization tolerance for distributions.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Probability distribution on the alphabet `{0, …, t-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<R: Real> {
    weights: Vec<R>,
}

impl<R: Real> Distribution<R> {
    /// Weights in `[-1e-12, 0)` are clipped to zero; the sum must be 1
    /// within `1e-12`.
    pub fn new(weights: Vec<R>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("empty alphabet".into()));
        }
        let tol = R::tol(NORMALIZATION_TOL);
        let mut weights = weights;
        for w in weights.iter_mut() {
            if !w.is_finite() || *w < -tol {
                return Err(Error::InvalidDistribution(format!("weight {w} out of range")));
            }
            if *w < R::zero() {
                *w = R::zero();
            }
        }
        let sum = weights.iter().fold(R::zero(), |a, &w| a + w);
        if (sum - R::one()).abs() > tol {
            return Err(Error::InvalidDistribution(format!("weights sum to {sum}")));
        }
        Ok(Self { weights })
    }

    /// Normalizes arbitrary nonnegative weights.
    pub fn from_unnormalized(weights: Vec<R>) -> Result<Self> {
        let sum = weights.iter().fold(R::zero(), |a, &w| a + w);
        if sum <= R::zero() {
            return Err(Error::ZeroProbability);
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn point_mass(t: usize, at: usize) -> Self {
        let mut weights = vec![R::zero(); t];
        weights[at] = R::one();
        Self { weights }
    }

    pub fn uniform(t: usize) -> Self {
        Self { weights: vec![R::one() / R::count(t); t] }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[R] {
        &self.weights
    }

    pub fn get(&self, z: usize) -> R {
        self.weights[z]
    }

    /// Joint distribution `self × other`, first symbol most significant.
    pub fn product(&self, other: &Self) -> Self {
        let weights = self.weights.iter().flat_map(|&a| other.weights.iter().map(move |&b| a * b)).collect();
        Self { weights }
    }
}

/// `½ Σ_z |p(z) − q(z)|`.
pub fn variational_distance<R: Real>(p: &Distribution<R>, q: &Distribution<R>) -> Result<R> {
    if p.len() != q.len() {
        return Err(Error::AlphabetMismatch(p.len(), q.len()));
    }
    Ok(half_l1(p.weights(), q.weights()))
}

pub(crate) fn half_l1<R: Real>(p: &[R], q: &[R]) -> R {
    p.iter().zip(q).fold(R::zero(), |acc, (&a, &b)| acc + (a - b).abs()) * R::lit(0.5)
}

/// Empirical distribution of a tuple, kept as integer counts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FrequencyDistribution {
    counts: Vec<usize>,
    n: usize,
}

impl FrequencyDistribution {
    pub fn from_counts(counts: Vec<usize>) -> Result<Self> {
        let n = counts.iter().sum();
        if n == 0 {
            return Err(Error::EmptyTuple);
        }
        Ok(Self { counts, n })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Length of the tuple the frequencies were taken from.
    pub fn sample_size(&self) -> usize {
        self.n
    }

    pub fn alphabet_size(&self) -> usize {
        self.counts.len()
    }

    pub fn distribution<R: Real>(&self) -> Distribution<R> {
        let n = R::count(self.n);
        Distribution { weights: self.counts.iter().map(|&c| R::count(c) / n).collect() }
    }

    /// Variational distance between two frequency distributions, computed
    /// from the integer counts as `Σ|k·a_z − n·b_z| / (2nk)`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.counts.len() != other.counts.len() {
            return Err(Error::AlphabetMismatch(self.counts.len(), other.counts.len()));
        }
        let (n, k) = (self.n as i64, other.n as i64);
        let num: i64 = self.counts.iter().zip(&other.counts).map(|(&a, &b)| (k * a as i64 - n * b as i64).abs()).sum();
        Ok(num as f64 / (2 * n * k) as f64)
    }

    pub fn distance_to<R: Real>(&self, q: &Distribution<R>) -> Result<R> {
        variational_distance(&self.distribution(), q)
    }
}

/// `freq(z)(a) = |{i : z_i = a}| / n` over the alphabet `{0, …, t-1}`.
pub fn frequency_of(tuple: &[usize], t: usize) -> Result<FrequencyDistribution> {
    if tuple.is_empty() {
        return Err(Error::EmptyTuple);
    }
    let mut counts = vec![0usize; t];
    for &z in tuple {
        if z >= t {
            return Err(Error::AlphabetMismatch(z + 1, t));
        }
        counts[z] += 1;
    }
    FrequencyDistribution::from_counts(counts)
}

/// Right-hand side `((n+k)/n)·Δ(freq z̄, freq(z‖z̄))` of the subsequence
/// estimate `Δ(freq z, freq z̄) ≤ rhs`.
pub fn subsequence_bound_rhs(z: &[usize], zbar: &[usize], t: usize) -> Result<f64> {
    let joined: Vec<usize> = z.iter().chain(zbar).copied().collect();
    let fz = frequency_of(zbar, t)?;
    let fj = frequency_of(&joined, t)?;
    if z.is_empty() {
        return Err(Error::EmptyTuple);
    }
    let (n, k) = (z.len() as f64, zbar.len() as f64);
    Ok((n + k) / n * fz.distance(&fj)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_basics() {
        let p = Distribution::<f64>::new(vec![1.0, 0.0]).unwrap();
        let q = Distribution::<f64>::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(variational_distance(&p, &p).unwrap(), 0.0);
        assert_eq!(variational_distance(&p, &q).unwrap(), 0.5);
        let r = Distribution::<f64>::uniform(3);
        assert!(matches!(variational_distance(&p, &r), Err(Error::AlphabetMismatch(2, 3))));
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(Distribution::<f64>::new(vec![0.5, 0.4]).is_err());
        assert!(Distribution::<f64>::new(vec![1.5, -0.5]).is_err());
        assert!(Distribution::<f64>::new(vec![]).is_err());
        // tiny negative weights are clipped
        let d = Distribution::<f64>::new(vec![1.0, -1e-15]).unwrap();
        assert_eq!(d.get(1), 0.0);
    }

    #[test]
    fn frequencies_count_symbols() {
        let f = frequency_of(&[0, 1, 0, 0], 2).unwrap();
        assert_eq!(f.distribution::<f64>().weights(), &[0.75, 0.25]);
        let f = frequency_of(&[0, 0], 2).unwrap();
        assert_eq!(f.distribution::<f64>(), Distribution::point_mass(2, 0));
        assert!(matches!(frequency_of(&[], 2), Err(Error::EmptyTuple)));
    }

    #[test]
    fn subsequence_rhs_hand_values() {
        // z=(a), z̄=(b): lhs 1, rhs 2·Δ(δ_b, (½,½)) = 1
        let rhs = subsequence_bound_rhs(&[0], &[1], 2).unwrap();
        assert_eq!(rhs, 1.0);
        let lhs = frequency_of(&[0], 2).unwrap().distance(&frequency_of(&[1], 2).unwrap()).unwrap();
        assert_eq!(lhs, 1.0);
        // identical tuples: both sides vanish
        assert_eq!(subsequence_bound_rhs(&[0, 1], &[0, 1], 2).unwrap(), 0.0);
    }
}
