use rand::Rng;

use crate::classical::distribution::Distribution;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Draw `k` of `n` elements without replacement, `m` of which are marked;
/// `S` counts the marked elements drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypergeometricParams {
    n: u64,
    m: u64,
    k: u64,
}

/// Exact `C(n, r)`, or `None` on overflow.
pub fn binomial(n: u64, r: u64) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

impl HypergeometricParams {
    pub fn new(n: u64, m: u64, k: u64) -> Result<Self> {
        if m > n || k > n {
            return Err(Error::InvalidHypergeometric { n, m, k });
        }
        Ok(Self { n, m, k })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// `k m / n`.
    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.k * self.m) as f64 / self.n as f64
        }
    }

    /// `C(m,s) C(n-m,k-s) / C(n,k)` over `s = 0..=k`, from exact integer counts.
    pub fn pmf<R: Real>(&self) -> Result<Distribution<R>> {
        let overflow = || Error::CostGuard { what: "binomial coefficient", size: u128::MAX, cap: u128::MAX };
        let total = binomial(self.n, self.k).ok_or_else(overflow)?;
        let mut weights = Vec::with_capacity(self.k as usize + 1);
        for s in 0..=self.k {
            let a = binomial(self.m, s).ok_or_else(overflow)?;
            let b = if self.k - s <= self.n - self.m {
                binomial(self.n - self.m, self.k - s).ok_or_else(overflow)?
            } else {
                0
            };
            let ways = a.checked_mul(b).ok_or_else(overflow)?;
            weights.push(R::lit(ways as f64 / total as f64));
        }
        Distribution::new(weights)
    }

    /// `Pr[S ≤ x]`, with outcomes within `1e-12` of `x` counted as included.
    pub fn lower_tail(&self, x: f64) -> Result<f64> {
        let pmf = self.pmf::<f64>()?;
        Ok(pmf.weights().iter().enumerate().filter(|(s, _)| *s as f64 <= x + 1e-12).map(|(_, w)| w).sum())
    }

    /// `exp(-ℓ² n / (2 k m))`, the Hoeffding bound on `Pr[S ≤ k m / n − ℓ]`.
    pub fn hoeffding_tail_bound(&self, ell: f64) -> f64 {
        if ell <= 0.0 {
            return 1.0;
        }
        if self.k == 0 || self.m == 0 {
            // S is identically 0, so the event S ≤ -ℓ is empty
            return 0.0;
        }
        (-ell * ell * self.n as f64 / (2.0 * (self.k * self.m) as f64)).exp()
    }

    /// One draw of `S` by sampling a uniform `k`-subset of `[n]`.
    pub fn sample(&self, rng: &mut impl Rng) -> u64 {
        rand::seq::index::sample(rng, self.n as usize, self.k as usize).iter().filter(|&i| (i as u64) < self.m).count()
            as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), Some(6));
        assert_eq!(binomial(60, 30), Some(118_264_581_564_861_424));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(0, 0), Some(1));
    }

    #[test]
    fn hyp_4_2_2() {
        let p = HypergeometricParams::new(4, 2, 2).unwrap().pmf::<f64>().unwrap();
        let expected = [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0];
        for (w, e) in p.weights().iter().zip(expected) {
            assert!((w - e).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_markings() {
        let all = HypergeometricParams::new(7, 7, 3).unwrap().pmf::<f64>().unwrap();
        assert_eq!(all.get(3), 1.0);
        let none = HypergeometricParams::new(7, 0, 3).unwrap().pmf::<f64>().unwrap();
        assert_eq!(none.get(0), 1.0);
    }

    #[test]
    fn invalid_params() {
        assert!(HypergeometricParams::new(3, 4, 1).is_err());
        assert!(HypergeometricParams::new(3, 1, 4).is_err());
    }

    #[test]
    fn tail_example() {
        let h = HypergeometricParams::new(4, 2, 2).unwrap();
        let x = h.mean() - 1.0;
        assert!((h.lower_tail(x).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!((h.hoeffding_tail_bound(1.0) - (-0.5f64).exp()).abs() < 1e-15);
        assert_eq!(h.hoeffding_tail_bound(0.0), 1.0);
    }

    #[test]
    fn sampler_mean() {
        let h = HypergeometricParams::new(10, 4, 5).unwrap();
        let mut r = rng(1);
        let draws = 20_000;
        let total: u64 = (0..draws).map(|_| h.sample(&mut r)).sum();
        assert!((total as f64 / draws as f64 - 2.0).abs() < 0.05);
    }
}
