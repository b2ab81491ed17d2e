//! Number of `n x n` matrices over `F_q` of each rank.
//!
//! rank r: `(prod_{i<r} (q^n - q^i))^2 / prod_{i<r} (q^r - q^i)`.

use crate::error::{Error, Result};
use crate::field::is_prime;
use num_bigint::BigUint;
use num_traits::{One, Zero};

pub const MAX_FISHER_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    pub q: u64,
    pub n: usize,
    /// `counts[r]` = number of matrices of rank exactly `r`.
    pub counts: Vec<BigUint>,
}

impl RankProfile {
    /// Number of matrices of rank at most `k`.
    pub fn at_most(&self, k: usize) -> BigUint {
        self.counts.iter().take(k + 1).sum()
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

pub fn fisher_rank_counts(q: u64, n: usize) -> Result<RankProfile> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if n == 0 || n > MAX_FISHER_DIM {
        return Err(Error::OutOfRange(format!("n = {n} (supported 1..=8)")));
    }
    let qb = BigUint::from(q);
    let pow = |e: usize| qb.pow(e as u32);
    let counts: Vec<BigUint> = (0..=n)
        .map(|r| {
            let mut num = BigUint::one();
            let mut den = BigUint::one();
            for i in 0..r {
                num *= pow(n) - pow(i);
                den *= pow(r) - pow(i);
            }
            let num = &num * &num;
            debug_assert!((&num % &den).is_zero());
            num / den
        })
        .collect();
    let profile = RankProfile { q, n, counts };
    if profile.total() != pow(n * n) {
        return Err(Error::Invariant("rank counts do not sum to q^(n^2)".into()));
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::mat::{rank_mod_p, Mat};

    fn exhaustive(q: u64, n: usize) -> Vec<u64> {
        let f = PrimeField::new(q).unwrap();
        let mut counts = vec![0u64; n + 1];
        let total = q.pow((n * n) as u32);
        for mut idx in 0..total {
            let mut v = vec![0i128; n * n];
            for e in v.iter_mut() {
                *e = (idx % q) as i128;
                idx /= q;
            }
            counts[rank_mod_p(&Mat::new(n, &v).unwrap(), &f)] += 1;
        }
        counts
    }

    fn as_u64(p: &RankProfile) -> Vec<u64> {
        p.counts.iter().map(|c| c.to_u64_digits().first().copied().unwrap_or(0)).collect()
    }

    #[test]
    fn f2_two_by_two() {
        let p = fisher_rank_counts(2, 2).unwrap();
        assert_eq!(as_u64(&p), vec![1, 9, 6]);
        assert_eq!(p.at_most(1), BigUint::from(10u32));
    }

    #[test]
    fn matches_enumeration() {
        for (q, n) in [(2, 2), (3, 2), (2, 3), (5, 2), (7, 1)] {
            let p = fisher_rank_counts(q, n).unwrap();
            assert_eq!(as_u64(&p), exhaustive(q, n), "q={q} n={n}");
        }
    }

    #[test]
    fn general_linear_group_order() {
        for q in [2u64, 3, 5, 101] {
            for n in 1..=4 {
                let p = fisher_rank_counts(q, n).unwrap();
                let mut gl = BigUint::one();
                for i in 0..n {
                    gl *= BigUint::from(q).pow(n as u32) - BigUint::from(q).pow(i as u32);
                }
                assert_eq!(p.counts[n], gl);
                assert!(p.counts[0].is_one());
            }
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(fisher_rank_counts(4, 2), Err(Error::NotPrime(4))));
        assert!(fisher_rank_counts(2, 9).is_err());
        assert!(fisher_rank_counts(2, 8).is_ok());
    }
}
