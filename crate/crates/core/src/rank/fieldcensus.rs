//! Exhaustive product sets of rank-bounded matrices over small prime fields.
//!
//! Every `n x n` matrix over `F_q` is indexed by its base-`q` digits (entry
//! `(0,0)` most significant). Product sets are bitsets over those indices,
//! built one factor at a time and merged across workers by bitwise OR.

use super::fisher::fisher_rank_counts;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::mat::{rank_mod_p, Mat};
use crate::par;
use num_traits::ToPrimitive;
use serde::Serialize;

/// Upper limit on `q^(n^2)`.
pub const FIELD_GUARD: u64 = 1 << 20;
const MAX_FACTORS: usize = 4;
const MAX_WORK: u128 = 1 << 34;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldCensusReport {
    pub q: u64,
    pub n: usize,
    /// Rank caps, one per factor.
    pub ks: Vec<usize>,
    /// Size of `{A_1 ... A_m : rank A_i <= k_i}`.
    pub cardinality: u64,
    /// Number of matrices of rank at most `min(ks)`, from the rank-count formula.
    pub expected: u64,
    /// Set equality with `{C : rank C <= min(ks)}` and matching cardinality.
    pub pass: bool,
}

struct Universe {
    q: u64,
    n: usize,
    entries: Vec<Vec<u32>>,
    ranks: Vec<u8>,
}

impl Universe {
    fn new(q: u64, n: usize) -> Result<Self> {
        let field = PrimeField::new(q)?;
        if n == 0 || n > 3 {
            return Err(Error::OutOfRange(format!("n = {n} (supported 1..=3)")));
        }
        let size = q
            .checked_pow((n * n) as u32)
            .filter(|&s| s <= FIELD_GUARD)
            .ok_or(Error::GuardTripped {
                what: "field census q^(n^2)",
                needed: (q as u128).saturating_pow((n * n) as u32),
                limit: FIELD_GUARD as u128,
            })?;
        let decoded = par::map_collect(size as usize, |idx| {
            let mut rest = idx as u64;
            let mut digits = vec![0u32; n * n];
            for d in digits.iter_mut().rev() {
                *d = (rest % q) as u32;
                rest /= q;
            }
            let vals: Vec<i128> = digits.iter().map(|&d| d as i128).collect();
            let rank = Mat::new(n, &vals).map(|m| rank_mod_p(&m, &field) as u8);
            (digits, rank)
        });
        let mut entries = Vec::with_capacity(size as usize);
        let mut ranks = Vec::with_capacity(size as usize);
        for (d, r) in decoded {
            entries.push(d);
            ranks.push(r?);
        }
        Ok(Universe {
            q,
            n,
            entries,
            ranks,
        })
    }

    fn size(&self) -> usize {
        self.entries.len()
    }

    fn product(&self, x: usize, y: usize) -> usize {
        let (a, b, n, q) = (&self.entries[x], &self.entries[y], self.n, self.q);
        let mut idx = 0u64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u64;
                for l in 0..n {
                    acc += a[i * n + l] as u64 * b[l * n + j] as u64;
                }
                idx = idx * q + acc % q;
            }
        }
        idx as usize
    }

    fn capped(&self, k: usize) -> Vec<usize> {
        (0..self.size())
            .filter(|&i| self.ranks[i] as usize <= k)
            .collect()
    }
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i >> 6] |= 1 << (i & 63);
}

fn bits_iter(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, &word)| {
        (0..64)
            .filter(move |b| word >> b & 1 == 1)
            .map(move |b| w * 64 + b)
    })
}

fn product_bits(u: &Universe, ks: &[usize]) -> Result<Vec<u64>> {
    if ks.is_empty() || ks.len() > MAX_FACTORS {
        return Err(Error::OutOfRange(format!(
            "{} factors (supported 1..={MAX_FACTORS})",
            ks.len()
        )));
    }
    if let Some(&k) = ks.iter().find(|&&k| k > u.n) {
        return Err(Error::OutOfRange(format!("rank cap {k} > n = {}", u.n)));
    }
    let words = u.size().div_ceil(64);
    let mut current = vec![0u64; words];
    for i in u.capped(ks[0]) {
        set_bit(&mut current, i);
    }
    for &k in &ks[1..] {
        let left: Vec<usize> = bits_iter(&current).collect();
        let right = u.capped(k);
        let work = left.len() as u128 * right.len() as u128;
        if work > MAX_WORK {
            return Err(Error::GuardTripped {
                what: "field census products",
                needed: work,
                limit: MAX_WORK,
            });
        }
        let chunk = (left.len() as u64).div_ceil(64).max(1);
        current = par::try_fold_chunks(
            left.len() as u64,
            chunk,
            || vec![0u64; words],
            |mut acc, r| {
                for i in r {
                    let x = left[i as usize];
                    for &y in &right {
                        set_bit(&mut acc, u.product(x, y));
                    }
                }
                Ok(acc)
            },
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x |= y);
                Ok(a)
            },
        )?;
    }
    Ok(current)
}

/// Enumerates `{A_1 ... A_m : A_i in M_n(F_q), rank A_i <= ks[i]}` and checks
/// it against `{C : rank C <= min(ks)}`.
pub fn verify_product_set_field(q: u64, n: usize, ks: &[usize]) -> Result<FieldCensusReport> {
    let u = Universe::new(q, n)?;
    let bits = product_bits(&u, ks)?;
    let cap = *ks.iter().min().expect("nonempty");
    let mut target = vec![0u64; bits.len()];
    for i in u.capped(cap) {
        set_bit(&mut target, i);
    }
    let cardinality = bits.iter().map(|w| w.count_ones() as u64).sum();
    let expected = fisher_rank_counts(q, n)?
        .at_most(cap)
        .to_u64()
        .ok_or(Error::Overflow)?;
    Ok(FieldCensusReport {
        q,
        n,
        ks: ks.to_vec(),
        cardinality,
        expected,
        pass: bits == target && cardinality == expected,
    })
}

/// The product set itself, as matrices with entries in `[0, q)`, in index order.
pub fn field_product_set(q: u64, n: usize, ks: &[usize]) -> Result<Vec<Mat>> {
    let u = Universe::new(q, n)?;
    let bits = product_bits(&u, ks)?;
    bits_iter(&bits)
        .map(|i| {
            let vals: Vec<i128> = u.entries[i].iter().map(|&d| d as i128).collect();
            Mat::new(n, &vals)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_over_f2() {
        let r = verify_product_set_field(2, 2, &[1, 1]).unwrap();
        assert_eq!(r.cardinality, 10);
        assert_eq!(r.expected, 10);
        assert!(r.pass);
    }

    #[test]
    fn rank_one_over_f3() {
        let r = verify_product_set_field(3, 2, &[1, 1]).unwrap();
        assert_eq!((r.cardinality, r.expected), (33, 33));
        assert!(r.pass);
    }

    #[test]
    fn zero_cap_gives_zero_matrix() {
        for ks in [[0usize, 2], [2, 0], [0, 0]] {
            let r = verify_product_set_field(3, 2, &ks).unwrap();
            assert_eq!(r.cardinality, 1);
            assert!(r.pass);
        }
        let set = field_product_set(2, 2, &[0, 1]).unwrap();
        assert_eq!(set, vec![Mat::zero(2).unwrap()]);
    }

    #[test]
    fn brute_force_cross_check() {
        // direct HashSet of products for F_2, n = 2
        use std::collections::HashSet;
        let f = PrimeField::new(2).unwrap();
        let all: Vec<Mat> = (0..16u32)
            .map(|i| Mat::new(2, &[(i >> 3 & 1) as i128, (i >> 2 & 1) as i128, (i >> 1 & 1) as i128, (i & 1) as i128]).unwrap())
            .collect();
        for k1 in 0..=2 {
            for k2 in 0..=2 {
                let mut set = HashSet::new();
                for a in all.iter().filter(|a| rank_mod_p(a, &f) <= k1) {
                    for b in all.iter().filter(|b| rank_mod_p(b, &f) <= k2) {
                        let p = crate::mat::mat_mul(a, b).unwrap();
                        let v: Vec<i128> = p.entries().iter().map(|e| e.rem_euclid(2)).collect();
                        set.insert(v);
                    }
                }
                let ours = field_product_set(2, 2, &[k1, k2]).unwrap();
                assert_eq!(ours.len(), set.len());
                for m in ours {
                    assert!(set.contains(m.entries()));
                }
            }
        }
    }

    #[test]
    fn guards() {
        assert!(matches!(
            verify_product_set_field(5, 3, &[1, 1]),
            Err(Error::GuardTripped { .. })
        ));
        assert!(verify_product_set_field(4, 2, &[1, 1]).is_err());
        assert!(verify_product_set_field(2, 2, &[]).is_err());
        assert!(verify_product_set_field(2, 2, &[1, 1, 1, 1, 1]).is_err());
        assert!(verify_product_set_field(2, 2, &[3, 1]).is_err());
    }
}
