//! The scalar multiplication table `{a_1 ... a_m : |a_i| <= H}`.

use crate::error::{Error, Result};
use serde::Serialize;

/// Upper limit on `H^m`, the size of the product bitset.
pub const SCALAR_GUARD: u128 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarTable {
    #[serde(rename = "H")]
    pub h: u64,
    pub m: u32,
    /// Distinct products of `m` integers in `[1, H]`.
    pub positive: u64,
    /// Distinct products of `m` integers in `[-H, H]`: `2 * positive + 1`.
    pub signed: u64,
}

/// Counts distinct `m`-fold products of integers of absolute value `<= h`.
pub fn scalar_table(h: u64, m: u32) -> Result<ScalarTable> {
    if h == 0 || m == 0 {
        return Err(Error::OutOfRange(format!("scalar_table(H={h}, m={m})")));
    }
    let top = (h as u128).checked_pow(m).unwrap_or(u128::MAX);
    if top > SCALAR_GUARD {
        return Err(Error::GuardTripped {
            what: "scalar table bitset H^m",
            needed: top,
            limit: SCALAR_GUARD,
        });
    }
    // current set of positive products as a sorted list; bitset for marking
    let mut current: Vec<u64> = (1..=h).collect();
    for j in 2..=m {
        let size = (h as u128).pow(j) as usize + 1;
        let mut bits = vec![0u64; size.div_ceil(64)];
        for &x in &current {
            for a in 1..=h {
                let p = (x * a) as usize;
                bits[p >> 6] |= 1 << (p & 63);
            }
        }
        current = bits
            .iter()
            .enumerate()
            .flat_map(|(w, &word)| {
                (0..64)
                    .filter(move |b| word >> b & 1 == 1)
                    .map(move |b| (w * 64 + b) as u64)
            })
            .collect();
    }
    let positive = current.len() as u64;
    Ok(ScalarTable {
        h,
        m,
        positive,
        signed: 2 * positive + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn brute(h: i64, m: u32) -> usize {
        let mut set: HashSet<i64> = [1].into_iter().collect();
        for _ in 0..m {
            set = set
                .iter()
                .flat_map(|x| (-h..=h).map(move |a| x * a))
                .collect();
        }
        set.len()
    }

    #[test]
    fn small_tables() {
        assert_eq!(scalar_table(1, 2).unwrap().signed, 3);
        let t = scalar_table(3, 2).unwrap();
        assert_eq!((t.positive, t.signed), (6, 13));
        for h in 1..=12 {
            for m in 1..=3 {
                assert_eq!(
                    scalar_table(h, m).unwrap().signed as usize,
                    brute(h as i64, m),
                    "H={h} m={m}"
                );
            }
        }
    }

    #[test]
    fn monotone_in_h() {
        let counts: Vec<u64> = (1..=60).map(|h| scalar_table(h, 2).unwrap().signed).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn guard() {
        assert!(matches!(
            scalar_table(1 << 17, 2),
            Err(Error::GuardTripped { .. })
        ));
        assert!(scalar_table(0, 2).is_err());
    }
}
