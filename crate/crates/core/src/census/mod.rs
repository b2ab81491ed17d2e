//! Product-set censuses over the box.
//!
//! A [`CountMap`] records, for every product `C = A_1 ... A_m` of box
//! members, how many ordered tuples produce it. Its key count is the size of
//! the product set and its multiplicities are the representation counts.
//!
//! Two independent builders exist: an exhaustive tuple loop and
//! [`iterate_convolve`], which extends an `m`-fold census by one more factor.
//! Both accumulate into per-worker maps sharded by [`MatKey::shard`] and are
//! merged by addition, then flattened into a vector sorted by key bytes, so
//! the result does not depend on the number of workers.

mod io;
mod scalar;
mod solve;

pub use io::{read_count_map, write_count_map, MAGIC};
pub use scalar::{scalar_table, ScalarTable, SCALAR_GUARD};
pub use solve::{count_pairs, count_solutions};

use crate::boxes::BoxSpec;
use crate::error::{Error, Result};
use crate::key::{width_for_bound, MatKey};
use crate::mat::{mat_mul, Mat};
use crate::par;
use rustc_hash::FxHashMap;
use serde::Serialize;
use std::time::Duration;

/// Environment variable overriding the default tuple guard.
pub const GUARD_ENV: &str = "MCEN_GUARD_MAX_TUPLES";
pub const DEFAULT_MAX_TUPLES: u128 = 1 << 40;

const SHARDS: usize = 256;

/// Explicit work limits for the census builders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_tuples: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_tuples: DEFAULT_MAX_TUPLES,
        }
    }
}

impl Limits {
    /// Default limits, with `MCEN_GUARD_MAX_TUPLES` applied when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(GUARD_ENV) {
            Ok(v) => {
                let max_tuples = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("{GUARD_ENV}={v:?}")))?;
                Ok(Limits { max_tuples })
            }
            Err(_) => Ok(Limits::default()),
        }
    }

    pub(crate) fn check(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.max_tuples {
            return Err(Error::GuardTripped {
                what,
                needed,
                limit: self.max_tuples,
            });
        }
        Ok(())
    }
}

/// A-priori bound `n^(m-1) H^m` on the entries of an `m`-fold product.
pub fn product_bound(n: usize, h: u64, m: u32) -> Result<u128> {
    if m == 0 {
        return Ok(1);
    }
    (n as u128)
        .checked_pow(m - 1)
        .and_then(|a| (h as u128).checked_pow(m).and_then(|b| a.checked_mul(b)))
        .ok_or(Error::Overflow)
}

/// `base^exp` in `u128`, saturating; only used for guard comparisons.
fn pow_sat(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp).unwrap_or(u128::MAX)
}

/// Parameters of a census.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusMeta {
    pub spec: BoxSpec,
    pub m: u32,
    pub width: u8,
}

/// Canonical key -> multiplicity map, sorted by key bytes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountMap {
    meta: CensusMeta,
    entries: Vec<(MatKey, u64)>,
}

impl CountMap {
    pub(crate) fn from_sorted(meta: CensusMeta, entries: Vec<(MatKey, u64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        CountMap { meta, entries }
    }

    pub fn meta(&self) -> &CensusMeta {
        &self.meta
    }

    /// Number of distinct products.
    pub fn distinct(&self) -> u64 {
        self.entries.len() as u64
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MatKey, u64)> + '_ {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    pub fn total(&self) -> u128 {
        self.entries.iter().map(|(_, v)| *v as u128).sum()
    }

    /// Representation count of `c`; zero when `c` is not a product.
    pub fn multiplicity(&self, c: &Mat) -> u64 {
        match MatKey::encode(c, self.meta.width) {
            Ok(k) => self.get(&k),
            Err(_) => 0,
        }
    }

    pub fn get(&self, key: &MatKey) -> u64 {
        self.entries
            .binary_search_by(|(k, _)| k.cmp(key))
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    /// Largest multiplicity and the smallest key attaining it.
    pub fn max_entry(&self) -> Option<(&MatKey, u64)> {
        let mut best: Option<(&MatKey, u64)> = None;
        for (k, v) in &self.entries {
            if best.is_none_or(|(_, b)| *v > b) {
                best = Some((k, *v));
            }
        }
        best
    }

    /// `sum_C r(C)^2`, the number of pairs of tuples with equal products.
    pub fn sum_of_squares(&self) -> Result<u128> {
        self.entries.iter().try_fold(0u128, |acc, (_, v)| {
            let sq = (*v as u128).checked_mul(*v as u128).ok_or(Error::Overflow)?;
            acc.checked_add(sq).ok_or(Error::Overflow)
        })
    }

    /// Checks that the multiplicities sum to `members^m`.
    pub fn verify_total(&self, members: u64) -> Result<()> {
        let expected = (members as u128)
            .checked_pow(self.meta.m)
            .ok_or(Error::Overflow)?;
        let total = self.total();
        if total != expected {
            return Err(Error::Invariant(format!(
                "multiplicities sum to {total}, expected {expected}"
            )));
        }
        self.sum_of_squares()?;
        Ok(())
    }

    pub fn summary(&self, wall: Duration) -> CensusResult {
        let (argmax, max) = self
            .max_entry()
            .map(|(k, v)| (k.to_hex(), v))
            .unwrap_or_default();
        CensusResult {
            n: self.meta.spec.n,
            h: self.meta.spec.h,
            m: self.meta.m,
            variant: self.meta.spec.filter.to_string(),
            distinct: self.distinct(),
            total_tuples: self.total(),
            max_multiplicity: max,
            argmax_key_hex: argmax,
            wall_ms: wall.as_millis() as u64,
        }
    }
}

/// JSON summary of a census run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusResult {
    pub n: usize,
    #[serde(rename = "H")]
    pub h: u64,
    pub m: u32,
    pub variant: String,
    pub distinct: u64,
    pub total_tuples: u128,
    pub max_multiplicity: u64,
    pub argmax_key_hex: String,
    pub wall_ms: u64,
}

/// Per-worker accumulator: 256 hash maps selected by the key's shard byte.
pub(crate) struct ShardedCounts {
    shards: Vec<FxHashMap<MatKey, u64>>,
}

impl ShardedCounts {
    pub(crate) fn new() -> Self {
        ShardedCounts {
            shards: (0..SHARDS).map(|_| FxHashMap::default()).collect(),
        }
    }

    #[inline]
    pub(crate) fn add(&mut self, key: MatKey, count: u64) -> Result<()> {
        let slot = self.shards[key.shard()].entry(key).or_insert(0);
        *slot = slot.checked_add(count).ok_or(Error::Overflow)?;
        Ok(())
    }

    pub(crate) fn merge(mut self, mut other: ShardedCounts) -> Result<ShardedCounts> {
        for (mine, theirs) in self.shards.iter_mut().zip(other.shards.iter_mut()) {
            if mine.len() < theirs.len() {
                std::mem::swap(mine, theirs);
            }
            for (k, v) in theirs.drain() {
                let slot = mine.entry(k).or_insert(0);
                *slot = slot.checked_add(v).ok_or(Error::Overflow)?;
            }
        }
        Ok(self)
    }

    pub(crate) fn into_sorted(self) -> Vec<(MatKey, u64)> {
        let mut out: Vec<(MatKey, u64)> = self.shards.into_iter().flatten().collect();
        #[cfg(feature = "parallel")]
        {
            use rayon::slice::ParallelSliceMut;
            out.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
        }
        #[cfg(not(feature = "parallel"))]
        out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

/// Builder choice for [`census_products_via`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusPath {
    /// Exhaustive loop when it fits the guard, else a convolution chain.
    Auto,
    /// Enumerate every `m`-tuple.
    Exhaustive,
    /// Start from the box and apply [`iterate_convolve`] `m - 1` times.
    Convolve,
}

/// Exact census of all `m`-fold products of members of `spec`.
pub fn census_products(spec: &BoxSpec, m: u32, limits: &Limits) -> Result<CountMap> {
    census_products_via(spec, m, CensusPath::Auto, limits)
}

pub fn census_products_via(
    spec: &BoxSpec,
    m: u32,
    path: CensusPath,
    limits: &Limits,
) -> Result<CountMap> {
    if m == 0 {
        return Err(Error::OutOfRange("factor count m must be >= 1".into()));
    }
    let card = spec.cardinality()? as u128;
    let tuples = pow_sat(card, m);
    let path = match path {
        CensusPath::Auto if tuples <= limits.max_tuples => CensusPath::Exhaustive,
        CensusPath::Auto => CensusPath::Convolve,
        p => p,
    };
    if path == CensusPath::Exhaustive {
        limits.check("exhaustive census tuples (2H+1)^(n^2 m)", tuples)?;
    } else if m > 1 {
        limits.check("convolution pass (#products x #box)", card.saturating_mul(card))?;
    }
    limits.check("box members", card)?;
    let members = spec.collect_members()?;
    let map = match path {
        CensusPath::Exhaustive => exhaustive(spec, m, &members)?,
        _ => {
            let mut map = exhaustive(spec, 1, &members)?;
            for _ in 1..m {
                map = convolve_with(&map, spec, &members, limits)?;
            }
            map
        }
    };
    map.verify_total(members.len() as u64)?;
    Ok(map)
}

fn exhaustive(spec: &BoxSpec, m: u32, members: &[Mat]) -> Result<CountMap> {
    let width = width_for_bound(product_bound(spec.n, spec.h, m)?)?;
    let b = members.len() as u64;
    let chunk = b.div_ceil(256).max(1);
    let counts = par::try_fold_chunks(
        b,
        chunk,
        ShardedCounts::new,
        |mut acc, r| {
            for i in r {
                let first = members[i as usize];
                descend(&first, m - 1, members, width, &mut acc)?;
            }
            Ok(acc)
        },
        ShardedCounts::merge,
    )?;
    Ok(CountMap::from_sorted(
        CensusMeta {
            spec: *spec,
            m,
            width,
        },
        counts.into_sorted(),
    ))
}

fn descend(
    prefix: &Mat,
    left: u32,
    members: &[Mat],
    width: u8,
    acc: &mut ShardedCounts,
) -> Result<()> {
    if left == 0 {
        return acc.add(MatKey::encode(prefix, width)?, 1);
    }
    for a in members {
        let p = mat_mul(prefix, a)?;
        descend(&p, left - 1, members, width, acc)?;
    }
    Ok(())
}

/// Extends an `m`-fold census to `m + 1` factors by one multiplication pass.
pub fn iterate_convolve(prev: &CountMap, spec: &BoxSpec, limits: &Limits) -> Result<CountMap> {
    let members = spec.collect_members()?;
    let out = convolve_with(prev, spec, &members, limits)?;
    let before = prev.total();
    let after = out.total();
    if before.checked_mul(members.len() as u128) != Some(after) {
        return Err(Error::Invariant(format!(
            "convolution total {after} != {before} * {}",
            members.len()
        )));
    }
    Ok(out)
}

fn convolve_with(
    prev: &CountMap,
    spec: &BoxSpec,
    members: &[Mat],
    limits: &Limits,
) -> Result<CountMap> {
    if prev.meta.spec != *spec {
        return Err(Error::Unsupported(format!(
            "census built over {:?} cannot be extended over {:?}",
            prev.meta.spec, spec
        )));
    }
    let m = prev.meta.m + 1;
    limits.check(
        "convolution pass (#products x #box)",
        (prev.distinct() as u128).saturating_mul(members.len() as u128),
    )?;
    let width = width_for_bound(product_bound(spec.n, spec.h, m)?)?;
    let len = prev.entries.len() as u64;
    let chunk = len.div_ceil(256).max(1);
    let counts = par::try_fold_chunks(
        len,
        chunk,
        ShardedCounts::new,
        |mut acc, r| {
            for i in r {
                let (key, mult) = &prev.entries[i as usize];
                let pc = key.decode()?;
                for a in members {
                    acc.add(MatKey::encode(&mat_mul(&pc, a)?, width)?, *mult)?;
                }
            }
            Ok(acc)
        },
        ShardedCounts::merge,
    )?;
    Ok(CountMap::from_sorted(
        CensusMeta {
            spec: *spec,
            m,
            width,
        },
        counts.into_sorted(),
    ))
}
