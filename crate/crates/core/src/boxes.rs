//! The box of `n x n` integer matrices with entries in `[-H, H]`.
//!
//! Matrices are enumerated in mixed-radix lexicographic order: entry `(0,0)`
//! is the most significant digit, the last entry varies fastest, and each
//! digit runs from `-H` to `H`. Index `i` of the stream is therefore a plain
//! base-`(2H+1)` number, which makes splitting into sub-ranges trivial.

use crate::error::{Error, Result};
use crate::mat::{det, rank_rational, Mat};
use crate::par;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

const CHUNK: u64 = 1 << 13;

/// Largest box [`BoxSpec::collect_members`] will materialise.
pub const MAX_COLLECT: u64 = 1 << 22;

/// Membership filter applied on top of the box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Filter {
    All,
    Nonsingular,
    RankEq(usize),
    RankLe(usize),
    DetEq(i128),
}

impl Filter {
    pub fn accepts(&self, a: &Mat) -> Result<bool> {
        Ok(match *self {
            Filter::All => true,
            Filter::Nonsingular => det(a)? != 0,
            Filter::RankEq(k) => rank_rational(a)? == k,
            Filter::RankLe(k) => rank_rational(a)? <= k,
            Filter::DetEq(d) => det(a)? == d,
        })
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Filter::All => write!(f, "all"),
            Filter::Nonsingular => write!(f, "nonsingular"),
            Filter::RankEq(k) => write!(f, "rank_eq:{k}"),
            Filter::RankLe(k) => write!(f, "rank_le:{k}"),
            Filter::DetEq(d) => write!(f, "det_eq:{d}"),
        }
    }
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown filter {s:?}"));
        match s {
            "all" => return Ok(Filter::All),
            "nonsingular" => return Ok(Filter::Nonsingular),
            _ => {}
        }
        let (name, arg) = s.split_once(':').ok_or_else(bad)?;
        match name {
            "rank_eq" => Ok(Filter::RankEq(arg.parse().map_err(|_| bad())?)),
            "rank_le" => Ok(Filter::RankLe(arg.parse().map_err(|_| bad())?)),
            "det_eq" => Ok(Filter::DetEq(arg.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

/// Enumeration domain: dimension, entry bound and filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoxSpec {
    pub n: usize,
    pub h: u64,
    pub filter: Filter,
}

impl BoxSpec {
    pub fn new(n: usize, h: u64) -> Result<Self> {
        Self::with_filter(n, h, Filter::All)
    }

    pub fn with_filter(n: usize, h: u64, filter: Filter) -> Result<Self> {
        Mat::zero(n)?;
        if h == 0 || h > i64::MAX as u64 {
            return Err(Error::OutOfRange(format!("entry bound H = {h}")));
        }
        match filter {
            Filter::RankEq(k) | Filter::RankLe(k) if k > n => {
                return Err(Error::OutOfRange(format!("rank {k} > n = {n}")))
            }
            _ => {}
        }
        Ok(BoxSpec { n, h, filter })
    }

    pub fn nonsingular(n: usize, h: u64) -> Result<Self> {
        Self::with_filter(n, h, Filter::Nonsingular)
    }

    pub fn unfiltered(&self) -> BoxSpec {
        BoxSpec {
            filter: Filter::All,
            ..*self
        }
    }

    #[inline]
    pub fn radix(&self) -> u64 {
        2 * self.h + 1
    }

    /// `(2H+1)^(n^2)`, the unfiltered cardinality; errors if it exceeds `u64`.
    pub fn cardinality(&self) -> Result<u64> {
        let cells = self.n * self.n;
        self.radix()
            .checked_pow(cells as u32)
            .ok_or(Error::BoxTooLarge { h: self.h, cells })
    }

    /// Matrix at position `index` of the unfiltered stream.
    pub fn mat_at(&self, mut index: u64) -> Result<Mat> {
        let total = self.cardinality()?;
        if index >= total {
            return Err(Error::OutOfRange(format!("index {index} >= {total}")));
        }
        let cells = self.n * self.n;
        let mut vals = vec![0i128; cells];
        let radix = self.radix();
        for slot in vals.iter_mut().rev() {
            *slot = (index % radix) as i128 - self.h as i128;
            index /= radix;
        }
        Mat::new(self.n, &vals)
    }

    /// Unfiltered stream over the whole box.
    pub fn iter(&self) -> Result<BoxIter> {
        self.range(0..self.cardinality()?)
    }

    /// Unfiltered stream over the index sub-range `r`.
    pub fn range(&self, r: Range<u64>) -> Result<BoxIter> {
        let total = self.cardinality()?;
        if r.end > total || r.start > r.end {
            return Err(Error::OutOfRange(format!("range {r:?} of {total}")));
        }
        let cur = if r.start < total {
            self.mat_at(r.start)?
        } else {
            Mat::zero(self.n)?
        };
        Ok(BoxIter {
            h: self.h as i128,
            cur,
            remaining: r.end - r.start,
        })
    }

    /// Filtered stream over the whole box, in enumeration order.
    pub fn members(&self) -> Result<impl Iterator<Item = Result<Mat>>> {
        let filter = self.filter;
        Ok(self
            .iter()?
            .filter_map(move |a| match filter.accepts(&a) {
                Ok(true) => Some(Ok(a)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            }))
    }

    /// Filtered stream over an index sub-range.
    pub fn members_in(&self, r: Range<u64>) -> Result<impl Iterator<Item = Result<Mat>>> {
        let filter = self.filter;
        Ok(self
            .range(r)?
            .filter_map(move |a| match filter.accepts(&a) {
                Ok(true) => Some(Ok(a)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            }))
    }

    /// Every filtered member, collected in enumeration order.
    pub fn collect_members(&self) -> Result<Vec<Mat>> {
        let total = self.cardinality()?;
        if total > MAX_COLLECT {
            return Err(Error::GuardTripped {
                what: "collected box members",
                needed: total as u128,
                limit: MAX_COLLECT as u128,
            });
        }
        let parts = par::map_collect(par::chunks(total, CHUNK).count(), |c| {
            let r = c as u64 * CHUNK..((c as u64 + 1) * CHUNK).min(total);
            self.members_in(r)?.collect::<Result<Vec<_>>>()
        });
        let mut out = Vec::new();
        for p in parts {
            out.extend(p?);
        }
        Ok(out)
    }

    /// Splits the index space into `parts` contiguous, nearly equal ranges.
    pub fn split(&self, parts: usize) -> Result<Vec<Range<u64>>> {
        let total = self.cardinality()?;
        let parts = parts.max(1) as u64;
        Ok((0..parts)
            .map(|i| {
                let lo = (total as u128 * i as u128 / parts as u128) as u64;
                let hi = (total as u128 * (i + 1) as u128 / parts as u128) as u64;
                lo..hi
            })
            .collect())
    }

    pub fn contains(&self, a: &Mat) -> Result<bool> {
        if a.n() != self.n {
            return Ok(false);
        }
        let h = self.h as u128;
        if a.entries().iter().any(|e| e.unsigned_abs() > h) {
            return Ok(false);
        }
        self.filter.accepts(a)
    }

    /// Filtered cardinality, by enumeration when a filter is set.
    pub fn filtered_cardinality(&self) -> Result<u64> {
        if self.filter == Filter::All {
            return self.cardinality();
        }
        let total = self.cardinality()?;
        par::try_fold_chunks(
            total,
            CHUNK,
            || 0u64,
            |acc, r| {
                let mut acc = acc;
                for a in self.members_in(r)? {
                    a?;
                    acc += 1;
                }
                Ok(acc)
            },
            |a, b| Ok(a + b),
        )
    }
}

/// Odometer over a contiguous index range of the box.
#[derive(Clone, Debug)]
pub struct BoxIter {
    h: i128,
    cur: Mat,
    remaining: u64,
}

impl Iterator for BoxIter {
    type Item = Mat;

    fn next(&mut self) -> Option<Mat> {
        if self.remaining == 0 {
            return None;
        }
        let out = self.cur;
        self.remaining -= 1;
        if self.remaining > 0 {
            let h = self.h;
            for e in self.cur.entries_mut().iter_mut().rev() {
                if *e < h {
                    *e += 1;
                    break;
                }
                *e = -h;
            }
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, usize::try_from(self.remaining).ok())
    }
}

/// Label -> count table with checked increments.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DistTable {
    rows: BTreeMap<i128, u64>,
}

impl DistTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, label: i128, count: u64) -> Result<()> {
        let slot = self.rows.entry(label).or_insert(0);
        *slot = slot.checked_add(count).ok_or(Error::Overflow)?;
        Ok(())
    }

    /// Pointwise sum; associative and commutative.
    pub fn merge(mut self, other: DistTable) -> Result<DistTable> {
        if self.rows.len() < other.rows.len() {
            return other.merge(self);
        }
        for (label, count) in other.rows {
            self.add(label, count)?;
        }
        Ok(self)
    }

    pub fn get(&self, label: i128) -> u64 {
        self.rows.get(&label).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.rows.values().map(|&c| c as u128).sum()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows sorted by label ascending.
    pub fn iter(&self) -> impl Iterator<Item = (i128, u64)> + '_ {
        self.rows.iter().map(|(&l, &c)| (l, c))
    }

    /// CSV with header `label,count`, rows sorted by label.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("label,count\n");
        for (l, c) in self.iter() {
            s.push_str(&format!("{l},{c}\n"));
        }
        s
    }
}

fn tally(spec: &BoxSpec, label: impl Fn(&Mat) -> Result<i128> + Sync + Send) -> Result<DistTable> {
    let total = spec.cardinality()?;
    par::try_fold_chunks(
        total,
        CHUNK,
        DistTable::new,
        |mut acc, r| {
            for a in spec.members_in(r)? {
                acc.add(label(&a?)?, 1)?;
            }
            Ok(acc)
        },
        DistTable::merge,
    )
}

/// Number of filtered box members per determinant value.
pub fn count_by_det(spec: &BoxSpec) -> Result<DistTable> {
    tally(spec, det)
}

/// Number of filtered box members per rank `0..=n`.
pub fn count_by_rank(spec: &BoxSpec) -> Result<DistTable> {
    tally(spec, |a| rank_rational(a).map(|r| r as i128))
}

/// Number of positive divisors of `k`, by trial division up to `sqrt(k)`.
pub fn divisor_count(k: u64) -> Result<u64> {
    if k == 0 || k >= 1 << 63 {
        return Err(Error::OutOfRange(format!("divisor_count({k})")));
    }
    let mut count = 0;
    let mut d: u64 = 1;
    while d * d <= k {
        if k.is_multiple_of(d) {
            count += if d * d == k { 1 } else { 2 };
        }
        d += 1;
    }
    Ok(count)
}
