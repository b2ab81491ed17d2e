//! Seeded fuzzing of the left-identity construction.
//!
//! Case `i` draws from its own ChaCha stream seeded by `(seed, i)`, so a run
//! is reproducible and independent of the worker count.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::mat::{mat_mul, Mat};
use crate::par;
use crate::rank::{check_left_identity, left_identity_factor, FieldMat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Entry range of the random factors.
const SPREAD: i128 = 3;

pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

/// A random integer matrix of rank at most `r` (usually exactly `r`), drawn
/// as the product of random `n x r` and `r x n` factors.
pub fn random_rank_mat<R: Rng>(rng: &mut R, n: usize, r: usize) -> Result<Mat> {
    if r > n {
        return Err(Error::OutOfRange(format!("rank {r} > n = {n}")));
    }
    let mut left = Mat::zero(n)?;
    let mut right = Mat::zero(n)?;
    for i in 0..n {
        for l in 0..r {
            left.set(i, l, rng.gen_range(-SPREAD..=SPREAD));
            right.set(l, i, rng.gen_range(-SPREAD..=SPREAD));
        }
    }
    mat_mul(&left, &right)
}

/// A random matrix with a uniformly chosen target rank in `0..=n`.
pub fn random_mat<R: Rng>(rng: &mut R, n: usize) -> Result<Mat> {
    let r = rng.gen_range(0..=n);
    random_rank_mat(rng, n, r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub field: String,
    pub n: usize,
    pub cases: u64,
    pub seed: u64,
    pub failures: u64,
    /// Cases by rank of the input, `0..=n`.
    pub rank_histogram: Vec<u64>,
    /// The first failing input, if any.
    pub first_failure: Option<String>,
}

/// Runs `cases` random inputs through [`left_identity_factor`] and checks
/// each result with [`check_left_identity`].
pub fn fuzz_construction<F: Field>(field: &F, n: usize, cases: u64, seed: u64) -> Result<FuzzReport> {
    let outcomes = par::map_collect(cases as usize, |i| -> Result<(usize, Option<String>)> {
        let mut rng = case_rng(seed, i as u64);
        let m = random_mat(&mut rng, n)?;
        let a = FieldMat::from_mat(field, &m);
        let rank = a.rank();
        let (b, trace) = left_identity_factor(&a)?;
        let failure = check_left_identity(&a, &b, &trace)
            .err()
            .map(|e| format!("{m}: {e}"));
        Ok((rank, failure))
    });
    let mut report = FuzzReport {
        field: field.label(),
        n,
        cases,
        seed,
        failures: 0,
        rank_histogram: vec![0; n + 1],
        first_failure: None,
    };
    for o in outcomes {
        let (rank, failure) = o?;
        report.rank_histogram[rank] += 1;
        if let Some(f) = failure {
            report.failures += 1;
            report.first_failure.get_or_insert(f);
        }
    }
    Ok(report)
}
