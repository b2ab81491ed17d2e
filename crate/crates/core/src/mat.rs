//! Dense square integer matrices with checked arithmetic.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use std::fmt;

/// Largest supported dimension.
pub const MAX_DIM: usize = 6;
const CAP: usize = MAX_DIM * MAX_DIM;

/// An `n x n` integer matrix stored inline, row-major.
///
/// Cells past `n * n` are always zero so the derived equality and hash only
/// depend on the live entries.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat {
    n: u8,
    entries: [i128; CAP],
}

impl Mat {
    pub fn zero(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Mat {
            n: n as u8,
            entries: [0; CAP],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zero(n)?;
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        Ok(m)
    }

    /// Builds a matrix from `n * n` row-major entries.
    pub fn new(n: usize, entries: &[i128]) -> Result<Self> {
        let mut m = Self::zero(n)?;
        if entries.len() != n * n {
            return Err(Error::BadLength {
                expected: n * n,
                got: entries.len(),
            });
        }
        m.entries[..n * n].copy_from_slice(entries);
        Ok(m)
    }

    pub fn from_rows<R: AsRef<[i128]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut flat = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::DimensionMismatch(r.len(), n));
            }
            flat.extend_from_slice(r);
        }
        Self::new(n, &flat)
    }

    /// Scalar diagonal matrix `d * I`.
    pub fn diag(n: usize, d: i128) -> Result<Self> {
        let mut m = Self::zero(n)?;
        for i in 0..n {
            m.entries[i * n + i] = d;
        }
        Ok(m)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn entries(&self) -> &[i128] {
        &self.entries[..self.n() * self.n()]
    }

    #[inline]
    pub(crate) fn entries_mut(&mut self) -> &mut [i128] {
        let len = self.n() * self.n();
        &mut self.entries[..len]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.entries[i * self.n() + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        let n = self.n();
        self.entries[i * n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i128>> {
        self.entries().chunks(self.n()).map(|r| r.to_vec()).collect()
    }

    /// Largest absolute entry, or `None` if some entry is `i128::MIN`.
    pub fn max_abs(&self) -> Option<u128> {
        self.entries().iter().map(|e| e.unsigned_abs()).max()
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|&e| e == 0)
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n();
        let mut t = *self;
        for i in 0..n {
            for j in 0..n {
                t.entries[j * n + i] = self.entries[i * n + j];
            }
        }
        t
    }

    pub fn checked_neg(&self) -> Result<Mat> {
        let mut out = *self;
        for e in out.entries_mut() {
            *e = e.checked_neg().ok_or(Error::Overflow)?;
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Mat) -> Result<Mat> {
        mat_mul(self, other)
    }

    pub fn det(&self) -> Result<i128> {
        det(self)
    }

    pub fn rank(&self) -> Result<usize> {
        rank_rational(self)
    }

    /// Adjugate (classical adjoint), so that `A * adj(A) = det(A) * I`.
    pub fn adjugate(&self) -> Result<Mat> {
        let n = self.n();
        let mut adj = Mat::zero(n)?;
        if n == 1 {
            adj.entries[0] = 1;
            return Ok(adj);
        }
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j)?;
                let c = det(&minor)?;
                let c = if (i + j) % 2 == 0 {
                    c
                } else {
                    c.checked_neg().ok_or(Error::Overflow)?
                };
                // adj = transpose of the cofactor matrix
                adj.entries[j * n + i] = c;
            }
        }
        Ok(adj)
    }

    fn minor(&self, row: usize, col: usize) -> Result<Mat> {
        let n = self.n();
        let mut vals = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != row) {
            for j in (0..n).filter(|&j| j != col) {
                vals.push(self.get(i, j));
            }
        }
        Mat::new(n - 1, &vals)
    }
}

fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::BadDimension(n))
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Exact product `a * b`; errors on dimension mismatch or overflow.
pub fn mat_mul(a: &Mat, b: &Mat) -> Result<Mat> {
    let n = a.n();
    if n != b.n() {
        return Err(Error::DimensionMismatch(n, b.n()));
    }
    let mut out = Mat {
        n: a.n,
        entries: [0; CAP],
    };
    for i in 0..n {
        for j in 0..n {
            let mut acc: i128 = 0;
            for l in 0..n {
                let t = a.entries[i * n + l]
                    .checked_mul(b.entries[l * n + j])
                    .ok_or(Error::Overflow)?;
                acc = acc.checked_add(t).ok_or(Error::Overflow)?;
            }
            out.entries[i * n + j] = acc;
        }
    }
    Ok(out)
}

/// Fraction-free (Bareiss) forward elimination on a copy of `a`.
///
/// Returns the rank and, when the matrix is nonsingular, its determinant.
/// Every intermediate value is a minor of `a`, so the divisions are exact.
fn bareiss(a: &Mat) -> Result<(usize, i128)> {
    let n = a.n();
    let mut m = *a;
    let e = m.entries_mut();
    let mut prev: i128 = 1;
    let mut row = 0;
    let mut sign: i128 = 1;
    for col in 0..n {
        if row == n {
            break;
        }
        let Some(p) = (row..n).find(|&r| e[r * n + col] != 0) else {
            continue;
        };
        if p != row {
            for j in 0..n {
                e.swap(p * n + j, row * n + j);
            }
            sign = -sign;
        }
        let pivot = e[row * n + col];
        for r in row + 1..n {
            let lead = e[r * n + col];
            for j in col + 1..n {
                let lhs = pivot
                    .checked_mul(e[r * n + j])
                    .ok_or(Error::Overflow)?;
                let rhs = lead
                    .checked_mul(e[row * n + j])
                    .ok_or(Error::Overflow)?;
                let num = lhs.checked_sub(rhs).ok_or(Error::Overflow)?;
                e[r * n + j] = num / prev;
            }
            e[r * n + col] = 0;
        }
        prev = pivot;
        row += 1;
    }
    let det = if row == n {
        prev.checked_mul(sign).ok_or(Error::Overflow)?
    } else {
        0
    };
    Ok((row, det))
}

pub fn det(a: &Mat) -> Result<i128> {
    bareiss(a).map(|(_, d)| d)
}

/// Rank over the rationals.
pub fn rank_rational(a: &Mat) -> Result<usize> {
    bareiss(a).map(|(r, _)| r)
}

/// Rank over `F_p` after reducing every entry modulo `p`.
pub fn rank_mod_p(a: &Mat, f: &PrimeField) -> usize {
    let n = a.n();
    let p = f.modulus();
    let mut m: Vec<u64> = a
        .entries()
        .iter()
        .map(|&v| v.rem_euclid(p as i128) as u64)
        .collect();
    let mut row = 0;
    for col in 0..n {
        if row == n {
            break;
        }
        let Some(piv) = (row..n).find(|&r| m[r * n + col] != 0) else {
            continue;
        };
        for j in 0..n {
            m.swap(piv * n + j, row * n + j);
        }
        let inv = f.inv_raw(m[row * n + col]);
        for r in row + 1..n {
            let factor = m[r * n + col] * inv % p;
            if factor == 0 {
                continue;
            }
            for j in col..n {
                let sub = factor * m[row * n + j] % p;
                m[r * n + j] = (m[r * n + j] + p - sub) % p;
            }
        }
        row += 1;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[&[i128]]) -> Mat {
        Mat::from_rows(rows).unwrap()
    }

    /// Cofactor expansion along the first row; independent of Bareiss.
    fn cofactor_det(a: &[Vec<i128>]) -> i128 {
        let n = a.len();
        if n == 1 {
            return a[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = a[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * a[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn identity_is_neutral() {
        let a = m(&[&[3, -1], &[7, 2]]);
        let i = Mat::identity(2).unwrap();
        assert_eq!(mat_mul(&i, &a).unwrap(), a);
        assert_eq!(mat_mul(&a, &i).unwrap(), a);
    }

    #[test]
    fn all_ones_square() {
        let j = m(&[&[1, 1], &[1, 1]]);
        assert_eq!(mat_mul(&j, &j).unwrap(), m(&[&[2, 2], &[2, 2]]));
    }

    #[test]
    fn mul_dimension_mismatch() {
        let a = Mat::identity(2).unwrap();
        let b = Mat::identity(3).unwrap();
        assert!(matches!(mat_mul(&a, &b), Err(Error::DimensionMismatch(2, 3))));
    }

    #[test]
    fn mul_overflow_is_reported() {
        let big = i128::MAX / 2 + 1;
        let a = m(&[&[big, 0], &[0, 1]]);
        let two = Mat::diag(2, 2).unwrap();
        assert!(matches!(mat_mul(&a, &two), Err(Error::Overflow)));
    }

    #[test]
    fn product_entries_respect_box_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(2..=4);
            let h: i128 = rng.gen_range(1..=9);
            let mfold = rng.gen_range(2..=4u32);
            let mut prod = Mat::identity(n).unwrap();
            for _ in 0..mfold {
                let v: Vec<i128> = (0..n * n).map(|_| rng.gen_range(-h..=h)).collect();
                prod = mat_mul(&prod, &Mat::new(n, &v).unwrap()).unwrap();
            }
            let bound = (n as u128).pow(mfold - 1) * (h as u128).pow(mfold);
            assert!(prod.max_abs().unwrap() <= bound);
        }
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(det(&Mat::identity(5).unwrap()).unwrap(), 1);
        assert_eq!(det(&m(&[&[1, 2], &[3, 4]])).unwrap(), -2);
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])).unwrap(), -1);
        assert_eq!(det(&m(&[&[7]])).unwrap(), 7);
        assert_eq!(det(&m(&[&[1, 2], &[2, 4]])).unwrap(), 0);
    }

    #[test]
    fn det_matches_cofactor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let v: Vec<i128> = (0..9).map(|_| rng.gen_range(-6..=6)).collect();
            let a = Mat::new(3, &v).unwrap();
            assert_eq!(det(&a).unwrap(), cofactor_det(&a.rows()), "{a:?}");
        }
        for _ in 0..200 {
            let v: Vec<i128> = (0..25).map(|_| rng.gen_range(-3..=3)).collect();
            let a = Mat::new(5, &v).unwrap();
            assert_eq!(det(&a).unwrap(), cofactor_det(&a.rows()), "{a:?}");
        }
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(rank_rational(&Mat::zero(3).unwrap()).unwrap(), 0);
        assert_eq!(rank_rational(&m(&[&[1, 1], &[1, 1]])).unwrap(), 1);
        assert_eq!(rank_rational(&Mat::identity(4).unwrap()).unwrap(), 4);
        assert_eq!(
            rank_rational(&m(&[&[0, 0, 1], &[0, 0, 2], &[0, 3, 0]])).unwrap(),
            2
        );
    }

    #[test]
    fn rank_mod_p_cases() {
        let f2 = PrimeField::new(2).unwrap();
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(rank_mod_p(&Mat::identity(2).unwrap(), &f2), 2);
        assert_eq!(rank_mod_p(&m(&[&[1, 1], &[1, 1]]), &f2), 1);
        assert_eq!(rank_mod_p(&m(&[&[2, 0], &[0, 2]]), &f2), 0);
        assert_eq!(rank_mod_p(&m(&[&[2, 0], &[0, 2]]), &f3), 2);
        assert_eq!(rank_mod_p(&m(&[&[-1, 1], &[1, -1]]), &f3), 1);
    }

    #[test]
    fn adjugate_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=4 {
            for _ in 0..50 {
                let v: Vec<i128> = (0..n * n).map(|_| rng.gen_range(-5..=5)).collect();
                let a = Mat::new(n, &v).unwrap();
                let prod = mat_mul(&a, &a.adjugate().unwrap()).unwrap();
                assert_eq!(prod, Mat::diag(n, det(&a).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(Mat::zero(7), Err(Error::BadDimension(7))));
        assert!(matches!(Mat::zero(0), Err(Error::BadDimension(0))));
        assert!(matches!(
            Mat::new(2, &[1, 2, 3]),
            Err(Error::BadLength { expected: 4, got: 3 })
        ));
    }
}
