//! Representation counts `#{(A_1..A_m) : A_1 ... A_m = C}` and pair counts.

use super::{census_products, pow_sat, product_bound, Limits};
use crate::boxes::{BoxSpec, Filter};
use crate::error::{Error, Result};
use crate::mat::{det, mat_mul, Mat};
use crate::par;

const CHUNK: u64 = 1 << 12;

/// Number of `m`-tuples of members of `spec` whose product is `c`.
///
/// Entries of `c` above `n^(m-1) H^m` give zero immediately. For
/// nonsingular `c`, the first `m - 1` factors determine the last one, so the
/// count runs over `(2H+1)^(n^2 (m-1))` tuples. Singular targets over the
/// unfiltered box split `A_1 P = c` (with `P = A_2 ... A_m`) into independent
/// row equations `a_i^T P = c_i`, each solved over its `n - rank P` free
/// coordinates; filtered boxes fall back to the full tuple loop.
pub fn count_solutions(spec: &BoxSpec, m: u32, c: &Mat, limits: &Limits) -> Result<u64> {
    if m == 0 {
        return Err(Error::OutOfRange("factor count m must be >= 1".into()));
    }
    if c.n() != spec.n {
        return Err(Error::DimensionMismatch(c.n(), spec.n));
    }
    let bound = product_bound(spec.n, spec.h, m)?;
    match c.max_abs() {
        Some(v) if v <= bound => {}
        _ => return Ok(0),
    }
    if m == 1 {
        return Ok(spec.contains(c)? as u64);
    }
    let card = spec.cardinality()? as u128;
    if det(c)? != 0 {
        limits.check(
            "nonsingular solve over (m-1)-tuples",
            pow_sat(card, m - 1),
        )?;
        count_nonsingular(spec, m, c)
    } else if spec.filter == Filter::All {
        count_by_rows(spec, m, c, limits)
    } else {
        limits.check("exhaustive solve over m-tuples", pow_sat(card, m))?;
        count_exhaustive(spec, m, c)
    }
}

/// Integer solutions of `a^T p = r` with `|a_i| <= h`, for a fixed `p`.
///
/// With `k = rank p`, picks rows `S` and columns `T` whose `k x k` minor is
/// nonsingular, enumerates the coordinates outside `S`, solves for `a_S` by
/// Cramer's rule on the `T` columns, and checks the rest.
struct RowSolver {
    p: Mat,
    h: i128,
    rows: Vec<usize>,
    cols: Vec<usize>,
    free: Vec<usize>,
    /// `adj(M^T)` and `det M` for the minor `M = p[S, T]`.
    adj: Option<Mat>,
    d: i128,
}

fn subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n)
        .filter(move |m| m.count_ones() as usize == k)
        .map(move |m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
}

impl RowSolver {
    fn new(p: &Mat, h: u64) -> Result<Self> {
        let n = p.n();
        let k = p.rank()?;
        let mut solver = RowSolver {
            p: *p,
            h: h as i128,
            rows: Vec::new(),
            cols: Vec::new(),
            free: (0..n).collect(),
            adj: None,
            d: 1,
        };
        if k == 0 {
            return Ok(solver);
        }
        for rows in subsets(n, k) {
            for cols in subsets(n, k) {
                // M^T[j][i] = p[rows[i]][cols[j]]
                let mut vals = Vec::with_capacity(k * k);
                for &c in &cols {
                    for &r in &rows {
                        vals.push(p.get(r, c));
                    }
                }
                let mt = Mat::new(k, &vals)?;
                let d = det(&mt)?;
                if d != 0 {
                    solver.free = (0..n).filter(|i| !rows.contains(i)).collect();
                    solver.rows = rows;
                    solver.cols = cols;
                    solver.adj = Some(mt.adjugate()?);
                    solver.d = d;
                    return Ok(solver);
                }
            }
        }
        Err(Error::Invariant(format!("no nonsingular {k}x{k} minor in {p}")))
    }

    fn count(&self, r: &[i128]) -> Result<u64> {
        let n = self.p.n();
        let (h, k) = (self.h, self.rows.len());
        let mut a = vec![0i128; n];
        let mut digits = vec![-h; self.free.len()];
        let mut rhs = vec![0i128; k];
        let mut total = 0u64;
        'outer: loop {
            for (&i, &v) in self.free.iter().zip(&digits) {
                a[i] = v;
            }
            let mut ok = true;
            if let Some(adj) = &self.adj {
                for (t, &c) in self.cols.iter().enumerate() {
                    let mut acc = r[c];
                    for &i in &self.free {
                        acc -= a[i] * self.p.get(i, c);
                    }
                    rhs[t] = acc;
                }
                for (s, &i) in self.rows.iter().enumerate() {
                    let num: i128 = (0..k).map(|t| adj.get(s, t) * rhs[t]).sum();
                    if num % self.d != 0 || (num / self.d).abs() > h {
                        ok = false;
                        break;
                    }
                    a[i] = num / self.d;
                }
            }
            if ok {
                ok = (0..n).all(|c| (0..n).map(|i| a[i] * self.p.get(i, c)).sum::<i128>() == r[c]);
            }
            total += ok as u64;
            for d in digits.iter_mut() {
                if *d < h {
                    *d += 1;
                    continue 'outer;
                }
                *d = -h;
            }
            break;
        }
        Ok(total)
    }
}

/// `sum_P w(P) prod_i #{a : a^T P = c_i}` over products `P` of `m - 1` factors.
fn count_by_rows(spec: &BoxSpec, m: u32, c: &Mat, limits: &Limits) -> Result<u64> {
    let targets = c.rows();
    let weigh = |p: &Mat, w: u64| -> Result<u64> {
        let solver = RowSolver::new(p, spec.h)?;
        let mut acc = w;
        for r in &targets {
            if acc == 0 {
                break;
            }
            acc = acc.checked_mul(solver.count(r)?).ok_or(Error::Overflow)?;
        }
        Ok(acc)
    };
    let add = |a: u64, b: u64| a.checked_add(b).ok_or(Error::Overflow);
    if m == 2 {
        let total = spec.cardinality()?;
        limits.check("row solve over box members", total as u128)?;
        return par::try_fold_chunks(
            total,
            CHUNK,
            || 0u64,
            |mut acc, r| {
                for p in spec.members_in(r)? {
                    acc = add(acc, weigh(&p?, 1)?)?;
                }
                Ok(acc)
            },
            add,
        );
    }
    let inner = census_products(spec, m - 1, limits)?;
    let entries: Vec<(Mat, u64)> = inner
        .iter()
        .map(|(k, w)| Ok((k.decode()?, w)))
        .collect::<Result<_>>()?;
    par::try_fold_chunks(
        entries.len() as u64,
        CHUNK,
        || 0u64,
        |mut acc, r| {
            for (p, w) in &entries[r.start as usize..r.end as usize] {
                acc = add(acc, weigh(p, *w)?)?;
            }
            Ok(acc)
        },
        add,
    )
}

fn count_nonsingular(spec: &BoxSpec, m: u32, c: &Mat) -> Result<u64> {
    let inner: Vec<Mat> = if m > 2 {
        spec.collect_members()?
            .into_iter()
            .filter(|a| det(a).map(|d| d != 0).unwrap_or(true))
            .collect()
    } else {
        Vec::new()
    };
    let total = spec.cardinality()?;
    par::try_fold_chunks(
        total,
        CHUNK,
        || 0u64,
        |mut acc, r| {
            for a in spec.members_in(r)? {
                let a = a?;
                if det(&a)? == 0 {
                    continue;
                }
                acc += solve_last(spec, &a, m - 2, &inner, c)?;
            }
            Ok(acc)
        },
        |a, b| Ok(a + b),
    )
}

/// Counts completions of the prefix `p` by `left` inner factors followed by
/// the unique last factor `p^{-1} c`, when that factor lies in the box.
fn solve_last(spec: &BoxSpec, p: &Mat, left: u32, inner: &[Mat], c: &Mat) -> Result<u64> {
    if left > 0 {
        let mut acc = 0;
        for a in inner {
            acc += solve_last(spec, &mat_mul(p, a)?, left - 1, inner, c)?;
        }
        return Ok(acc);
    }
    let d = det(p)?;
    let num = mat_mul(&p.adjugate()?, c)?;
    let h = spec.h as i128;
    let mut x = num;
    for e in x.entries_mut() {
        if *e % d != 0 {
            return Ok(0);
        }
        let q = *e / d;
        if q.abs() > h {
            return Ok(0);
        }
        *e = q;
    }
    Ok(spec.filter.accepts(&x)? as u64)
}

fn count_exhaustive(spec: &BoxSpec, m: u32, c: &Mat) -> Result<u64> {
    let inner = spec.collect_members()?;
    let total = spec.cardinality()?;
    par::try_fold_chunks(
        total,
        CHUNK,
        || 0u64,
        |mut acc, r| {
            for a in spec.members_in(r)? {
                acc += match_products(&a?, m - 1, &inner, c)?;
            }
            Ok(acc)
        },
        |a, b| Ok(a + b),
    )
}

fn match_products(p: &Mat, left: u32, inner: &[Mat], c: &Mat) -> Result<u64> {
    if left == 0 {
        return Ok((p == c) as u64);
    }
    let mut acc = 0;
    for a in inner {
        acc += match_products(&mat_mul(p, a)?, left - 1, inner, c)?;
    }
    Ok(acc)
}

/// `#{(A, B) in M^m x M^m : A_1...A_m = B_1...B_m}` as `sum_C r_m(C)^2`.
pub fn count_pairs(spec: &BoxSpec, m: u32, limits: &Limits) -> Result<u128> {
    census_products(spec, m, limits)?.sum_of_squares()
}
