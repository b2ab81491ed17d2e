//! Left-identity factor: for any square `A`, a matrix `B` with `B A = A`
//! and `rank B = rank A`.
//!
//! Let `k = rank A`. Take a basis `v_1..v_{n-k}` of the left null space of
//! `A`, row-reduce the stacked basis to rows `w_1..w_{n-k}` with pivot
//! columns `z_1 < ... < z_{n-k}`, and set row `z_i` of `B'` to `-w_i` (all
//! other rows zero). Then `B' A = 0`, and `B = B' + I` has zero columns at
//! every `z_i` and the standard basis row `e_j` at every other row `j`.
//! The degenerate ranks fall out of the same steps: `k = n` gives an empty
//! basis and `B = I`, `k = 0` gives `B' = -I` and `B = 0`.

use super::fieldmat::{left_null_basis, FieldMat};
use crate::error::{Error, Result};
use crate::field::Field;

/// Intermediate objects of the construction (pivots are 0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionTrace<F: Field> {
    pub null_basis: Vec<Vec<F::Elem>>,
    pub rref_rows: Vec<Vec<F::Elem>>,
    pub pivots: Vec<usize>,
    pub b_rows: Vec<Vec<F::Elem>>,
    pub b_prime: FieldMat<F>,
    pub b: FieldMat<F>,
}

pub fn left_identity_factor<F: Field>(a: &FieldMat<F>) -> Result<(FieldMat<F>, ConstructionTrace<F>)> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(a.rows(), a.cols()));
    }
    let f = a.field();
    let n = a.rows();
    let null_basis = left_null_basis(a);
    let stacked = FieldMat::from_rows(f, n, &null_basis)?;
    let (reduced, pivots) = stacked.rref();
    let rref_rows = reduced.row_vecs();

    let mut b_rows = vec![vec![f.zero(); n]; n];
    for (w, &z) in rref_rows.iter().zip(&pivots) {
        b_rows[z] = w.iter().map(|e| f.neg(e)).collect();
    }
    let b_prime = FieldMat::from_rows(f, n, &b_rows)?;
    let b = b_prime.add(&FieldMat::identity(f, n))?;
    let trace = ConstructionTrace {
        null_basis,
        rref_rows,
        pivots,
        b_rows,
        b_prime,
        b: b.clone(),
    };
    Ok((b, trace))
}

/// Checks the full contract of [`left_identity_factor`] for `a`: `B A = A`,
/// `rank B = rank A`, zero columns of `B` at the pivots and identity rows
/// everywhere else.
pub fn check_left_identity<F: Field>(
    a: &FieldMat<F>,
    b: &FieldMat<F>,
    trace: &ConstructionTrace<F>,
) -> Result<()> {
    let fail = |what: &str| Err(Error::Invariant(format!("left identity factor: {what}")));
    let f = a.field();
    let n = a.rows();
    if b.mul(a)? != *a {
        return fail("B A != A");
    }
    if b.rank() != a.rank() {
        return fail("rank B != rank A");
    }
    if trace.pivots.len() != n - a.rank() {
        return fail("pivot count != n - rank A");
    }
    if let Some(z) = trace.pivots.iter().find(|&&z| !b.col_is_zero(z)) {
        return fail(&format!("pivot column {z} of B is nonzero"));
    }
    for j in (0..n).filter(|j| !trace.pivots.contains(j)) {
        let ok = (0..n).all(|c| *b.get(j, c) == if c == j { f.one() } else { f.zero() });
        if !ok {
            return fail(&format!("row {j} of B is not e_{j}"));
        }
    }
    Ok(())
}

/// Writes `c = X Y` with `rank X <= k1` and `rank Y <= k2`.
///
/// `X` is the left-identity factor of `c` (so `rank X = rank c`) and `Y = c`.
/// Fails when `rank c > min(k1, k2)`, since `rank(XY) <= min(rank X, rank Y)`.
pub fn bounded_rank_decompose<F: Field>(
    c: &FieldMat<F>,
    k1: usize,
    k2: usize,
) -> Result<(FieldMat<F>, FieldMat<F>)> {
    if !c.is_square() {
        return Err(Error::DimensionMismatch(c.rows(), c.cols()));
    }
    let n = c.rows();
    if k1 > n || k2 > n {
        return Err(Error::OutOfRange(format!(
            "rank caps k1={k1}, k2={k2} exceed n={n}"
        )));
    }
    let rank = c.rank();
    let cap = k1.min(k2);
    if rank > cap {
        return Err(Error::Infeasible { rank, cap });
    }
    let (x, _) = left_identity_factor(c)?;
    Ok((x, c.clone()))
}
