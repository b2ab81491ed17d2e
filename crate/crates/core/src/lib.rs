//! Exact census engine for products of bounded integer matrices.
//!
//! The crate is organised bottom-up:
//!
//! - [`mat`], [`field`], [`key`]: exact small-matrix arithmetic over the
//!   integers and prime fields, and the canonical byte keys used for hashing.
//! - [`boxes`]: streaming enumeration of the box of `n x n` integer matrices
//!   with entries in `[-H, H]`, plus determinant/rank tallies.
//! - [`census`]: product-set censuses, representation counts, pair counts and
//!   the scalar multiplication table.
//! - [`rank`]: exact RREF, the left-identity factor construction, bounded-rank
//!   factorization, rank counts over `F_q` and exhaustive product-set checks.
//! - [`fuzz`]: seeded random matrices of every rank and the construction
//!   fuzz harness.
//! - [`lab`]: exponent tables, log-log fits and grid experiments.
//!
//! Data-parallel loops run on rayon when the `parallel` feature is enabled
//! (the default) and fall back to plain sequential iteration otherwise. Every
//! result is independent of the worker count.

pub mod boxes;
pub mod census;
pub mod error;
pub mod field;
pub mod fuzz;
pub mod io;
pub mod key;
pub mod lab;
pub mod mat;
pub mod par;
pub mod rank;

pub use boxes::{divisor_count, BoxSpec, DistTable, Filter};
pub use census::{
    census_products, count_pairs, count_solutions, iterate_convolve, scalar_table, CensusResult,
    CountMap, Limits,
};
pub use error::{Error, Result};
pub use field::{Field, PrimeField, Rationals};
pub use key::MatKey;
pub use mat::Mat;
pub use rank::{
    bounded_rank_decompose, check_left_identity, fisher_rank_counts, left_identity_factor, left_null_basis,
    verify_product_set_field, ConstructionTrace, FieldMat, RankProfile,
};
