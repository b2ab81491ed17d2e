//! Exact linear algebra over `Q` and `F_p`: RREF, left null spaces, the
//! left-identity factor construction, bounded-rank factorization, rank
//! counts over finite fields and exhaustive product-set checks.

mod construct;
mod fieldcensus;
mod fieldmat;
mod fisher;

pub use construct::{bounded_rank_decompose, check_left_identity, left_identity_factor, ConstructionTrace};
pub use fieldcensus::{field_product_set, verify_product_set_field, FieldCensusReport, FIELD_GUARD};
pub use fieldmat::{left_null_basis, FieldMat};
pub use fisher::{fisher_rank_counts, RankProfile};
