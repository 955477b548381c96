//! Exact arithmetic in odd finite fields and their polynomial rings.

pub mod factor;
pub mod field;
pub mod poly;

pub use factor::{
    degree_profile, distinct_degree_factorization, equal_degree_factorization,
    extract_quadratic_factor, is_irreducible, is_squarefree, odd_multiplicity_part,
    squarefree_decomposition, squarefree_witness, OddPart, SPLIT_SEED,
};
pub use field::{make_field, FieldElement, FieldOp, FieldSpec, DEFAULT_MAX_ORDER};
pub use poly::{poly_arith, Degree, Poly, PolyOp, PolyValue};
