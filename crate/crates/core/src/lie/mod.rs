//! Multilinear commutators and their tensor expansions.

pub mod degree_five;
pub mod matrix;
pub mod tree;

pub use degree_five::{
    appendix_identities, appendix_rhs_report, basis_commutators, build_expansion_matrix, to_basis,
    verify_appendix_identity, verify_lemma_w, Identity, LemmaReport,
};
pub use matrix::{rank_kernel, RationalMatrix};
pub use tree::{expand_tree, permutations, CommTree, TensorVec};
