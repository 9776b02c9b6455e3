//! Bilinear multiplication algorithms: representation, exact verification,
//! combinators, and exact rank of tiny algebras.

pub mod algorithm;
pub mod certificate;
pub mod combinators;
pub mod format;
pub mod rank;

pub use algorithm::{BilinearAlgorithm, Verdict};
pub use certificate::{BoundCertificate, Strategy};
pub use combinators::{
    concatenate, descend, direct_sum, direct_sum_all, identity, naive_symmetric, restrict, symmetrize, tensor_product, Restriction,
};
pub use format::{parse_algorithm, parse_constants, write_algorithm, write_constants};
pub use rank::{brute_force_rank, brute_force_witness, brute_force_witness_within, codes, lower_bounds, mutually_intersecting, s3_counterexample_witness, RankResult};
