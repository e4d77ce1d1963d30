//! Exact covering systems of the integers.
//!
//! An exact covering system is a finite multiset of arithmetic progressions
//! `a(n) = a + nZ` that partitions `Z`. This crate verifies exactness three
//! independent ways, splits and merges progressions, reduces systems by
//! consolidating prime-order cosets found through exact cyclotomic
//! arithmetic, decides irreducibility and naturality, and enumerates small
//! systems exhaustively.

pub mod arith;
pub mod cyclotomic;
pub mod ecs;
pub mod error;
pub mod format;
pub mod generate;
pub mod reduction;
pub mod verify;

pub use arith::{factorize, FactoredInteger};
pub use cyclotomic::{
    coset_vector, cyclotomic_polynomial, decompose, find_coset, lemma1_quotient, vanishes,
    CosetTerm, CycVector,
};
pub use ecs::{irreducible_example, normalize, Ecs, ResidueClass};
pub use error::{Error, Result};
pub use generate::{
    enumerate_ecs, enumerate_ecs_with_limit, generate_natural, generate_natural_with, GenOptions,
};
pub use reduction::{
    check_corollary2, is_irreducible, is_natural, is_prime_split, merge, merge_candidates,
    reduce_step, reduce_to_trivial, split, Corollary2Report, MergeCandidate, ReductionTrace,
    SplitStep,
};
pub use verify::{stats, verify_crt, verify_genfun, verify_scan, CoverReport};
