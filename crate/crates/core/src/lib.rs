//! Finite-group algebra behind the stable classification of p-completed
//! classifying spaces: fusion systems, Burnside modules, Rep/InjRep
//! invariants, and decision procedures for both stable classifications.

mod bitset;
pub mod burnside;
pub mod catalog;
pub mod classify;
pub mod error;
pub mod fp;
pub mod fusion;
pub mod group;
pub mod hom;
pub mod perm;
pub mod repmod;
pub mod subgroup;

pub use burnside::{BisetPair, BurnsideBasis, BurnsideElement};
pub use catalog::{Catalog, CatalogEntry};
pub use classify::{Classifier, ClassifyOptions, Verdict, VerdictKind, Witness};
pub use error::{Error, Result};
pub use fusion::{FusionIsomorphism, FusionSystem};
pub use group::{Caps, FiniteGroup, GroupId};
pub use hom::{HomKind, Homomorphism};
pub use perm::Permutation;
pub use repmod::{MatrixModuleFp, RepSet};
pub use subgroup::{Subgroup, SubgroupClass};
