//! Finite groups given by Cayley tables, with the clique number of the
//! non-commuting graph, counts of distinct centralizers, isoclinism
//! testing with witnesses, and a generated catalog of small groups.

pub mod bitset;
pub mod catalog;
pub mod centralizers;
pub mod clique;
pub mod group;
pub mod iso;
pub mod isoclinism;
pub mod noncommuting;
pub mod perm;
pub mod spec;
pub mod verify;

pub use catalog::{build_catalog, Atlas, AtlasConfig, AtlasFormat, AtlasRecord, Catalog, CatalogEntry, OmegaValue};
pub use centralizers::{centralizer_count, centralizer_set, classify_by_count, Classification};
pub use group::{Elem, Group, GroupError, Quotient, Subgroup};
pub use iso::{find_isomorphism, IsomorphismWitness};
pub use isoclinism::{are_isoclinic, is_stem, Isoclinism, IsoclinismWitness};
pub use noncommuting::{omega, omega_with, Omega, OmegaConfig, OmegaError};
pub use perm::Perm;
pub use spec::{GroupSpec, SpecError};
pub use verify::{Claim, ClaimResult, ClaimStatus, VerifyReport};
