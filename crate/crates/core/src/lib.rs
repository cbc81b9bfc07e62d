//! Finite semigroups, Green's relations and the heights of their posets.
//!
//! The crate covers length-reducing rewriting systems with a zero
//! ([`rewriting`]), multiplication tables ([`semigroup`]), the Green
//! preorders and their class posets ([`green`]), ideal-type substructures
//! and the relative-height bounds that hold for them ([`ideals`]), the
//! concrete constructions attaining those bounds ([`constructions`]), and
//! exhaustive or sampled checking over small tables ([`oracle`],
//! [`search`], [`verify`]).

mod bits;
pub mod constructions;
pub mod green;
pub mod ideals;
pub mod oracle;
pub mod rewriting;
pub mod search;
pub mod semigroup;
pub mod verify;

pub use green::{ClassPoset, GreensRelation};
pub use ideals::{BoundReport, BoundTheorem};
pub use rewriting::{RewritingSystem, Word};
pub use semigroup::{ElementSet, FiniteSemigroup, SubsetHandle, SubsetKind};
