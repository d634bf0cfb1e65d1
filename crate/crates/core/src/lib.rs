//! Identity of deductions in freely generated cartesian and symmetric
//! associative categories.
//!
//! The crate decides equality of structural arrow terms through coherence
//! semantics ([`semantics`]), runs bounded congruence closure to detect
//! when added axioms collapse a free category into a preorder
//! ([`engine`]), and checks equational proof scripts about adjunctions
//! ([`proofs`]).

pub mod cli;
pub mod engine;
pub mod frontend;
pub mod gen;
pub mod proofs;
pub mod semantics;
pub mod term;

pub use term::{typecheck, ArrowTerm, Formula, Signature, TypeError};
