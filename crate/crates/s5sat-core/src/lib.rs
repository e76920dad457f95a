//! Satisfiability toolkit for modal logic S5.
//!
//! The pipeline: parse a formula, rewrite it into S5 normal form, compile
//! the normal form into propositional CNF (Herbrand expansion, the guarded
//! `full` variant, or the propagation-pruned `reach` variant, optionally
//! enriched with conflict, box-subset and diamond-subset clauses), decide it
//! with the embedded solver, and rebuild a Kripke model that is verified
//! against the original formula. The same normal form can also be emitted
//! as answer-set-programming facts and rule programs for an external
//! grounder.
//!
//! The crate is `no_std` (alloc required); anything that needs a clock or a
//! filesystem lives in the companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod asp;
pub mod encoder;
pub mod formula;
pub mod gen;
pub mod kripke;
pub mod normalizer;
pub mod oracle;
pub mod parser;
pub mod s5nf;
pub mod sat;

pub use encoder::{CnfInstance, EncodingKind, EnrichmentSet};
pub use formula::{Atom, Formula, PropLiteral};
pub use kripke::KripkeModel;
pub use normalizer::normalize;
pub use parser::{parse, render, SourceFormat};
pub use s5nf::S5Nf;
pub use sat::{Outcome, SolverMode, TimedOut};
