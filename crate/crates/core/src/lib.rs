//! Bi-intuitionistic Kripke models for constructive S4 and its relatives:
//! formula syntax, model checking, frame classification, Σ-bisimulation
//! quotients, bounded countermodel search and a Hilbert proof checker.

pub mod bisim;
pub mod cli;
pub mod formula;
pub mod hilbert;
pub mod kripke;
pub mod search;
pub mod semantics;
pub mod shallow;

pub use formula::{parse, subformulas, Formula, SubformulaSet};
pub use kripke::{Condition, Logic, Model, RawModel, Relation, World};
