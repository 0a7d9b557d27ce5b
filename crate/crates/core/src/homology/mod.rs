//! Graded pieces of Koszul complexes, their cycles and homology, and Betti
//! numbers of graded subquotient modules.

mod betti;
mod complex;
mod free;
mod module;

pub use betti::{BettiEntry, BettiTable};
pub use complex::{cycle_dim, cycle_space, generates_up_to, homology_dim, GenerationReport, KoszulComplex};
pub use free::{position, FreeModule, ModuleMap};
pub use module::{Element, GradedModule, RegScan, Submodule, TorWitness};
