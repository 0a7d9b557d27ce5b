//! Koszul complexes of monomial ideals over (multi)graded polynomial rings:
//! exact cycles, boundaries and homology, graded Betti numbers, regularity
//! scans, explicit cycle families and Segre-Veronese syzygies.

pub mod cycles;
pub mod error;
pub mod exterior;
pub mod homology;
pub mod linalg;
pub mod ring;
pub mod scalars;
pub mod veronese;

pub use error::{Error, Result};
pub use exterior::{sign, IndexSet, KoszulChain, TensorChain};
pub use ring::{Monomial, MonomialIdeal, MultiDegree, RingConfig};
pub use scalars::{field_context, Field, FieldContext, FieldKind, PrimeField, Rationals};
