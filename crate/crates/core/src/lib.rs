//! Finite simplicial complexes, the constructions used to compare
//! collapsibility and shellability (subdivision, joins, cube products,
//! tubings, derived neighborhoods) and checkers that return replayable
//! certificates.

pub mod checkers;
pub mod complex;
pub mod constructions;
pub mod error;
pub mod homology;
pub mod iso;
pub mod simplex;
pub mod zoo;

pub use checkers::{CheckOutcome, SearchBudget, SearchStats, Strategy, Verdict};
pub use complex::{FVector, SimplicialComplex};
pub use error::{Result, TopologyError};
pub use homology::betti_z2;
pub use iso::{canonical_key, is_isomorphic, CanonicalKey};
pub use simplex::{Simplex, Vertex};
