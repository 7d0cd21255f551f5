//! Topology of boolean constraint-satisfaction solution spaces.
//!
//! A formula over `d` variables carves a vertex set out of the cube
//! `{0,1}^d`; the faces of `[0,1]^d` whose vertices all survive form the
//! induced cubical complex, whose homology this crate computes exactly.

pub mod bits;
pub mod constructions;
pub mod cubical;
pub mod error;
pub mod formula;
pub mod homology;
pub mod relations;
pub mod solution_space;
pub mod verify;

pub use constructions::{ClauseClass, ReductionResult, SimplicialComplex};
pub use cubical::{induce_complex, CubicalComplex, Face, IntegerMatrix, FACE_MAX};
pub use error::{Error, Result};
pub use homology::{homology, smith_normal_form, ChainComplex, Coefficients, HomologyProfile, SmithForm};
pub use formula::{AffineSystem, Arg, Clause, Constraint, Formula, Lit};
pub use relations::{Condition, PropertyFlags, Relation, SchaeferVerdict};
pub use solution_space::{enumerate_solutions, VertexSet, D_MAX};
