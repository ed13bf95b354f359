//! Exact computation with finite-dimensional associative algebras and
//! generalized path algebras.
//!
//! The crate is organized bottom-up:
//!
//! * [`field`], [`linalg`], [`poly`]: exact scalars, dense linear algebra and
//!   univariate polynomials.
//! * [`algebra`]: algebras by structure constants, ideals, quotients, the
//!   Jacobson radical and the center.
//! * [`idempotent`]: complete sets of orthogonal idempotents, generalized
//!   matrix decompositions, idempotent lifting and Wedderburn blocks.
//! * [`gpa`]: quivers with vertex algebras and truncated generalized path
//!   algebras with relations.
//! * [`presentation`]: Wedderburn–Malcev splittings and quiver-with-relations
//!   presentations of split algebras.
//! * [`representations`]: module systems, local unitary modules and quiver
//!   representations.
//! * [`grading`]: gradations induced by idempotent decompositions.
//!
//! Everything is exact; there is no floating point anywhere.

pub mod algebra;
pub mod field;
pub mod gpa;
pub mod grading;
pub mod idempotent;
pub mod linalg;
pub mod models;
pub mod par;
pub mod poly;
pub mod presentation;
pub mod representations;

pub use algebra::{FdAlgebra, Ideal, RadicalData};
pub use field::{Field, FieldDescriptor, PrimeField, Rationals};
pub use linalg::{Matrix, Subspace};
