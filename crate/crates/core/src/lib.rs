//! Differentiable feasibility pump for binary mixed-integer linear programs.
//!
//! The classic feasibility pump alternates between solving an LP relaxation
//! and rounding its solution. This crate expresses that loop as gradient
//! descent on the LP cost vector: the relaxation is solved for a cost vector
//! `theta`, a loss measuring non-integrality and rounded-point infeasibility is
//! evaluated, and `theta` is updated along a surrogate gradient. With the
//! `FP` preset the iterates coincide exactly with the original pump.
//!
//! Modules, bottom-up:
//!
//! * [`model`]: canonical `min c'x, Ax >= b` instances and point tests.
//! * [`ingest`]: MPS and fixture parsing, canonicalization.
//! * [`simplex`]: deterministic bounded-variable primal simplex.
//! * [`losses`]: integrality, feasibility, cost and regularization terms.
//! * [`diffopt`]: surrogate Jacobians and the chain-rule gradient.
//! * [`engine`]: the original pump, the differentiable pump, restarts, presets.
//! * [`generate`]: random and structured instance generators.

pub mod diffopt;
pub mod engine;
mod error;
pub mod generate;
pub mod ingest;
pub mod losses;
pub mod model;
pub mod simplex;

pub use error::{Error, Result};
pub use model::{MilpInstance, Point, SparseRow, VarKind, DEFAULT_TOL};
