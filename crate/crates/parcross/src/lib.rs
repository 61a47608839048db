//! Computational partial dynamical systems on finite-dimensional C*-algebras.
//!
//! A finite-dimensional C*-algebra is a multi-matrix algebra `⊕_k M_{n_k}(ℂ)`;
//! its two-sided ideals are direct sums of a subset of the blocks.  This crate
//! implements, at that desk scale:
//!
//! * [`fdalg`] — multi-matrix algebras, their elements, ideals,
//!   *-homomorphisms in a canonical (multiplicity matrix + block unitary)
//!   form, and a numerical Wedderburn decomposition of a represented
//!   *-algebra;
//! * [`groups`] — finite groups given by Cayley tables, partial
//!   representations and their defect checks;
//! * [`partial_action`] — partial actions `({D_g}, {α_g})` of a finite group
//!   by partial *-isomorphisms between block ideals, global actions, and
//!   equivariant maps;
//! * [`crossed`] — the associated partial crossed products with their
//!   structure constants, a faithful representation built from a faithful
//!   invariant-enough state, the universal (operator) norm, induced maps
//!   between crossed products, and integrated forms of covariant pairs;
//! * [`inductive`] — finite inductive systems of partial actions with
//!   stage maps, coherence checks, Bratteli bookkeeping and a verifier for
//!   the crossed-product/limit exchange;
//! * [`globalization`] — enveloping (global) actions of partial actions,
//!   equivariant extension of maps to the envelopes, and the
//!   envelope/limit exchange verifier;
//! * [`rokhlin`] — Rokhlin towers for partial actions, their defect report,
//!   a seeded projected-gradient search, and pushforwards along unital
//!   stage maps;
//! * [`traces`] — block-weighted traces, invariance, traces on crossed
//!   products via the conditional expectation, and trace sequences on
//!   inductive systems.
//!
//! Everything is numerical: validators return [`report::Report`]s of named
//! defects compared against a tolerance (default [`DEFAULT_TOL`]), never a
//! bare boolean.  All randomized routines take explicit seeds and are
//! deterministic.

pub mod crossed;
pub mod fdalg;
pub mod fixtures;
pub mod globalization;
pub mod groups;
pub mod inductive;
pub mod linalg;
pub mod partial_action;
pub mod report;
pub mod rokhlin;
pub mod traces;

/// Default numerical tolerance used by validators and membership tests.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Errors surfaced by constructors and operations.
///
/// Validation of *numerical laws* (is this map really multiplicative?) is
/// not an error: those produce [`report::Report`]s.  Errors are reserved for
/// structurally ill-formed inputs and violated preconditions.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Dimension or index data does not fit together.
    #[error("shape error: {0}")]
    Shape(String),
    /// An element lies outside the ideal/domain required by the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A stated precondition fails (non-faithful state, non-equivariant map, ...).
    #[error("precondition error: {0}")]
    Precondition(String),
    /// A configured resource cap was exceeded.
    #[error("resource error: {0}")]
    Resource(String),
    /// A randomized numerical routine exhausted its retry budget.
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
