//! Exact computational geometry for plane curves under Cremona transformations.
//!
//! The crate works over the rational numbers throughout: points and lines in
//! the projective plane, homogeneous forms, linear systems of curves with
//! assigned base multiplicities, and plane Cremona maps (quadratic, tangent
//! quadratic, de Jonquieres) with verified inverses.
//!
//! On top of that sit the pieces specific to unions of lines:
//!
//! * [`arrangement`]: line arrangements, their incidence configurations and
//!   numerical types;
//! * [`realize`]: seeded construction of arrangements with prescribed
//!   incidences;
//! * [`linsys`]: exact dimensions of linear systems (adjoint systems in
//!   particular), with a fast modular path certified by exact kernel vectors;
//! * [`cremona_map`] and [`curve`]: maps, pushforwards of possibly reducible
//!   curves, and invariants of the images;
//! * [`classify`], [`search`], [`certificate`]: the contractibility verdict
//!   for a given arrangement, together with machine-checkable evidence in
//!   both directions (a step-by-step contraction, or an explicit member of an
//!   adjoint system that obstructs it).
//!
//! Everything is deterministic: randomized constructions take an explicit
//! seed and all serialized output uses stable orderings.

pub mod arrangement;
pub mod certificate;
pub mod classify;
pub mod cremona_map;
pub mod curve;
pub mod linsys;
pub mod poly;
pub mod projective;
pub mod rational;
pub mod realize;
pub mod search;

use thiserror::Error;

/// Errors surfaced by the engine.
///
/// Domain failures (inadmissible input, unsatisfiable construction) are kept
/// separate from internal consistency checks; the latter indicate a bug and
/// are never expected to fire.
#[derive(Debug, Error)]
pub enum EngineError {
    /// Input text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// The requested object is not well formed (repeated lines, bad
    /// multiplicities, inconsistent configuration).
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A construction with a genericity requirement ran out of retries.
    #[error("construction failed: {0}")]
    Construction(String),
    /// A map could not be built from the given base scheme.
    #[error("inadmissible base scheme: {0}")]
    BaseScheme(String),
    /// The operation is defined, but not for this argument.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An internal cross-check failed; this is a bug in the engine.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, EngineError>;
