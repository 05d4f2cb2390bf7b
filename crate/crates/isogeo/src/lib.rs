//! Isoparametric hypersurfaces in S^n x S^m and S^n x H^m: the explicit
//! families, their principal-curvature spectra and focal flows, and the exact
//! rational/polynomial algebra behind the rigidity identities.
//!
//! Layout:
//! - [`spaceforms`]: sphere/hyperboloid factors, product points, exponential maps
//! - [`algebra`]: R/C/H scalar arithmetic and octonion multiplication tables
//! - [`clifford`]: integer Clifford systems {E_a}, {P_a} and the OT-FKM polynomial
//! - [`families`]: the four hypersurface families and their pointwise geometry
//! - [`flows`]: normal/V flows, Riccati evolution, focal detection, Jacobi determinant
//! - [`kac`]: exact tau-Kac matrices, Kronecker sums, coefficient recurrences, rank facts
//! - [`series`]: exact Laurent expansions for the curvature-ladder identities
//! - [`report`]: deterministic JSON/CSV check reports
//! - [`runner`]: the full seeded verification battery used by the CLI

pub mod algebra;
pub mod clifford;
pub mod families;
pub mod flows;
pub mod kac;
pub mod report;
pub mod runner;
pub mod series;
pub mod spaceforms;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed arguments: wrong lengths, out-of-range parameters.
    #[error("usage: {0}")]
    Usage(String),
    /// Point outside a family's domain (e.g. log of a non-positive pairing).
    #[error("domain: {0}")]
    Domain(String),
    /// Gradient too small to normalize: focal/singular level.
    #[error("singular level: {0}")]
    SingularLevel(String),
    /// A numerical procedure left its validity envelope.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// Degenerate configuration (|C| = 1 frames, non-generic tau pairs, ...).
    #[error("degenerate: {0}")]
    Degenerate(String),
    /// No group element can connect the two points.
    #[error("no witness: {0}")]
    NoWitness(String),
}

pub type Result<T> = std::result::Result<T, Error>;
