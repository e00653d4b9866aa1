//! Bipartite entangled stabilizer MUBs as maximum cliques of Cayley graphs.
//!
//! For a prime `p`, every matrix `F` in `SL(2,Z_p)` labels an orthonormal
//! basis of maximally entangled stabilizer states in dimension `p^2`.  Two
//! such bases are mutually unbiased exactly when `Tr(F_i^-1 F_j) != 2 (mod p)`,
//! which turns the hunt for complete sets of bipartite entangled stabilizer
//! MUBs into a maximum-clique problem on a Cayley graph over `SL(2,Z_p)`.
//!
//! The crate is organised around that correspondence:
//!
//! - [`modp`]: exact arithmetic in `Z_p` and `SL(2,Z_p)`.
//! - [`graph`]: the Cayley graph, its row coloring and DIMACS export.
//! - [`clique`]: clique certificates, subgroup/coset/constructive builders,
//!   exact branch-and-bound and heuristic search, verification.
//! - [`oracle`]: independent numerical ground truth via explicit Clifford
//!   unitaries and their Jamiolkowski states, plus reconstruction of local
//!   maximally mixed operators from MUB statistics.
//! - [`pauli`]: weight-two Pauli observables and the stabilizer classes
//!   attached to each basis.
//! - [`spectral`]: adjacency spectra of the graph and its complement, and the
//!   chromatic/independence bounds they imply.

pub mod clique;
pub mod graph;
pub mod modp;
pub mod oracle;
pub mod pauli;
pub mod spectral;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {p} exceeds the configured cap {max}")]
    PrimeTooLarge { p: u64, max: u64 },
    #[error("matrices have mismatched moduli ({0} vs {1})")]
    ModulusMismatch(u64, u64),
    #[error("determinant is {det}, not 1 (mod {p})")]
    NotUnimodular { det: u64, p: u64 },
    #[error("operation not supported for p = {p}: {reason}")]
    UnsupportedPrime { p: u64, reason: &'static str },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("certificate has not passed graph verification")]
    UnverifiedCertificate,
    #[error("probability table is inconsistent: {0}")]
    InconsistentProbabilities(String),
    #[error("matrix is not Hermitean within tolerance")]
    NotHermitean,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
