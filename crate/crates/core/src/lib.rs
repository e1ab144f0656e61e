//! Distance spectra, distance energy and inertia of clique trees, plus
//! harnesses that check the structural and spectral identities these
//! graphs satisfy.
//!
//! - [`graph`]: clique trees, clique paths, distance matrices.
//! - [`spectra`]: Jacobi eigensolver, power iteration, inertia, energy,
//!   exact determinants.
//! - [`quotient`]: the equitable partition of `P_{n₁+1,2,…,2,n₂+1}` and its
//!   quotient matrix.
//! - [`lemmas`]: the α/β/γ quadratic forms and the numeric checks built on
//!   them.
//! - [`enumeration`]: exhaustive clique tree generation and the extremal
//!   distance energy search.
//! - [`sweep`]: grid sweeps shared by the CLI and the acceptance suite.

pub mod enumeration;
pub mod error;
pub mod graph;
pub mod lemmas;
pub mod matrix;
pub mod quotient;
pub mod report;
pub mod spectra;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::{
    balanced_clique_path, build_clique_tree, clique_path, distance_matrix, BlockSpec, CliqueTree,
    DistanceMatrix,
};
pub use matrix::Matrix;
pub use report::{Check, VerificationReport};
pub use spectra::{distance_energy, eig_symmetric, inertia, Inertia, Spectrum};
