//! Splitting Gibbs measures for the Potts-SOS model on the Cayley tree.
//!
//! The model couples an SOS gradient term with a Potts delta term on a
//! rooted tree with k children per vertex and spins in `{0, ..., m}`.
//! Splitting measures correspond to boundary fields satisfying a per-vertex
//! recursion through the transfer map; this crate solves two families of
//! solutions at m = 2 and checks every claim against exhaustive enumeration
//! on finite trees:
//!
//! - [`transfer`]: the Hamiltonian, pair weights, the transfer map for any
//!   m >= 1, and the recursion residual on finite trees.
//! - [`periodic`]: the sublattice-alternating system, its scalar reduction,
//!   fixed-point and two-cycle solvers (closed form at k = 2, bracketed
//!   scan for general k), and the deflated-quadratic discriminant data.
//! - [`phase`]: parameter-plane classification, the special line
//!   r = theta^2, the threshold theta_D, grid scans, and the pure-Potts
//!   audit.
//! - [`enumeration`]: exact finite-volume measures, marginals, and the
//!   successive-volume consistency gap.

pub mod enumeration;
mod error;
mod field;
mod numeric;
pub mod params;
pub mod periodic;
pub mod phase;
mod poly;
pub mod transfer;
pub mod tree;

pub use error::{Error, Result};
pub use field::BoundaryField;
pub use params::ModelParams;
pub use periodic::{DiscriminantReport, Period2Point, QuadraticCoeffs, TwoCycle};
pub use phase::{GridSpec, PhaseLabel, PhasePoint};
pub use tree::{FieldAssignment, FiniteTree, Parity, SpinConfiguration};
