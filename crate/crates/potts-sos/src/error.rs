//! Error type shared across the crate.

/// Errors reported by solvers, the enumeration oracle, and constructors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An activity `exp(coupling * beta)` left the positive finite range.
    #[error("activity overflow: {product} = {value:e} makes exp() non-finite or zero")]
    ActivityOverflow { product: String, value: f64 },

    /// A spin value outside `0..=m`.
    #[error("spin {spin} out of range (spins are 0..={m})")]
    SpinOutOfRange { spin: usize, m: usize },

    /// The Hamiltonian needs `(J, Jp, beta)` but the parameters were built
    /// from activities only.
    #[error("couplings unavailable: parameters were constructed from (theta, r) only")]
    CouplingsUnavailable,

    /// An operation restricted to the two-field case was called with m != 2.
    #[error("unsupported field dimension m = {m}; this operation requires m = 2")]
    UnsupportedDimension { m: usize },

    /// A vertex referenced by the compatibility check has no boundary field.
    #[error("no boundary field supplied for vertex {vertex}")]
    MissingField { vertex: usize },

    /// Requested tree is too large to enumerate.
    #[error("tree with {vertices} vertices exceeds the enumeration cap of {cap}")]
    TreeTooLarge { vertices: usize, cap: usize },

    /// Enumeration over all spin configurations would be intractable.
    #[error(
        "enumeration of {configurations:.3e} configurations \
         ({states}^{vertices}) exceeds the cap of {cap} vertices"
    )]
    EnumerationTooLarge {
        vertices: usize,
        states: usize,
        configurations: f64,
        cap: usize,
    },

    /// A precondition on a user-supplied value failed.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An internal cross-check failed; indicates a bug, not bad input.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
