//! Flat tori: lattices, theta series and isospectral pairs.
//!
//! The torus `R^n / L*` has eigenvalues `4 pi^2 |x|^2` for `x` in `L`, so two
//! tori are isospectral when the theta series of `L` agree.

mod lattice;
mod theta;

use thiserror::Error;

pub use lattice::{determinant, inverse, Lattice, Q};
pub use theta::{
    compare_isometry, first_shell_even, jacobi_check, lll, milnor_ball_check, minimum,
    reduced_gram_entries, shell_invariant, theta, theta_with_budget, IsometryVerdict, ThetaCoeffs, NODE_BUDGET,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToriError {
    #[error("Gram matrix must be square and nonempty")]
    Shape,
    #[error("Gram matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("parameters must be positive")]
    Parameters,
    #[error("bound must be positive")]
    Bound,
    #[error("enumeration exceeded {0} nodes")]
    Budget(u64),
    #[error("ranks differ: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("extension vector too long: eps^2 = {eps2}, minimum = {min}")]
    ExtensionTooLong { eps2: String, min: String },
    #[error("unknown lattice {0:?}")]
    UnknownLattice(String),
    #[error("lattice file: {0}")]
    Format(String),
}
