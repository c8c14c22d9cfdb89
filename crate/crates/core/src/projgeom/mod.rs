//! Finite projective spaces, their involutions and the isospectral-data search.

mod collineation;
mod field;
mod search;
mod space;
mod transplant;

pub use collineation::{enumerate_involutions, Collineation, CollineationError, InvolutionKind, SCAN_LIMIT};
pub use field::{prime_power, FieldError, FiniteField};
pub use search::{constraint_table, pair_key, search_isospectral_data, unmatched, ConstraintCase, ConstraintSolution, IsospectralData};
pub use space::{build_pg, IncidenceMatrix, ProjectiveSpace, SpaceError};

pub use transplant::{
    commutant_basis, commutant_dimension, gluing_matrix, solve_transplantation,
    solve_transplantation_with, word_identity_holds, Boundary, Transplantation, TransplantError,
    EXHAUSTIVE_DIM,
};
