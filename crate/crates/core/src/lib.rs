//! Isospectral billiards built from permutation data.
//!
//! The crate is organised around the pipeline that takes a pair of involution
//! triples (one per billiard) to a verified isospectral pair:
//!
//! * [`permcat`]: permutations, the bundled catalog of known pairs, colored
//!   involution graphs and their trace-based graph isospectrality check.
//! * [`projgeom`]: finite projective spaces, incidence matrices, collineation
//!   involutions, the search for isospectral data and transplantation solving.
//! * [`billiards`]: unfolding a base tile into a planar domain, Weyl-expansion
//!   data and translation-surface genus.
//! * [`numspec`]: finite-difference Dirichlet spectra, triangular states,
//!   eigenvector transplantation, nodal counts and mixed-boundary pairs.
//! * [`modematch`]: the mode-matching determinant for the half-square pair.
//! * [`lengths`]: closed-lift counts and isolength checks.
//! * [`tori`]: lattices, theta series and isospectral flat tori.
//! * [`liegeom`]: spectra of generalized polygons.
//! * [`cli`]: the `isodrum` command-line front end.

pub mod billiards;
pub mod cli;
pub mod lengths;
pub mod liegeom;
pub mod matrix;
pub mod modematch;
pub mod numspec;
pub mod permcat;
pub mod projgeom;
pub mod tori;
