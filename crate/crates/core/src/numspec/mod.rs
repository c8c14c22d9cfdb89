//! Finite-difference Dirichlet spectra of unfolded domains.

mod eigen;
mod grid;
mod mixed;
mod output;
mod states;

use std::f64::consts::PI;

use thiserror::Error;

pub use eigen::{smallest_eigenpairs, EigenPair, EnvelopeCholesky, SymSparse, RESIDUAL_TOL};
pub use grid::GridDomain;
pub use mixed::mixed_bc_pair_spectra;
pub use output::{field_csv, field_pgm, parse_field_csv, parse_pgm, parse_spectrum_csv, spectrum_csv};
pub use states::{
    eigenspace_overlap, fd_residual, nodal_count, transplant_eigenvector, triangular_state,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumspecError {
    #[error("domain does not fit the grid: {0}")]
    NotGridAligned(String),
    #[error("{requested} modes requested but the grid has {nodes} interior nodes")]
    TooManyModes { requested: usize, nodes: usize },
    #[error("eigensolver converged on {found} of {requested} modes")]
    NotConverged { found: usize, requested: usize },
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("tile counts differ: {a} vs {b}")]
    SizeMismatch { a: usize, b: usize },
    #[error("the two grids are not compatible")]
    GridMismatch,
    #[error("transplanted function vanishes; check the sign matrix")]
    ZeroTransplant,
    #[error("triangular state needs m > n >= 1, got ({m}, {n})")]
    InvalidState { m: u32, n: u32 },
}

/// Lowest eigenvalues of a grid domain, over `pi^2/d^2`, ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors by node, with `sum v^2 h^2 = 1`.
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    /// `|Av - lv| / |A|` per mode.
    pub residuals: Vec<f64>,
}

/// The `count` smallest eigenvalues of the five-point Dirichlet Laplacian.
pub fn fd_spectrum(grid: &GridDomain, count: usize) -> Result<Spectrum, NumspecError> {
    let a = grid.laplacian();
    let pairs = smallest_eigenpairs(&a, count, 0x5eed)?;
    let unit = PI * PI / (grid.d * grid.d);
    let mut eigenvalues = Vec::with_capacity(count);
    let mut vectors = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    for p in pairs {
        eigenvalues.push(p.value / unit);
        residuals.push(p.residual);
        let mut v = p.vector;
        // fix the sign so the largest entry is positive
        let big = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        let s = big.signum() / grid.h;
        v.iter_mut().for_each(|x| *x *= s);
        vectors.push(v);
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: Some(vectors),
        residuals,
    })
}

/// `(4 E(h/2) - E(h)) / 3`, mode by mode.
pub fn richardson(coarse: &[f64], fine: &[f64]) -> Vec<f64> {
    coarse
        .iter()
        .zip(fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect()
}

/// `N(E) - (A/4pi) E + (L/4pi) sqrt(E) - K` at each eigenvalue (over
/// `pi^2/d^2`), counting the eigenvalue itself as one half.
pub fn weyl_remainder(eigenvalues: &[f64], d: f64, area: f64, perimeter: f64, k: f64) -> Vec<f64> {
    let unit = PI * PI / (d * d);
    eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let e = e * unit;
            i as f64 + 0.5 - area / (4.0 * PI) * e + perimeter / (4.0 * PI) * e.sqrt() - k
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiards::{unfold, BaseTile};
    use crate::permcat::{catalog, find_pair, ColoredGraph};

    fn domain_7_3(tile: &BaseTile) -> (GridDomain, GridDomain) {
        let (ga, gb) = find_pair(&catalog(), "7_3").unwrap().graphs().unwrap();
        let a = unfold(tile, &ga, 0).unwrap();
        let b = unfold(tile, &gb, 0).unwrap();
        (GridDomain::new(&a, 1.0, 20).unwrap(), GridDomain::new(&b, 1.0, 20).unwrap())
    }

    #[test]
    fn unit_square_ground_state() {
        let tile = BaseTile::rectangle(1.0, 1.0).unwrap();
        let dom = unfold(&tile, &ColoredGraph::from_edges(1, &[]).unwrap(), 0).unwrap();
        let n = 64;
        let grid = GridDomain::new(&dom, 1.0, n).unwrap();
        let s = fd_spectrum(&grid, 3).unwrap();
        let h = 1.0 / n as f64;
        let exact = 8.0 / (h * h) * (PI * h / 2.0).sin().powi(2) / (PI * PI);
        assert!((s.eigenvalues[0] - exact).abs() < 1e-9);
        assert!((s.eigenvalues[0] - 2.0).abs() < 2e-3);
        // second value is double
        assert!((s.eigenvalues[1] - s.eigenvalues[2]).abs() < 1e-9);
        assert!(s.residuals.iter().all(|&r| r <= RESIDUAL_TOL));
    }

    #[test]
    fn half_square_ground_state_is_five() {
        let tile = BaseTile::half_square(1.0).unwrap();
        let dom = unfold(&tile, &ColoredGraph::from_edges(1, &[]).unwrap(), 0).unwrap();
        let grid = GridDomain::new(&dom, 1.0, 40).unwrap();
        let s = fd_spectrum(&grid, 1).unwrap();
        assert!((s.eigenvalues[0] / 5.0 - 1.0).abs() < 5e-3);
        let (t, e) = triangular_state(2, 1, &grid).unwrap();
        assert_eq!(e, 5.0);
        assert_eq!(nodal_count(&t, &grid), 1);
        assert!(triangular_state(2, 2, &grid).is_err());
    }

    #[test]
    fn identity_transplant_is_identity() {
        let (a, _) = domain_7_3(&BaseTile::half_square(1.0).unwrap());
        let s = fd_spectrum(&a, 1).unwrap();
        let phi = &s.eigenvectors.as_ref().unwrap()[0];
        let psi = transplant_eigenvector(&crate::matrix::IntMatrix::identity(7), phi, &a, &a).unwrap();
        assert!(psi.iter().zip(phi).all(|(x, y)| (x - y).abs() < 1e-14));
        assert_eq!(nodal_count(phi, &a), 1);
    }

    #[test]
    fn triangular_state_lives_on_both_domains() {
        let (a, b) = domain_7_3(&BaseTile::half_square(1.0).unwrap());
        for g in [&a, &b] {
            let (t, e) = triangular_state(2, 1, g).unwrap();
            let r = fd_residual(g, &t, e);
            let norm = (t.iter().map(|x| x * x).sum::<f64>()).sqrt();
            assert!(norm > 1.0);
            // discrete eigenvalue differs from the continuum one by O(h^2)
            assert!(r / (5.0 * PI * PI) < 0.01, "{r}");
        }
    }
}
