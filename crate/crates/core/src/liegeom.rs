//! Collinearity spectra of thick generalized polygons.
//!
//! The point graph of a generalized `n`-gon of order `(s, t)` is distance
//! regular, so its distinct eigenvalues are those of the small tridiagonal
//! intersection matrix. Every eigenvalue has the shape `a + b sqrt(r)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use nalgebra::DMatrix;
use thiserror::Error;

/// Agreement required between closed-form and numeric eigenvalues.
pub const CROSS_CHECK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LiegeomError {
    #[error("no finite thick generalized {0}-gon exists (n must be 3, 4, 6 or 8)")]
    InvalidGon(u32),
    #[error("order ({s}, {t}) is not thick")]
    NotThick { s: u32, t: u32 },
    #[error("a projective plane needs s = t, got ({s}, {t})")]
    UnequalPlaneOrder { s: u32, t: u32 },
    #[error("closed form and intersection matrix differ by {0:e}")]
    CrossCheck(f64),
}

/// `a + b sqrt(r)` with `r` squarefree, and `b = 0, r = 1` for integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Surd {
    pub a: i64,
    pub b: i64,
    pub r: i64,
}

impl Surd {
    pub fn int(a: i64) -> Surd {
        Surd { a, b: 0, r: 1 }
    }

    /// `a + b sqrt(r)` normalised so equal numbers compare equal.
    pub fn new(a: i64, b: i64, r: i64) -> Surd {
        assert!(r >= 0, "negative radicand");
        let (mut b, mut r) = (b, r);
        let mut f = 2;
        while f * f <= r {
            while r % (f * f) == 0 {
                r /= f * f;
                b *= f;
            }
            f += 1;
        }
        match (b, r) {
            (_, 0) | (0, _) => Surd::int(a),
            (b, 1) => Surd::int(a + b),
            _ => Surd { a, b, r },
        }
    }

    pub fn value(&self) -> f64 {
        self.a as f64 + self.b as f64 * (self.r as f64).sqrt()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.b {
            0 => write!(f, "{}", self.a),
            b if b > 0 => write!(f, "{}+{}*sqrt({})", self.a, b, self.r),
            b => write!(f, "{}-{}*sqrt({})", self.a, -b, self.r),
        }
    }
}

/// Distinct eigenvalues of the collinearity matrix.
#[derive(Debug, Clone)]
pub struct GpSpectrum {
    pub gon: u32,
    pub s: u32,
    pub t: u32,
    /// Exact values, ascending.
    pub exact: Vec<Surd>,
    /// Eigenvalues of the intersection matrix, ascending.
    pub numeric: Vec<f64>,
    /// Largest `|exact - numeric|`.
    pub deviation: f64,
}

impl GpSpectrum {
    /// Number of points: `s^2 + s + 1` for planes, otherwise
    /// `(1 + s)(1 + st + ... + (st)^(n/2 - 1))`.
    pub fn points(&self) -> u64 {
        let (s, t) = (self.s as u64, self.t as u64);
        if self.gon == 3 {
            return s * s + s + 1;
        }
        (1 + s) * (0..self.gon / 2).map(|i| (s * t).pow(i)).sum::<u64>()
    }
}

fn check(gon: u32, s: u32, t: u32) -> Result<(), LiegeomError> {
    if ![3, 4, 6, 8].contains(&gon) {
        return Err(LiegeomError::InvalidGon(gon));
    }
    if s < 2 || t < 2 {
        return Err(LiegeomError::NotThick { s, t });
    }
    if gon == 3 && s != t {
        return Err(LiegeomError::UnequalPlaneOrder { s, t });
    }
    Ok(())
}

/// Closed-form distinct eigenvalues.
pub fn closed_form(gon: u32, s: u32, t: u32) -> Result<Vec<Surd>, LiegeomError> {
    check(gon, s, t)?;
    let (s, t) = (s as i64, t as i64);
    let mut v = match gon {
        3 => vec![Surd::int(-1), Surd::int(s * s + s)],
        4 => vec![Surd::int(-t - 1), Surd::int(s - 1), Surd::int(s * (t + 1))],
        6 => vec![
            Surd::int(-t - 1),
            Surd::int(s * (t + 1)),
            Surd::new(s - 1, -1, s * t),
            Surd::new(s - 1, 1, s * t),
        ],
        _ => vec![
            Surd::int(-t - 1),
            Surd::int(s - 1),
            Surd::int(s * (t + 1)),
            Surd::new(s - 1, -1, 2 * s * t),
            Surd::new(s - 1, 1, 2 * s * t),
        ],
    };
    v.sort_by(|x, y| x.value().total_cmp(&y.value()));
    v.dedup();
    Ok(v)
}

/// Tridiagonal intersection matrix of the point graph, rows as in
/// `(0 1; k a1 c2; b1 a2 ...)`.
pub fn intersection_matrix(gon: u32, s: u32, t: u32) -> Result<DMatrix<f64>, LiegeomError> {
    check(gon, s, t)?;
    let (s, t) = (s as f64, t as f64);
    let diameter = (gon / 2) as usize;
    let k = s * (t + 1.0);
    let mut m = DMatrix::zeros(diameter + 1, diameter + 1);
    m[(0, 1)] = 1.0;
    m[(1, 0)] = k;
    for j in 1..=diameter {
        let last = j == diameter;
        let c = if last { t + 1.0 } else { 1.0 };
        m[(j, j)] = if last { (t + 1.0) * (s - 1.0) } else { s - 1.0 };
        if j >= 2 {
            m[(j - 1, j)] = c;
        }
        if !last && j >= 1 {
            m[(j + 1, j)] = s * t;
        }
    }
    if gon == 3 {
        // the plane is complete: k = s^2 + s, a1 = k - 1
        m[(1, 0)] = s * s + s;
        m[(1, 1)] = s * s + s - 1.0;
    }
    Ok(m)
}

/// Eigenvalues of the intersection matrix via its symmetrisation.
fn numeric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut sym = DMatrix::zeros(n, n);
    for i in 0..n {
        sym[(i, i)] = m[(i, i)];
        if i + 1 < n {
            let off = (m[(i, i + 1)] * m[(i + 1, i)]).sqrt();
            sym[(i, i + 1)] = off;
            sym[(i + 1, i)] = off;
        }
    }
    let mut e: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Distinct eigenvalues computed both ways and cross-checked.
pub fn gp_spectrum(gon: u32, s: u32, t: u32) -> Result<GpSpectrum, LiegeomError> {
    let exact = closed_form(gon, s, t)?;
    let numeric = numeric_eigenvalues(&intersection_matrix(gon, s, t)?);
    if numeric.len() != exact.len() {
        return Err(LiegeomError::CrossCheck(f64::INFINITY));
    }
    let deviation = exact
        .iter()
        .zip(&numeric)
        .map(|(x, y)| (x.value() - y).abs())
        .fold(0.0, f64::max);
    if deviation > CROSS_CHECK_TOL {
        return Err(LiegeomError::CrossCheck(deviation));
    }
    Ok(GpSpectrum { gon, s, t, exact, numeric, deviation })
}

/// Whether distinct orders in `grid` always give distinct spectra.
pub fn spectrum_determines_order(gon: u32, grid: &[(u32, u32)]) -> Result<bool, LiegeomError> {
    let orders: BTreeSet<(u32, u32)> = grid.iter().copied().collect();
    let mut seen: HashMap<Vec<Surd>, (u32, u32)> = HashMap::new();
    for (s, t) in orders {
        let spec = gp_spectrum(gon, s, t)?.exact;
        if seen.insert(spec, (s, t)).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All thick orders with `s, t <= max` (diagonal only for planes).
pub fn thick_grid(gon: u32, max: u32) -> Vec<(u32, u32)> {
    (2..=max)
        .flat_map(|s| (2..=max).map(move |t| (s, t)))
        .filter(|&(s, t)| gon != 3 || s == t)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surd_normalisation() {
        assert_eq!(Surd::new(1, 1, 4), Surd::int(3));
        assert_eq!(Surd::new(0, 1, 12), Surd { a: 0, b: 2, r: 3 });
        assert_eq!(Surd::new(5, 3, 0), Surd::int(5));
        assert_eq!(Surd::new(1, -2, 8).to_string(), "1-4*sqrt(2)");
    }

    #[test]
    fn quadrangle_two_two() {
        let g = gp_spectrum(4, 2, 2).unwrap();
        assert_eq!(g.exact, vec![Surd::int(-3), Surd::int(1), Surd::int(6)]);
        assert!(g.deviation < 1e-12);
        assert_eq!(g.points(), 15);
    }

    #[test]
    fn plane_of_order_two() {
        let g = gp_spectrum(3, 2, 2).unwrap();
        assert_eq!(g.exact, vec![Surd::int(-1), Surd::int(6)]);
        assert_eq!(g.points(), 7);
        assert!(matches!(gp_spectrum(3, 2, 3), Err(LiegeomError::UnequalPlaneOrder { .. })));
    }

    #[test]
    fn hexagon_and_octagon_surds() {
        let h = gp_spectrum(6, 2, 8).unwrap();
        assert!(h.exact.contains(&Surd::new(1, 1, 16)));
        assert!(h.exact.contains(&Surd::int(-3)));
        let o = gp_spectrum(8, 2, 4).unwrap();
        assert!(o.exact.contains(&Surd::new(1, -1, 16)));
        let o = gp_spectrum(8, 3, 5).unwrap();
        assert!(o.exact.contains(&Surd::new(2, 1, 30)));
        assert_eq!(o.exact.len(), 5);
    }

    #[test]
    fn extremes_are_regular_degree_and_minus_t_minus_one() {
        for gon in [3, 4, 6, 8] {
            for (s, t) in thick_grid(gon, 12) {
                let g = gp_spectrum(gon, s, t).unwrap();
                let k = if gon == 3 { s * s + s } else { s * (t + 1) };
                assert_eq!(*g.exact.last().unwrap(), Surd::int(k as i64));
                let low = if gon == 3 { -1 } else { -(t as i64) - 1 };
                assert_eq!(g.exact[0], Surd::int(low));
            }
        }
    }

    #[test]
    fn invalid_orders() {
        assert_eq!(gp_spectrum(5, 2, 2).unwrap_err(), LiegeomError::InvalidGon(5));
        assert!(matches!(gp_spectrum(4, 1, 2), Err(LiegeomError::NotThick { .. })));
    }

    #[test]
    fn injective_on_small_grids() {
        for gon in [3, 4, 6, 8] {
            assert!(spectrum_determines_order(gon, &thick_grid(gon, 32)).unwrap());
        }
        assert!(spectrum_determines_order(4, &[(3, 5), (3, 5)]).unwrap());
    }
}
