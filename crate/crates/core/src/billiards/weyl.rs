use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use std::f64::consts::PI;

use super::tile::rational_multiple_of_pi;
use super::unfold::PlanarDomain;
use super::BilliardsError;
use crate::permcat::COLORS;

/// Terms of the small-eigenvalue expansion that any two isospectral
/// billiards share.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylData {
    pub area: f64,
    pub perimeter: f64,
    /// `sum (pi/alpha - alpha/pi) / 24` over the corners.
    pub k: f64,
    /// Boundary corner angles in radians, straight angles left out.
    pub angles: Vec<f64>,
    /// Same angles over pi, when the base angles are rational multiples of pi.
    pub angles_over_pi: Option<Vec<Rational64>>,
    pub k_exact: Option<Rational64>,
}

/// Corner of the domain: `tiles` copies of the base corner at `vertex` meet there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corner {
    pub vertex: usize,
    pub tiles: usize,
    pub closed: bool,
}

/// Corners of a domain found from the gluing combinatorics: around base
/// vertex `v`, the tiles sharing one domain vertex form an orbit of the
/// reflections in the two sides meeting at `v`.
pub fn corners(domain: &PlanarDomain) -> Vec<Corner> {
    let base = &domain.base;
    let d = domain.d();
    let mut partner = vec![[None; COLORS]; d];
    for e in &domain.edges {
        partner[e.a][e.color] = Some(e.b);
        partner[e.b][e.color] = Some(e.a);
    }
    let mut out = Vec::new();
    for v in 0..base.side_count() {
        let [s1, s2] = base.sides_at(v);
        let colors: Vec<usize> = [s1, s2].iter().filter_map(|&s| base.color_of_side(s)).collect();
        let mut seen = vec![false; d];
        for start in 0..d {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut glued = 0;
            let mut i = 0;
            while i < orbit.len() {
                for &c in &colors {
                    if let Some(w) = partner[orbit[i]][c] {
                        glued += 1;
                        if !seen[w] {
                            seen[w] = true;
                            orbit.push(w);
                        }
                    }
                }
                i += 1;
            }
            out.push(Corner {
                vertex: v,
                tiles: orbit.len(),
                closed: colors.len() == 2 && glued / 2 == orbit.len(),
            });
        }
    }
    out
}

fn k_term(alpha: f64) -> f64 {
    (PI / alpha - alpha / PI) / 24.0
}

pub fn weyl_data(domain: &PlanarDomain) -> Result<WeylData, BilliardsError> {
    let base_angles = domain.base.angles();
    let base_rational = domain.base.angles_over_pi();
    let mut angles = Vec::new();
    let mut exact = base_rational.as_ref().map(|_| Vec::new());
    for c in corners(domain) {
        let total = c.tiles as f64 * base_angles[c.vertex];
        if c.closed {
            if (total - 2.0 * PI).abs() > 1e-9 {
                return Err(BilliardsError::ConePoint {
                    vertex: c.vertex,
                    tiles: c.tiles,
                });
            }
            continue;
        }
        if (total - PI).abs() < 1e-9 {
            continue;
        }
        angles.push(total);
        if let (Some(ex), Some(r)) = (exact.as_mut(), base_rational.as_ref()) {
            ex.push(r[c.vertex] * Rational64::from_integer(c.tiles as i64));
        }
    }
    let k = angles.iter().map(|&a| k_term(a)).sum();
    let k_exact = exact.as_ref().map(|ex| {
        ex.iter()
            .map(|&r| (r.recip() - r) / Rational64::from_integer(24))
            .sum()
    });
    Ok(WeylData {
        area: domain.area(),
        perimeter: domain.perimeter(),
        k,
        angles,
        angles_over_pi: exact,
        k_exact,
    })
}

/// `K` of a polygon from its corner angles.
pub fn corner_constant(angles: &[f64]) -> f64 {
    angles.iter().map(|&a| k_term(a)).sum()
}

/// Genus of the translation surface obtained by unfolding a rational polygon
/// with corners `pi m_i / n_i`: `1 + (n/2) sum (m_i - 1)/n_i`, `n` the lcm of
/// the `n_i`.
pub fn translation_surface_genus(angles_over_pi: &[Rational64]) -> Result<i64, BilliardsError> {
    if angles_over_pi.iter().any(|a| !a.is_positive()) {
        return Err(BilliardsError::InvalidAngle("angles must be positive".into()));
    }
    let n = angles_over_pi
        .iter()
        .fold(1i64, |acc, a| acc.lcm(a.denom()));
    let sum: Rational64 = angles_over_pi
        .iter()
        .map(|a| Rational64::new(a.numer() - 1, *a.denom()))
        .sum();
    let g = Rational64::one() + Rational64::new(n, 2) * sum;
    if !g.is_integer() || g < Rational64::zero() {
        return Err(BilliardsError::InvalidAngle(format!(
            "angles do not close up to a surface (g = {g})"
        )));
    }
    Ok(g.to_integer())
}

/// Same as [`translation_surface_genus`] for angles in radians.
pub fn genus_from_radians(angles: &[f64]) -> Result<i64, BilliardsError> {
    let rational = angles
        .iter()
        .map(|&a| {
            rational_multiple_of_pi(a)
                .ok_or_else(|| BilliardsError::InvalidAngle(format!("{a} is not a rational multiple of pi")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    translation_surface_genus(&rational)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn square_is_a_torus() {
        assert_eq!(translation_surface_genus(&[r(1, 2); 4]).unwrap(), 1);
        assert!((corner_constant(&[PI / 2.0; 4]) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn genus_four_corner_set() {
        let mut angles = vec![r(2, 1), r(3, 2), r(3, 2)];
        angles.extend([r(1, 2); 8]);
        assert_eq!(translation_surface_genus(&angles).unwrap(), 4);
    }

    #[test]
    fn single_corner_contribution() {
        // one 3pi/2 corner adds (3 - 1)/2 = 1 per unit n
        let base = translation_surface_genus(&[r(1, 2); 6]).unwrap();
        let more = translation_surface_genus(&[r(1, 2), r(1, 2), r(1, 2), r(1, 2), r(1, 2), r(3, 2)]).unwrap();
        assert_eq!(more - base, 1);
        assert!(genus_from_radians(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn k_terms() {
        for (alpha, k) in [(PI / 2.0, 1.5), (PI / 4.0, 3.75), (3.0 * PI / 4.0, 7.0 / 12.0), (1.5 * PI, -5.0 / 6.0)] {
            assert!((24.0 * k_term(alpha) - k).abs() < 1e-12);
        }
    }
}
