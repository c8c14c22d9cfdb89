use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::space::ProjectiveSpace;
use crate::permcat::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollineationError {
    #[error("scan of {0} matrices exceeds the enumeration limit")]
    TooLarge(u128),
}

/// Upper bound on `q^((n+1)^2)` times the number of field automorphisms scanned.
pub const SCAN_LIMIT: u128 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InvolutionKind {
    Identity,
    /// Fixes a hyperplane pointwise and no point off it.
    Elation,
    /// Fixes a hyperplane pointwise and one point off it.
    Homology,
    /// Semilinear: fixes a Baer subspace.
    Baer,
    /// Any other linear involution; records the number of fixed points.
    Linear { fixed: usize },
}

/// `x -> A x^sigma`, with `sigma = frobenius^auto_exponent`.
#[derive(Debug, Clone)]
pub struct Collineation {
    pub matrix: Vec<Vec<u8>>,
    pub auto_exponent: u32,
    pub points: Permutation,
    pub hyperplanes: Permutation,
    pub kind: InvolutionKind,
}

impl Collineation {
    pub fn fixed_points(&self) -> usize {
        self.points.fixed_count()
    }

    pub fn is_identity(&self) -> bool {
        self.points.is_identity()
    }
}

/// Every collineation of order at most 2 in the full collineation group,
/// the identity included, each tagged with its type.
pub fn enumerate_involutions(space: &ProjectiveSpace) -> Result<Vec<Collineation>, CollineationError> {
    let f = space.field();
    let q = f.order();
    let dim = space.n + 1;
    let entries = dim * dim;
    let autos: Vec<u32> = (0..f.degree())
        .filter(|&e| (2 * e) % f.degree() == 0)
        .collect();
    let scan = (q as u128).pow(entries as u32) * autos.len() as u128;
    if scan > SCAN_LIMIT {
        return Err(CollineationError::TooLarge(scan));
    }
    let npts = space.point_count();
    let frob_points: Vec<Vec<Vec<u8>>> = autos
        .iter()
        .map(|&e| {
            space
                .points()
                .iter()
                .map(|p| p.iter().map(|&c| f.frobenius(c, e)).collect())
                .collect()
        })
        .collect();
    let hyperplane_by_points: HashMap<Vec<usize>, usize> = (0..npts)
        .map(|h| (space.hyperplane_points(h).to_vec(), h))
        .collect();

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    let mut a = vec![0u8; entries];
    let mut image = vec![0u8; dim];
    let mut perm = vec![0usize; npts];
    for (ai, &e) in autos.iter().enumerate() {
        let pts = &frob_points[ai];
        for code in 0..(q as u128).pow(entries as u32) {
            let mut c = code;
            for x in a.iter_mut() {
                *x = (c % q as u128) as u8;
                c /= q as u128;
            }
            let mut ok = true;
            for (i, p) in pts.iter().enumerate() {
                for r in 0..dim {
                    let mut s = 0u8;
                    for (col, &pc) in p.iter().enumerate() {
                        s = f.add(s, f.mul(a[r * dim + col], pc));
                    }
                    image[r] = s;
                }
                match space.point_of(&image) {
                    Some(j) => perm[i] = j,
                    None => {
                        ok = false;
                        break;
                    }
                }
                // involution check as soon as the partner is known
                if perm[i] < i && perm[perm[i]] != i {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            // reject non-bijective images and non-involutions
            let Ok(p) = Permutation::from_images(perm.clone()) else {
                continue;
            };
            if !p.is_involution() || !seen.insert(perm.clone()) {
                continue;
            }
            let hyper: Vec<usize> = (0..npts)
                .map(|h| {
                    let mut img: Vec<usize> =
                        space.hyperplane_points(h).iter().map(|&x| perm[x]).collect();
                    img.sort_unstable();
                    hyperplane_by_points[&img]
                })
                .collect();
            let hyperplanes = Permutation::from_images(hyper).expect("collineation");
            let kind = classify(space, &p, e != 0);
            out.push(Collineation {
                matrix: a.chunks(dim).map(|r| r.to_vec()).collect(),
                auto_exponent: e,
                points: p,
                hyperplanes,
                kind,
            });
        }
    }
    Ok(out)
}

fn classify(space: &ProjectiveSpace, p: &Permutation, semilinear: bool) -> InvolutionKind {
    if p.is_identity() {
        return InvolutionKind::Identity;
    }
    if semilinear {
        return InvolutionKind::Baer;
    }
    let fixed = p.fixed_points();
    let k = space.points_per_hyperplane();
    let axis = (0..space.point_count()).find(|&h| {
        space
            .hyperplane_points(h)
            .iter()
            .all(|x| fixed.binary_search(x).is_ok())
    });
    match axis {
        Some(_) if fixed.len() == k => InvolutionKind::Elation,
        Some(_) if fixed.len() == k + 1 => InvolutionKind::Homology,
        _ => InvolutionKind::Linear { fixed: fixed.len() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeom::space::build_pg;

    #[test]
    fn fano_involutions_are_elations() {
        let s = build_pg(2, 2).unwrap();
        let invs = enumerate_involutions(&s).unwrap();
        let nontrivial: Vec<_> = invs.iter().filter(|c| !c.is_identity()).collect();
        assert_eq!(nontrivial.len(), 21);
        assert!(nontrivial
            .iter()
            .all(|c| c.kind == InvolutionKind::Elation && c.fixed_points() == 3));
    }

    #[test]
    fn pg23_involutions_are_homologies() {
        let s = build_pg(2, 3).unwrap();
        let invs = enumerate_involutions(&s).unwrap();
        let nontrivial: Vec<_> = invs.iter().filter(|c| !c.is_identity()).collect();
        assert_eq!(nontrivial.len(), 117);
        assert!(nontrivial
            .iter()
            .all(|c| c.kind == InvolutionKind::Homology && c.fixed_points() == 5));
    }

    #[test]
    fn pg32_has_316_elements_of_order_at_most_two() {
        let s = build_pg(3, 2).unwrap();
        let invs = enumerate_involutions(&s).unwrap();
        assert_eq!(invs.len(), 316);
        let count = |k: InvolutionKind| invs.iter().filter(|c| c.kind == k).count();
        assert_eq!(count(InvolutionKind::Identity), 1);
        assert_eq!(count(InvolutionKind::Elation), 105);
        assert_eq!(count(InvolutionKind::Linear { fixed: 3 }), 210);
    }

    #[test]
    fn pg24_has_baer_involutions() {
        let s = build_pg(2, 4).unwrap();
        let invs = enumerate_involutions(&s).unwrap();
        let baer: Vec<_> = invs.iter().filter(|c| c.kind == InvolutionKind::Baer).collect();
        assert_eq!(baer.len(), 360);
        assert!(baer.iter().all(|c| c.fixed_points() == 7));
    }

    #[test]
    fn incidence_matrix_intertwines_point_and_hyperplane_actions() {
        for (n, q) in [(2, 2), (2, 3), (3, 2)] {
            let s = build_pg(n, q).unwrap();
            let t = s.incidence_matrix().t;
            let perm_matrix = |p: &Permutation| {
                crate::matrix::IntMatrix::from_fn(p.len(), p.len(), |i, j| (p.apply(i) == j) as i128)
            };
            for c in enumerate_involutions(&s).unwrap() {
                let (pm, hm) = (perm_matrix(&c.points), perm_matrix(&c.hyperplanes));
                assert_eq!(t.mul(&pm), hm.mul(&t));
            }
        }
    }

    #[test]
    fn hyperplane_action_preserves_incidence() {
        let s = build_pg(2, 4).unwrap();
        for c in enumerate_involutions(&s).unwrap().iter().take(50) {
            for h in 0..s.point_count() {
                for x in 0..s.point_count() {
                    assert_eq!(
                        s.contains(h, x),
                        s.contains(c.hyperplanes.apply(h), c.points.apply(x))
                    );
                }
            }
        }
    }
}
