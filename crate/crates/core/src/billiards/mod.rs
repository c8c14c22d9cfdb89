//! Unfolding a base tile along a colored graph, and the geometric data
//! isospectral domains must share.

mod geometry;
mod io;
mod tile;
mod unfold;
mod weyl;

use thiserror::Error;

pub use geometry::{
    convex_contains, convex_intersection_area, segment_distance, signed_area, Isometry, Point,
};
pub use io::DomainFile;
pub use tile::{parse_base, rational_multiple_of_pi, BaseTile};
pub use unfold::{unfold, PlacedTile, PlanarDomain, LOOP_TOL, OVERLAP_TOL};
pub use weyl::{
    corner_constant, corners, genus_from_radians, translation_surface_genus, weyl_data, Corner,
    WeylData,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BilliardsError {
    #[error("invalid base tile: {0}")]
    InvalidTile(String),
    #[error("invalid graph: {0}")]
    Graph(String),
    #[error("non-planar: tiles {a} and {b} overlap by area {area:e}")]
    NonPlanar { a: usize, b: usize, area: f64 },
    #[error("loop mismatch: edge {a}-{b} of color {color} does not close")]
    LoopMismatch { a: usize, b: usize, color: usize },
    #[error("cone point: {tiles} copies of base corner {vertex} close up without a full turn")]
    ConePoint { vertex: usize, tiles: usize },
    #[error("invalid angle: {0}")]
    InvalidAngle(String),
    #[error("domain file: {0}")]
    Format(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcat::{catalog, find_pair, ColoredGraph};
    use num_rational::Rational64;

    fn graphs(name: &str) -> (ColoredGraph, ColoredGraph) {
        find_pair(&catalog(), name).unwrap().graphs().unwrap()
    }

    #[test]
    fn half_square_pair_7_3() {
        let (g1, g2) = graphs("7_3");
        let d = 3.0;
        let tile = BaseTile::half_square(d).unwrap();
        for g in [&g1, &g2] {
            let dom = unfold(&tile, g, 0).unwrap();
            let w = weyl_data(&dom).unwrap();
            assert!((w.area - 31.5).abs() < 1e-12);
            assert!((w.perimeter - (6.0 + 3.0 * 2f64.sqrt()) * d).abs() < 1e-12);
            assert_eq!(w.k_exact, Some(Rational64::new(5, 12)));
            assert!((w.k - 5.0 / 12.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rectangle_pair_7_3_has_genus_four() {
        let (g1, g2) = graphs("7_3");
        let tile = BaseTile::rectangle(1.0, 0.5).unwrap();
        for g in [&g1, &g2] {
            let w = weyl_data(&unfold(&tile, g, 0).unwrap()).unwrap();
            let mut angles = w.angles_over_pi.unwrap();
            angles.sort();
            let mut expected = vec![Rational64::new(1, 2); 8];
            expected.extend([Rational64::new(3, 2), Rational64::new(3, 2), Rational64::from_integer(2)]);
            assert_eq!(angles, expected);
            assert_eq!(translation_surface_genus(&angles).unwrap(), 4);
        }
    }

    #[test]
    fn single_tile_is_the_tile() {
        let g = ColoredGraph::from_edges(1, &[]).unwrap();
        let tile = BaseTile::triangle([[0.0, 0.0], [2.0, 0.0], [0.5, 1.0]]).unwrap();
        let dom = unfold(&tile, &g, 0).unwrap();
        assert_eq!(dom.polygon(0), tile.vertices);
        let w = weyl_data(&dom).unwrap();
        assert_eq!(w.angles.len(), 3);
        assert!((w.perimeter - dom.base.side_length(0) - dom.base.side_length(1) - dom.base.side_length(2)).abs() < 1e-12);
        let square = BaseTile::rectangle(1.0, 1.0).unwrap();
        let w = weyl_data(&unfold(&square, &g, 0).unwrap()).unwrap();
        assert!((w.k - 0.25).abs() < 1e-15);
    }

    #[test]
    fn orientation_alternates_with_distance() {
        let (g1, _) = graphs("7_3");
        let dom = unfold(&BaseTile::half_square(1.0).unwrap(), &g1, 2).unwrap();
        let dist = g1.distances_from(2);
        for t in &dom.tiles {
            let expected = if dist[t.index].unwrap() % 2 == 0 { 1 } else { -1 };
            assert_eq!(t.orientation, expected);
        }
    }

    #[test]
    fn pair_13_6_is_not_planar_with_a_scalene_tile() {
        let (g1, g2) = graphs("13_6");
        let tile = BaseTile::triangle([[0.0, 0.0], [1.0, 0.0], [0.3, 0.7]]).unwrap();
        let r1 = unfold(&tile, &g1, 0);
        let r2 = unfold(&tile, &g2, 0);
        assert!(
            matches!(r1, Err(BilliardsError::NonPlanar { .. })) || matches!(r2, Err(BilliardsError::NonPlanar { .. }))
        );
    }

    #[test]
    fn domain_json_round_trip() {
        let (g1, _) = graphs("7_3");
        let dom = unfold(&BaseTile::half_square(1.0).unwrap(), &g1, 0).unwrap();
        let text = dom.to_json();
        let back = PlanarDomain::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert_eq!(back.boundary_loops().len(), 1);
        assert!(PlanarDomain::from_json("{").is_err());
    }
}
