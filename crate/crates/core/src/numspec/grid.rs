use std::collections::HashMap;

use super::eigen::SymSparse;
use super::NumspecError;
use crate::billiards::{convex_contains, segment_distance, PlanarDomain, Point};

/// Interior nodes of a square grid laid over an unfolded domain.
///
/// Node `k` sits at `(nodes[k][0] * h, nodes[k][1] * h)` in the frame the
/// domain was unfolded in. Nodes on an edge shared by two glued tiles belong
/// to the lower-indexed tile; nodes on the boundary, slits included, are left
/// out and read as zero.
#[derive(Debug, Clone)]
pub struct GridDomain {
    pub domain: PlanarDomain,
    /// Length unit for reported eigenvalues.
    pub d: f64,
    pub n_grid: usize,
    pub h: f64,
    pub nodes: Vec<[i64; 2]>,
    pub tile_of: Vec<usize>,
    /// Node position in base-tile coordinates.
    pub local: Vec<Point>,
    /// Up to four grid neighbours that are interior nodes.
    pub neighbors: Vec<Vec<usize>>,
    index: HashMap<[i64; 2], usize>,
}

impl GridDomain {
    /// Rasterizes `domain` with `n_grid` cells per length `d`. Every tile
    /// vertex must fall on a node and every side must be horizontal,
    /// vertical or diagonal.
    pub fn new(domain: &PlanarDomain, d: f64, n_grid: usize) -> Result<Self, NumspecError> {
        if n_grid == 0 || d <= 0.0 {
            return Err(NumspecError::NotGridAligned("grid size must be positive".into()));
        }
        let h = d / n_grid as f64;
        let eps = 1e-9 * h;
        let polys = domain.polygons();
        let (mut lo, mut hi) = ([i64::MAX; 2], [i64::MIN; 2]);
        for (t, poly) in polys.iter().enumerate() {
            for (k, p) in poly.iter().enumerate() {
                for c in 0..2 {
                    let g = p[c] / h;
                    if (g - g.round()).abs() > 1e-7 {
                        return Err(NumspecError::NotGridAligned(format!(
                            "vertex {k} of tile {t} is off the grid"
                        )));
                    }
                    lo[c] = lo[c].min(g.round() as i64);
                    hi[c] = hi[c].max(g.round() as i64);
                }
                let q = poly[(k + 1) % poly.len()];
                let (dx, dy) = ((q[0] - p[0]).abs(), (q[1] - p[1]).abs());
                if dx > eps && dy > eps && (dx - dy).abs() > eps {
                    return Err(NumspecError::NotGridAligned(format!(
                        "side {k} of tile {t} is not axis-aligned or diagonal"
                    )));
                }
            }
        }
        let boundary = domain.boundary_segments();
        let inverses: Vec<_> = domain.tiles.iter().map(|t| t.isometry.inverse()).collect();
        // order along the longer axis so the band is as narrow as possible
        let by_rows = hi[0] - lo[0] <= hi[1] - lo[1];
        let (major, minor) = if by_rows { (1, 0) } else { (0, 1) };
        let mut nodes = Vec::new();
        let mut tile_of = Vec::new();
        let mut local = Vec::new();
        for a in lo[major]..=hi[major] {
            for b in lo[minor]..=hi[minor] {
                let mut g = [0i64; 2];
                g[major] = a;
                g[minor] = b;
                let p = [g[0] as f64 * h, g[1] as f64 * h];
                let Some(t) = polys.iter().position(|poly| convex_contains(poly, p, eps)) else {
                    continue;
                };
                if boundary.iter().any(|&(u, v)| segment_distance(p, u, v) < eps) {
                    continue;
                }
                nodes.push(g);
                tile_of.push(t);
                local.push(inverses[t].apply(p));
            }
        }
        let index: HashMap<[i64; 2], usize> = nodes.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let neighbors = nodes
            .iter()
            .map(|g| {
                [[1, 0], [-1, 0], [0, 1], [0, -1]]
                    .iter()
                    .filter_map(|o| index.get(&[g[0] + o[0], g[1] + o[1]]).copied())
                    .collect()
            })
            .collect();
        Ok(GridDomain {
            domain: domain.clone(),
            d,
            n_grid,
            h,
            nodes,
            tile_of,
            local,
            neighbors,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_at(&self, g: [i64; 2]) -> Option<usize> {
        self.index.get(&g).copied()
    }

    /// Interior node closest to the point `p`, if `p` is within `1e-6 h` of one.
    pub fn node_near(&self, p: Point) -> Option<usize> {
        let g = [(p[0] / self.h).round(), (p[1] / self.h).round()];
        if (p[0] / self.h - g[0]).abs() > 1e-6 || (p[1] / self.h - g[1]).abs() > 1e-6 {
            return None;
        }
        self.node_at([g[0] as i64, g[1] as i64])
    }

    pub fn position(&self, k: usize) -> Point {
        [self.nodes[k][0] as f64 * self.h, self.nodes[k][1] as f64 * self.h]
    }

    /// Minus the five-point Laplacian with Dirichlet conditions.
    pub fn laplacian(&self) -> SymSparse {
        let s = 1.0 / (self.h * self.h);
        SymSparse {
            diag: vec![4.0 * s; self.len()],
            off: self
                .neighbors
                .iter()
                .map(|nb| nb.iter().map(|&j| (j, -s)).collect())
                .collect(),
        }
    }

    /// Inclusive bounds of the node coordinates.
    pub fn bounds(&self) -> ([i64; 2], [i64; 2]) {
        let mut lo = [i64::MAX; 2];
        let mut hi = [i64::MIN; 2];
        for g in &self.nodes {
            for c in 0..2 {
                lo[c] = lo[c].min(g[c]);
                hi[c] = hi[c].max(g[c]);
            }
        }
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::billiards::{unfold, BaseTile};
    use crate::permcat::{ColoredGraph, catalog, find_pair};

    #[test]
    fn single_half_square_nodes() {
        let tile = BaseTile::half_square(1.0).unwrap();
        let g = ColoredGraph::from_edges(1, &[]).unwrap();
        let dom = unfold(&tile, &g, 0).unwrap();
        let grid = GridDomain::new(&dom, 1.0, 8).unwrap();
        // strictly inside 0 < y < x < 1 on an 8x8 grid: 6 + 5 + ... + 1
        assert_eq!(grid.len(), 21);
        assert!(grid.tile_of.iter().all(|&t| t == 0));
    }

    #[test]
    fn glued_edges_hold_nodes_and_slits_do_not() {
        let (ga, _) = find_pair(&catalog(), "7_3").unwrap().graphs().unwrap();
        let tile = BaseTile::half_square(1.0).unwrap();
        let dom = unfold(&tile, &ga, 0).unwrap();
        let n = 10;
        let grid = GridDomain::new(&dom, 1.0, n).unwrap();
        // interior nodes per tile area is n^2 minus boundary effects
        let per_area = grid.len() as f64 / dom.area();
        assert!(per_area < (n * n) as f64 && per_area > 0.6 * (n * n) as f64);
        for k in 0..grid.len() {
            assert_eq!(grid.node_near(grid.position(k)), Some(k));
            let l = grid.local[k];
            assert!(l[1] >= -1e-12 && l[1] <= l[0] + 1e-12 && l[0] <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn rejects_off_grid_tiles() {
        let tile = BaseTile::triangle([[0.0, 0.0], [1.0, 0.0], [0.3, 0.8]]).unwrap();
        let g = ColoredGraph::from_edges(1, &[]).unwrap();
        let dom = unfold(&tile, &g, 0).unwrap();
        assert!(GridDomain::new(&dom, 1.0, 10).is_err());
    }
}
