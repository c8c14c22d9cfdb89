use std::collections::VecDeque;

use super::geometry::{convex_intersection_area, Isometry, Point};
use super::tile::BaseTile;
use super::BilliardsError;
use crate::permcat::{ColoredEdge, ColoredGraph, COLORS};

/// Relative overlap tolerance, in units of the tile area.
pub const OVERLAP_TOL: f64 = 1e-9;
/// Absolute tolerance on vertex coordinates when a circuit closes.
pub const LOOP_TOL: f64 = 1e-9;

/// One copy of the base tile.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacedTile {
    pub index: usize,
    pub isometry: Isometry,
    /// `+1` for a rotated copy, `-1` for a reflected one.
    pub orientation: i8,
}

/// Copies of a base tile glued along a colored graph.
#[derive(Debug, Clone)]
pub struct PlanarDomain {
    pub base: BaseTile,
    pub tiles: Vec<PlacedTile>,
    pub edges: Vec<ColoredEdge>,
    /// Largest pairwise overlap area between tile interiors.
    pub max_overlap: f64,
}

impl PlanarDomain {
    pub fn d(&self) -> usize {
        self.tiles.len()
    }

    /// Vertices of tile `t`, in base-tile order.
    pub fn polygon(&self, t: usize) -> Vec<Point> {
        self.base
            .vertices
            .iter()
            .map(|&v| self.tiles[t].isometry.apply(v))
            .collect()
    }

    pub fn polygons(&self) -> Vec<Vec<Point>> {
        (0..self.d()).map(|t| self.polygon(t)).collect()
    }

    /// Partner of tile `t` across side `s`, if that side is glued.
    pub fn neighbor(&self, t: usize, s: usize) -> Option<usize> {
        let color = self.base.color_of_side(s)?;
        self.edges.iter().find_map(|e| {
            (e.color == color && (e.a == t || e.b == t)).then(|| if e.a == t { e.b } else { e.a })
        })
    }

    /// Boundary segments: every tile side without a partner.
    pub fn boundary_segments(&self) -> Vec<(Point, Point)> {
        let mut out = Vec::new();
        for t in 0..self.d() {
            for s in 0..self.base.side_count() {
                if self.neighbor(t, s).is_none() {
                    let (a, b) = self.base.side(s);
                    let iso = &self.tiles[t].isometry;
                    out.push((iso.apply(a), iso.apply(b)));
                }
            }
        }
        out
    }

    /// Boundary segments chained into closed loops.
    pub fn boundary_loops(&self) -> Vec<Vec<Point>> {
        let mut segs = self.boundary_segments();
        let key = |p: Point| ((p[0] * 1e8).round() as i64, (p[1] * 1e8).round() as i64);
        let mut loops = Vec::new();
        while let Some((start, mut cur)) = segs.pop() {
            let mut lp = vec![start];
            while key(cur) != key(start) {
                lp.push(cur);
                let Some(pos) = segs
                    .iter()
                    .position(|&(a, b)| key(a) == key(cur) || key(b) == key(cur))
                else {
                    break;
                };
                let (a, b) = segs.swap_remove(pos);
                cur = if key(a) == key(cur) { b } else { a };
            }
            loops.push(lp);
        }
        loops
    }

    pub fn area(&self) -> f64 {
        self.d() as f64 * self.base.area()
    }

    pub fn perimeter(&self) -> f64 {
        self.boundary_segments()
            .iter()
            .map(|&(a, b)| super::geometry::dist(a, b))
            .sum()
    }
}

/// Places the tiles breadth-first from `root`; an edge of color `mu` reflects
/// across the side carrying `mu`.
pub fn unfold(tile: &BaseTile, graph: &ColoredGraph, root: usize) -> Result<PlanarDomain, BilliardsError> {
    let d = graph.vertex_count();
    if root >= d {
        return Err(BilliardsError::Graph(format!("root {root} out of range")));
    }
    if !graph.is_connected() {
        return Err(BilliardsError::Graph("graph is disconnected".into()));
    }
    let mirrors: [Isometry; COLORS] = std::array::from_fn(|mu| {
        let (a, b) = tile.side(tile.color_sides[mu]);
        Isometry::reflection(a, b)
    });
    let mut placed: Vec<Option<Isometry>> = vec![None; d];
    placed[root] = Some(Isometry::IDENTITY);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let iso = placed[v].expect("queued tiles are placed");
        for mu in 0..COLORS {
            let Some(w) = graph.partner(v, mu) else {
                continue;
            };
            let next = iso.compose(&mirrors[mu]);
            match placed[w] {
                None => {
                    placed[w] = Some(next);
                    queue.push_back(w);
                }
                Some(existing) => {
                    if existing.max_deviation(&next, &tile.vertices) > LOOP_TOL {
                        return Err(BilliardsError::LoopMismatch { a: v, b: w, color: mu });
                    }
                }
            }
        }
    }
    let tiles: Vec<PlacedTile> = placed
        .into_iter()
        .enumerate()
        .map(|(index, iso)| {
            let isometry = iso.expect("connected");
            PlacedTile {
                index,
                orientation: if isometry.determinant() > 0.0 { 1 } else { -1 },
                isometry,
            }
        })
        .collect();
    let mut domain = PlanarDomain {
        base: tile.clone(),
        tiles,
        edges: graph.edges().to_vec(),
        max_overlap: 0.0,
    };
    let polys = domain.polygons();
    let mut worst = (0.0, 0, 0);
    for i in 0..d {
        for j in i + 1..d {
            let a = convex_intersection_area(&polys[i], &polys[j]);
            if a > worst.0 {
                worst = (a, i, j);
            }
        }
    }
    domain.max_overlap = worst.0;
    if worst.0 > OVERLAP_TOL * tile.area() {
        return Err(BilliardsError::NonPlanar {
            a: worst.1,
            b: worst.2,
            area: worst.0,
        });
    }
    Ok(domain)
}
