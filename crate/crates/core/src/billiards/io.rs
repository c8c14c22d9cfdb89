use serde::{Deserialize, Serialize};

use super::geometry::{Isometry, Point};
use super::tile::BaseTile;
use super::unfold::{PlacedTile, PlanarDomain};
use super::BilliardsError;
use crate::permcat::{ColoredEdge, COLORS};

/// On-disk form of a domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainFile {
    pub base: String,
    pub base_vertices: Vec<Point>,
    pub color_sides: [usize; COLORS],
    /// Vertices of every tile, in base-tile order.
    pub tiles: Vec<Vec<Point>>,
    /// `[tile, tile, color]`, colors counted from 0.
    pub edges: Vec<[usize; 3]>,
    /// Ordered boundary loops.
    pub boundary: Vec<Vec<Point>>,
}

impl PlanarDomain {
    pub fn to_file(&self) -> DomainFile {
        DomainFile {
            base: self.base.label.clone(),
            base_vertices: self.base.vertices.clone(),
            color_sides: self.base.color_sides,
            tiles: self.polygons(),
            edges: self.edges.iter().map(|e| [e.a, e.b, e.color]).collect(),
            boundary: self.boundary_loops(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("domain serializes")
    }

    pub fn from_json(text: &str) -> Result<PlanarDomain, BilliardsError> {
        let file: DomainFile =
            serde_json::from_str(text).map_err(|e| BilliardsError::Format(e.to_string()))?;
        PlanarDomain::from_file(&file)
    }

    pub fn from_file(file: &DomainFile) -> Result<PlanarDomain, BilliardsError> {
        let base = BaseTile::polygon(file.base_vertices.clone(), file.color_sides, file.base.clone())?;
        let tiles = file
            .tiles
            .iter()
            .enumerate()
            .map(|(index, verts)| {
                if verts.len() != base.side_count() {
                    return Err(BilliardsError::Format(format!("tile {index} has wrong vertex count")));
                }
                let isometry = Isometry::from_points(&base.vertices, verts)
                    .ok_or_else(|| BilliardsError::Format(format!("tile {index} is degenerate")))?;
                Ok(PlacedTile {
                    index,
                    orientation: if isometry.determinant() > 0.0 { 1 } else { -1 },
                    isometry,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let d = tiles.len();
        let edges = file
            .edges
            .iter()
            .map(|&[a, b, color]| {
                if a >= d || b >= d || color >= COLORS {
                    Err(BilliardsError::Format(format!("edge {a}-{b} color {color} out of range")))
                } else {
                    Ok(ColoredEdge { a, b, color })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PlanarDomain {
            base,
            tiles,
            edges,
            max_overlap: 0.0,
        })
    }
}
