use thiserror::Error;

use super::perm::Permutation;
use crate::matrix::IntMatrix;

/// Number of reflecting sides of the base tile.
pub const COLORS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("generator {color} is not an involution")]
    NotInvolution { color: usize },
    #[error("generators act on {found} points, expected {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("graphs have different vertex counts ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("vertex {vertex} has two edges of color {color}")]
    NotAMatching { vertex: usize, color: usize },
    #[error("edge ({0}, {1}) out of range")]
    EdgeOutOfRange(usize, usize),
    #[error("trace overflow at power {0}")]
    Overflow(usize),
}

/// The three gluing matrices of an unfolded domain, one per side color.
///
/// `M[mu][(i, j)] = 1` when tile `i` is reflected across side `mu` onto tile
/// `j`; a tile whose side `mu` lies on the boundary carries a 1 on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencySet {
    d: usize,
    generators: [Permutation; COLORS],
    matrices: [IntMatrix; COLORS],
}

impl AdjacencySet {
    pub fn new(gens: &[Permutation; COLORS]) -> Result<Self, GraphError> {
        let d = gens[0].len();
        for (color, g) in gens.iter().enumerate() {
            if g.len() != d {
                return Err(GraphError::SizeMismatch {
                    expected: d,
                    found: g.len(),
                });
            }
            if !g.is_involution() {
                return Err(GraphError::NotInvolution { color });
            }
        }
        let matrices = std::array::from_fn(|mu| {
            let g = &gens[mu];
            IntMatrix::from_fn(d, d, |i, j| i128::from(g.apply(i) == j))
        });
        Ok(AdjacencySet {
            d,
            generators: gens.clone(),
            matrices,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self, color: usize) -> &IntMatrix {
        &self.matrices[color]
    }

    pub fn matrices(&self) -> &[IntMatrix; COLORS] {
        &self.matrices
    }

    pub fn generator(&self, color: usize) -> &Permutation {
        &self.generators[color]
    }

    pub fn generators(&self) -> &[Permutation; COLORS] {
        &self.generators
    }

    /// Tiles whose side `color` is part of the billiard boundary.
    pub fn boundary_tiles(&self, color: usize) -> Vec<usize> {
        self.generators[color].fixed_points()
    }

    /// Dirichlet gluing matrix: the permutation matrix with `-1` at fixed
    /// points, so that reflecting a Dirichlet eigenfunction across a boundary
    /// side flips its sign.
    pub fn dirichlet_matrix(&self, color: usize) -> IntMatrix {
        let mut m = self.matrices[color].clone();
        for i in self.generators[color].fixed_points() {
            m[(i, i)] = -1;
        }
        m
    }
}

/// One gluing between two distinct tiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredEdge {
    pub a: usize,
    pub b: usize,
    pub color: usize,
}

/// Involution graph of an unfolded domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    d: usize,
    edges: Vec<ColoredEdge>,
    partners: Vec<[Option<usize>; COLORS]>,
    delta: IntMatrix,
}

impl ColoredGraph {
    pub fn from_adjacency(adj: &AdjacencySet) -> Self {
        let d = adj.d();
        let mut edges = Vec::new();
        for mu in 0..COLORS {
            let g = adj.generator(mu);
            for i in 0..d {
                let j = g.apply(i);
                if i < j {
                    edges.push(ColoredEdge { a: i, b: j, color: mu });
                }
            }
        }
        // Delta_ij = sum_mu (M_ij - M_ii delta_ij)
        let mut delta = IntMatrix::zeros(d, d);
        for mu in 0..COLORS {
            let m = adj.matrix(mu);
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        delta[(i, j)] += m[(i, j)];
                    }
                }
            }
        }
        Self::assemble(d, edges, delta).expect("involutions give matchings")
    }

    /// Builds a graph from an explicit edge list; each color class must be a matching.
    pub fn from_edges(d: usize, edges: &[(usize, usize, usize)]) -> Result<Self, GraphError> {
        let mut delta = IntMatrix::zeros(d, d);
        let mut list = Vec::new();
        for &(a, b, color) in edges {
            if a >= d || b >= d || a == b || color >= COLORS {
                return Err(GraphError::EdgeOutOfRange(a, b));
            }
            delta[(a, b)] += 1;
            delta[(b, a)] += 1;
            list.push(ColoredEdge {
                a: a.min(b),
                b: a.max(b),
                color,
            });
        }
        Self::assemble(d, list, delta)
    }

    fn assemble(d: usize, mut edges: Vec<ColoredEdge>, delta: IntMatrix) -> Result<Self, GraphError> {
        edges.sort();
        let mut partners = vec![[None; COLORS]; d];
        for e in &edges {
            for (v, w) in [(e.a, e.b), (e.b, e.a)] {
                if partners[v][e.color].is_some() {
                    return Err(GraphError::NotAMatching {
                        vertex: v,
                        color: e.color,
                    });
                }
                partners[v][e.color] = Some(w);
            }
        }
        Ok(ColoredGraph {
            d,
            edges,
            partners,
            delta,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.d
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[ColoredEdge] {
        &self.edges
    }

    /// Plain adjacency matrix with colors forgotten.
    pub fn delta(&self) -> &IntMatrix {
        &self.delta
    }

    pub fn partner(&self, v: usize, color: usize) -> Option<usize> {
        self.partners[v][color]
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.d];
        let mut count = 0;
        for s in 0..self.d {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                for w in self.partners[v].iter().flatten() {
                    if !seen[*w] {
                        seen[*w] = true;
                        stack.push(*w);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.d > 0 && self.component_count() == 1
    }

    /// Number of independent cycles: edges - vertices + components.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.component_count() - self.d
    }

    /// Edges lying on some closed circuit: what is left after repeatedly
    /// pruning degree-one vertices.
    pub fn cycle_edges(&self) -> Vec<ColoredEdge> {
        let mut alive = vec![true; self.edges.len()];
        let mut degree = vec![0usize; self.d];
        for e in &self.edges {
            degree[e.a] += 1;
            degree[e.b] += 1;
        }
        loop {
            let mut changed = false;
            for (i, e) in self.edges.iter().enumerate() {
                if alive[i] && (degree[e.a] == 1 || degree[e.b] == 1) {
                    alive[i] = false;
                    degree[e.a] -= 1;
                    degree[e.b] -= 1;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.edges
            .iter()
            .zip(alive)
            .filter(|(_, a)| *a)
            .map(|(e, _)| *e)
            .collect()
    }

    /// Breadth-first distances from `root`; `None` for unreachable vertices.
    pub fn distances_from(&self, root: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.d];
        dist[root] = Some(0);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            for w in self.partners[v].iter().flatten() {
                if dist[*w].is_none() {
                    dist[*w] = Some(dv + 1);
                    queue.push_back(*w);
                }
            }
        }
        dist
    }

    /// Same graph with every color relabeled by `perm` (color `c` becomes `perm[c]`).
    pub fn recolored(&self, perm: [usize; COLORS]) -> ColoredGraph {
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|e| (e.a, e.b, perm[e.color]))
            .collect();
        ColoredGraph::from_edges(self.d, &edges).expect("recoloring keeps matchings")
    }

    /// Canonical edge code under vertex relabeling, with colors held fixed.
    ///
    /// Every color class is a matching, so a breadth-first walk from a root
    /// that visits colors in a fixed order labels the vertices uniquely. The
    /// minimum code over all roots is an isomorphism invariant that separates
    /// non-isomorphic connected graphs. Disconnected graphs fall back to the
    /// sorted per-component codes.
    pub fn canonical_code(&self) -> Vec<(usize, usize, usize)> {
        let mut best: Option<Vec<(usize, usize, usize)>> = None;
        for root in 0..self.d {
            let code = self.code_from_roots(root);
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
        best.unwrap_or_default()
    }

    fn code_from_roots(&self, root: usize) -> Vec<(usize, usize, usize)> {
        let mut label = vec![usize::MAX; self.d];
        let mut next = 0;
        let mut queue = std::collections::VecDeque::new();
        let mut roots = std::iter::once(root).chain(0..self.d);
        loop {
            if queue.is_empty() {
                let Some(r) = roots.find(|&r| label[r] == usize::MAX) else {
                    break;
                };
                label[r] = next;
                next += 1;
                queue.push_back(r);
            }
            while let Some(v) = queue.pop_front() {
                for w in self.partners[v].iter().flatten() {
                    if label[*w] == usize::MAX {
                        label[*w] = next;
                        next += 1;
                        queue.push_back(*w);
                    }
                }
            }
        }
        let mut code: Vec<_> = self
            .edges
            .iter()
            .map(|e| {
                let (x, y) = (label[e.a], label[e.b]);
                (x.min(y), x.max(y), e.color)
            })
            .collect();
        code.sort_unstable();
        code
    }

    /// Color-preserving isomorphism test.
    pub fn is_isomorphic(&self, other: &ColoredGraph) -> bool {
        self.d == other.d
            && self.edges.len() == other.edges.len()
            && self.is_connected() == other.is_connected()
            && self.canonical_code() == other.canonical_code()
    }
}

/// Result of the trace comparison of two plain adjacency matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceTable {
    /// `(l, Tr A^l, Tr B^l)` for `l = 1..=d`.
    pub rows: Vec<(usize, i128, i128)>,
}

impl TraceTable {
    pub fn isospectral(&self) -> bool {
        self.rows.iter().all(|(_, a, b)| a == b)
    }

    pub fn first_mismatch(&self) -> Option<(usize, i128, i128)> {
        self.rows.iter().copied().find(|(_, a, b)| a != b)
    }
}

/// Compares `Tr(A^l)` and `Tr(B^l)` for `l = 1..=d` in exact arithmetic.
///
/// Two symmetric matrices of order `d` are cospectral exactly when these `d`
/// power sums agree (Newton's identities recover the characteristic polynomial).
pub fn graph_isospectral(g1: &ColoredGraph, g2: &ColoredGraph) -> Result<TraceTable, GraphError> {
    let d = g1.vertex_count();
    if d != g2.vertex_count() {
        return Err(GraphError::DimensionMismatch(d, g2.vertex_count()));
    }
    let (a, b) = (g1.delta(), g2.delta());
    let mut pa = IntMatrix::identity(d);
    let mut pb = IntMatrix::identity(d);
    let mut rows = Vec::with_capacity(d);
    for l in 1..=d {
        pa = pa.checked_mul(a).map_err(|_| GraphError::Overflow(l))?;
        pb = pb.checked_mul(b).map_err(|_| GraphError::Overflow(l))?;
        rows.push((l, pa.trace(), pb.trace()));
    }
    Ok(TraceTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcat::perm::involution_from_cycles;

    fn gens(texts: [&str; 3], d: usize) -> [Permutation; 3] {
        texts.map(|t| involution_from_cycles(t, d).unwrap())
    }

    #[test]
    fn adjacency_of_pair_7_3() {
        let adj = AdjacencySet::new(&gens(["(2 5)(4 6)", "(1 5)(3 4)", "(0 4)(1 6)"], 7)).unwrap();
        let m1 = adj.matrix(0);
        assert!(m1.is_symmetric() && m1.is_permutation_matrix());
        for i in [0, 1, 3] {
            assert_eq!(m1[(i, i)], 1);
        }
        assert_eq!(m1[(2, 5)], 1);
        assert_eq!(m1[(2, 2)], 0);
        let g = ColoredGraph::from_adjacency(&adj);
        assert_eq!((g.vertex_count(), g.edge_count(), g.cycle_rank()), (7, 6, 0));
        assert!(g.is_connected());
        assert_eq!(g.delta().trace(), 0);
        assert!(g.delta().row_sums().iter().all(|&s| s <= 3));
    }

    #[test]
    fn review_graph_one_based_generator() {
        // a^(1) = (2 3)(5 6) with tiles numbered 1..7
        let text = crate::permcat::perm::one_based_to_zero_based("(2 3)(5 6)").unwrap();
        let a = involution_from_cycles(&text, 7).unwrap();
        let id = Permutation::identity(7);
        let adj = AdjacencySet::new(&[a, id.clone(), id]).unwrap();
        let m = adj.matrix(0);
        assert_eq!(m[(1, 2)], 1);
        assert_eq!(m[(4, 5)], 1);
    }

    #[test]
    fn identity_generator_gives_identity_matrix() {
        let id = Permutation::identity(4);
        let adj = AdjacencySet::new(&[id.clone(), id.clone(), id]).unwrap();
        assert_eq!(adj.matrix(1), &IntMatrix::identity(4));
    }

    #[test]
    fn single_tile() {
        let id = Permutation::identity(1);
        let adj = AdjacencySet::new(&[id.clone(), id.clone(), id]).unwrap();
        let g = ColoredGraph::from_adjacency(&adj);
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));
        assert!(g.is_connected());
    }

    #[test]
    fn rejects_non_involution() {
        let p = Permutation::from_cycles("(0 1 2)", 3).unwrap();
        let id = Permutation::identity(3);
        assert_eq!(
            AdjacencySet::new(&[id.clone(), p, id]),
            Err(GraphError::NotInvolution { color: 1 })
        );
    }

    #[test]
    fn path_versus_star() {
        let path = ColoredGraph::from_edges(4, &[(0, 1, 0), (1, 2, 1), (2, 3, 0)]).unwrap();
        let star = ColoredGraph::from_edges(4, &[(0, 1, 0), (0, 2, 1), (0, 3, 2)]).unwrap();
        let table = graph_isospectral(&path, &star).unwrap();
        assert!(!table.isospectral());
        // Brute force: path eigenvalues 2cos(k pi/5), star eigenvalues +-sqrt3, 0, 0.
        assert_eq!(table.rows[1], (2, 6, 6));
        assert_eq!(table.rows[2], (3, 0, 0));
        assert_eq!(table.rows[3], (4, 14, 18));
        assert_eq!(table.first_mismatch(), Some((4, 14, 18)));
    }

    #[test]
    fn dimension_mismatch() {
        let a = ColoredGraph::from_edges(2, &[(0, 1, 0)]).unwrap();
        let b = ColoredGraph::from_edges(3, &[(0, 1, 0)]).unwrap();
        assert_eq!(graph_isospectral(&a, &b), Err(GraphError::DimensionMismatch(2, 3)));
    }

    #[test]
    fn canonical_code_is_relabeling_invariant() {
        let g = ColoredGraph::from_edges(5, &[(0, 1, 0), (1, 2, 1), (2, 3, 2), (3, 4, 0)]).unwrap();
        let h = ColoredGraph::from_edges(5, &[(4, 3, 0), (3, 0, 1), (0, 2, 2), (2, 1, 0)]).unwrap();
        assert!(g.is_isomorphic(&h));
        let k = ColoredGraph::from_edges(5, &[(0, 1, 1), (1, 2, 0), (2, 3, 2), (3, 4, 1)]).unwrap();
        assert!(!g.is_isomorphic(&k));
        assert!(g.is_isomorphic(&k.recolored([1, 0, 2])));
    }

    #[test]
    fn matching_violation() {
        assert_eq!(
            ColoredGraph::from_edges(3, &[(0, 1, 0), (0, 2, 0)]),
            Err(GraphError::NotAMatching { vertex: 0, color: 0 })
        );
    }
}
